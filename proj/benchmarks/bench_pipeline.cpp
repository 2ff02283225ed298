#include <benchmark/benchmark.h>

#include <random>

#include "digholo/basis.hpp"
#include "digholo/engine.hpp"
#include "digholo/fft.hpp"
#include "digholo/geometry.hpp"
#include "digholo/pipeline.hpp"
#include "digholo/simulator.hpp"

using namespace digholo;

namespace {

struct Setup {
  SimulationResult sim;
  Engine engine;
  Setup(int size, int groups, int frames) {
    SimulationSpec s;
    s.frameCount = frames;
    s.frameWidth = size;
    s.frameHeight = size;
    s.pixelSize = 20e-6;
    s.beamGroupCount = groups;
    sim = simulateFrames(s);
    auto& c = engine.config();
    const auto& r = sim.spec;
    c.frameWidth = size;
    c.frameHeight = size;
    c.framePixelSize = r.pixelSize;
    c.fftWindowSizeX = size;
    c.fftWindowSizeY = size;
    c.fourierWindowRadius = maxWindowRadius(maxResolvableAngle(r.wavelengths[0], r.pixelSize), false);
    c.tilt[0][0] = r.refTiltX[0];
    c.tilt[1][0] = r.refTiltY[0];
    c.basisWaist[0] = r.beamWaist[0];
    c.basisGroupCount = groups;
    c.threadCount = 1;
    engine.setBatch(frames, sim.frames.data());
    engine.processBatch();
  }
};

void BM_FftR2C(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> u;
  std::vector<float> in(static_cast<size_t>(n) * n);
  for (auto& v : in) v = u(rng);
  std::vector<cfloat> out(static_cast<size_t>(n / 2 + 1) * n);
  FftR2C plan(n, n);
  for (auto _ : st) {
    plan.execute(in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations());
}
BENCHMARK(BM_FftR2C)->Arg(128)->Arg(256)->Arg(512);

void BM_ExtractCoefs(benchmark::State& st) {
  const int n = 256, G = static_cast<int>(st.range(0));
  const auto axis = fieldAxis(n, 1.0);
  const HGBasis b = generateHGBasis(G, 30.0, axis, axis);
  std::mt19937 rng(2);
  std::normal_distribution<float> g;
  std::vector<cfloat> f(static_cast<size_t>(n) * n);
  for (auto& v : f) v = {g(rng), g(rng)};
  for (auto _ : st) benchmark::DoNotOptimize(extractCoefs(b, f));
  st.SetItemsProcessed(st.iterations() * b.modeCount());
}
BENCHMARK(BM_ExtractCoefs)->Arg(4)->Arg(10)->Arg(20);

void BM_Stage(benchmark::State& st) {
  static Setup s(256, 4, 10);
  using Fn = ErrorCode (Engine::*)();
  const Fn stages[] = {&Engine::processFFT, &Engine::processIFFT, &Engine::processRemoveTilt,
                       &Engine::processExtractCoefs};
  const int idx = static_cast<int>(st.range(0));
  s.engine.processBatch();
  for (auto _ : st) benchmark::DoNotOptimize((s.engine.*stages[idx])());
  st.SetItemsProcessed(st.iterations() * 10);
}
BENCHMARK(BM_Stage)->ArgName("stage")->DenseRange(0, 3);

void BM_ProcessBatch(benchmark::State& st) {
  static Setup s(256, 4, 10);
  s.engine.config().threadCount = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(s.engine.processBatch());
  st.SetItemsProcessed(st.iterations() * 10);
}
BENCHMARK(BM_ProcessBatch)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
