#include <algorithm>
#include <chrono>
#include <thread>

#include "digholo/console.hpp"
#include "digholo/engine.hpp"

namespace digholo {

BenchmarkResult Engine::benchmark(double goalDuration) {
  BenchmarkResult res;
  using clock = std::chrono::steady_clock;
  std::array<double, BENCH_COUNT> t{};
  try {
    runAll();
    const auto start = clock::now();
    int iterations = 0;
    auto timed = [&](int stage, auto&& fn) {
      const auto a = clock::now();
      fn();
      t[stage] += std::chrono::duration<double>(clock::now() - a).count();
    };
    do {
      timed(BENCH_FFT, [&] { runFFT(); });
      timed(BENCH_IFFT, [&] { runIFFT(); });
      timed(BENCH_APPLYTILT, [&] { runRemoveTilt(); });
      timed(BENCH_BASIS, [&] {
        for (auto& b : basis_) b.reset();
        lgGroups_ = -1;
        if (cfg_.basisGroupCount > 0) ensureBasis();
      });
      timed(BENCH_OVERLAP, [&] { runExtract(); });
      ++iterations;
    } while (std::chrono::duration<double>(clock::now() - start).count() < goalDuration);
    double total = 0;
    for (int s = 0; s < BENCH_TOTAL; ++s) {
      t[s] = std::max(t[s], 1e-9);
      total += t[s];
    }
    t[BENCH_TOTAL] = total;
    for (int s = 0; s < BENCH_COUNT; ++s) res.info[s] = iterations / t[s];
    res.batchesPerSecond = res.info[BENCH_TOTAL];
  } catch (const Error& e) {
    console::print(cfg_.verbosity, 1, "digholo: benchmark failed: %s\n", e.what());
    res = BenchmarkResult{};
  }
  return res;
}

int Engine::estimateThreadCountOptimal(double goalDuration, int maxThreads) {
  if (maxThreads <= 0) maxThreads = std::max(1u, std::thread::hardware_concurrency());
  const int saved = cfg_.threadCount;
  int best = 1;
  double bestRate = -1;
  const double each = goalDuration / maxThreads;
  for (int n = 1; n <= maxThreads; ++n) {
    cfg_.threadCount = n;
    const double rate = benchmark(each).batchesPerSecond;
    if (rate > bestRate) {
      bestRate = rate;
      best = n;
    }
  }
  cfg_.threadCount = saved;
  return best;
}

}  // namespace digholo
