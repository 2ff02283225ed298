// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "digholo/basis.hpp"
#include "digholo/c_api.h"
#include "digholo/config_access.hpp"
#include "digholo/engine.hpp"
#include "digholo/fft.hpp"
#include "digholo/frames.hpp"
#include "digholo/geometry.hpp"
#include "digholo/metrics.hpp"
#include "digholo/pipeline.hpp"
#include "digholo/settings.hpp"
#include "digholo/simulator.hpp"

using namespace digholo;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("digholo_acceptance_" + name)).string();
}

SimulationSpec spec(int frames, int size, int groups) {
  SimulationSpec s;
  s.frameCount = frames;
  s.frameWidth = size;
  s.frameHeight = size;
  s.pixelSize = 20e-6;
  s.beamGroupCount = groups;
  s.wavelengths = {1565e-9};
  return s;
}

void configure(Engine& e, const SimulationSpec& rs, int groups) {
  auto& c = e.config();
  c.frameWidth = rs.frameWidth;
  c.frameHeight = rs.frameHeight;
  c.framePixelSize = rs.pixelSize;
  c.fftWindowSizeX = rs.frameWidth;
  c.fftWindowSizeY = rs.frameHeight;
  c.wavelengthCentre = rs.wavelengths[0];
  c.fourierWindowRadius = maxWindowRadius(maxResolvableAngle(rs.wavelengths[0], rs.pixelSize), false);
  c.basisGroupCount = groups;
  c.threadCount = 1;
  c.tilt[0][0] = rs.refTiltX[0];
  c.tilt[1][0] = rs.refTiltY[0];
  c.defocus[0] = rs.refDefocus[0];
  c.basisWaist[0] = rs.beamWaist[0];
  c.beamCentre[0][0] = rs.beamCentreX[0];
  c.beamCentre[1][0] = rs.beamCentreY[0];
  const cfloat cal = cfloat(static_cast<float>(rs.intensityMax), 0.0f) / std::conj(rs.refAmplitude[0]);
  e.setBatchCalibration(&cal, 1, 1);
}

// Mean relative residual of each row after the best complex gauge onto the identity.
double identityError(const std::vector<cfloat>& c, int rows, int modes) {
  double sum = 0;
  for (int b = 0; b < rows; ++b) {
    const cdouble g = c[static_cast<size_t>(b) * modes + b];
    double off = 0;
    for (int m = 0; m < modes; ++m)
      if (m != b) off += std::norm(c[static_cast<size_t>(b) * modes + m]);
    sum += std::sqrt(off) / std::abs(g);
  }
  return sum / rows;
}

// ---------------------------------------------------------------- 1
Outcome geometryFormulas() {
  Outcome o;
  const double wMax = maxResolvableAngle(1565e-9, 20e-6);
  const double wc = maxWindowRadius(wMax, false);
  const auto t = recommendedTilt(wc, wMax, false);
  o.check(std::abs(wMax - 2.24) <= 0.005, fmt("maxResolvableAngle %.5f", wMax));
  o.check(std::abs(wc - 0.719) <= 0.001, fmt("maxWindowRadius %.5f", wc));
  o.check(std::abs(t.first - 1.525) <= 0.001 && std::abs(t.second - 1.525) <= 0.001,
          fmt("recommendedTilt %.5f %.5f", t.first, t.second));
  const double frac = (-2 + std::sqrt(68.0)) / 16;
  o.check(std::abs(windowFractionWrap() - frac) <= 1e-6, fmt("wrap fraction %.8f", windowFractionWrap()));
  if (o.pass) o.detail = fmt("wMax %.4f wc %.4f tilt %.4f", wMax, wc, t.first);
  return o;
}

// ---------------------------------------------------------------- 2
Outcome closedLoop() {
  Outcome o;
  const SimulationResult sim = simulateFrames(spec(10, 256, 4));
  Engine e;
  configure(e, sim.spec, 4);
  e.setBatch(10, sim.frames.data());
  o.check(e.processBatch() == ErrorCode::SUCCESS, "processBatch failed");
  if (!o.pass) return o;
  double minDiag = 1e9, maxOff = 0;
  for (int b = 0; b < 10; ++b) {
    double off = 0;
    for (int m = 0; m < 10; ++m)
      if (m != b) off += std::norm(e.coefs()[b * 10 + m]);
    minDiag = std::min(minDiag, double(std::norm(e.coefs()[b * 10 + b])));
    maxOff = std::max(maxOff, off);
  }
  o.check(minDiag > 0.95, fmt("min |A_ii|^2 %.6f", minDiag));
  o.check(maxOff < 0.02, fmt("max row leakage %.3g", maxOff));
  if (o.pass) o.detail = fmt("min |A_ii|^2 %.6f, max leakage %.3g", minDiag, maxOff);
  return o;
}

// ---------------------------------------------------------------- 3
Outcome autoAlignRecovery() {
  Outcome o;
  const SimulationResult sim = simulateFrames(spec(10, 256, 4));
  Engine truth;
  configure(truth, sim.spec, 4);
  truth.setBatch(10, sim.frames.data());
  truth.processBatch();
  truth.calcMetrics();
  const float trueDiag = truth.metrics().average(METRIC_DIAG);

  Engine e;
  configure(e, sim.spec, 4);
  e.setBatch(10, sim.frames.data());
  auto& c = e.config();
  const double bin = binsToAngle(1.0, 256, 20e-6, 1565e-9);
  c.tilt[0][0] += 0.3 * bin;
  c.tilt[1][0] -= 0.3 * bin;
  c.beamCentre[0][0] += 3 * 20e-6;
  c.beamCentre[1][0] -= 3 * 20e-6;
  c.autoAlignMode = AutoAlignMode::FULL;
  c.autoAlignGoalIdx = METRIC_DIAG;
  const float diag = e.autoAlign();
  const double dtx = std::abs(c.tilt[0][0] - sim.spec.refTiltX[0]);
  const double dty = std::abs(c.tilt[1][0] - sim.spec.refTiltY[0]);
  const double dcx = std::abs(c.beamCentre[0][0] - sim.spec.beamCentreX[0]) / 20e-6;
  const double dcy = std::abs(c.beamCentre[1][0] - sim.spec.beamCentreY[0]) / 20e-6;
  o.check(dtx <= 0.05 && dty <= 0.05, fmt("tilt error %.4f %.4f deg", dtx, dty));
  o.check(dcx <= 1 && dcy <= 1, fmt("centre error %.3f %.3f px", dcx, dcy));
  o.check(std::abs(diag - trueDiag) <= 0.5, fmt("DIAG %.4f vs true %.4f dB", diag, trueDiag));
  if (o.pass)
    o.detail = fmt("tilt err %.2g deg, centre err %.2g px, ", std::max(dtx, dty), std::max(dcx, dcy)) +
               fmt("DIAG %.4f vs %.4f dB", diag, trueDiag);
  return o;
}

// ---------------------------------------------------------------- 4
Outcome averaging() {
  Outcome o;
  const int B = 10, A = 4, G = 4, n = 256, M = 10;
  const SimulationResult single = simulateFrames(spec(B, n, G));
  Engine ref;
  configure(ref, single.spec, G);
  ref.setBatch(B, single.frames.data());
  ref.processBatch();
  const double errSingle = identityError(ref.coefs(), B, M);

  // sequential layout: frame b*A + a holds mode b with a random reference phase
  SimulationSpec s = spec(B * A, n, G);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<float> u(-3.14159f, 3.14159f);
  s.beamCoefs.assign(static_cast<size_t>(B * A) * M, cfloat{});
  for (int b = 0; b < B; ++b)
    for (int a = 0; a < A; ++a) s.beamCoefs[static_cast<size_t>(b * A + a) * M + b] = std::polar(1.0f, u(rng));
  s.refAmplitude = {single.spec.refAmplitude[0]};
  const SimulationResult avg = simulateFrames(s);
  const size_t px = static_cast<size_t>(n) * n;
  std::vector<float> interlaced(avg.frames.size());
  for (int b = 0; b < B; ++b)
    for (int a = 0; a < A; ++a)
      std::copy_n(avg.frames.begin() + (b * A + a) * px, px, interlaced.begin() + (a * B + b) * px);

  std::vector<cfloat> coefs[2];
  for (int mode = 0; mode < 2; ++mode) {
    Engine e;
    configure(e, avg.spec, G);
    e.setBatchAvg(B, mode == 0 ? avg.frames.data() : interlaced.data(), A, mode);
    o.check(e.processBatch() == ErrorCode::SUCCESS, "processBatch failed");
    coefs[mode] = e.coefs();
    const double err = identityError(coefs[mode], B, M);
    o.check(err <= 1.5 * errSingle,
            (mode ? "INTERLACED " : "SEQUENTIAL ") + fmt("error %.3g vs single %.3g", err, errSingle));
    if (mode == 0) o.detail = fmt("avg err %.3g, single err %.3g", err, errSingle);
  }
  o.check(coefs[0] == coefs[1], "SEQUENTIAL and INTERLACED differ");
  if (o.pass) o.detail += ", layouts identical";
  return o;
}

// ---------------------------------------------------------------- 5
Outcome metricFormulas() {
  Outcome o;
  Matrix D(2, 2);
  D(0, 0) = 1;
  D(1, 1) = 0.5;
  const auto m = computeMetrics(D, {});
  o.check(std::abs(m[METRIC_MDL] - 6.021) <= 0.01, fmt("MDL %.4f", m[METRIC_MDL]));
  Matrix I(10, 10);
  for (int i = 0; i < 10; ++i) I(i, i) = 1;
  const auto mi = computeMetrics(I, {});
  o.check(std::abs(mi[METRIC_IL]) <= 0.01 && std::abs(mi[METRIC_MDL]) <= 0.01,
          fmt("identity IL %.4f MDL %.4f", mi[METRIC_IL], mi[METRIC_MDL]));
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  const auto groups = hgModeGroups(4);
  int violations = 0;
  for (int t = 0; t < 100; ++t) {
    Matrix R(10, 10);
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) {
        const double scale = i == j ? 1.0 : groups[i] == groups[j] ? 0.5 : 0.05;
        R(i, j) = cdouble(g(rng), g(rng)) * scale;
      }
    const auto r = computeMetrics(R, groups);
    if (r[METRIC_SNRMG] < r[METRIC_SNRAVG]) ++violations;
  }
  o.check(violations == 0, fmt("SNRMG < SNRAVG in %.0f of 100", violations));
  if (o.pass) o.detail = fmt("MDL %.4f dB, identity IL %.2g MDL %.2g", m[METRIC_MDL], mi[METRIC_IL], mi[METRIC_MDL]);
  return o;
}

// ---------------------------------------------------------------- 6
Outcome parsevalOrthonormality() {
  Outcome o;
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  double worstParseval = 0;
  for (int n : {64, 128, 256}) {
    std::vector<float> f(static_cast<size_t>(n) * n);
    for (auto& v : f) v = u(rng);
    double spatial = 0;
    for (float v : f) spatial += double(v) * v;
    const int hw = n / 2 + 1;
    std::vector<cfloat> F(static_cast<size_t>(hw) * n);
    FftR2C plan(n, n);
    plan.execute(f.data(), F.data());
    double spectral = 0;
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < hw; ++x)
        spectral += (x == 0 || x == n / 2 ? 1.0 : 2.0) * std::norm(F[static_cast<size_t>(y) * hw + x]);
    spectral /= double(n) * n;
    worstParseval = std::max(worstParseval, std::abs(spectral / spatial - 1));
  }
  o.check(worstParseval <= 1e-4, fmt("Parseval rel err %.3g", worstParseval));

  double worstGram = 0;
  const auto axis = fieldAxis(128, 1.0);
  for (int G = 1; G <= 6; ++G) {
    const HGBasis b = generateHGBasis(G, 12.0, axis, axis);
    const auto modes = materialiseModes(b, false);
    const int M = b.modeCount();
    const size_t px = 128 * 128;
    for (int i = 0; i < M; ++i)
      for (int j = i + 1; j < M; ++j) {
        cdouble acc = 0;
        for (size_t k = 0; k < px; ++k) acc += std::conj(cdouble(modes[i * px + k])) * cdouble(modes[j * px + k]);
        worstGram = std::max(worstGram, std::abs(acc) * b.dx * b.dy);
      }
  }
  o.check(worstGram < 1e-6, fmt("Gram off-diagonal %.3g", worstGram));

  double worstLg = 0;
  for (int G = 1; G <= 10; ++G) {
    const auto T = hgToLgTransform(G);
    const int M = modeCountForGroups(G);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        cdouble acc = 0;
        for (int k = 0; k < M; ++k) acc += T[i * M + k] * std::conj(T[j * M + k]);
        worstLg = std::max(worstLg, std::abs(acc - (i == j ? 1.0 : 0.0)));
      }
  }
  o.check(worstLg < 1e-10, fmt("LG unitarity %.3g", worstLg));
  if (o.pass) o.detail = fmt("Parseval %.2g, Gram %.2g, LG %.2g", worstParseval, worstGram, worstLg);
  return o;
}

// ---------------------------------------------------------------- 7
Outcome separableOverlap() {
  Outcome o;
  const int n = 64, G = 4;
  const auto axis = fieldAxis(n, 1.0);
  const HGBasis b = generateHGBasis(G, 7.0, axis, axis);
  const auto idx = hgModeIndices(G);
  std::mt19937 rng(11);
  std::normal_distribution<float> g;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<cfloat> f(static_cast<size_t>(n) * n);
    for (auto& v : f) v = {g(rng), g(rng)};
    const auto sep = extractCoefs(b, f);
    for (size_t m = 0; m < idx.size(); ++m) {
      cdouble direct = 0;
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
          direct += b.hx[idx[m].first * n + x] * b.hy[idx[m].second * n + y] * cdouble(f[static_cast<size_t>(y) * n + x]);
      direct *= b.dx * b.dy;
      worst = std::max(worst, std::abs(sep[m] - direct) / std::abs(direct));
    }
  }
  o.check(worst <= 1e-6, fmt("relative error %.3g", worst));
  if (o.pass) o.detail = fmt("max relative error %.3g", worst);
  return o;
}

// ---------------------------------------------------------------- 8
Outcome ioBitExact() {
  Outcome o;
  HoloConfig src;
  src.frameWidth = 640;
  src.frameHeight = 512;
  src.framePixelSize = 4.5e-6;
  src.polCount = 2;
  src.fftWindowSizeX = 256;
  src.fftWindowSizeY = 224;
  src.fourierWindowRadius = 0.3141592653589793;
  src.tilt[0] = {1.234567890123, -0.5};
  src.beamCentre[1] = {1.5e-5, -7.25e-6};
  src.defocus = {0.01, -0.002};
  src.basisWaist = {123.4e-6, 99.9e-6};
  src.basisGroupCount = 7;
  src.basisType = BasisType::LG;
  src.wavelengths = {1550e-9, 1551.25e-9};
  src.wavelengthOrdering = {1, 0};
  src.autoAlignTol = 0.125;
  src.autoAlignMode = AutoAlignMode::TWEAK;
  src.autoAlignGoalIdx = METRIC_SNRMG;
  src.threadCount = 3;
  src.batchCount = 12;
  src.avgCount = 2;
  src.avgMode = AvgMode::INTERLACED;
  const std::string text = cfg::emitSettings(src);
  Engine e;
  RunDirectives run;
  applySettings(e, SettingsFile::parse(text), run);
  o.check(cfg::emitSettings(e.config()) == text, "settings text differs after round trip");
  const HoloConfig& d = e.config();
  o.check(d.tilt == src.tilt && d.beamCentre == src.beamCentre && d.defocus == src.defocus &&
              d.basisWaist == src.basisWaist && d.wavelengths == src.wavelengths &&
              d.fourierWindowRadius == src.fourierWindowRadius,
          "config values differ after round trip");

  SimulationSpec s = spec(3, 128, 2);
  s.outputFilename = tmp("frames.bin");
  const SimulationResult sim = simulateFrames(s);
  Engine in;
  in.config().frameWidth = 128;
  in.config().frameHeight = 128;
  o.check(in.setFrameBufferFromFile(s.outputFilename) == ErrorCode::SUCCESS, "frame file not loaded");
  const float* staged = in.frameSource().stage(3, 128, 128);
  bool same = in.frameSource().fileValueCount() == sim.frames16.size();
  for (size_t i = 0; same && i < sim.frames16.size(); ++i) same = staged[i] == static_cast<float>(sim.frames16[i]);
  o.check(same, "ingested frames differ from simulator uint16 values");

  Engine p;
  configure(p, sim.spec, 2);
  p.setBatch(3, sim.frames.data());
  p.processBatch();
  const std::string fields = tmp("fields.bin");
  o.check(writeOutputs(p, "", fields) == ErrorCode::SUCCESS, "fields export failed");
  const FieldsFile ff = readFieldsFile(fields);
  const auto mem = p.fields();
  o.check(ff.data.size() == mem.size() && std::memcmp(ff.data.data(), mem.data(), mem.size() * sizeof(cfloat)) == 0,
          "fields re-read differ");
  for (const auto& f : {s.outputFilename, fields, fields + ".txt"}) std::remove(f.c_str());
  if (o.pass) o.detail = "settings, frames and fields bit-exact";
  return o;
}

// ---------------------------------------------------------------- 9
Outcome errorCodes() {
  Outcome o;
  std::vector<std::pair<int, int>> seen;  // (expected, actual)
  const int h = digholo_create();
  auto expect = [&](int want, int got, const char* what) {
    if (want != got) o.check(false, std::string(what) + " returned " + std::to_string(got));
    seen.emplace_back(want, got);
  };
  expect(0, digholo_config_set_basis_group_count(h, 2), "valid setter");
  const std::string bad = tmp("bad_settings.txt");
  std::ofstream(bad) << "FrameBufferFilename\t" << tmp("bad_frames.bin") << "\nfftWindowSizeX\t512\n";
  {
    std::vector<uint16_t> z(320 * 256, 0);
    writeUint16File(tmp("bad_frames.bin"), z.data(), z.size());
  }
  expect(1, digholo_run_batch_from_config_file(bad.c_str()), "failed config-file run");
  expect(2, digholo_process_fft(987654), "unknown handle");
  expect(3, digholo_process_fft(h), "processing without frames");
  expect(4, DIGHOLO_ERROR_SETFRAMEBUFFERDISABLED, "SETFRAMEBUFFERDISABLED constant");
  expect(5, digholo_config_set_fft_window_size(h, 8, 8), "window below one quantum");
  expect(6, digholo_config_set_pol_count(h, 3), "polCount 3");
  expect(7, digholo_config_set_tilt(h, 2, 0, 0.0f), "axis 2");
  expect(8, digholo_config_set_basis_type(h, 9), "basis type 9");
  float notSimulated = 0;
  expect(9, digholo_frame_simulator_destroy(&notSimulated), "destroy unknown simulator buffer");
  expect(10, digholo_console_redirect_to_file("/nonexistent/dir/console.txt"), "redirect to missing dir");
  expect(11, digholo_set_frame_buffer_from_file(h, "/nonexistent/frames.bin"), "missing frame file");
  digholo_destroy(h);
  std::remove(bad.c_str());
  std::remove(tmp("bad_frames.bin").c_str());
  if (o.pass) o.detail = "codes 0-11 matched (code 4: constant only, no producing path)";
  return o;
}

// ---------------------------------------------------------------- 10
Outcome benchmarkSanity() {
  Outcome o;
  const SimulationResult sim = simulateFrames(spec(10, 256, 4));
  Engine e;
  configure(e, sim.spec, 4);
  e.setBatch(10, sim.frames.data());
  const BenchmarkResult r = e.benchmark(0.5);
  double minStage = 1e300;
  for (int s = 0; s < BENCH_COUNT; ++s) {
    o.check(r.info[s] > 0, fmt("stage %.0f rate %.3g", s, r.info[s]));
    if (s != BENCH_TOTAL) minStage = std::min(minStage, r.info[s]);
  }
  o.check(r.info[BENCH_TOTAL] <= minStage * 1.1, fmt("TOTAL %.3g > min stage %.3g", r.info[BENCH_TOTAL], minStage));
  const int t = e.estimateThreadCountOptimal(0.2, 2);
  o.check(t >= 1 && t <= 2, fmt("thread estimate %.0f", t));
  if (o.pass) o.detail = fmt("TOTAL %.1f Hz, slowest stage %.1f Hz, threads %.0f", r.info[BENCH_TOTAL], minStage, t);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      geometryFormulas, closedLoop,       autoAlignRecovery, averaging,  metricFormulas,
      parsevalOrthonormality, separableOverlap, ioBitExact,  errorCodes, benchmarkSanity};
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s (%s) [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
