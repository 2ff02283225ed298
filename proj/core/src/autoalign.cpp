#include <algorithm>
#include <cmath>
#include <functional>
#include <new>

#include "digholo/basis.hpp"
#include "digholo/console.hpp"
#include "digholo/engine.hpp"
#include "digholo/geometry.hpp"

namespace digholo {

namespace {

// Effective area of sum_{m+n<G} |HG_mn|^2 at unit waist.
double referenceArea(int groupCount) {
  const double extent = 3.0 + 1.5 * std::sqrt(2.0 * groupCount + 1.0);
  const int n = 401;
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = -extent + 2.0 * extent * i / (n - 1);
  const double dx = axis[1] - axis[0];
  const auto h = hermiteProfiles(groupCount, 1.0, axis, 0.0);
  double s1 = 0, s2 = 0;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double I = 0;
      for (int g = 0; g < groupCount; ++g)
        for (int k = 0; k <= g; ++k)
          I += std::pow(h[static_cast<size_t>(g - k) * n + ix] * h[static_cast<size_t>(k) * n + iy], 2);
      s1 += I;
      s2 += I * I;
    }
  return s1 * s1 / s2 * dx * dx;
}

enum class Param { TILTX, TILTY, CENTREX, CENTREY, DEFOCUS, WAIST };

}  // namespace

class AutoAligner {
 public:
  explicit AutoAligner(Engine& e) : e_(e), c_(e.cfg_) {}

  float run() {
    if (e_.source_.empty()) throw Error(ErrorCode::NULLPOINTER, "no frame source");
    e_.tweakIterations_ = 0;
    if (c_.autoAlignMode != AutoAlignMode::TWEAK) snap();
    if (c_.autoAlignMode != AutoAlignMode::ESTIMATE && c_.basisGroupCount > 0) tweak();
    e_.runAll();
    const ErrorCode ec = e_.calcMetrics();
    if (ec != ErrorCode::SUCCESS) return 0.0f;
    return e_.metrics_.average(clampGoal());
  }

 private:
  int clampGoal() const { return std::clamp(c_.autoAlignGoalIdx, 0, METRIC_COUNT - 1); }

  double lambda() const {
    const auto& l = e_.run_.lambdas;
    return l.empty() ? c_.wavelengthCentre : *std::min_element(l.begin(), l.end());
  }

  // write a per-pol estimate into the config, honouring the pol lock
  template <typename Get>
  void commit(bool locked, const std::array<double, kPolCountMax>& est, int pols, Get slot) {
    if (locked) {
      double m = 0;
      for (int p = 0; p < pols; ++p) m += est[p];
      m /= pols;
      for (int p = 0; p < kPolCountMax; ++p) slot(p) = m;
    } else {
      for (int p = 0; p < pols; ++p) slot(p) = est[p];
    }
  }

  void snap() {
    const int P = c_.polCount;
    if (c_.autoAlignBeamCentre)
      for (int p = 0; p < kPolCountMax; ++p) c_.beamCentre[0][p] = c_.beamCentre[1][p] = 0;
    if (c_.autoAlignDefocus) c_.defocus = {0, 0};
    e_.runFFT();

    const RunState& r = e_.run_;
    const double lam = lambda();
    const double wMax = maxResolvableAngle(lam, r.pixel);

    if (c_.autoAlignTilt) {
      std::array<double, kPolCountMax> tx{}, ty{};
      for (int p = 0; p < P; ++p) {
        const auto k = fourierPeak(p, lam, wMax);
        tx[p] = binsToAngle(k.first, r.nx, r.pixel, lam);
        ty[p] = binsToAngle(k.second, r.ny, r.pixel, lam);
      }
      commit(c_.polLockTilt, tx, P, [&](int p) -> double& { return c_.tilt[0][p]; });
      commit(c_.polLockTilt, ty, P, [&](int p) -> double& { return c_.tilt[1][p]; });
    }
    if (c_.autoAlignFourierWindowRadius) {
      double wc = 0;
      for (int p = 0; p < P; ++p) {
        const double d = std::hypot(e_.tiltOf(0, p), e_.tiltOf(1, p)) / 3.0;
        wc = p == 0 ? d : std::min(wc, d);
      }
      c_.fourierWindowRadius = std::min(wc, maxWindowRadius(wMax, true));
    }

    e_.runIFFT();
    e_.runRemoveTilt();
    if (c_.autoAlignBeamCentre) {
      for (int pass = 0; pass < 2; ++pass) {
        std::array<double, kPolCountMax> cx{}, cy{};
        const int agg = e_.run_.batchCount;
        for (int p = 0; p < P; ++p) {
          cx[p] = e_.run_.cx[p] + e_.fieldSummary_.at(ANALYSIS_COMX, p, agg);
          cy[p] = e_.run_.cy[p] + e_.fieldSummary_.at(ANALYSIS_COMY, p, agg);
        }
        for (int p = 0; p < P; ++p) {
          c_.beamCentre[0][p] = cx[p];
          c_.beamCentre[1][p] = cy[p];
        }
        e_.runFFT();
        e_.runIFFT();
        e_.runRemoveTilt();
      }
    }

    const int G = c_.basisGroupCount;
    std::array<double, kPolCountMax> waist{};
    for (int p = 0; p < P; ++p) waist[p] = e_.waistOf(p);
    if (c_.autoAlignBasisWaist && G > 0) {
      const double a1 = referenceArea(G);
      const int agg = e_.run_.batchCount;
      for (int p = 0; p < P; ++p) {
        const double aeff = e_.fieldSummary_.at(ANALYSIS_AEFF, p, agg);
        if (aeff > 0) waist[p] = std::sqrt(aeff / a1);
      }
      commit(c_.polLockBasisWaist, waist, P, [&](int p) -> double& { return c_.basisWaist[p]; });
    }
    if (c_.autoAlignDefocus) {
      std::array<double, kPolCountMax> d{};
      for (int p = 0; p < P; ++p) d[p] = defocusEstimate(p, e_.waistOf(p), lam);
      commit(c_.polLockDefocus, d, P, [&](int p) -> double& { return c_.defocus[p]; });
      e_.runRemoveTilt();
    }
    console::print(c_.verbosity, 2, "digholo: snap tilt (%g, %g) centre (%g, %g) waist %g defocus %g\n",
                   c_.tilt[0][0], c_.tilt[1][0], c_.beamCentre[0][0], c_.beamCentre[1][0],
                   c_.basisWaist[0], c_.defocus[0]);
  }

  // Off-axis lobe location in (fractional) bins, from the batch-summed half plane.
  std::pair<double, double> fourierPeak(int p, double lam, double wMax) const {
    const RunState& r = e_.run_;
    const int hw = r.nx / 2 + 1, ny = r.ny;
    const float* I = &e_.fourierSummary_.totalIntensity[static_cast<size_t>(p) * hw * ny];
    const double fx = 1.0 / (r.nx * r.pixel), fy = 1.0 / (ny * r.pixel);
    const double fEx = std::sin(wMax / 3.0 * kDegToRad) / lam;
    double best = -1;
    int bx = 0, by = 0;
    for (int y = 0; y < ny; ++y) {
      const double vy = signedBin(y, ny) * fy;
      for (int x = 0; x < hw; ++x) {
        const double vx = x * fx;
        if (vx * vx + vy * vy <= fEx * fEx) continue;
        const double v = I[static_cast<size_t>(y) * hw + x];
        if (v > best) {
          best = v;
          bx = x;
          by = signedBin(y, ny);
        }
      }
    }
    if (best <= 0) return {0.0, 0.0};
    const double wc = std::abs(c_.fourierWindowRadius) > 0 ? std::abs(c_.fourierWindowRadius)
                                                           : maxWindowRadius(wMax, false);
    const double rx = std::max(1.0, angleToBins(wc, r.nx, r.pixel, lam));
    const double ry = std::max(1.0, angleToBins(wc, ny, r.pixel, lam));
    const int ix = static_cast<int>(std::ceil(rx)), iy = static_cast<int>(std::ceil(ry));
    double s = 0, sx = 0, sy = 0;
    for (int dy = -iy; dy <= iy; ++dy)
      for (int dx = -ix; dx <= ix; ++dx) {
        if ((dx / rx) * (dx / rx) + (dy / ry) * (dy / ry) > 1.0) continue;
        const int kx = bx + dx;
        if (kx < 0 || kx >= hw) continue;
        int ky = (by + dy) % ny;
        if (ky < 0) ky += ny;
        const double v = I[static_cast<size_t>(ky) * hw + kx];
        s += v;
        sx += v * dx;
        sy += v * dy;
      }
    return {bx + sx / s, by + sy / s};
  }

  // |D| from the lobe's spatial-frequency spread and the field's radial spread.
  double defocusEstimate(int p, double waist, double lam) const {
    const RunState& r = e_.run_;
    const auto& w = e_.win_;
    const int P = r.polCount, B = r.batchCount;
    const size_t winSize = static_cast<size_t>(w.wx) * w.wy;
    double s = 0, sx = 0, sy = 0;
    std::vector<double> I(winSize, 0.0);
    for (int b = 0; b < B; ++b) {
      const cfloat* W = &e_.windowData_[(static_cast<size_t>(b) * P + p) * winSize];
      for (size_t i = 0; i < winSize; ++i) I[i] += std::norm(W[i]);
    }
    for (int iy = 0; iy < w.wy; ++iy)
      for (int ix = 0; ix < w.wx; ++ix) {
        const double v = I[static_cast<size_t>(iy) * w.wx + ix];
        s += v;
        sx += v * (ix - w.wx / 2);
        sy += v * (iy - w.wy / 2);
      }
    if (s <= 0) return 0;
    const double mx = sx / s, my = sy / s;
    const double kx = 2 * kPi / (r.nx * r.pixel), ky = 2 * kPi / (r.ny * r.pixel);
    double k2 = 0;
    for (int iy = 0; iy < w.wy; ++iy)
      for (int ix = 0; ix < w.wx; ++ix) {
        const double ax = (ix - w.wx / 2 - mx) * kx, ay = (iy - w.wy / 2 - my) * ky;
        k2 += I[static_cast<size_t>(iy) * w.wx + ix] * (ax * ax + ay * ay);
      }
    k2 /= s;

    const auto fields = e_.fields();
    const size_t outSize = static_cast<size_t>(w.outW) * w.outH;
    double fs = 0, fx = 0, fy = 0;
    std::vector<double> J(outSize, 0.0);
    for (int b = 0; b < B; ++b)
      for (size_t i = 0; i < outSize; ++i)
        J[i] += std::norm(fields[(static_cast<size_t>(b) * P + p) * outSize + i]);
    for (int n = 0; n < w.outH; ++n)
      for (int m = 0; m < w.outW; ++m) {
        const double v = J[static_cast<size_t>(n) * w.outW + m];
        fs += v;
        fx += v * w.xAxis[m];
        fy += v * w.yAxis[n];
      }
    if (fs <= 0) return 0;
    const double cx = fx / fs, cy = fy / fs;
    double r2 = 0;
    for (int n = 0; n < w.outH; ++n)
      for (int m = 0; m < w.outW; ++m) {
        const double ax = w.xAxis[m] - cx, ay = w.yAxis[n] - cy;
        r2 += J[static_cast<size_t>(n) * w.outW + m] * (ax * ax + ay * ay);
      }
    r2 /= fs;
    if (r2 <= 0 || !(waist > 0)) return 0;
    const double b2 = (k2 - 4.0 * r2 / std::pow(waist, 4)) / (4.0 * r2);
    return b2 > 0 ? std::sqrt(b2) * lam / kPi : 0.0;
  }

  // ---- tweak ----

  struct Axis {
    Param kind;
    int pol;
    double step;
  };

  double& slot(const Axis& a) {
    switch (a.kind) {
      case Param::TILTX: return c_.tilt[0][a.pol];
      case Param::TILTY: return c_.tilt[1][a.pol];
      case Param::CENTREX: return c_.beamCentre[0][a.pol];
      case Param::CENTREY: return c_.beamCentre[1][a.pol];
      case Param::DEFOCUS: return c_.defocus[a.pol];
      case Param::WAIST:
      default: return c_.basisWaist[a.pol];
    }
  }

  bool locked(Param k) const {
    switch (k) {
      case Param::TILTX:
      case Param::TILTY: return c_.polLockTilt;
      case Param::DEFOCUS: return c_.polLockDefocus;
      case Param::WAIST: return c_.polLockBasisWaist;
      default: return false;
    }
  }

  void set(const Axis& a, double v) {
    slot(a) = v;
    if (locked(a.kind))
      for (int p = 0; p < kPolCountMax; ++p) {
        Axis b = a;
        b.pol = p;
        slot(b) = v;
      }
  }

  double evaluate(Param k) {
    switch (k) {
      case Param::CENTREX:
      case Param::CENTREY: e_.runFFT(); [[fallthrough]];
      case Param::TILTX:
      case Param::TILTY: e_.runIFFT(); [[fallthrough]];
      case Param::DEFOCUS: e_.runRemoveTilt(); [[fallthrough]];
      case Param::WAIST:
      default: e_.runExtract();
    }
    if (e_.calcMetrics() != ErrorCode::SUCCESS) return -1e30;
    const float v = e_.metrics_.average(clampGoal());
    if (v == kMetricUnset) return -1e30;
    return clampGoal() == METRIC_MDL ? -v : v;
  }

  double probe(const Axis& a, double v) {
    set(a, v);
    lastProbe_ = v;
    return evaluate(a.kind);
  }

  // 3-probe parabolic line search; keeps the best value seen.
  double lineSearch(const Axis& a, double f0, bool bothSigns) {
    double x0 = slot(a);
    if (bothSigns && x0 != 0) {
      const double fn = probe(a, -x0);
      if (fn > f0) {
        f0 = fn;
        x0 = -x0;
      }
    }
    const double h = a.kind == Param::WAIST ? a.step * x0 : a.step;
    double bestX = x0, bestF = f0;
    const double fm = probe(a, x0 - h);
    if (fm > bestF) bestF = fm, bestX = x0 - h;
    const double fp = probe(a, x0 + h);
    if (fp > bestF) bestF = fp, bestX = x0 + h;
    const double den = fm - 2.0 * f0 + fp;
    if (den < 0) {
      const double t = std::clamp(0.5 * (fm - fp) / den, -2.0, 2.0);
      const double xs = x0 + t * h;
      if (std::abs(t) > 1e-6 && !(a.kind == Param::WAIST && xs <= 0)) {
        const double fs = probe(a, xs);
        if (fs > bestF) bestF = fs, bestX = xs;
      }
    }
    set(a, bestX);
    if (bestX != lastProbe_) evaluate(a.kind);
    return bestF;
  }

  void tweak() {
    const int P = c_.polCount;
    const double lam = c_.wavelengthCentre;
    e_.runAll();
    const RunState& r = e_.run_;
    const double tiltStepX = binsToAngle(0.25, r.nx, r.pixel, lam);
    const double tiltStepY = binsToAngle(0.25, r.ny, r.pixel, lam);

    std::vector<Axis> axes;
    for (int p = 0; p < P; ++p) {
      if (c_.autoAlignTilt && (p == 0 || !c_.polLockTilt)) {
        axes.push_back({Param::TILTX, p, tiltStepX});
        axes.push_back({Param::TILTY, p, tiltStepY});
      }
      if (c_.autoAlignBeamCentre) {
        axes.push_back({Param::CENTREX, p, r.pixel});
        axes.push_back({Param::CENTREY, p, r.pixel});
      }
      if (c_.autoAlignDefocus && (p == 0 || !c_.polLockDefocus))
        axes.push_back({Param::DEFOCUS, p, 0.05});
      if (c_.autoAlignBasisWaist && (p == 0 || !c_.polLockBasisWaist))
        axes.push_back({Param::WAIST, p, 0.05});
    }
    if (axes.empty()) return;

    // bring the whole pipeline in line with the current config
    double f = evaluate(Param::CENTREX);
    bool firstDefocus = true;
    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
      const double start = f;
      for (const Axis& a : axes) {
        const bool both = a.kind == Param::DEFOCUS && firstDefocus;
        f = lineSearch(a, f, both);
      }
      firstDefocus = false;
      ++e_.tweakIterations_;
      for (auto& a : axes) a.step *= 0.5;
      console::print(c_.verbosity, 2, "digholo: tweak cycle %d goal %g\n", cycle, f);
      if (f - start <= c_.autoAlignTol) break;
    }
  }

  static constexpr int kMaxCycles = 20;

  using RunState = Engine::RunState;
  Engine& e_;
  HoloConfig& c_;
  double lastProbe_ = 0;
};

float Engine::autoAlign() {
  try {
    AutoAligner a(*this);
    return a.run();
  } catch (const Error& e) {
    console::print(cfg_.verbosity, 1, "digholo: auto-align failed: %s\n", e.what());
  } catch (const std::bad_alloc&) {
    console::print(cfg_.verbosity, 1, "digholo: auto-align out of memory\n");
  }
  return 0.0f;
}

}  // namespace digholo
