#include <algorithm>
#include <cmath>
#include <cstdio>

#include "digholo/engine.hpp"
#include "digholo/geometry.hpp"
#include "digholo/pipeline.hpp"

namespace digholo {

namespace {

inline constexpr double kViewportFloorDb = -60.0;

uint8_t toByte(double v) { return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); }

void hsv(double h, double v, uint8_t* px) {
  h = h - std::floor(h);
  const double s6 = h * 6.0;
  const int i = static_cast<int>(s6) % 6;
  const double f = s6 - std::floor(s6);
  const double p = 0, q = v * (1 - f), t = v * f;
  double r, g, b;
  switch (i) {
    case 0: r = v, g = t, b = p; break;
    case 1: r = q, g = v, b = p; break;
    case 2: r = p, g = v, b = t; break;
    case 3: r = p, g = q, b = v; break;
    case 4: r = t, g = p, b = v; break;
    default: r = v, g = p, b = q; break;
  }
  px[0] = toByte(r);
  px[1] = toByte(g);
  px[2] = toByte(b);
}

// Tiles panels of equal size side by side.
struct Canvas {
  int panelW, panelH, panels;
  Viewport v;
  Canvas(int w, int h, int n) : panelW(w), panelH(h), panels(n) {
    v.width = w * n;
    v.height = h;
    v.rgb.assign(static_cast<size_t>(v.width) * v.height * 3, 0);
  }
  uint8_t* at(int panel, int x, int y) {
    return &v.rgb[(static_cast<size_t>(y) * v.width + panel * panelW + x) * 3];
  }
};

Viewport renderScalar(const std::vector<std::vector<double>>& planes, int w, int h, bool db) {
  Canvas cv(w, h, static_cast<int>(planes.size()));
  double mx = 0;
  for (const auto& p : planes)
    for (double x : p) mx = std::max(mx, x);
  for (int k = 0; k < cv.panels; ++k)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double val = planes[k][static_cast<size_t>(y) * w + x];
        double t = 0;
        if (mx > 0) {
          if (db) {
            const double d = val > 0 ? 10.0 * std::log10(val / mx) : kViewportFloorDb;
            t = (std::max(d, kViewportFloorDb) - kViewportFloorDb) / -kViewportFloorDb;
          } else {
            t = val / mx;
          }
        }
        uint8_t* px = cv.at(k, x, y);
        px[0] = px[1] = px[2] = toByte(t);
      }
  return std::move(cv.v);
}

Viewport renderComplex(const std::vector<std::vector<cfloat>>& planes, int w, int h) {
  Canvas cv(w, h, static_cast<int>(planes.size()));
  double mx = 0;
  for (const auto& p : planes)
    for (const cfloat& z : p) mx = std::max(mx, static_cast<double>(std::abs(z)));
  for (int k = 0; k < cv.panels; ++k)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const cfloat z = planes[k][static_cast<size_t>(y) * w + x];
        const double v = mx > 0 ? std::abs(z) / mx : 0.0;
        hsv(std::arg(z) / (2.0 * kPi), v, cv.at(k, x, y));
      }
  return std::move(cv.v);
}

// Batch element 0 as complex planes when the batch is a single element,
// otherwise the batch-summed intensity as magnitude (zero phase).
std::vector<std::vector<cfloat>> collapse(const std::vector<cfloat>& data, int B, int P, size_t n) {
  std::vector<std::vector<cfloat>> out(P, std::vector<cfloat>(n));
  for (int p = 0; p < P; ++p) {
    if (B == 1) {
      std::copy_n(data.begin() + static_cast<size_t>(p) * n, n, out[p].begin());
      continue;
    }
    std::vector<double> acc(n, 0.0);
    for (int b = 0; b < B; ++b)
      for (size_t i = 0; i < n; ++i) acc[i] += std::norm(data[(static_cast<size_t>(b) * P + p) * n + i]);
    for (size_t i = 0; i < n; ++i) out[p][i] = cfloat(static_cast<float>(std::sqrt(acc[i])), 0.0f);
  }
  return out;
}

std::vector<std::vector<double>> magnitude(const std::vector<std::vector<cfloat>>& planes) {
  std::vector<std::vector<double>> out;
  for (const auto& p : planes) {
    std::vector<double> m(p.size());
    for (size_t i = 0; i < p.size(); ++i) m[i] = std::abs(p[i]);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Viewport Engine::viewport(int mode, bool forceProcessing) {
  Viewport out;
  if (mode <= VIEWPORT_NONE || mode >= VIEWPORT_COUNT) return out;
  if (forceProcessing && processBatch() != ErrorCode::SUCCESS) return out;

  switch (mode) {
    case VIEWPORT_CAMERAPLANE: {
      if (source_.empty()) return out;
      const int W = cfg_.frameWidth, H = cfg_.frameHeight;
      const int F = std::max(1, cfg_.batchCount) * std::max(1, cfg_.avgCount);
      const float* frames = nullptr;
      try {
        frames = source_.stage(F, W, H);
      } catch (const Error&) {
        return out;
      }
      std::vector<double> acc(static_cast<size_t>(W) * H, 0.0);
      for (int f = 0; f < F; ++f)
        for (size_t i = 0; i < acc.size(); ++i) acc[i] += frames[f * acc.size() + i];
      out = renderScalar({acc}, W, H, false);
      break;
    }
    case VIEWPORT_FOURIERPLANE:
    case VIEWPORT_FOURIERPLANEDB: {
      if (!ran_.fft) return out;
      const int nx = run_.nx, ny = run_.ny, hw = nx / 2 + 1;
      std::vector<std::vector<double>> planes;
      for (int p = 0; p < run_.polCount; ++p) {
        const float* I = &fourierSummary_.totalIntensity[static_cast<size_t>(p) * hw * ny];
        std::vector<double> full(static_cast<size_t>(nx) * ny);
        for (int y = 0; y < ny; ++y)
          for (int x = 0; x < nx; ++x) {
            int kx = x - nx / 2, ky = y - ny / 2;
            if (kx < 0) {
              kx = -kx;
              ky = -ky;
            }
            const int my = ((ky % ny) + ny) % ny;
            const double v = kx < hw ? I[static_cast<size_t>(my) * hw + kx] : 0.0;
            full[static_cast<size_t>(y) * nx + x] = mode == VIEWPORT_FOURIERPLANE ? std::sqrt(v) : v;
          }
        planes.push_back(std::move(full));
      }
      out = renderScalar(planes, nx, ny, mode == VIEWPORT_FOURIERPLANEDB);
      break;
    }
    case VIEWPORT_FOURIERWINDOW:
    case VIEWPORT_FOURIERWINDOWABS: {
      if (!ran_.ifft) return out;
      const auto planes = collapse(windowData_, run_.batchCount, run_.polCount,
                                   static_cast<size_t>(win_.wx) * win_.wy);
      out = mode == VIEWPORT_FOURIERWINDOW ? renderComplex(planes, win_.wx, win_.wy)
                                           : renderScalar(magnitude(planes), win_.wx, win_.wy, false);
      break;
    }
    case VIEWPORT_FIELDPLANE:
    case VIEWPORT_FIELDPLANEABS: {
      if (!ran_.tilt) return out;
      const auto planes = collapse(fields(), run_.batchCount, run_.polCount,
                                   static_cast<size_t>(win_.outW) * win_.outH);
      out = mode == VIEWPORT_FIELDPLANE ? renderComplex(planes, win_.outW, win_.outH)
                                        : renderScalar(magnitude(planes), win_.outW, win_.outH, false);
      break;
    }
    case VIEWPORT_FIELDPLANEMODE: {
      if (!ran_.tilt || cfg_.basisGroupCount <= 0) return out;
      ensureBasis();
      const int B = run_.batchCount, P = run_.polCount;
      const int M = modeCountForGroups(cfg_.basisGroupCount);
      const size_t n = static_cast<size_t>(win_.outW) * win_.outH;
      const auto f = fields();
      std::vector<cfloat> synth(static_cast<size_t>(B) * P * n);
      std::vector<cdouble> hg(M);
      for (int b = 0; b < B; ++b)
        for (int p = 0; p < P; ++p) {
          const size_t off = (static_cast<size_t>(b) * P + p) * n;
          const HGBasis& bs = *basis_[p];
          extractCoefs(bs, f.data() + off, hg.data());
          const auto idx = hgModeIndices(cfg_.basisGroupCount);
          for (int y = 0; y < win_.outH; ++y)
            for (int x = 0; x < win_.outW; ++x) {
              cdouble s = 0;
              for (int k = 0; k < M; ++k)
                s += hg[k] * bs.hx[static_cast<size_t>(idx[k].first) * win_.outW + x] *
                     bs.hy[static_cast<size_t>(idx[k].second) * win_.outH + y];
              synth[off + static_cast<size_t>(y) * win_.outW + x] = cfloat(s);
            }
        }
      out = renderComplex(collapse(synth, B, P, n), win_.outW, win_.outH);
      break;
    }
    default:
      return out;
  }
  char title[kNameLength];
  std::snprintf(title, sizeof title, "digholo mode %d | frame %dx%d | batch %d | pols %d | %dx%d", mode,
                cfg_.frameWidth, cfg_.frameHeight, ran_.fft ? run_.batchCount : cfg_.batchCount,
                ran_.fft ? run_.polCount : cfg_.polCount, out.width, out.height);
  out.title = title;
  return out;
}

}  // namespace digholo
