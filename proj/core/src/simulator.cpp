#include "digholo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <new>

#include "digholo/basis.hpp"
#include "digholo/batch.hpp"
#include "digholo/config.hpp"
#include "digholo/console.hpp"
#include "digholo/fft.hpp"
#include "digholo/frames.hpp"
#include "digholo/geometry.hpp"
#include "digholo/pipeline.hpp"

namespace digholo {

namespace {

// Continuum-normalised 1-D Hermite-Gaussian profiles, orders x size.
std::vector<double> hgProfiles(int orders, double waist, const std::vector<double>& axis,
                               double centre) {
  const size_t n = axis.size();
  std::vector<double> out(static_cast<size_t>(orders) * n);
  const double norm = std::sqrt(std::sqrt(2.0) / waist) * std::pow(kPi, -0.25);
  for (size_t i = 0; i < n; ++i) {
    const double u = std::sqrt(2.0) * (axis[i] - centre) / waist;
    double prev = 0.0, cur = norm * std::exp(-0.5 * u * u);
    out[i] = cur;
    for (int m = 0; m + 1 < orders; ++m) {
      const double next = std::sqrt(2.0 / (m + 1)) * u * cur - std::sqrt(double(m) / (m + 1)) * prev;
      prev = cur;
      cur = next;
      out[static_cast<size_t>(m + 1) * n + i] = cur;
    }
  }
  return out;
}

template <typename T>
void fillPerPol(std::vector<T>& v, int pols, T value) {
  if (v.empty()) v.assign(pols, value);
  if (static_cast<int>(v.size()) < pols) v.resize(pols, v.front());
  v.resize(pols);
}

int autoGroupCount(int frameCount) {
  int g = 1;
  while (modeCountForGroups(g) < frameCount) ++g;
  return g;
}

}  // namespace

SimulationResult simulateFrames(const SimulationSpec& in) {
  SimulationResult res;
  SimulationSpec& s = res.spec;
  s = in;
  if (s.frameCount < 1) throw Error(ErrorCode::INVALIDARGUMENT, "frameCount must be positive");
  s.frameWidth = floorToQuanta(s.frameWidth);
  s.frameHeight = floorToQuanta(s.frameHeight);
  if (s.frameWidth <= 0 || s.frameHeight <= 0)
    throw Error(ErrorCode::INVALIDDIMENSION, "frame dimensions");
  if (!(s.pixelSize > 0)) throw Error(ErrorCode::INVALIDDIMENSION, "pixel size");
  if (s.polCount < 1 || s.polCount > kPolCountMax)
    throw Error(ErrorCode::INVALIDPOLARISATION, "polCount");
  if (s.polCount == 2 && s.frameWidth / 2 < 1) throw Error(ErrorCode::INVALIDDIMENSION, "frame width");
  if (s.wavelengths.empty()) s.wavelengths = {1565e-9};
  for (double l : s.wavelengths)
    if (!(l > 0)) throw Error(ErrorCode::INVALIDARGUMENT, "wavelength must be positive");
  if (s.cameraPixelLevelCount <= 0) s.cameraPixelLevelCount = kDefaultPixelLevels;
  s.cameraPixelLevelCount = std::min(s.cameraPixelLevelCount, 65536);
  s.wavelengthOrdering = s.wavelengthOrdering ? 1 : 0;

  const int P = s.polCount, F = s.frameCount, W = s.frameWidth, H = s.frameHeight;
  const Region reg0 = polRegion(W, H, P, 0);
  const double lambda0 = *std::min_element(s.wavelengths.begin(), s.wavelengths.end());
  const double wMax = maxResolvableAngle(lambda0, s.pixelSize);
  const auto tilt = recommendedTilt(maxWindowRadius(wMax, false), wMax, false);

  fillPerPol(s.refTiltX, P, tilt.first);
  fillPerPol(s.refTiltY, P, tilt.second);
  fillPerPol(s.refDefocus, P, 0.0);
  fillPerPol(s.refWaist, P, 0.0);
  fillPerPol(s.refBeamCentreX, P, 0.0);
  fillPerPol(s.refBeamCentreY, P, 0.0);
  fillPerPol(s.beamWaist, P, std::min(reg0.width, reg0.height) * s.pixelSize / 6.0);
  fillPerPol(s.beamCentreX, P, 0.0);
  fillPerPol(s.beamCentreY, P, 0.0);
  for (double w : s.beamWaist)
    if (!(w > 0)) throw Error(ErrorCode::INVALIDARGUMENT, "beam waist must be positive");

  if (s.beamGroupCount <= 0) s.beamGroupCount = autoGroupCount(F);
  const int G = s.beamGroupCount, M = modeCountForGroups(G);
  const size_t coefCount = static_cast<size_t>(F) * P * M;
  if (s.beamCoefs.empty()) {
    s.beamCoefs.assign(coefCount, cfloat{});
    for (int f = 0; f < F; ++f)
      for (int p = 0; p < P; ++p) s.beamCoefs[(static_cast<size_t>(f) * P + p) * M + f % M] = 1.0f;
  } else if (s.beamCoefs.size() != coefCount) {
    throw Error(ErrorCode::INVALIDDIMENSION, "beamCoefs must be frameCount x polCount x modeCount");
  }

  // reference amplitude: reference power over the region equals mean signal power
  if (s.refAmplitude.empty()) {
    s.refAmplitude.resize(P);
    for (int p = 0; p < P; ++p) {
      const Region r = polRegion(W, H, P, p);
      const double area = r.width * r.height * s.pixelSize * s.pixelSize;
      double power = 0;
      for (int f = 0; f < F; ++f)
        for (int m = 0; m < M; ++m) power += std::norm(s.beamCoefs[(static_cast<size_t>(f) * P + p) * M + m]);
      power /= F;
      s.refAmplitude[p] = static_cast<float>(power > 0 ? std::sqrt(power / area) : 1.0 / std::sqrt(area));
    }
  }
  fillPerPol(s.refAmplitude, P, cfloat(1.0f, 0.0f));

  const size_t frameSize = static_cast<size_t>(W) * H;
  res.intensity.assign(frameSize * F, 0.0f);
  const int L = static_cast<int>(s.wavelengths.size());

  for (int p = 0; p < P; ++p) {
    const Region r = polRegion(W, H, P, p);
    const auto ax = regionAxis(r.width, s.pixelSize);
    const auto ay = regionAxis(r.height, s.pixelSize);
    const auto hx = hgProfiles(G, s.beamWaist[p], ax, s.beamCentreX[p]);
    const auto hy = hgProfiles(G, s.beamWaist[p], ay, s.beamCentreY[p]);
    const auto modes = hgModeIndices(G);
    for (int f = 0; f < F; ++f) {
      const double lam = s.wavelengths[batchWavelengthIndex(f, F, L, s.wavelengthOrdering)];
      const double kx = 2 * kPi * std::sin(s.refTiltX[p] * kDegToRad) / lam;
      const double ky = 2 * kPi * std::sin(s.refTiltY[p] * kDegToRad) / lam;
      const double quad = kPi / lam * s.refDefocus[p];
      const double rw = s.refWaist[p];
      const cdouble A = s.refAmplitude[p];
      const cfloat* c = &s.beamCoefs[(static_cast<size_t>(f) * P + p) * M];
      float* dst = &res.intensity[f * frameSize];
      for (int iy = 0; iy < r.height; ++iy) {
        const double y = ay[iy];
        for (int ix = 0; ix < r.width; ++ix) {
          const double x = ax[ix];
          cdouble S = 0;
          for (int k = 0; k < M; ++k) {
            if (c[k] == cfloat{}) continue;
            S += cdouble(c[k]) * hx[static_cast<size_t>(modes[k].first) * r.width + ix] *
                 hy[static_cast<size_t>(modes[k].second) * r.height + iy];
          }
          const double rx = x - s.refBeamCentreX[p], ry = y - s.refBeamCentreY[p];
          const double r2 = rx * rx + ry * ry;
          const double env = rw > 0 ? std::exp(-r2 / (rw * rw)) : 1.0;
          const cdouble R = A * env * std::polar(1.0, -(kx * x + ky * y + quad * r2));
          dst[static_cast<size_t>(r.y0 + iy) * W + r.x0 + ix] = static_cast<float>(std::norm(S + R));
        }
      }
    }
  }

  if (s.fillFactorCorrection) {
    FftC2C fwd(W, H, -1), bwd(W, H, +1);
    std::vector<cfloat> a(frameSize), b(frameSize);
    std::vector<double> sx(W), sy(H);
    for (int i = 0; i < W; ++i) sx[i] = pixelSinc(i, W);
    for (int j = 0; j < H; ++j) sy[j] = pixelSinc(j, H);
    const float norm = 1.0f / static_cast<float>(frameSize);
    for (int f = 0; f < F; ++f) {
      float* I = &res.intensity[f * frameSize];
      for (size_t i = 0; i < frameSize; ++i) a[i] = cfloat(I[i], 0.0f);
      fwd.execute(a.data(), b.data());
      for (int j = 0; j < H; ++j)
        for (int i = 0; i < W; ++i) b[static_cast<size_t>(j) * W + i] *= static_cast<float>(sx[i] * sy[j]);
      bwd.execute(b.data(), a.data());
      for (size_t i = 0; i < frameSize; ++i) I[i] = std::max(0.0f, a[i].real() * norm);
    }
  }

  float imax = 0;
  for (float v : res.intensity) imax = std::max(imax, v);
  s.intensityMax = imax;
  const int top = s.cameraPixelLevelCount - 1;
  res.frames16.resize(res.intensity.size());
  res.frames.resize(res.intensity.size());
  for (size_t i = 0; i < res.intensity.size(); ++i) {
    const double q = imax > 0 ? std::floor(res.intensity[i] / imax * top + 0.5) : 0.0;
    const int level = std::clamp(static_cast<int>(q), 0, top);
    res.frames16[i] = static_cast<uint16_t>(level);
    res.frames[i] = top > 0 ? static_cast<float>(level) / top : 0.0f;
  }
  if (!s.outputFilename.empty()) writeUint16File(s.outputFilename, res.frames16.data(), res.frames16.size());
  return res;
}

namespace {

std::mutex gRegistryMutex;
std::map<const float*, std::unique_ptr<SimulationResult>>& registry() {
  static std::map<const float*, std::unique_ptr<SimulationResult>> r;
  return r;
}

}  // namespace

float* simulatorCreate(const SimulationSpec& spec, const SimulationSpec** resolved,
                       const uint16_t** frames16, ErrorCode* err) {
  auto set = [&](ErrorCode c) {
    if (err) *err = c;
  };
  try {
    auto res = std::make_unique<SimulationResult>(simulateFrames(spec));
    float* ptr = res->frames.data();
    if (resolved) *resolved = &res->spec;
    if (frames16) *frames16 = res->frames16.data();
    std::lock_guard<std::mutex> lock(gRegistryMutex);
    registry()[ptr] = std::move(res);
    set(ErrorCode::SUCCESS);
    return ptr;
  } catch (const Error& e) {
    set(e.code());
  } catch (const std::bad_alloc&) {
    set(ErrorCode::MEMORYALLOCATION);
  }
  return nullptr;
}

float* simulatorCreateSimple(int frameCount, int frameWidth, int frameHeight, double pixelSize,
                             int polCount, double wavelength, int verbosity) {
  if (frameCount < 1 || frameWidth <= 0 || frameHeight <= 0 || !(pixelSize > 0) || polCount < 1 ||
      polCount > kPolCountMax || !(wavelength > 0))
    return nullptr;
  SimulationSpec s;
  s.frameCount = frameCount;
  s.frameWidth = frameWidth;
  s.frameHeight = frameHeight;
  s.pixelSize = pixelSize;
  s.polCount = polCount;
  s.wavelengths = {wavelength};
  ErrorCode err = ErrorCode::SUCCESS;
  float* out = simulatorCreate(s, nullptr, nullptr, &err);
  if (!out) console::print(verbosity, 1, "digholo: simulator failed (%s)\n", errorName(err));
  return out;
}

const SimulationSpec* simulatorSpec(const float* frames) {
  std::lock_guard<std::mutex> lock(gRegistryMutex);
  auto it = registry().find(frames);
  return it == registry().end() ? nullptr : &it->second->spec;
}

const uint16_t* simulatorFrames16(const float* frames) {
  std::lock_guard<std::mutex> lock(gRegistryMutex);
  auto it = registry().find(frames);
  return it == registry().end() ? nullptr : it->second->frames16.data();
}

ErrorCode simulatorDestroy(const float* frames) {
  if (!frames) return ErrorCode::NULLPOINTER;
  std::lock_guard<std::mutex> lock(gRegistryMutex);
  auto it = registry().find(frames);
  if (it == registry().end()) return ErrorCode::MEMORYALLOCATION;
  registry().erase(it);
  return ErrorCode::SUCCESS;
}

}  // namespace digholo
