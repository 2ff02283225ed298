#include "digholo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <new>

#include "digholo/batch.hpp"
#include "digholo/console.hpp"
#include "digholo/geometry.hpp"

namespace digholo {

namespace {

int wrapIndex(int q, int n) {
  int m = q % n;
  return m < 0 ? m + n : m;
}

}  // namespace

cfloat BatchCalibration::factor(int pol, int batchIdx) const {
  if (!enabled || polCount <= 0 || batchCount <= 0) return {1.0f, 0.0f};
  const int p = (polCount == 1 || pol >= polCount) ? 0 : pol;
  return cal[static_cast<size_t>(p) * batchCount + (batchIdx % batchCount)];
}

Engine::Engine() : pool_(std::make_unique<ThreadPool>(cfg_.threadCount)) { metrics_.reset(1); }

Engine::~Engine() = default;

ThreadPool& Engine::pool() {
  const int want = std::max(1, cfg_.threadCount);
  if (pool_->size() != want) pool_->resize(want);
  return *pool_;
}

void Engine::backupSave() { backup_ = cfg_; }

ErrorCode Engine::backupLoad() {
  if (!backup_) return ErrorCode::NULLPOINTER;
  cfg_ = *backup_;
  return ErrorCode::SUCCESS;
}

ErrorCode Engine::guard(void (Engine::*fn)()) {
  try {
    (this->*fn)();
    return ErrorCode::SUCCESS;
  } catch (const Error& e) {
    console::print(cfg_.verbosity, 1, "digholo: %s (%s)\n", e.what(), errorName(e.code()));
    return e.code();
  } catch (const std::bad_alloc&) {
    return ErrorCode::MEMORYALLOCATION;
  } catch (const std::exception& e) {
    console::print(cfg_.verbosity, 1, "digholo: %s\n", e.what());
    return ErrorCode::ERROR;
  }
}

// ---------------------------------------------------------------- sources

ErrorCode Engine::setFrameBuffer(const float* frames) {
  if (!frames) return ErrorCode::NULLPOINTER;
  source_.setFloat(frames);
  return ErrorCode::SUCCESS;
}

ErrorCode Engine::setFrameBufferUint16(const uint16_t* frames, bool transpose) {
  if (!frames) return ErrorCode::NULLPOINTER;
  source_.setUint16(frames, transpose);
  return ErrorCode::SUCCESS;
}

ErrorCode Engine::setFrameBufferFromFile(const std::string& path) {
  try {
    source_.loadFile(path);
  } catch (const Error& e) {
    return e.code();
  } catch (const std::bad_alloc&) {
    return ErrorCode::MEMORYALLOCATION;
  }
  return ErrorCode::SUCCESS;
}

ErrorCode Engine::setBatchCalibration(const cfloat* cal, int polCountCal, int batchCountCal) {
  batchCal_ = BatchCalibration{};
  if (!cal) return ErrorCode::NULLPOINTER;
  if (polCountCal < 1 || polCountCal > kPolCountMax || batchCountCal < 1)
    return ErrorCode::INVALIDARGUMENT;
  batchCal_.cal.assign(cal, cal + static_cast<size_t>(polCountCal) * batchCountCal);
  batchCal_.polCount = polCountCal;
  batchCal_.batchCount = batchCountCal;
  batchCal_.enabled = true;
  return ErrorCode::SUCCESS;
}

ErrorCode Engine::setBatchCalibrationFromFile(const std::string& path, int polCountCal,
                                              int batchCountCal) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) {
    batchCal_ = BatchCalibration{};
    return ErrorCode::FILENOTFOUND;
  }
  if (polCountCal < 1 || batchCountCal < 1) {
    batchCal_ = BatchCalibration{};
    return ErrorCode::INVALIDARGUMENT;
  }
  const size_t n = static_cast<size_t>(polCountCal) * batchCountCal;
  if (static_cast<size_t>(in.tellg()) < n * sizeof(cfloat)) {
    batchCal_ = BatchCalibration{};
    return ErrorCode::INVALIDDIMENSION;
  }
  in.seekg(0);
  std::vector<cfloat> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(cfloat)));
  return setBatchCalibration(v.data(), polCountCal, batchCountCal);
}

ErrorCode Engine::setBatch(int batchCount, const float* frames) {
  return setBatchAvg(batchCount, frames, 1, 0);
}

ErrorCode Engine::setBatchAvg(int batchCount, const float* frames, int avgCount, int avgMode) {
  if (!frames) return ErrorCode::NULLPOINTER;
  cfg_.batchCount = std::max(1, batchCount);
  cfg_.avgCount = std::max(1, avgCount);
  cfg_.avgMode = (avgMode >= 0 && avgMode <= 2) ? static_cast<AvgMode>(avgMode) : AvgMode::SEQUENTIAL;
  source_.setFloat(frames);
  return ErrorCode::SUCCESS;
}

ErrorCode Engine::setBatchUint16(int batchCount, const uint16_t* frames, bool transpose) {
  return setBatchAvgUint16(batchCount, frames, 1, 0, transpose);
}

ErrorCode Engine::setBatchAvgUint16(int batchCount, const uint16_t* frames, int avgCount,
                                    int avgMode, bool transpose) {
  if (!frames) return ErrorCode::NULLPOINTER;
  cfg_.batchCount = std::max(1, batchCount);
  cfg_.avgCount = std::max(1, avgCount);
  cfg_.avgMode = (avgMode >= 0 && avgMode <= 2) ? static_cast<AvgMode>(avgMode) : AvgMode::SEQUENTIAL;
  source_.setUint16(frames, transpose);
  return ErrorCode::SUCCESS;
}

// ---------------------------------------------------------------- helpers

double Engine::tiltOf(int axis, int pol) const {
  return cfg_.tilt[axis][cfg_.polLockTilt ? 0 : pol];
}

double Engine::defocusOf(int pol) const { return cfg_.defocus[cfg_.polLockDefocus ? 0 : pol]; }

double Engine::waistOf(int pol) const { return cfg_.basisWaist[cfg_.polLockBasisWaist ? 0 : pol]; }

int Engine::lambdaIndexOfBatch(int b) const {
  return batchWavelengthIndex(b, run_.batchCount, static_cast<int>(run_.lambdas.size()),
                              run_.ordering[kOrderingInput]);
}

void Engine::invalidateFrom(int stage) {
  if (stage <= 0) ran_.fft = false;
  if (stage <= 1) ran_.ifft = false;
  if (stage <= 2) ran_.tilt = false;
  if (stage <= 3) ran_.coefs = false;
}

// ---------------------------------------------------------------- stage 1

void Engine::runFFT() {
  invalidateFrom(0);
  const HoloConfig& c = cfg_;
  if (source_.empty()) throw Error(ErrorCode::NULLPOINTER, "no frame source");
  if (c.frameWidth <= 0 || c.frameHeight <= 0 || c.frameWidth % kPixelQuanta ||
      c.frameHeight % kPixelQuanta)
    throw Error(ErrorCode::INVALIDDIMENSION, "frame dimensions must be positive multiples of 16");
  if (c.fftWindowSizeX <= 0 || c.fftWindowSizeY <= 0)
    throw Error(ErrorCode::INVALIDDIMENSION, "FFT window size not set");
  if (!(c.framePixelSize > 0)) throw Error(ErrorCode::INVALIDDIMENSION, "pixel size");
  if (c.polCount < 1 || c.polCount > kPolCountMax)
    throw Error(ErrorCode::INVALIDPOLARISATION, "polCount");

  RunState r;
  r.frameWidth = c.frameWidth;
  r.frameHeight = c.frameHeight;
  r.nx = c.fftWindowSizeX;
  r.ny = c.fftWindowSizeY;
  r.pixel = c.framePixelSize;
  r.polCount = c.polCount;
  r.batchCount = std::max(1, c.batchCount);
  r.avgCount = std::max(1, c.avgCount);
  r.avgMode = c.avgMode;
  r.lambdas = c.wavelengths.empty() ? std::vector<double>{c.wavelengthCentre} : c.wavelengths;
  for (double l : r.lambdas)
    if (!(l > 0)) throw Error(ErrorCode::INVALIDARGUMENT, "wavelength must be positive");
  r.ordering = c.wavelengthOrdering;
  for (int p = 0; p < r.polCount; ++p) {
    r.region[p] = polRegion(r.frameWidth, r.frameHeight, r.polCount, p);
    r.cx[p] = c.beamCentre[0][p];
    r.cy[p] = c.beamCentre[1][p];
    r.place[p] = placeWindow(r.region[p], r.nx, r.ny, r.pixel, r.cx[p], r.cy[p]);
  }

  const int F = r.batchCount * r.avgCount;
  const float* frames = source_.stage(F, r.frameWidth, r.frameHeight);
  if (!frames) throw Error(ErrorCode::NULLPOINTER, "no frame data");
  run_ = r;

  if (!fftPlan_ || fftPlan_->nx() != r.nx || fftPlan_->ny() != r.ny)
    fftPlan_ = std::make_unique<FftR2C>(r.nx, r.ny, c.fftPlanMode);

  const int P = r.polCount;
  const int hw = r.nx / 2 + 1;
  const size_t planeSize = static_cast<size_t>(hw) * r.ny;
  fourierFull_.assign(static_cast<size_t>(F) * P * planeSize, cfloat{});

  std::vector<double> fx(hw), fy(r.ny);
  for (int i = 0; i < hw; ++i) fx[i] = i / (r.nx * r.pixel);
  for (int j = 0; j < r.ny; ++j) fy[j] = signedBin(j, r.ny) / (r.ny * r.pixel);
  fourierSummary_.resize(P, F + 1, hw, r.ny);
  fourierSummary_.xAxis = fx;
  fourierSummary_.yAxis = fy;

  const size_t frameSize = static_cast<size_t>(r.frameWidth) * r.frameHeight;
  std::vector<std::vector<float>> intens(static_cast<size_t>(F) * P);
  pool().parallelFor(static_cast<size_t>(F) * P, [&](size_t task) {
    const int f = static_cast<int>(task / P), p = static_cast<int>(task % P);
    const float* src = frames + f * frameSize;
    std::vector<float> buf(static_cast<size_t>(r.nx) * r.ny);
    const WindowPlacement& w = r.place[p];
    for (int y = 0; y < r.ny; ++y)
      std::copy_n(src + static_cast<size_t>(w.sy + y) * r.frameWidth + w.sx, r.nx,
                  buf.data() + static_cast<size_t>(y) * r.nx);
    cfloat* out = &fourierFull_[task * planeSize];
    fftPlan_->execute(buf.data(), out);
    auto& I = intens[task];
    I.resize(planeSize);
    for (size_t i = 0; i < planeSize; ++i) I[i] = std::norm(out[i]);
    fourierSummary_.store(p, f, analyseIntensity(I.data(), hw, r.ny, fx, fy));
  });
  for (int p = 0; p < P; ++p) {
    float* tot = &fourierSummary_.totalIntensity[static_cast<size_t>(p) * planeSize];
    for (int f = 0; f < F; ++f) {
      const auto& I = intens[static_cast<size_t>(f) * P + p];
      for (size_t i = 0; i < planeSize; ++i) tot[i] += I[i];
    }
    fourierSummary_.store(p, F, analyseIntensity(tot, hw, r.ny, fx, fy));
  }
  ran_.fft = true;
  console::print(cfg_.verbosity, 2, "digholo: FFT %d frames, %d pol, %dx%d\n", F, P, r.nx, r.ny);
}

// ---------------------------------------------------------------- stage 2

void Engine::runIFFT() {
  if (!ran_.fft) throw Error(ErrorCode::NULLPOINTER, "FFT stage has not run");
  invalidateFrom(1);
  const HoloConfig& c = cfg_;
  const RunState& r = run_;
  const int P = r.polCount, B = r.batchCount, A = r.avgCount;
  const int L = static_cast<int>(r.lambdas.size());
  const double lambdaMin = *std::min_element(r.lambdas.begin(), r.lambdas.end());
  const double wc = std::abs(c.fourierWindowRadius);

  WindowState w;
  w.wx = std::min(r.nx, windowBoxSize(angleToBins(wc, r.nx, r.pixel, lambdaMin)));
  w.wy = std::min(r.ny, windowBoxSize(angleToBins(wc, r.ny, r.pixel, lambdaMin)));
  w.outW = c.resolutionMode ? w.wx : r.nx;
  w.outH = c.resolutionMode ? w.wy : r.ny;
  w.dx = r.pixel * r.nx / w.outW;
  w.dy = r.pixel * r.ny / w.outH;
  w.xAxis = fieldAxis(w.outW, w.dx);
  w.yAxis = fieldAxis(w.outH, w.dy);
  w.k0x.assign(static_cast<size_t>(B) * P, 0);
  w.k0y.assign(static_cast<size_t>(B) * P, 0);
  w.ftx.assign(static_cast<size_t>(B) * P, 0);
  w.fty.assign(static_cast<size_t>(B) * P, 0);

  const size_t winSize = static_cast<size_t>(w.wx) * w.wy;
  const size_t outSize = static_cast<size_t>(w.outW) * w.outH;
  windowData_.assign(static_cast<size_t>(B) * P * winSize, cfloat{});
  fieldPre_.assign(static_cast<size_t>(B) * P * outSize, cfloat{});

  if (!ifftPlan_ || ifftPlan_->nx() != w.outW || ifftPlan_->ny() != w.outH)
    ifftPlan_ = std::make_unique<FftC2C>(w.outW, w.outH, +1, c.fftPlanMode);

  const int hw = r.nx / 2 + 1;
  const size_t planeSize = static_cast<size_t>(hw) * r.ny;
  const bool ff = c.fillFactorCorrection;
  const float norm = 1.0f / (static_cast<float>(r.nx) * static_cast<float>(r.ny));

  pool().parallelFor(static_cast<size_t>(B) * P, [&](size_t task) {
    const int b = static_cast<int>(task / P), p = static_cast<int>(task % P);
    const double lam = r.lambdas[lambdaIndexOfBatch(b)];
    const double ftx = std::sin(tiltOf(0, p) * kDegToRad) / lam;
    const double fty = std::sin(tiltOf(1, p) * kDegToRad) / lam;
    const int k0x = static_cast<int>(std::lround(ftx * r.nx * r.pixel));
    const int k0y = static_cast<int>(std::lround(fty * r.ny * r.pixel));
    w.ftx[task] = ftx;
    w.fty[task] = fty;
    w.k0x[task] = k0x;
    w.k0y[task] = k0y;
    const double rx = angleToBins(wc, r.nx, r.pixel, lam);
    const double ry = angleToBins(wc, r.ny, r.pixel, lam);

    auto inside = [&](int qx, int qy) {
      if (rx <= 0 || ry <= 0) return qx == 0 && qy == 0;
      const double a = qx / rx, bb = qy / ry;
      return a * a + bb * bb <= 1.0;
    };

    std::vector<cfloat> acc(winSize), member(winSize);
    for (int a = 0; a < A; ++a) {
      const int f = averagingFrameIndex(b, a, B, A, r.avgMode, L);
      const cfloat* Fp = &fourierFull_[(static_cast<size_t>(f) * P + p) * planeSize];
      cfloat* dst = a == 0 ? acc.data() : member.data();
      for (int iy = 0; iy < w.wy; ++iy) {
        const int qy = iy - w.wy / 2;
        for (int ix = 0; ix < w.wx; ++ix) {
          const int qx = ix - w.wx / 2;
          cfloat v{};
          if (inside(qx, qy)) {
            v = halfPlaneAt(Fp, r.nx, r.ny, k0x + qx, k0y + qy);
            if (ff) {
              double s = pixelSinc(k0x + qx, r.nx) * pixelSinc(k0y + qy, r.ny);
              if (std::abs(s) < kSincFloor) s = s < 0 ? -kSincFloor : kSincFloor;
              v /= static_cast<float>(s);
            }
          }
          dst[static_cast<size_t>(iy) * w.wx + ix] = v;
        }
      }
      if (a > 0) {
        cdouble ip = 0;
        for (size_t i = 0; i < winSize; ++i) ip += cdouble(std::conj(acc[i])) * cdouble(member[i]);
        const double mag = std::abs(ip);
        const cfloat rot = mag > 0 ? cfloat(static_cast<float>(std::conj(ip).real() / mag),
                                            static_cast<float>(std::conj(ip).imag() / mag))
                                   : cfloat(1.0f, 0.0f);
        for (size_t i = 0; i < winSize; ++i) acc[i] += member[i] * rot;
      }
    }
    if (A > 1) {
      const float inv = 1.0f / A;
      for (auto& v : acc) v *= inv;
    }
    std::copy(acc.begin(), acc.end(), windowData_.begin() + task * winSize);

    // place into the IFFT grid with the recentring phase
    const WindowPlacement& pl = r.place[p];
    const double ax = (pl.residualX / r.pixel + 0.5 * r.nx - 0.5) / r.nx + (0.5 - 0.5 * w.outW) / w.outW;
    const double ay = (pl.residualY / r.pixel + 0.5 * r.ny - 0.5) / r.ny + (0.5 - 0.5 * w.outH) / w.outH;
    std::vector<cfloat> phx(w.wx), phy(w.wy);
    for (int ix = 0; ix < w.wx; ++ix) {
      const double q = ix - w.wx / 2;
      phx[ix] = cfloat(std::polar(1.0, 2.0 * kPi * q * ax));
    }
    for (int iy = 0; iy < w.wy; ++iy) {
      const double q = iy - w.wy / 2;
      phy[iy] = cfloat(std::polar(1.0, 2.0 * kPi * q * ay));
    }
    std::vector<cfloat> grid(outSize, cfloat{});
    for (int iy = 0; iy < w.wy; ++iy) {
      const int gy = wrapIndex(iy - w.wy / 2, w.outH);
      for (int ix = 0; ix < w.wx; ++ix) {
        const cfloat v = acc[static_cast<size_t>(iy) * w.wx + ix];
        if (v == cfloat{}) continue;
        const int gx = wrapIndex(ix - w.wx / 2, w.outW);
        grid[static_cast<size_t>(gy) * w.outW + gx] += v * phx[ix] * phy[iy];
      }
    }
    cfloat* out = &fieldPre_[task * outSize];
    ifftPlan_->execute(grid.data(), out);
    for (size_t i = 0; i < outSize; ++i) out[i] *= norm;
  });
  win_ = std::move(w);
  ran_.ifft = true;
}

// ---------------------------------------------------------------- stage 3

void Engine::computeRefCalibration() {
  refCalApplied_.clear();
  refCalLambdaCount_ = 0;
  if (!refCal_.active()) return;
  const RunState& r = run_;
  if (refCal_.width != r.frameWidth || refCal_.height != r.frameHeight)
    throw Error(ErrorCode::INVALIDDIMENSION, "reference calibration dimensions differ from frame");
  const int Lc = refCal_.wavelengthCount;
  const int P = r.polCount;
  const WindowState& w = win_;
  const size_t outSize = static_cast<size_t>(w.outW) * w.outH;
  const size_t N = static_cast<size_t>(r.nx) * r.ny;
  if (!calPlan_ || calPlan_->nx() != r.nx || calPlan_->ny() != r.ny)
    calPlan_ = std::make_unique<FftC2C>(r.nx, r.ny, -1, cfg_.fftPlanMode);
  refCalApplied_.assign(static_cast<size_t>(Lc) * P * outSize, cfloat{});
  refCalLambdaCount_ = Lc;
  const double wc = std::abs(cfg_.fourierWindowRadius);
  const size_t frameSize = static_cast<size_t>(r.frameWidth) * r.frameHeight;
  const bool ff = cfg_.fillFactorCorrection;

  for (int l = 0; l < Lc; ++l) {
    const double lam = r.lambdas[std::min<size_t>(l, r.lambdas.size() - 1)];
    const double rx = angleToBins(wc, r.nx, r.pixel, lam);
    const double ry = angleToBins(wc, r.ny, r.pixel, lam);
    for (int p = 0; p < P; ++p) {
      const WindowPlacement& pl = r.place[p];
      std::vector<cfloat> in(N), F(N);
      for (int y = 0; y < r.ny; ++y)
        for (int x = 0; x < r.nx; ++x) {
          const size_t s = l * frameSize + static_cast<size_t>(pl.sy + y) * r.frameWidth + pl.sx + x;
          in[static_cast<size_t>(y) * r.nx + x] = refCal_.kind == RefCalibration::Kind::INTENSITY
                                                     ? cfloat(refCal_.intensity[s], 0.0f)
                                                     : refCal_.field[s];
        }
      calPlan_->execute(in.data(), F.data());
      const double ax = (pl.residualX / r.pixel + 0.5 * r.nx - 0.5) / r.nx + (0.5 - 0.5 * w.outW) / w.outW;
      const double ay = (pl.residualY / r.pixel + 0.5 * r.ny - 0.5) / r.ny + (0.5 - 0.5 * w.outH) / w.outH;
      std::vector<cfloat> grid(outSize, cfloat{}), out(outSize);
      for (int iy = 0; iy < w.wy; ++iy) {
        const int qy = iy - w.wy / 2;
        for (int ix = 0; ix < w.wx; ++ix) {
          const int qx = ix - w.wx / 2;
          bool ok;
          if (rx <= 0 || ry <= 0) ok = qx == 0 && qy == 0;
          else ok = (qx / rx) * (qx / rx) + (qy / ry) * (qy / ry) <= 1.0;
          if (!ok) continue;
          cfloat v = F[static_cast<size_t>(wrapIndex(qy, r.ny)) * r.nx + wrapIndex(qx, r.nx)];
          if (ff) {
            double s = pixelSinc(qx, r.nx) * pixelSinc(qy, r.ny);
            if (std::abs(s) < kSincFloor) s = s < 0 ? -kSincFloor : kSincFloor;
            v /= static_cast<float>(s);
          }
          const cfloat ph = cfloat(std::polar(1.0, 2.0 * kPi * (qx * ax + qy * ay)));
          grid[static_cast<size_t>(wrapIndex(qy, w.outH)) * w.outW + wrapIndex(qx, w.outW)] += v * ph;
        }
      }
      ifftPlan_->execute(grid.data(), out.data());
      const float norm = 1.0f / static_cast<float>(N);
      cfloat* dst = &refCalApplied_[(static_cast<size_t>(l) * P + p) * outSize];
      for (size_t i = 0; i < outSize; ++i) {
        const cfloat v = out[i] * norm;
        if (refCal_.kind == RefCalibration::Kind::INTENSITY) {
          dst[i] = cfloat(1.0f / std::sqrt(std::max(v.real(), kCalibrationFloor)), 0.0f);
        } else {
          dst[i] = std::conj(v) / std::max(std::norm(v), kCalibrationFloor);
        }
      }
    }
  }
}

void Engine::runRemoveTilt() {
  if (!ran_.ifft) throw Error(ErrorCode::NULLPOINTER, "IFFT stage has not run");
  invalidateFrom(2);
  const RunState& r = run_;
  const WindowState& w = win_;
  const int P = r.polCount, B = r.batchCount, A = r.avgCount;
  const int L = static_cast<int>(r.lambdas.size());
  computeRefCalibration();

  const size_t outSize = static_cast<size_t>(w.outW) * w.outH;
  fieldR_.assign(static_cast<size_t>(B) * P * outSize, 0);
  fieldI_.assign(static_cast<size_t>(B) * P * outSize, 0);
  fieldScale_.assign(static_cast<size_t>(B) * P, 1.0f);
  slotLambda_.assign(B, 0);
  std::vector<int> slotOf(B);
  for (int b = 0; b < B; ++b) {
    int l = 0, s = 0;
    slotOf[b] = L > 1 ? wavelengthOrderingCalc(b, L, B, r.ordering[0], r.ordering[1], l, s) : b;
    if (slotOf[b] < 0 || slotOf[b] >= B) slotOf[b] = b;
    slotLambda_[slotOf[b]] = lambdaIndexOfBatch(b);
  }

  fieldSummary_.resize(P, B * A + 1, w.outW, w.outH);
  fieldSummary_.xAxis = w.xAxis;
  fieldSummary_.yAxis = w.yAxis;
  std::vector<std::vector<float>> intens(static_cast<size_t>(B) * P);

  pool().parallelFor(static_cast<size_t>(B) * P, [&](size_t task) {
    const int b = static_cast<int>(task / P), p = static_cast<int>(task % P);
    const int li = lambdaIndexOfBatch(b);
    const double lam = r.lambdas[li];
    const WindowPlacement& pl = r.place[p];
    const double X0 = pl.centreX - (0.5 * r.nx - 0.5) * r.pixel;
    const double Y0 = pl.centreY - (0.5 * r.ny - 0.5) * r.pixel;
    const double f0x = w.k0x[task] / (r.nx * r.pixel);
    const double f0y = w.k0y[task] / (r.ny * r.pixel);
    const double ftx = w.ftx[task], fty = w.fty[task];
    const double quad = kPi / lam * defocusOf(p);
    std::vector<cfloat> ex(w.outW), ey(w.outH);
    for (int m = 0; m < w.outW; ++m) {
      const double x = w.xAxis[m], X = r.cx[p] + x;
      ex[m] = cfloat(std::polar(1.0, 2.0 * kPi * (f0x * (X - X0) - ftx * X) - quad * x * x));
    }
    for (int n = 0; n < w.outH; ++n) {
      const double y = w.yAxis[n], Y = r.cy[p] + y;
      ey[n] = cfloat(std::polar(1.0, 2.0 * kPi * (f0y * (Y - Y0) - fty * Y) - quad * y * y));
    }
    const cfloat bc = batchCal_.factor(p, b);
    const cfloat* rc = refCalLambdaCount_ > 0
                           ? &refCalApplied_[(static_cast<size_t>(li % refCalLambdaCount_) * P + p) * outSize]
                           : nullptr;
    std::vector<cfloat> E(outSize);
    const cfloat* src = &fieldPre_[task * outSize];
    for (int n = 0; n < w.outH; ++n) {
      const cfloat yy = ey[n] * bc;
      for (int m = 0; m < w.outW; ++m) {
        const size_t i = static_cast<size_t>(n) * w.outW + m;
        cfloat v = src[i] * ex[m] * yy;
        if (rc) v *= rc[i];
        E[i] = v;
      }
    }
    const int slot = slotOf[b];
    const size_t dst = (static_cast<size_t>(slot) * P + p) * outSize;
    fieldScale_[static_cast<size_t>(slot) * P + p] =
        quantiseField(E.data(), outSize, &fieldR_[dst], &fieldI_[dst]);
    auto& I = intens[static_cast<size_t>(slot) * P + p];
    I.resize(outSize);
    for (size_t i = 0; i < outSize; ++i) I[i] = std::norm(E[i]);
    fieldSummary_.store(p, slot, analyseIntensity(I.data(), w.outW, w.outH, w.xAxis, w.yAxis));
  });
  for (int p = 0; p < P; ++p) {
    float* tot = &fieldSummary_.totalIntensity[static_cast<size_t>(p) * outSize];
    for (int s = 0; s < B; ++s) {
      const auto& I = intens[static_cast<size_t>(s) * P + p];
      for (size_t i = 0; i < outSize; ++i) tot[i] += I[i];
    }
    fieldSummary_.store(p, B, analyseIntensity(tot, w.outW, w.outH, w.xAxis, w.yAxis));
  }
  ran_.tilt = true;
}

std::vector<cfloat> Engine::fields() const {
  std::vector<cfloat> out;
  if (!ran_.tilt) return out;
  const size_t outSize = static_cast<size_t>(win_.outW) * win_.outH;
  out.resize(fieldR_.size());
  for (size_t k = 0; k < fieldScale_.size(); ++k) {
    const float inv = 1.0f / fieldScale_[k];
    for (size_t i = 0; i < outSize; ++i) {
      const size_t j = k * outSize + i;
      out[j] = cfloat(fieldR_[j] * inv, fieldI_[j] * inv);
    }
  }
  return out;
}

// ---------------------------------------------------------------- stage 4

void Engine::ensureBasis() {
  const int G = cfg_.basisGroupCount;
  for (int p = 0; p < run_.polCount; ++p) {
    const double waist = waistOf(p);
    auto& bp = basis_[p];
    if (bp && bp->groupCount == G && bp->waist == waist && bp->xAxis == win_.xAxis &&
        bp->yAxis == win_.yAxis)
      continue;
    bp = std::make_unique<HGBasis>(generateHGBasis(G, waist, win_.xAxis, win_.yAxis));
  }
  if (cfg_.basisType == BasisType::LG && lgGroups_ != G) {
    lgTransform_ = hgToLgTransform(G);
    lgGroups_ = G;
  }
}

const HGBasis* Engine::basis(int pol) const {
  if (pol < 0 || pol >= kPolCountMax) return nullptr;
  return basis_[pol].get();
}

std::vector<int> Engine::modeGroups() const {
  const bool custom = cfg_.basisType == BasisType::CUSTOM && !cfg_.customTransform.empty();
  if (custom) {
    std::vector<int> g(modeCountOut_);
    for (int i = 0; i < modeCountOut_; ++i) g[i] = i;
    return g;
  }
  return hgModeGroups(cfg_.basisGroupCount);
}

void Engine::runExtract() {
  if (!ran_.tilt) throw Error(ErrorCode::NULLPOINTER, "tilt removal has not run");
  invalidateFrom(3);
  const int G = cfg_.basisGroupCount;
  if (G <= 0) {
    coefs_.clear();
    modeCountOut_ = 0;
    return;
  }
  ensureBasis();
  const int M = modeCountForGroups(G);
  const bool custom = cfg_.basisType == BasisType::CUSTOM && !cfg_.customTransform.empty() &&
                      cfg_.customModeCountOut > 0 && cfg_.customModeCountIn > 0;
  const bool lg = cfg_.basisType == BasisType::LG;
  const int Mout = custom ? cfg_.customModeCountOut : M;
  const int P = run_.polCount, B = run_.batchCount;
  const size_t outSize = static_cast<size_t>(win_.outW) * win_.outH;
  coefs_.assign(static_cast<size_t>(B) * P * Mout, cfloat{});
  pool().parallelFor(static_cast<size_t>(B) * P, [&](size_t task) {
    const int s = static_cast<int>(task / P), p = static_cast<int>(task % P);
    const size_t off = task * outSize;
    const float inv = 1.0f / fieldScale_[task];
    std::vector<cfloat> E(outSize);
    for (size_t i = 0; i < outSize; ++i) E[i] = cfloat(fieldR_[off + i] * inv, fieldI_[off + i] * inv);
    std::vector<cdouble> hg(M), out(Mout);
    extractCoefs(*basis_[p], E.data(), hg.data());
    if (custom)
      applyTransform(cfg_.customTransform.data(), cfg_.customModeCountOut, cfg_.customModeCountIn,
                     hg.data(), M, out.data());
    else if (lg)
      applyTransform(lgTransform_.data(), M, M, hg.data(), M, out.data());
    else
      out = hg;
    cfloat* dst = &coefs_[(static_cast<size_t>(s) * P + p) * Mout];
    for (int k = 0; k < Mout; ++k) dst[k] = cfloat(out[k]);
  });
  modeCountOut_ = Mout;
  ran_.coefs = true;
}

const std::vector<cfloat>& Engine::basisFields(int& modeCountOut, int& width, int& height) {
  basisExport_.clear();
  modeCountOut = 0;
  width = height = 0;
  if (!ran_.tilt || cfg_.basisGroupCount <= 0) return basisExport_;
  ensureBasis();
  for (int p = 0; p < run_.polCount; ++p) {
    auto m = materialiseModes(*basis_[p], true);
    basisExport_.insert(basisExport_.end(), m.begin(), m.end());
  }
  modeCountOut = basis_[0]->modeCount();
  width = win_.outW;
  height = win_.outH;
  return basisExport_;
}

// ---------------------------------------------------------------- entry points

ErrorCode Engine::processFFT() { return guard(&Engine::runFFT); }
ErrorCode Engine::processIFFT() { return guard(&Engine::runIFFT); }
ErrorCode Engine::processRemoveTilt() { return guard(&Engine::runRemoveTilt); }
ErrorCode Engine::processExtractCoefs() { return guard(&Engine::runExtract); }

void Engine::runAll() {
  runFFT();
  runIFFT();
  runRemoveTilt();
  runExtract();
}

ErrorCode Engine::processBatch() {
  return guard(&Engine::runAll);
}

ErrorCode Engine::processBatchFrequencySweepLinear(double lambdaStart, double lambdaStop,
                                                   int lambdaCount) {
  try {
    cfg_.wavelengths = frequencySweepLinear(lambdaStart, lambdaStop, lambdaCount);
  } catch (const Error& e) {
    return e.code();
  }
  return guard(&Engine::runAll);
}

ErrorCode Engine::processBatchWavelengthSweepArbitrary(const double* wavelengths, int lambdaCount) {
  if (!wavelengths) return ErrorCode::NULLPOINTER;
  if (lambdaCount < 1) return ErrorCode::INVALIDDIMENSION;
  for (int i = 0; i < lambdaCount; ++i)
    if (!(wavelengths[i] > 0)) return ErrorCode::INVALIDDIMENSION;
  cfg_.wavelengths.assign(wavelengths, wavelengths + lambdaCount);
  return guard(&Engine::runAll);
}

const AnalysisSummary* Engine::summary(int plane) const {
  if (plane == PLANE_FOURIER) return ran_.fft ? &fourierSummary_ : nullptr;
  if (plane == PLANE_FIELD) return ran_.tilt ? &fieldSummary_ : nullptr;
  return nullptr;
}

const std::vector<cfloat>& Engine::refCalibrationApplied(int& lambdaCount, int& pols) const {
  lambdaCount = refCalLambdaCount_;
  pols = refCalLambdaCount_ ? run_.polCount : 0;
  return refCalApplied_;
}

// ---------------------------------------------------------------- metrics

ErrorCode Engine::calcMetrics() {
  if (!ran_.coefs || modeCountOut_ <= 0 || coefs_.empty()) return ErrorCode::NULLPOINTER;
  try {
    const int L = std::max(1, wavelengthCount());
    metrics_.reset(L);
    const auto mg = modeGroups();
    for (int l = 0; l < L; ++l) {
      std::vector<int> rows;
      for (int s = 0; s < run_.batchCount; ++s)
        if (slotLambda_[s] == l) rows.push_back(s);
      if (rows.empty()) continue;
      const Matrix A = buildTransferMatrix(coefs_.data(), run_.batchCount, modeCountOut_,
                                           run_.polCount, cfg_.autoAlignPolIndependence,
                                           cfg_.autoAlignBasisMulConjTrans, rows);
      const auto g = transferGroups(mg, modeCountOut_, run_.polCount, cfg_.autoAlignBasisMulConjTrans,
                                    A.rows);
      const auto v = computeMetrics(A, g);
      for (int m = 0; m < METRIC_COUNT; ++m) metrics_.ref(m, l) = v[m];
    }
    metrics_.finaliseAverage();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::SUCCESS;
}

float Engine::metric(int idx) const {
  if (idx < 0 || idx >= METRIC_COUNT) return 0.0f;
  return metrics_.average(idx);
}

}  // namespace digholo
