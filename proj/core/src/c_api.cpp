#include "digholo/c_api.h"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <string>
#include <vector>

#include "digholo/config_access.hpp"
#include "digholo/console.hpp"
#include "digholo/engine.hpp"
#include "digholo/fft.hpp"
#include "digholo/settings.hpp"
#include "digholo/simulator.hpp"

using namespace digholo;

static_assert(sizeof(digholo_complex64) == sizeof(cfloat), "complex layout");

namespace {

struct Handle {
  Engine engine;
  ErrorCode lastError = ErrorCode::SUCCESS;
  std::vector<float> fieldX, fieldY;
  std::vector<cfloat> fields;
  std::vector<float> calX, calY;
  std::vector<float> sumX, sumY;
  std::vector<float> lambdas;
  Viewport viewport;
};

std::mutex gHandleMutex;
std::vector<std::unique_ptr<Handle>> gHandles;

Handle* find(int h) {
  std::lock_guard<std::mutex> lock(gHandleMutex);
  if (h < 0 || h >= static_cast<int>(gHandles.size())) return nullptr;
  return gHandles[h].get();
}

int code(ErrorCode e) { return static_cast<int>(e); }

template <class F>
int call(int h, F&& f) {
  Handle* H = find(h);
  if (!H) return code(ErrorCode::INVALIDHANDLE);
  try {
    return code(f(*H));
  } catch (const Error& e) {
    return code(e.code());
  } catch (const std::bad_alloc&) {
    return code(ErrorCode::MEMORYALLOCATION);
  } catch (...) {
    return code(ErrorCode::ERROR);
  }
}

// Getter returning fallback on invalid handle.
template <class T, class F>
T get(int h, T fallback, F&& f) {
  Handle* H = find(h);
  if (!H) return fallback;
  try {
    return f(*H);
  } catch (...) {
    return fallback;
  }
}

template <class F>
int setCfg(int h, F&& f) {
  return call(h, [&](Handle& H) { return f(H.engine.config()); });
}

int flag(bool b) { return b ? 1 : 0; }

std::vector<float> toFloat(const std::vector<double>& v) { return {v.begin(), v.end()}; }

const digholo_complex64* asC(const cfloat* p) { return reinterpret_cast<const digholo_complex64*>(p); }
const cfloat* asCpp(const digholo_complex64* p) { return reinterpret_cast<const cfloat*>(p); }

template <class T>
void put(T* dst, T v) {
  if (dst) *dst = v;
}

const digholo_complex64* coefView(Handle& H, int* batchCount, int* modeCount, int* polCount) {
  Engine& e = H.engine;
  const bool ok = H.lastError == ErrorCode::SUCCESS && e.hasCoefs() && e.modeCount() > 0 &&
                  !e.coefs().empty();
  put(batchCount, ok ? e.batchCount() : 0);
  put(modeCount, ok ? e.modeCount() : 0);
  put(polCount, ok ? e.polCount() : 0);
  return ok ? asC(e.coefs().data()) : nullptr;
}

// Simulator arrays exposed as float through the C interface, keyed by frame pointer.
struct SimArrays {
  std::vector<float> refTiltX, refTiltY, refDefocus, refWaist, refCentreX, refCentreY;
  std::vector<float> beamWaist, beamCentreX, beamCentreY, wavelengths;
  std::vector<cfloat> refAmplitude, beamCoefs;
};
std::mutex gSimMutex;
std::map<const float*, SimArrays> gSimArrays;

std::vector<double> readIn(float** p, int n) {
  if (!p || !*p || n <= 0) return {};
  return std::vector<double>(*p, *p + n);
}
std::vector<cfloat> readInC(digholo_complex64** p, size_t n) {
  if (!p || !*p || n == 0) return {};
  const cfloat* c = asCpp(*p);
  return std::vector<cfloat>(c, c + n);
}
void writeOut(float** p, std::vector<float>& store, const std::vector<double>& v) {
  store.assign(v.begin(), v.end());
  if (p && !*p) *p = store.data();
}
void writeOutC(digholo_complex64** p, std::vector<cfloat>& store, const std::vector<cfloat>& v) {
  store = v;
  if (p && !*p) *p = reinterpret_cast<digholo_complex64*>(store.data());
}

}  // namespace

extern "C" {

// ---------------------------------------------------------------- handles

int digholo_create(void) {
  try {
    auto h = std::make_unique<Handle>();
    std::lock_guard<std::mutex> lock(gHandleMutex);
    for (size_t i = 0; i < gHandles.size(); ++i)
      if (!gHandles[i]) {
        gHandles[i] = std::move(h);
        return static_cast<int>(i);
      }
    gHandles.push_back(std::move(h));
    return static_cast<int>(gHandles.size() - 1);
  } catch (...) {
    return -1;
  }
}

int digholo_destroy(int handle) {
  std::unique_ptr<Handle> dead;
  {
    std::lock_guard<std::mutex> lock(gHandleMutex);
    if (handle < 0 || handle >= static_cast<int>(gHandles.size()) || !gHandles[handle])
      return code(ErrorCode::INVALIDHANDLE);
    dead = std::move(gHandles[handle]);
  }
  return code(ErrorCode::SUCCESS);
}

// ---------------------------------------------------------------- configuration

int digholo_config_backup_save(int handle) {
  return call(handle, [](Handle& H) {
    H.engine.backupSave();
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_backup_load(int handle) {
  return call(handle, [](Handle& H) { return H.engine.backupLoad(); });
}

int digholo_config_set_frame_dimensions(int handle, int width, int height) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setFrameDimensions(c, width, height); });
}
int digholo_config_get_frame_dimensions(int handle, int* width, int* height) {
  return call(handle, [&](Handle& H) {
    if (!width || !height) return ErrorCode::NULLPOINTER;
    *width = H.engine.config().frameWidth;
    *height = H.engine.config().frameHeight;
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_set_frame_width(int handle, int width) {
  return setCfg(handle,
                [&](HoloConfig& c) { return cfg::setFrameDimensions(c, width, c.frameHeight); });
}
int digholo_config_get_frame_width(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().frameWidth; });
}
int digholo_config_set_frame_height(int handle, int height) {
  return setCfg(handle,
                [&](HoloConfig& c) { return cfg::setFrameDimensions(c, c.frameWidth, height); });
}
int digholo_config_get_frame_height(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().frameHeight; });
}
int digholo_config_set_frame_pixel_size(int handle, float pixelSize) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setFramePixelSize(c, pixelSize); });
}
float digholo_config_get_frame_pixel_size(int handle) {
  return get(handle, 0.0f,
             [](Handle& H) { return static_cast<float>(H.engine.config().framePixelSize); });
}
int digholo_config_set_pol_count(int handle, int polCount) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setPolCount(c, polCount); });
}
int digholo_config_get_pol_count(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().polCount; });
}

int digholo_config_set_fft_window_size(int handle, int width, int height) {
  return setCfg(handle, [&](HoloConfig& c) {
    if (floorToQuanta(width) <= 0 || floorToQuanta(height) <= 0) return ErrorCode::INVALIDDIMENSION;
    cfg::setFftWindowSizeX(c, width);
    cfg::setFftWindowSizeY(c, height);
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_get_fft_window_size(int handle, int* width, int* height) {
  return call(handle, [&](Handle& H) {
    if (!width || !height) return ErrorCode::NULLPOINTER;
    *width = H.engine.config().fftWindowSizeX;
    *height = H.engine.config().fftWindowSizeY;
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_set_fft_window_size_x(int handle, int width) {
  return get(handle, 0, [&](Handle& H) { return cfg::setFftWindowSizeX(H.engine.config(), width); });
}
int digholo_config_get_fft_window_size_x(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().fftWindowSizeX; });
}
int digholo_config_set_fft_window_size_y(int handle, int height) {
  return get(handle, 0,
             [&](Handle& H) { return cfg::setFftWindowSizeY(H.engine.config(), height); });
}
int digholo_config_get_fft_window_size_y(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().fftWindowSizeY; });
}
int digholo_config_set_fourier_window_radius(int handle, float radius) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setFourierWindowRadius(c, radius); });
}
float digholo_config_get_fourier_window_radius(int handle) {
  return get(handle, 0.0f,
             [](Handle& H) { return static_cast<float>(H.engine.config().fourierWindowRadius); });
}
int digholo_config_set_ifft_resolution_mode(int handle, int mode) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setResolutionMode(c, mode); });
}
int digholo_config_get_ifft_resolution_mode(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().resolutionMode; });
}
int digholo_config_set_fill_factor_correction_enabled(int handle, int enabled) {
  return setCfg(handle, [&](HoloConfig& c) {
    c.fillFactorCorrection = enabled != 0;
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_get_fill_factor_correction_enabled(int handle) {
  return get(handle, 0, [](Handle& H) { return flag(H.engine.config().fillFactorCorrection); });
}

namespace {
bool axisPolValid(int axis, int pol) {
  return axis >= 0 && axis < 2 && pol >= 0 && pol < kPolCountMax;
}
}  // namespace

int digholo_config_set_beam_centre(int handle, int axis, int pol, float value) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setBeamCentre(c, axis, pol, value); });
}
float digholo_config_get_beam_centre(int handle, int axis, int pol) {
  return get(handle, 0.0f, [&](Handle& H) {
    return axisPolValid(axis, pol) ? static_cast<float>(H.engine.config().beamCentre[axis][pol])
                                   : 0.0f;
  });
}
int digholo_config_set_tilt(int handle, int axis, int pol, float value) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setTilt(c, axis, pol, value); });
}
float digholo_config_get_tilt(int handle, int axis, int pol) {
  return get(handle, 0.0f, [&](Handle& H) {
    return axisPolValid(axis, pol) ? static_cast<float>(H.engine.config().tilt[axis][pol]) : 0.0f;
  });
}
int digholo_config_set_defocus(int handle, int pol, float value) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setDefocus(c, pol, value); });
}
float digholo_config_get_defocus(int handle, int pol) {
  return get(handle, 0.0f, [&](Handle& H) {
    return axisPolValid(0, pol) ? static_cast<float>(H.engine.config().defocus[pol]) : 0.0f;
  });
}
int digholo_config_set_basis_waist(int handle, int pol, float value) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setBasisWaist(c, pol, value); });
}
float digholo_config_get_basis_waist(int handle, int pol) {
  return get(handle, 0.0f, [&](Handle& H) {
    return axisPolValid(0, pol) ? static_cast<float>(H.engine.config().basisWaist[pol]) : 0.0f;
  });
}

#define DIGHOLO_FLAG(name, member)                                                  \
  int digholo_config_set_##name(int handle, int enabled) {                          \
    return setCfg(handle, [&](HoloConfig& c) {                                      \
      c.member = enabled != 0;                                                      \
      return ErrorCode::SUCCESS;                                                    \
    });                                                                             \
  }                                                                                 \
  int digholo_config_get_##name(int handle) {                                       \
    return get(handle, 0, [](Handle& H) { return flag(H.engine.config().member); }); \
  }

DIGHOLO_FLAG(pol_lock_tilt, polLockTilt)
DIGHOLO_FLAG(pol_lock_defocus, polLockDefocus)
DIGHOLO_FLAG(pol_lock_basis_waist, polLockBasisWaist)
DIGHOLO_FLAG(auto_align_tilt, autoAlignTilt)
DIGHOLO_FLAG(auto_align_beam_centre, autoAlignBeamCentre)
DIGHOLO_FLAG(auto_align_defocus, autoAlignDefocus)
DIGHOLO_FLAG(auto_align_basis_waist, autoAlignBasisWaist)
DIGHOLO_FLAG(auto_align_fourier_window_radius, autoAlignFourierWindowRadius)
DIGHOLO_FLAG(auto_align_pol_independence, autoAlignPolIndependence)
DIGHOLO_FLAG(auto_align_basis_mul_conj_trans, autoAlignBasisMulConjTrans)

#undef DIGHOLO_FLAG

int digholo_config_set_basis_group_count(int handle, int groupCount) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setBasisGroupCount(c, groupCount); });
}
int digholo_config_get_basis_group_count(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().basisGroupCount; });
}
int digholo_config_set_basis_type(int handle, int type) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setBasisType(c, type); });
}
int digholo_config_get_basis_type(int handle) {
  return get(handle, 0, [](Handle& H) { return static_cast<int>(H.engine.config().basisType); });
}
int digholo_config_set_basis_type_hg(int handle) { return digholo_config_set_basis_type(handle, 0); }
int digholo_config_set_basis_type_lg(int handle) { return digholo_config_set_basis_type(handle, 1); }
int digholo_config_set_basis_type_custom(int handle, int modeCountIn, int modeCountOut,
                                         const digholo_complex64* transform) {
  return setCfg(handle, [&](HoloConfig& c) {
    return cfg::setBasisTypeCustom(c, modeCountIn, modeCountOut, asCpp(transform));
  });
}

int digholo_config_set_wavelength_centre(int handle, float lambda) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setWavelengthCentre(c, lambda); });
}
float digholo_config_get_wavelength_centre(int handle) {
  return get(handle, 0.0f,
             [](Handle& H) { return static_cast<float>(H.engine.config().wavelengthCentre); });
}
int digholo_config_set_wavelengths(int handle, const float* lambdas, int lambdaCount) {
  return setCfg(handle, [&](HoloConfig& c) {
    if (!lambdas) return ErrorCode::NULLPOINTER;
    if (lambdaCount < 1) return ErrorCode::INVALIDDIMENSION;
    std::vector<double> v(lambdas, lambdas + lambdaCount);
    return cfg::setWavelengths(c, v.data(), lambdaCount);
  });
}
int digholo_config_set_wavelengths_linear_frequency(int handle, float lambdaStart, float lambdaStop,
                                                    int lambdaCount) {
  return setCfg(handle, [&](HoloConfig& c) {
    return cfg::setWavelengthsLinearFrequency(c, lambdaStart, lambdaStop, lambdaCount);
  });
}
const float* digholo_config_get_wavelengths(int handle, int* lambdaCount) {
  put(lambdaCount, 0);
  return get(handle, static_cast<const float*>(nullptr), [&](Handle& H) -> const float* {
    H.lambdas = toFloat(H.engine.wavelengths());
    if (H.lambdas.empty()) return nullptr;
    put(lambdaCount, static_cast<int>(H.lambdas.size()));
    return H.lambdas.data();
  });
}
int digholo_config_set_wavelength_ordering(int handle, int inout, int ordering) {
  return setCfg(handle,
                [&](HoloConfig& c) { return cfg::setWavelengthOrdering(c, inout, ordering); });
}
int digholo_config_get_wavelength_ordering(int handle, int inout) {
  return get(handle, 0, [&](Handle& H) {
    return (inout == 0 || inout == 1) ? H.engine.config().wavelengthOrdering[inout] : 0;
  });
}

int digholo_config_set_auto_align_tol(int handle, float tol) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setAutoAlignTol(c, tol); });
}
float digholo_config_get_auto_align_tol(int handle) {
  return get(handle, 0.0f,
             [](Handle& H) { return static_cast<float>(H.engine.config().autoAlignTol); });
}
int digholo_config_set_auto_align_mode(int handle, int mode) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setAutoAlignMode(c, mode); });
}
int digholo_config_get_auto_align_mode(int handle) {
  return get(handle, 0,
             [](Handle& H) { return static_cast<int>(H.engine.config().autoAlignMode); });
}
int digholo_config_set_auto_align_goal_idx(int handle, int goal) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setAutoAlignGoalIdx(c, goal); });
}
int digholo_config_get_auto_align_goal_idx(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().autoAlignGoalIdx; });
}

int digholo_config_set_thread_count(int handle, int threads) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setThreadCount(c, threads); });
}
int digholo_config_get_thread_count(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().threadCount; });
}
int digholo_config_set_verbosity(int handle, int verbosity) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setVerbosity(c, verbosity); });
}
int digholo_config_get_verbosity(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().verbosity; });
}
int digholo_config_set_fftw_plan_mode(int handle, int mode) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setFftPlanMode(c, mode); });
}
int digholo_config_get_fftw_plan_mode(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().fftPlanMode; });
}
int digholo_fftw_wisdom_forget(void) {
  fftWisdomForget();
  return code(ErrorCode::SUCCESS);
}
int digholo_fftw_wisdom_filename(const char* filename) {
  if (!filename) return code(ErrorCode::NULLPOINTER);
  fftWisdomFilename(filename);
  return code(ErrorCode::SUCCESS);
}

int digholo_config_set_batch_count(int handle, int batchCount) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setBatchCount(c, batchCount); });
}
int digholo_config_get_batch_count(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().batchCount; });
}
int digholo_config_set_avg_count(int handle, int avgCount) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setAvgCount(c, avgCount); });
}
int digholo_config_get_avg_count(int handle) {
  return get(handle, 0, [](Handle& H) { return H.engine.config().avgCount; });
}
int digholo_config_set_avg_mode(int handle, int avgMode) {
  return setCfg(handle, [&](HoloConfig& c) { return cfg::setAvgMode(c, avgMode); });
}
int digholo_config_get_avg_mode(int handle) {
  return get(handle, 0, [](Handle& H) { return static_cast<int>(H.engine.config().avgMode); });
}

// ---------------------------------------------------------------- calibration

int digholo_config_set_batch_calibration(int handle, const digholo_complex64* cal, int polCount,
                                         int batchCount) {
  return call(handle, [&](Handle& H) {
    return H.engine.setBatchCalibration(asCpp(cal), polCount, batchCount);
  });
}
int digholo_config_set_batch_calibration_from_file(int handle, const char* filename, int polCount,
                                                   int batchCount) {
  return call(handle, [&](Handle& H) {
    if (!filename) return ErrorCode::NULLPOINTER;
    return H.engine.setBatchCalibrationFromFile(filename, polCount, batchCount);
  });
}
const digholo_complex64* digholo_config_get_batch_calibration(int handle, int* polCount,
                                                              int* batchCount) {
  put(polCount, 0);
  put(batchCount, 0);
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) -> const digholo_complex64* {
               const BatchCalibration& b = H.engine.batchCalibration();
               if (b.cal.empty()) return nullptr;
               put(polCount, b.polCount);
               put(batchCount, b.batchCount);
               return asC(b.cal.data());
             });
}
int digholo_config_set_batch_calibration_enabled(int handle, int enabled) {
  return call(handle, [&](Handle& H) {
    BatchCalibration& b = H.engine.batchCalibration();
    b.enabled = enabled != 0 && !b.cal.empty();
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_get_batch_calibration_enabled(int handle) {
  return get(handle, 0, [](Handle& H) { return flag(H.engine.batchCalibration().enabled); });
}

int digholo_config_set_ref_calibration_intensity(int handle, const uint16_t* cal, int lambdaCount,
                                                 int width, int height) {
  return call(handle, [&](Handle& H) {
    return H.engine.refCalibration().setIntensity(cal, lambdaCount, width, height);
  });
}
int digholo_config_set_ref_calibration_field(int handle, const digholo_complex64* cal,
                                             int lambdaCount, int width, int height) {
  return call(handle, [&](Handle& H) {
    return H.engine.refCalibration().setField(asCpp(cal), lambdaCount, width, height);
  });
}
int digholo_config_set_ref_calibration_from_file(int handle, const char* filename, int lambdaCount,
                                                 int width, int height) {
  return call(handle, [&](Handle& H) {
    if (!filename) return ErrorCode::NULLPOINTER;
    return H.engine.refCalibration().setFromFile(filename, lambdaCount, width, height);
  });
}
int digholo_config_set_ref_calibration_enabled(int handle, int enabled) {
  return call(handle, [&](Handle& H) {
    RefCalibration& r = H.engine.refCalibration();
    r.enabled = enabled != 0 && r.kind != RefCalibration::Kind::DISABLED;
    return ErrorCode::SUCCESS;
  });
}
int digholo_config_get_ref_calibration_enabled(int handle) {
  return get(handle, 0, [](Handle& H) { return flag(H.engine.refCalibration().active()); });
}
const digholo_complex64* digholo_config_get_ref_calibration_fields(int handle, int* lambdaCount,
                                                                   int* polCount,
                                                                   const float** xAxis,
                                                                   const float** yAxis, int* width,
                                                                   int* height) {
  put(lambdaCount, 0);
  put(polCount, 0);
  put(width, 0);
  put(height, 0);
  put(xAxis, static_cast<const float*>(nullptr));
  put(yAxis, static_cast<const float*>(nullptr));
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) -> const digholo_complex64* {
               int L = 0, P = 0;
               const auto& cal = H.engine.refCalibrationApplied(L, P);
               if (cal.empty() || L == 0) return nullptr;
               H.calX = toFloat(H.engine.fieldXAxis());
               H.calY = toFloat(H.engine.fieldYAxis());
               put(lambdaCount, L);
               put(polCount, P);
               put(width, H.engine.fieldWidth());
               put(height, H.engine.fieldHeight());
               put(xAxis, static_cast<const float*>(H.calX.data()));
               put(yAxis, static_cast<const float*>(H.calY.data()));
               return asC(cal.data());
             });
}

// ---------------------------------------------------------------- frames

int digholo_set_frame_buffer(int handle, const float* frames) {
  return call(handle, [&](Handle& H) { return H.engine.setFrameBuffer(frames); });
}
int digholo_set_frame_buffer_uint16(int handle, const uint16_t* frames, int transpose) {
  return call(handle,
              [&](Handle& H) { return H.engine.setFrameBufferUint16(frames, transpose != 0); });
}
int digholo_set_frame_buffer_from_file(int handle, const char* filename) {
  return call(handle, [&](Handle& H) {
    if (!filename) return ErrorCode::NULLPOINTER;
    return H.engine.setFrameBufferFromFile(filename);
  });
}
const float* digholo_get_frame_buffer(int handle) {
  return get(handle, static_cast<const float*>(nullptr), [](Handle& H) -> const float* {
    FrameSource& s = H.engine.frameSource();
    if (s.kind() == FrameSourceKind::FLOAT32_EXTERNAL)
      return static_cast<const float*>(s.pointer());
    return nullptr;
  });
}
const uint16_t* digholo_get_frame_buffer_uint16(int handle) {
  return get(handle, static_cast<const uint16_t*>(nullptr), [](Handle& H) -> const uint16_t* {
    FrameSource& s = H.engine.frameSource();
    if (s.kind() == FrameSourceKind::UINT16_EXTERNAL || s.kind() == FrameSourceKind::INTERNAL_FILE)
      return static_cast<const uint16_t*>(s.pointer());
    return nullptr;
  });
}

int digholo_set_batch(int handle, int batchCount, const float* frames) {
  return call(handle, [&](Handle& H) { return H.engine.setBatch(batchCount, frames); });
}
int digholo_set_batch_avg(int handle, int batchCount, const float* frames, int avgCount,
                          int avgMode) {
  return call(handle, [&](Handle& H) {
    return H.engine.setBatchAvg(batchCount, frames, avgCount, avgMode);
  });
}
int digholo_set_batch_uint16(int handle, int batchCount, const uint16_t* frames, int transpose) {
  return call(handle, [&](Handle& H) {
    return H.engine.setBatchUint16(batchCount, frames, transpose != 0);
  });
}
int digholo_set_batch_avg_uint16(int handle, int batchCount, const uint16_t* frames, int avgCount,
                                 int avgMode, int transpose) {
  return call(handle, [&](Handle& H) {
    return H.engine.setBatchAvgUint16(batchCount, frames, avgCount, avgMode, transpose != 0);
  });
}

// ---------------------------------------------------------------- processing

int digholo_process_fft(int handle) {
  return call(handle, [](Handle& H) { return H.lastError = H.engine.processFFT(); });
}
int digholo_process_ifft(int handle) {
  return call(handle, [](Handle& H) { return H.lastError = H.engine.processIFFT(); });
}
int digholo_process_remove_tilt(int handle) {
  return call(handle, [](Handle& H) { return H.lastError = H.engine.processRemoveTilt(); });
}
int digholo_process_basis_extract_coefs(int handle) {
  return call(handle, [](Handle& H) { return H.lastError = H.engine.processExtractCoefs(); });
}

const digholo_complex64* digholo_process_batch(int handle, int* batchCount, int* modeCount,
                                               int* polCount) {
  put(batchCount, 0);
  put(modeCount, 0);
  put(polCount, 0);
  return get(handle, static_cast<const digholo_complex64*>(nullptr), [&](Handle& H) {
    H.lastError = H.engine.processBatch();
    return coefView(H, batchCount, modeCount, polCount);
  });
}
const digholo_complex64* digholo_process_batch_frequency_sweep_linear(int handle, float lambdaStart,
                                                                      float lambdaStop,
                                                                      int lambdaCount,
                                                                      int* batchCount,
                                                                      int* modeCount,
                                                                      int* polCount) {
  put(batchCount, 0);
  put(modeCount, 0);
  put(polCount, 0);
  return get(handle, static_cast<const digholo_complex64*>(nullptr), [&](Handle& H) {
    H.lastError = H.engine.processBatchFrequencySweepLinear(lambdaStart, lambdaStop, lambdaCount);
    return coefView(H, batchCount, modeCount, polCount);
  });
}
const digholo_complex64* digholo_process_batch_wavelength_sweep_arbitrary(
    int handle, const float* wavelengths, int lambdaCount, int* batchCount, int* modeCount,
    int* polCount) {
  put(batchCount, 0);
  put(modeCount, 0);
  put(polCount, 0);
  return get(handle, static_cast<const digholo_complex64*>(nullptr), [&](Handle& H) {
    if (!wavelengths) {
      H.lastError = ErrorCode::NULLPOINTER;
    } else {
      std::vector<double> v(wavelengths, wavelengths + std::max(0, lambdaCount));
      H.lastError = H.engine.processBatchWavelengthSweepArbitrary(v.data(), lambdaCount);
    }
    return coefView(H, batchCount, modeCount, polCount);
  });
}
const digholo_complex64* digholo_basis_get_coefs(int handle, int* batchCount, int* modeCount,
                                                 int* polCount) {
  put(batchCount, 0);
  put(modeCount, 0);
  put(polCount, 0);
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) { return coefView(H, batchCount, modeCount, polCount); });
}
int digholo_process_last_error(int handle) {
  return call(handle, [](Handle& H) { return H.lastError; });
}

// ---------------------------------------------------------------- results

namespace {
void zeroDims(int* batchCount, int* polCount, const float** xAxis, const float** yAxis, int* width,
              int* height) {
  put(batchCount, 0);
  put(polCount, 0);
  put(width, 0);
  put(height, 0);
  put(xAxis, static_cast<const float*>(nullptr));
  put(yAxis, static_cast<const float*>(nullptr));
}
void fieldDims(Handle& H, int* batchCount, int* polCount, const float** xAxis, const float** yAxis,
               int* width, int* height) {
  H.fieldX = toFloat(H.engine.fieldXAxis());
  H.fieldY = toFloat(H.engine.fieldYAxis());
  put(batchCount, H.engine.batchCount());
  put(polCount, H.engine.polCount());
  put(width, H.engine.fieldWidth());
  put(height, H.engine.fieldHeight());
  put(xAxis, static_cast<const float*>(H.fieldX.data()));
  put(yAxis, static_cast<const float*>(H.fieldY.data()));
}
}  // namespace

const digholo_complex64* digholo_get_fields(int handle, int* batchCount, int* polCount,
                                            const float** xAxis, const float** yAxis, int* width,
                                            int* height) {
  zeroDims(batchCount, polCount, xAxis, yAxis, width, height);
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) -> const digholo_complex64* {
               if (!H.engine.hasFields()) return nullptr;
               H.fields = H.engine.fields();
               fieldDims(H, batchCount, polCount, xAxis, yAxis, width, height);
               return asC(H.fields.data());
             });
}

int digholo_get_fields16(int handle, const int16_t** fieldR, const int16_t** fieldI,
                         const float** fieldScale, int* batchCount, int* polCount,
                         const float** xAxis, const float** yAxis, int* width, int* height) {
  zeroDims(batchCount, polCount, xAxis, yAxis, width, height);
  put(fieldR, static_cast<const int16_t*>(nullptr));
  put(fieldI, static_cast<const int16_t*>(nullptr));
  put(fieldScale, static_cast<const float*>(nullptr));
  return call(handle, [&](Handle& H) {
    if (!H.engine.hasFields()) return ErrorCode::NULLPOINTER;
    fieldDims(H, batchCount, polCount, xAxis, yAxis, width, height);
    put(fieldR, H.engine.fieldsReal16().data());
    put(fieldI, H.engine.fieldsImag16().data());
    put(fieldScale, H.engine.fieldScales().data());
    return ErrorCode::SUCCESS;
  });
}

const digholo_complex64* digholo_basis_get_fields(int handle, int* modeCount, int* polCount,
                                                  const float** xAxis, const float** yAxis,
                                                  int* width, int* height) {
  zeroDims(modeCount, polCount, xAxis, yAxis, width, height);
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) -> const digholo_complex64* {
               int M = 0, w = 0, h = 0;
               const auto& modes = H.engine.basisFields(M, w, h);
               if (modes.empty() || M == 0) return nullptr;
               fieldDims(H, nullptr, polCount, xAxis, yAxis, width, height);
               put(modeCount, M);
               return asC(modes.data());
             });
}

const digholo_complex64* digholo_get_fourier_plane_full(int handle, int* batchCount, int* polCount,
                                                        int* width, int* height) {
  zeroDims(batchCount, polCount, nullptr, nullptr, width, height);
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) -> const digholo_complex64* {
               const Engine& e = H.engine;
               if (!e.hasFourierPlane()) return nullptr;
               put(batchCount, e.frameCount());
               put(polCount, e.polCount());
               put(width, e.fftWidth() / 2 + 1);
               put(height, e.fftHeight());
               return asC(e.fourierPlaneFull().data());
             });
}

const digholo_complex64* digholo_get_fourier_plane_window(int handle, int* batchCount,
                                                          int* polCount, int* width, int* height) {
  zeroDims(batchCount, polCount, nullptr, nullptr, width, height);
  return get(handle, static_cast<const digholo_complex64*>(nullptr),
             [&](Handle& H) -> const digholo_complex64* {
               const Engine& e = H.engine;
               if (!e.hasFourierWindow()) return nullptr;
               put(batchCount, e.batchCount());
               put(polCount, e.polCount());
               put(width, e.fourierWindowWidth());
               put(height, e.fourierWindowHeight());
               return asC(e.fourierWindow().data());
             });
}

int digholo_batch_get_summary(int handle, int plane, int* paramCount, int* totalCount,
                              int* polCount, const float** parameters,
                              const float** totalIntensity, const float** xAxis,
                              const float** yAxis, int* width, int* height) {
  zeroDims(totalCount, polCount, xAxis, yAxis, width, height);
  put(paramCount, 0);
  put(parameters, static_cast<const float*>(nullptr));
  put(totalIntensity, static_cast<const float*>(nullptr));
  return call(handle, [&](Handle& H) {
    if (plane != PLANE_FOURIER && plane != PLANE_FIELD) return ErrorCode::INVALIDARGUMENT;
    const AnalysisSummary* s = H.engine.summary(plane);
    if (!s) return ErrorCode::NULLPOINTER;
    H.sumX = toFloat(s->xAxis);
    H.sumY = toFloat(s->yAxis);
    put(paramCount, static_cast<int>(ANALYSIS_COUNT));
    put(totalCount, s->totalCount);
    put(polCount, s->polCount);
    put(parameters, s->parameters.data());
    put(totalIntensity, s->totalIntensity.data());
    put(xAxis, static_cast<const float*>(H.sumX.data()));
    put(yAxis, static_cast<const float*>(H.sumY.data()));
    put(width, s->width);
    put(height, s->height);
    return ErrorCode::SUCCESS;
  });
}

// ---------------------------------------------------------------- alignment

float digholo_auto_align(int handle) {
  return get(handle, 0.0f, [](Handle& H) { return H.engine.autoAlign(); });
}
int digholo_auto_align_calc_metrics(int handle) {
  return call(handle, [](Handle& H) { return H.engine.calcMetrics(); });
}
const float* digholo_auto_align_get_metrics(int handle, int metricIdx, int* lambdaCount) {
  put(lambdaCount, 0);
  return get(handle, static_cast<const float*>(nullptr), [&](Handle& H) -> const float* {
    const MetricsReport& m = H.engine.metrics();
    if (metricIdx < 0 || metricIdx >= METRIC_COUNT || m.values.empty()) return nullptr;
    put(lambdaCount, m.wavelengthCount);
    return &m.values[static_cast<size_t>(metricIdx) * (m.wavelengthCount + 1)];
  });
}
float digholo_auto_align_get_metric(int handle, int metricIdx) {
  return get(handle, 0.0f, [&](Handle& H) { return H.engine.metric(metricIdx); });
}

// ---------------------------------------------------------------- diagnostics

const unsigned char* digholo_get_viewport(int handle, int displayMode, int forceProcessing,
                                          int* width, int* height, const char** windowString) {
  put(width, 0);
  put(height, 0);
  put(windowString, static_cast<const char*>(nullptr));
  return get(handle, static_cast<const unsigned char*>(nullptr),
             [&](Handle& H) -> const unsigned char* {
               H.viewport = H.engine.viewport(displayMode, forceProcessing != 0);
               if (H.viewport.rgb.empty()) return nullptr;
               put(width, H.viewport.width);
               put(height, H.viewport.height);
               put(windowString, H.viewport.title.c_str());
               return H.viewport.rgb.data();
             });
}

int digholo_get_viewport_to_file(int handle, int displayMode, int forceProcessing, int* width,
                                 int* height, const char** windowString, const char* filename) {
  if (!find(handle)) return code(ErrorCode::INVALIDHANDLE);
  if (!filename) return code(ErrorCode::NULLPOINTER);
  if (!digholo_get_viewport(handle, displayMode, forceProcessing, width, height, windowString))
    return code(ErrorCode::NULLPOINTER);
  return call(handle, [&](Handle& H) { return writeViewport(H.viewport, filename); });
}

float digholo_benchmark(int handle, float goalDuration, float* info) {
  return get(handle, 0.0f, [&](Handle& H) {
    const BenchmarkResult r = H.engine.benchmark(goalDuration);
    if (info)
      for (int i = 0; i < BENCH_COUNT; ++i) info[i] = static_cast<float>(r.info[i]);
    return static_cast<float>(r.batchesPerSecond);
  });
}

int digholo_benchmark_estimate_thread_count_optimal(int handle, float goalDuration) {
  return get(handle, 0,
             [&](Handle& H) { return H.engine.estimateThreadCountOptimal(goalDuration); });
}

int digholo_console_redirect_to_file(const char* filename) {
  if (!filename) return code(ErrorCode::NULLPOINTER);
  return code(console::redirectToFile(filename));
}
int digholo_console_restore(void) {
  console::restore();
  return code(ErrorCode::SUCCESS);
}

int digholo_run_batch_from_config_file(const char* filename) {
  if (!filename) return code(ErrorCode::NULLPOINTER);
  try {
    return code(runBatchFromConfigFile(filename));
  } catch (...) {
    return code(ErrorCode::ERROR);
  }
}

// ---------------------------------------------------------------- simulator

float* digholo_frame_simulator_create(
    int frameCount, int* frameWidth, int* frameHeight, float* pixelSize, int polCount,
    float** refTiltX, float** refTiltY, float** refDefocus, float** refWaist,
    float** refBeamCentreX, float** refBeamCentreY, digholo_complex64** refAmplitude,
    int beamGroupCount, float** beamWaist, digholo_complex64** beamCoefs, float** beamCentreX,
    float** beamCentreY, int cameraPixelLevelCount, int fillFactorCorrection, float** wavelengths,
    int wavelengthCount, int wavelengthOrdering, int printToConsole, uint16_t** frameBufferUint16,
    const char* filename) {
  try {
    SimulationSpec s;
    s.frameCount = frameCount;
    s.frameWidth = frameWidth ? *frameWidth : 0;
    s.frameHeight = frameHeight ? *frameHeight : 0;
    s.pixelSize = pixelSize ? *pixelSize : 0;
    s.polCount = polCount;
    const int P = std::clamp(polCount, 1, kPolCountMax);
    s.refTiltX = readIn(refTiltX, P);
    s.refTiltY = readIn(refTiltY, P);
    s.refDefocus = readIn(refDefocus, P);
    s.refWaist = readIn(refWaist, P);
    s.refBeamCentreX = readIn(refBeamCentreX, P);
    s.refBeamCentreY = readIn(refBeamCentreY, P);
    s.refAmplitude = readInC(refAmplitude, P);
    s.beamGroupCount = beamGroupCount;
    s.beamWaist = readIn(beamWaist, P);
    s.beamCentreX = readIn(beamCentreX, P);
    s.beamCentreY = readIn(beamCentreY, P);
    if (beamGroupCount > 0) {
      const size_t M = static_cast<size_t>(beamGroupCount) * (beamGroupCount + 1) / 2;
      s.beamCoefs = readInC(beamCoefs, static_cast<size_t>(std::max(frameCount, 0)) * P * M);
    }
    s.cameraPixelLevelCount = cameraPixelLevelCount;
    s.fillFactorCorrection = fillFactorCorrection != 0;
    s.wavelengths = readIn(wavelengths, wavelengthCount);
    s.wavelengthOrdering = wavelengthOrdering;
    if (filename) s.outputFilename = filename;

    const SimulationSpec* r = nullptr;
    const uint16_t* f16 = nullptr;
    ErrorCode err = ErrorCode::SUCCESS;
    float* frames = simulatorCreate(s, &r, &f16, &err);
    if (!frames) {
      console::print(printToConsole, 1, "digholo: simulator failed (%s)\n", errorName(err));
      return nullptr;
    }
    std::lock_guard<std::mutex> lock(gSimMutex);
    SimArrays& a = gSimArrays[frames];
    writeOut(refTiltX, a.refTiltX, r->refTiltX);
    writeOut(refTiltY, a.refTiltY, r->refTiltY);
    writeOut(refDefocus, a.refDefocus, r->refDefocus);
    writeOut(refWaist, a.refWaist, r->refWaist);
    writeOut(refBeamCentreX, a.refCentreX, r->refBeamCentreX);
    writeOut(refBeamCentreY, a.refCentreY, r->refBeamCentreY);
    writeOutC(refAmplitude, a.refAmplitude, r->refAmplitude);
    writeOut(beamWaist, a.beamWaist, r->beamWaist);
    writeOutC(beamCoefs, a.beamCoefs, r->beamCoefs);
    writeOut(beamCentreX, a.beamCentreX, r->beamCentreX);
    writeOut(beamCentreY, a.beamCentreY, r->beamCentreY);
    writeOut(wavelengths, a.wavelengths, r->wavelengths);
    if (frameWidth) *frameWidth = r->frameWidth;
    if (frameHeight) *frameHeight = r->frameHeight;
    if (pixelSize) *pixelSize = static_cast<float>(r->pixelSize);
    if (frameBufferUint16) *frameBufferUint16 = const_cast<uint16_t*>(f16);
    console::print(printToConsole, 1, "digholo: simulated %d frames of %dx%d\n", r->frameCount,
                   r->frameWidth, r->frameHeight);
    return frames;
  } catch (...) {
    return nullptr;
  }
}

float* digholo_frame_simulator_create_simple(int frameCount, int frameWidth, int frameHeight,
                                             float pixelSize, int polCount, float wavelength,
                                             int printToConsole) {
  try {
    return simulatorCreateSimple(frameCount, frameWidth, frameHeight, pixelSize, polCount,
                                 wavelength, printToConsole);
  } catch (...) {
    return nullptr;
  }
}

int digholo_frame_simulator_destroy(float* frameBuffer) {
  {
    std::lock_guard<std::mutex> lock(gSimMutex);
    gSimArrays.erase(frameBuffer);
  }
  return code(simulatorDestroy(frameBuffer));
}

}  // extern "C"
