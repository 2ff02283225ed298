#include "digholo/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <string>

#include "digholo/error.hpp"

namespace digholo {

namespace {

std::mutex& planMutex() {
  static std::mutex m;
  return m;
}

unsigned planFlags(int planMode) {
  unsigned f = FFTW_UNALIGNED;
  switch (planMode) {
    case 1: return f | FFTW_MEASURE;
    case 2: return f | FFTW_PATIENT;
    case 3: return f | FFTW_EXHAUSTIVE;
    default: return f | FFTW_ESTIMATE;
  }
}

std::string& wisdomPath() {
  static std::string path = "digholo_wisdom.txt";
  return path;
}
bool gWisdomLoaded = false;

// Called with the plan mutex held. Estimate-mode plans never touch the wisdom file.
void importWisdom(int planMode) {
  if (planMode <= 0 || gWisdomLoaded) return;
  gWisdomLoaded = true;
  fftwf_import_wisdom_from_filename(wisdomPath().c_str());
}
void exportWisdom(int planMode) {
  if (planMode > 0) fftwf_export_wisdom_to_filename(wisdomPath().c_str());
}

}  // namespace

void fftWisdomForget() {
  std::lock_guard<std::mutex> lock(planMutex());
  fftwf_forget_wisdom();
  gWisdomLoaded = true;
}

void fftWisdomFilename(const std::string& path) {
  std::lock_guard<std::mutex> lock(planMutex());
  wisdomPath() = path;
  gWisdomLoaded = false;
}

std::string fftWisdomFilename() {
  std::lock_guard<std::mutex> lock(planMutex());
  return wisdomPath();
}

FftR2C::FftR2C(int nx, int ny, int planMode) : nx_(nx), ny_(ny) {
  if (nx <= 0 || ny <= 0) throw Error(ErrorCode::INVALIDDIMENSION, "fft size must be positive");
  std::lock_guard<std::mutex> lock(planMutex());
  float* in = fftwf_alloc_real(static_cast<size_t>(nx) * ny);
  fftwf_complex* out = fftwf_alloc_complex(static_cast<size_t>(nx / 2 + 1) * ny);
  if (!in || !out) {
    fftwf_free(in);
    fftwf_free(out);
    throw Error(ErrorCode::MEMORYALLOCATION, "fft scratch allocation failed");
  }
  importWisdom(planMode);
  plan_ = fftwf_plan_dft_r2c_2d(ny, nx, in, out, planFlags(planMode));
  exportWisdom(planMode);
  fftwf_free(in);
  fftwf_free(out);
  if (!plan_) throw Error(ErrorCode::ERROR, "fft planning failed");
}

FftR2C::~FftR2C() {
  std::lock_guard<std::mutex> lock(planMutex());
  if (plan_) fftwf_destroy_plan(static_cast<fftwf_plan>(plan_));
}

void FftR2C::execute(float* in, cfloat* out) const {
  fftwf_execute_dft_r2c(static_cast<fftwf_plan>(plan_), in,
                        reinterpret_cast<fftwf_complex*>(out));
}

FftC2C::FftC2C(int nx, int ny, int sign, int planMode) : nx_(nx), ny_(ny) {
  if (nx <= 0 || ny <= 0) throw Error(ErrorCode::INVALIDDIMENSION, "fft size must be positive");
  std::lock_guard<std::mutex> lock(planMutex());
  const size_t n = static_cast<size_t>(nx) * ny;
  fftwf_complex* in = fftwf_alloc_complex(n);
  fftwf_complex* out = fftwf_alloc_complex(n);
  if (!in || !out) {
    fftwf_free(in);
    fftwf_free(out);
    throw Error(ErrorCode::MEMORYALLOCATION, "fft scratch allocation failed");
  }
  importWisdom(planMode);
  plan_ = fftwf_plan_dft_2d(ny, nx, in, out, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            planFlags(planMode));
  exportWisdom(planMode);
  fftwf_free(in);
  fftwf_free(out);
  if (!plan_) throw Error(ErrorCode::ERROR, "fft planning failed");
}

FftC2C::~FftC2C() {
  std::lock_guard<std::mutex> lock(planMutex());
  if (plan_) fftwf_destroy_plan(static_cast<fftwf_plan>(plan_));
}

void FftC2C::execute(cfloat* in, cfloat* out) const {
  fftwf_execute_dft(static_cast<fftwf_plan>(plan_), reinterpret_cast<fftwf_complex*>(in),
                    reinterpret_cast<fftwf_complex*>(out));
}

}  // namespace digholo
