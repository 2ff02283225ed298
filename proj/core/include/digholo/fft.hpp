#pragma once

#include <memory>
#include <string>
#include <vector>

#include "digholo/types.hpp"

namespace digholo {

// Thin FFTW3 (single precision) wrappers. Arrays are row-major with x fastest:
// real input ny x nx, r2c output ny x (nx/2 + 1). Transforms are unnormalised.
// planMode 0..3 selects estimate / measure / patient / exhaustive planning.
// Wisdom is read from and written to a file for measured plan modes (1..3).
void fftWisdomForget();
void fftWisdomFilename(const std::string& path);
std::string fftWisdomFilename();

class FftR2C {
 public:
  FftR2C(int nx, int ny, int planMode = 0);
  ~FftR2C();
  FftR2C(const FftR2C&) = delete;
  FftR2C& operator=(const FftR2C&) = delete;

  void execute(float* in, cfloat* out) const;  // in may be overwritten
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  int nx_, ny_;
  void* plan_ = nullptr;
};

class FftC2C {
 public:
  // sign -1 forward, +1 backward
  FftC2C(int nx, int ny, int sign, int planMode = 0);
  ~FftC2C();
  FftC2C(const FftC2C&) = delete;
  FftC2C& operator=(const FftC2C&) = delete;

  void execute(cfloat* in, cfloat* out) const;
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  int nx_, ny_;
  void* plan_ = nullptr;
};

}  // namespace digholo
