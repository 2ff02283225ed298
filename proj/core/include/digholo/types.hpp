#pragma once

#include <complex>
#include <cstdint>

namespace digholo {

using cfloat = std::complex<float>;
using cdouble = std::complex<double>;

inline constexpr int kPixelQuanta = 16;
inline constexpr int kPolCountMax = 2;
inline constexpr int kNameLength = 1024;
inline constexpr int kLGGroupMax = 100;

enum class BasisType : int { HG = 0, LG = 1, CUSTOM = 2 };

enum class AvgMode : int { SEQUENTIAL = 0, INTERLACED = 1, SEQUENTIALSWEEP = 2 };

enum class WavelengthOrder : int { FAST = 0, SLOW = 1 };
inline constexpr int kOrderingInput = 0;
inline constexpr int kOrderingOutput = 1;

enum class AutoAlignMode : int { FULL = 0, TWEAK = 1, ESTIMATE = 2 };

enum Metric : int {
  METRIC_IL = 0,
  METRIC_MDL = 1,
  METRIC_DIAG = 2,
  METRIC_SNRAVG = 3,
  METRIC_DIAGBEST = 4,
  METRIC_DIAGWORST = 5,
  METRIC_SNRBEST = 6,
  METRIC_SNRWORST = 7,
  METRIC_SNRMG = 8,
  METRIC_COUNT = 9,
};

enum AnalysisParam : int {
  ANALYSIS_TOTALPOWER = 0,
  ANALYSIS_COMX = 1,
  ANALYSIS_COMY = 2,
  ANALYSIS_MAXABS = 3,
  ANALYSIS_MAXABSIDX = 4,
  ANALYSIS_AEFF = 5,
  ANALYSIS_COMYWRAP = 6,
  ANALYSIS_COUNT = 7,
};

enum Plane : int { PLANE_FOURIER = 0, PLANE_FIELD = 1 };

enum BenchmarkStage : int {
  BENCH_FFT = 0,
  BENCH_IFFT = 1,
  BENCH_APPLYTILT = 2,
  BENCH_BASIS = 3,
  BENCH_OVERLAP = 4,
  BENCH_TOTAL = 5,
  BENCH_COUNT = 6,
};

enum ViewportMode : int {
  VIEWPORT_NONE = 0,
  VIEWPORT_CAMERAPLANE = 1,
  VIEWPORT_FOURIERPLANE = 2,
  VIEWPORT_FOURIERPLANEDB = 3,
  VIEWPORT_FOURIERWINDOW = 4,
  VIEWPORT_FOURIERWINDOWABS = 5,
  VIEWPORT_FIELDPLANE = 6,
  VIEWPORT_FIELDPLANEABS = 7,
  VIEWPORT_FIELDPLANEMODE = 8,
  VIEWPORT_COUNT = 9,
};

inline constexpr int kVerbosityMax = 3;

}  // namespace digholo
