#pragma once

#include <array>
#include <cfloat>
#include <cstdint>
#include <vector>

#include "digholo/types.hpp"

namespace digholo {

inline constexpr float kMetricUnset = -FLT_MAX;
inline constexpr double kSnrCapDb = 200.0;

// ---- per-plane analysis ----

struct PlaneStats {
  float totalPower = 0;
  float comX = 0;
  float comY = 0;
  float maxAbs = 0;
  int32_t maxAbsIdx = 0;
  float aeff = 0;
  float comYWrap = 0;
};

// intensity is height x width (x fastest); axes give sample coordinates.
PlaneStats analyseIntensity(const float* intensity, int width, int height,
                            const std::vector<double>& xAxis, const std::vector<double>& yAxis);
PlaneStats analyseField(const cfloat* field, int width, int height,
                        const std::vector<double>& xAxis, const std::vector<double>& yAxis);

float packIndex(int32_t idx);
int32_t unpackIndex(float slot);

struct AnalysisSummary {
  int polCount = 0;
  int totalCount = 0;  // element slots, the last meaningful one is the aggregate
  int width = 0, height = 0;
  std::vector<float> parameters;      // ANALYSIS_COUNT x polCount x totalCount
  std::vector<float> totalIntensity;  // polCount x height x width
  std::vector<double> xAxis, yAxis;

  float& at(int param, int pol, int idx) {
    return parameters[(static_cast<size_t>(param) * polCount + pol) * totalCount + idx];
  }
  float at(int param, int pol, int idx) const {
    return parameters[(static_cast<size_t>(param) * polCount + pol) * totalCount + idx];
  }
  void resize(int pols, int total, int w, int h);
  void store(int pol, int idx, const PlaneStats& s);
};

// ---- transfer matrix metrics ----

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<cdouble> a;  // row-major
  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  cdouble& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const cdouble& operator()(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// coefs: batchCount x (polCount * modeCount), pol-major blocks per row.
// batchRows selects which batch elements form the rows (all when empty).
Matrix buildTransferMatrix(const cfloat* coefs, int batchCount, int modeCount, int polCount,
                           bool polIndependence, bool mulConjTrans,
                           const std::vector<int>& batchRows = {});

// Group id for every column of the matrix produced by buildTransferMatrix.
std::vector<int> transferGroups(const std::vector<int>& modeGroups, int modeCount, int polCount,
                                bool mulConjTrans, int rows);

std::vector<double> singularValues(const Matrix& A);

// groups: one id per column (empty means every column is its own group).
std::array<float, METRIC_COUNT> computeMetrics(const Matrix& A, const std::vector<int>& groups);

struct MetricsReport {
  int wavelengthCount = 0;
  std::vector<float> values;  // METRIC_COUNT x (wavelengthCount + 1)

  void reset(int lambdaCount);
  float get(int metric, int slot) const {
    return values[static_cast<size_t>(metric) * (wavelengthCount + 1) + slot];
  }
  float& ref(int metric, int slot) {
    return values[static_cast<size_t>(metric) * (wavelengthCount + 1) + slot];
  }
  float average(int metric) const { return get(metric, wavelengthCount); }
  void finaliseAverage();
};

}  // namespace digholo
