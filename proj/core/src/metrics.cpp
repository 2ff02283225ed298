#include "digholo/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstring>

#include "digholo/error.hpp"
#include "digholo/geometry.hpp"

namespace digholo {

namespace {

double spacing(const std::vector<double>& axis) {
  return axis.size() > 1 ? std::abs(axis[1] - axis[0]) : 1.0;
}

double dbPower(double x) {
  if (x <= 0) return -kSnrCapDb;
  return std::clamp(10.0 * std::log10(x), -kSnrCapDb, kSnrCapDb);
}

double dbRatio(double num, double den) {
  if (den <= 0) return num > 0 ? kSnrCapDb : -kSnrCapDb;
  if (num <= 0) return -kSnrCapDb;
  return std::clamp(10.0 * std::log10(num / den), -kSnrCapDb, kSnrCapDb);
}

}  // namespace

float packIndex(int32_t idx) {
  float f;
  std::memcpy(&f, &idx, sizeof f);
  return f;
}

int32_t unpackIndex(float slot) {
  int32_t i;
  std::memcpy(&i, &slot, sizeof i);
  return i;
}

PlaneStats analyseIntensity(const float* I, int width, int height, const std::vector<double>& xAxis,
                            const std::vector<double>& yAxis) {
  if (width <= 0 || height <= 0 || !I)
    throw Error(ErrorCode::INVALIDDIMENSION, "empty plane");
  const double dA = spacing(xAxis) * spacing(yAxis);
  const double period = spacing(yAxis) * height;
  double sum = 0, sum2 = 0, sx = 0, sy = 0, mx = -1;
  cdouble wrap = 0;
  int32_t mi = 0;
  for (int y = 0; y < height; ++y) {
    const double yy = yAxis[y];
    const cdouble ph = std::polar(1.0, 2.0 * kPi * yy / period);
    double rowSum = 0, rowX = 0;
    for (int x = 0; x < width; ++x) {
      const double v = I[static_cast<size_t>(y) * width + x];
      rowSum += v;
      rowX += v * xAxis[x];
      sum2 += v * v;
      if (v > mx) {
        mx = v;
        mi = y * width + x;
      }
    }
    sum += rowSum;
    sx += rowX;
    sy += rowSum * yy;
    wrap += rowSum * ph;
  }
  PlaneStats s;
  s.totalPower = static_cast<float>(sum * dA);
  s.maxAbs = static_cast<float>(std::sqrt(std::max(mx, 0.0)));
  s.maxAbsIdx = mi;
  if (sum > 0) {
    s.comX = static_cast<float>(sx / sum);
    s.comY = static_cast<float>(sy / sum);
    s.comYWrap = static_cast<float>(std::arg(wrap) * period / (2.0 * kPi));
    s.aeff = sum2 > 0 ? static_cast<float>((sum * dA) * (sum * dA) / (sum2 * dA)) : 0.0f;
  }
  return s;
}

PlaneStats analyseField(const cfloat* field, int width, int height, const std::vector<double>& xAxis,
                        const std::vector<double>& yAxis) {
  std::vector<float> I(static_cast<size_t>(width) * height);
  for (size_t i = 0; i < I.size(); ++i) I[i] = std::norm(field[i]);
  return analyseIntensity(I.data(), width, height, xAxis, yAxis);
}

void AnalysisSummary::resize(int pols, int total, int w, int h) {
  polCount = pols;
  totalCount = total;
  width = w;
  height = h;
  parameters.assign(static_cast<size_t>(ANALYSIS_COUNT) * pols * total, 0.0f);
  totalIntensity.assign(static_cast<size_t>(pols) * w * h, 0.0f);
}

void AnalysisSummary::store(int pol, int idx, const PlaneStats& s) {
  at(ANALYSIS_TOTALPOWER, pol, idx) = s.totalPower;
  at(ANALYSIS_COMX, pol, idx) = s.comX;
  at(ANALYSIS_COMY, pol, idx) = s.comY;
  at(ANALYSIS_MAXABS, pol, idx) = s.maxAbs;
  at(ANALYSIS_MAXABSIDX, pol, idx) = packIndex(s.maxAbsIdx);
  at(ANALYSIS_AEFF, pol, idx) = s.aeff;
  at(ANALYSIS_COMYWRAP, pol, idx) = s.comYWrap;
}

Matrix buildTransferMatrix(const cfloat* coefs, int batchCount, int modeCount, int polCount,
                           bool polIndependence, bool mulConjTrans,
                           const std::vector<int>& batchRows) {
  if (!coefs) throw Error(ErrorCode::NULLPOINTER, "no coefficients");
  std::vector<int> sel = batchRows;
  if (sel.empty())
    for (int b = 0; b < batchCount; ++b) sel.push_back(b);
  const int B = static_cast<int>(sel.size());
  const int cols = modeCount * polCount;
  const size_t stride = static_cast<size_t>(cols);
  Matrix A;
  if (polIndependence && polCount > 1) {
    A = Matrix(B * polCount, cols);
    for (int p = 0; p < polCount; ++p)
      for (int r = 0; r < B; ++r)
        for (int m = 0; m < modeCount; ++m)
          A(p * B + r, p * modeCount + m) = cdouble(coefs[sel[r] * stride + p * modeCount + m]);
  } else {
    A = Matrix(B, cols);
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < cols; ++c) A(r, c) = cdouble(coefs[sel[r] * stride + c]);
  }
  if (!mulConjTrans) return A;
  Matrix P(A.rows, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.rows; ++j) {
      cdouble acc = 0;
      for (int c = 0; c < A.cols; ++c) acc += A(i, c) * std::conj(A(j, c));
      P(i, j) = acc;
    }
  return P;
}

std::vector<int> transferGroups(const std::vector<int>& modeGroups, int modeCount, int polCount,
                                bool mulConjTrans, int rows) {
  const int cols = modeCount * polCount;
  std::vector<int> g(cols);
  const int span = modeCount + 1;
  for (int p = 0; p < polCount; ++p)
    for (int m = 0; m < modeCount; ++m) {
      const int mg = m < static_cast<int>(modeGroups.size()) ? modeGroups[m] : m;
      g[p * modeCount + m] = p * span + mg;
    }
  if (!mulConjTrans) return g;
  std::vector<int> out(rows);
  for (int j = 0; j < rows; ++j) out[j] = j < cols ? g[j] : -(j + 1);
  return out;
}

std::vector<double> singularValues(const Matrix& A) {
  Eigen::MatrixXcd M(A.rows, A.cols);
  for (int r = 0; r < A.rows; ++r)
    for (int c = 0; c < A.cols; ++c) M(r, c) = A(r, c);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::array<float, METRIC_COUNT> computeMetrics(const Matrix& A, const std::vector<int>& groups) {
  std::array<float, METRIC_COUNT> out;
  out.fill(kMetricUnset);
  if (A.rows == 0 || A.cols == 0) return out;
  double total = 0;
  for (const auto& v : A.a) total += std::norm(v);
  if (total <= 0) {
    out[METRIC_IL] = -FLT_MAX;
    return out;
  }
  const int nd = std::min(A.rows, A.cols);
  auto groupOf = [&](int j) { return groups.empty() ? j : groups[j]; };

  out[METRIC_IL] = static_cast<float>(dbPower(total / A.rows));

  const auto sv = singularValues(A);
  const double smax = sv.empty() ? 0 : sv.front();
  const double smin = sv.empty() ? 0 : sv.back();
  out[METRIC_MDL] = static_cast<float>(smin > 0 ? std::min(20.0 * std::log10(smax / smin), kSnrCapDb)
                                                : kSnrCapDb);

  double diag = 0, mg = 0;
  double dBest = -1e300, dWorst = 1e300, sBest = -1e300, sWorst = 1e300;
  for (int i = 0; i < A.rows; ++i) {
    double rowPow = 0, same = 0;
    for (int j = 0; j < A.cols; ++j) {
      const double p = std::norm(A(i, j));
      rowPow += p;
      if (i < nd && groupOf(j) == groupOf(i)) same += p;
    }
    mg += same;
    if (i < nd) {
      const double d = std::norm(A(i, i));
      diag += d;
      const double dd = dbPower(d);
      const double sr = dbRatio(d, rowPow - d);
      dBest = std::max(dBest, dd);
      dWorst = std::min(dWorst, dd);
      sBest = std::max(sBest, sr);
      sWorst = std::min(sWorst, sr);
    }
  }
  out[METRIC_DIAG] = static_cast<float>(dbPower(diag / A.rows));
  out[METRIC_SNRAVG] = static_cast<float>(dbRatio(diag, total - diag));
  out[METRIC_DIAGBEST] = static_cast<float>(dBest);
  out[METRIC_DIAGWORST] = static_cast<float>(dWorst);
  out[METRIC_SNRBEST] = static_cast<float>(sBest);
  out[METRIC_SNRWORST] = static_cast<float>(sWorst);
  out[METRIC_SNRMG] = static_cast<float>(dbRatio(mg, total - mg));
  return out;
}

void MetricsReport::reset(int lambdaCount) {
  wavelengthCount = std::max(lambdaCount, 1);
  values.assign(static_cast<size_t>(METRIC_COUNT) * (wavelengthCount + 1), kMetricUnset);
}

void MetricsReport::finaliseAverage() {
  for (int m = 0; m < METRIC_COUNT; ++m) {
    double acc = 0;
    int n = 0;
    for (int l = 0; l < wavelengthCount; ++l) {
      const float v = get(m, l);
      if (v != kMetricUnset) {
        acc += v;
        ++n;
      }
    }
    ref(m, wavelengthCount) = n ? static_cast<float>(acc / n) : kMetricUnset;
  }
}

}  // namespace digholo
