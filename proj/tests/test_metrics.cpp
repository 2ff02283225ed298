#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "digholo/basis.hpp"
#include "digholo/metrics.hpp"
#include "digholo/pipeline.hpp"

using namespace digholo;

namespace {

Matrix diagonal(std::vector<double> d) {
  Matrix A(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) A(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return A;
}

Matrix randomMatrix(std::mt19937& rng, int n, double offScale) {
  std::normal_distribution<double> g;
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = i == j ? 1.0 : offScale;
      A(i, j) = cdouble(g(rng), g(rng)) * s;
    }
  return A;
}

}  // namespace

TEST(Metrics, MdlOfTwoLevelDiagonal) {
  const auto m = computeMetrics(diagonal({1.0, 0.5}), {});
  EXPECT_NEAR(m[METRIC_MDL], 6.021, 0.01);
  EXPECT_NEAR(m[METRIC_MDL], 20 * std::log10(2.0), 1e-5);
}

TEST(Metrics, IdentityIsLossless) {
  const auto m = computeMetrics(diagonal(std::vector<double>(10, 1.0)), {});
  EXPECT_NEAR(m[METRIC_IL], 0.0, 0.01);
  EXPECT_NEAR(m[METRIC_MDL], 0.0, 0.01);
  EXPECT_NEAR(m[METRIC_DIAG], 0.0, 0.01);
  EXPECT_EQ(m[METRIC_SNRAVG], static_cast<float>(kSnrCapDb));
}

TEST(Metrics, UniformLossMovesInsertionLossOnly) {
  const auto m = computeMetrics(diagonal(std::vector<double>(4, std::sqrt(0.5))), {});
  EXPECT_NEAR(m[METRIC_IL], 10 * std::log10(0.5), 1e-5);
  EXPECT_NEAR(m[METRIC_MDL], 0.0, 1e-5);
}

TEST(Metrics, DiagonalAndSnrByHand) {
  Matrix A(2, 2);
  A(0, 0) = 1.0;
  A(0, 1) = 0.1;
  A(1, 0) = 0.2;
  A(1, 1) = 0.5;
  const auto m = computeMetrics(A, {});
  const double diag = 1.0 + 0.25, off = 0.01 + 0.04;
  EXPECT_NEAR(m[METRIC_DIAG], 10 * std::log10(diag / 2), 1e-5);
  EXPECT_NEAR(m[METRIC_SNRAVG], 10 * std::log10(diag / off), 1e-5);
  EXPECT_NEAR(m[METRIC_DIAGBEST], 0.0, 1e-5);
  EXPECT_NEAR(m[METRIC_DIAGWORST], 10 * std::log10(0.25), 1e-5);
  EXPECT_NEAR(m[METRIC_SNRBEST], 10 * std::log10(1.0 / 0.01), 1e-5);
  EXPECT_NEAR(m[METRIC_SNRWORST], 10 * std::log10(0.25 / 0.04), 1e-5);
  EXPECT_NEAR(m[METRIC_IL], 10 * std::log10((diag + off) / 2), 1e-5);
}

// Singular values satisfy sum s^2 = ||A||_F^2 and prod s = |det A|.
TEST(Metrics, SingularValueInvariants) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = randomMatrix(rng, 3, 0.7);
    const auto s = singularValues(A);
    ASSERT_EQ(s.size(), 3u);
    double fro = 0;
    for (const auto& v : A.a) fro += std::norm(v);
    EXPECT_NEAR(s[0] * s[0] + s[1] * s[1] + s[2] * s[2], fro, 1e-9 * fro);
    const cdouble det = A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
                        A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
                        A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
    EXPECT_NEAR(s[0] * s[1] * s[2], std::abs(det), 1e-9 * (1 + std::abs(det)));
    EXPECT_GE(s[0], s[1]);
    EXPECT_GE(s[1], s[2]);
  }
}

TEST(Metrics, GroupedSnrNeverBelowAverageSnr) {
  std::mt19937 rng(99);
  const auto groups = hgModeGroups(4);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix A = randomMatrix(rng, 10, 0.05);
    // strong in-group coupling
    std::normal_distribution<double> g;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        if (i != j && groups[i] == groups[j]) A(i, j) = cdouble(g(rng), g(rng)) * 0.5;
    const auto m = computeMetrics(A, groups);
    EXPECT_GE(m[METRIC_SNRMG], m[METRIC_SNRAVG]);
  }
}

TEST(Metrics, GroupedSnrIgnoresInGroupCoupling) {
  // 3 modes, modes 1 and 2 share a group: coupling between them is not crosstalk.
  Matrix A(3, 3);
  A(0, 0) = 1;
  A(1, 1) = 1;
  A(2, 2) = 1;
  A(1, 2) = 0.5;
  A(2, 1) = 0.5;
  const auto m = computeMetrics(A, {0, 1, 1});
  EXPECT_EQ(m[METRIC_SNRMG], static_cast<float>(kSnrCapDb));
  EXPECT_NEAR(m[METRIC_SNRAVG], 10 * std::log10(3.0 / 0.5), 1e-5);
}

TEST(Metrics, TransferMatrixLayout) {
  // batch 2, pol 2, modes 2: coefs[b][p][m]
  std::vector<cfloat> c = {1, 2, 3, 4, 5, 6, 7, 8};
  Matrix A = buildTransferMatrix(c.data(), 2, 2, 2, false, false);
  EXPECT_EQ(A.rows, 2);
  EXPECT_EQ(A.cols, 4);
  EXPECT_EQ(A(1, 2), cdouble(7));
  Matrix B = buildTransferMatrix(c.data(), 2, 2, 2, true, false);
  EXPECT_EQ(B.rows, 4);
  EXPECT_EQ(B(2, 2), cdouble(3));
  EXPECT_EQ(B(3, 3), cdouble(8));
  EXPECT_EQ(B(0, 2), cdouble(0));
  Matrix P = buildTransferMatrix(c.data(), 2, 2, 2, false, true);
  EXPECT_EQ(P.rows, 2);
  EXPECT_EQ(P(0, 0), cdouble(1 + 4 + 9 + 16));
  Matrix S = buildTransferMatrix(c.data(), 2, 2, 2, false, false, {1});
  EXPECT_EQ(S.rows, 1);
  EXPECT_EQ(S(0, 0), cdouble(5));
}

TEST(Metrics, ReportAverageSkipsUnset) {
  MetricsReport r;
  r.reset(3);
  r.ref(METRIC_IL, 0) = -1;
  r.ref(METRIC_IL, 2) = -3;
  r.finaliseAverage();
  EXPECT_FLOAT_EQ(r.average(METRIC_IL), -2);
  EXPECT_EQ(r.average(METRIC_MDL), kMetricUnset);
}

TEST(Analysis, UniformPatch) {
  const int n = 32;
  const auto ax = fieldAxis(n, 1.0);
  std::vector<float> I(n * n, 0.0f);
  for (int y = 10; y < 18; ++y)
    for (int x = 4; x < 12; ++x) I[y * n + x] = 2.0f;
  const PlaneStats s = analyseIntensity(I.data(), n, n, ax, ax);
  EXPECT_FLOAT_EQ(s.totalPower, 128.0f);
  EXPECT_NEAR(s.aeff, 64.0f, 1e-4);
  EXPECT_NEAR(s.comX, (ax[4] + ax[11]) / 2, 1e-5);
  EXPECT_NEAR(s.comY, (ax[10] + ax[17]) / 2, 1e-5);
  EXPECT_NEAR(s.maxAbs, std::sqrt(2.0f), 1e-6);
}

TEST(Analysis, GaussianEffectiveArea) {
  // (int I)^2 / int I^2 for I = exp(-2 r^2 / w^2) is pi w^2.
  const int n = 128;
  const double w = 12;
  const auto ax = fieldAxis(n, 1.0);
  std::vector<float> I(n * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      I[y * n + x] = static_cast<float>(std::exp(-2 * (ax[x] * ax[x] + ax[y] * ax[y]) / (w * w)));
  const PlaneStats s = analyseIntensity(I.data(), n, n, ax, ax);
  EXPECT_NEAR(s.aeff, 3.14159265 * w * w, 1e-3 * w * w);
  EXPECT_NEAR(s.comX, 0.0, 1e-4);
}

TEST(Analysis, IndexPacking) {
  for (int32_t i : {0, 1, 12345, 1 << 24, 2147483647}) EXPECT_EQ(unpackIndex(packIndex(i)), i);
}
