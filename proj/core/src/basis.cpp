#include "digholo/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "digholo/error.hpp"
#include "digholo/geometry.hpp"

namespace digholo {

int modeCountForGroups(int groupCount) {
  return groupCount <= 0 ? 0 : groupCount * (groupCount + 1) / 2;
}

std::vector<std::pair<int, int>> hgModeIndices(int groupCount) {
  std::vector<std::pair<int, int>> out;
  out.reserve(modeCountForGroups(groupCount));
  for (int g = 0; g < groupCount; ++g)
    for (int n = 0; n <= g; ++n) out.emplace_back(g - n, n);
  return out;
}

std::vector<int> hgModeGroups(int groupCount) {
  std::vector<int> out;
  out.reserve(modeCountForGroups(groupCount));
  for (int g = 0; g < groupCount; ++g)
    for (int n = 0; n <= g; ++n) out.push_back(g);
  return out;
}

std::vector<double> hermiteProfiles(int orderCount, double waist, const std::vector<double>& axis,
                                    double centre) {
  if (axis.empty() || !(waist > 0))
    throw Error(ErrorCode::INVALIDDIMENSION, "empty axis or non-positive waist");
  if (orderCount <= 0) return {};
  const size_t n = axis.size();
  const double dx = n > 1 ? std::abs(axis[1] - axis[0]) : 1.0;
  std::vector<double> out(static_cast<size_t>(orderCount) * n);
  const double c0 = std::pow(kPi, -0.25);
  for (size_t i = 0; i < n; ++i) {
    const double u = std::sqrt(2.0) * (axis[i] - centre) / waist;
    double prev = 0.0;
    double cur = c0 * std::exp(-0.5 * u * u);
    out[i] = cur;
    for (int m = 0; m + 1 < orderCount; ++m) {
      const double next = std::sqrt(2.0 / (m + 1)) * u * cur - std::sqrt(double(m) / (m + 1)) * prev;
      prev = cur;
      cur = next;
      out[static_cast<size_t>(m + 1) * n + i] = cur;
    }
  }
  for (int m = 0; m < orderCount; ++m) {
    double* row = &out[static_cast<size_t>(m) * n];
    double e = 0;
    for (size_t i = 0; i < n; ++i) e += row[i] * row[i];
    e *= dx;
    if (e > 0) {
      const double s = 1.0 / std::sqrt(e);
      for (size_t i = 0; i < n; ++i) row[i] *= s;
    }
  }
  return out;
}

namespace {

void quantiseProfiles(const std::vector<double>& src, int orders, size_t n,
                      std::vector<int16_t>& dst, std::vector<float>& scale) {
  dst.assign(src.size(), 0);
  scale.assign(orders, 1.0f);
  for (int m = 0; m < orders; ++m) {
    const double* row = &src[static_cast<size_t>(m) * n];
    double mx = 0;
    for (size_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(row[i]));
    const double s = mx > 0 ? 32767.0 / mx : 1.0;
    scale[m] = static_cast<float>(s);
    for (size_t i = 0; i < n; ++i)
      dst[static_cast<size_t>(m) * n + i] = static_cast<int16_t>(std::nearbyint(row[i] * s));
  }
}

}  // namespace

HGBasis generateHGBasis(int groupCount, double waist, const std::vector<double>& xAxis,
                        const std::vector<double>& yAxis, double cx, double cy) {
  if (xAxis.empty() || yAxis.empty() || !(waist > 0))
    throw Error(ErrorCode::INVALIDDIMENSION, "empty axes or non-positive waist");
  if (groupCount < 1) throw Error(ErrorCode::INVALIDARGUMENT, "groupCount must be at least 1");
  HGBasis b;
  b.groupCount = groupCount;
  b.waist = waist;
  b.xAxis = xAxis;
  b.yAxis = yAxis;
  b.dx = xAxis.size() > 1 ? std::abs(xAxis[1] - xAxis[0]) : 1.0;
  b.dy = yAxis.size() > 1 ? std::abs(yAxis[1] - yAxis[0]) : 1.0;
  b.hx = hermiteProfiles(groupCount, waist, xAxis, cx);
  b.hy = hermiteProfiles(groupCount, waist, yAxis, cy);
  quantiseProfiles(b.hx, groupCount, xAxis.size(), b.hx16, b.hxScale);
  quantiseProfiles(b.hy, groupCount, yAxis.size(), b.hy16, b.hyScale);
  return b;
}

void extractCoefs(const HGBasis& basis, const cfloat* field, cdouble* coefs) {
  const int G = basis.groupCount;
  const size_t W = basis.xAxis.size(), H = basis.yAxis.size();
  // rows[m][y] = sum_x hx[m][x] * field[y][x]
  std::vector<cdouble> rows(static_cast<size_t>(G) * H);
  for (size_t y = 0; y < H; ++y) {
    const cfloat* f = field + y * W;
    for (int m = 0; m < G; ++m) {
      const double* h = &basis.hx[static_cast<size_t>(m) * W];
      double re = 0, im = 0;
      for (size_t x = 0; x < W; ++x) {
        re += h[x] * f[x].real();
        im += h[x] * f[x].imag();
      }
      rows[static_cast<size_t>(m) * H + y] = {re, im};
    }
  }
  const double dA = basis.dx * basis.dy;
  int idx = 0;
  for (int g = 0; g < G; ++g) {
    for (int n = 0; n <= g; ++n, ++idx) {
      const int m = g - n;
      const double* h = &basis.hy[static_cast<size_t>(n) * H];
      const cdouble* r = &rows[static_cast<size_t>(m) * H];
      cdouble acc = 0;
      for (size_t y = 0; y < H; ++y) acc += h[y] * r[y];
      coefs[idx] = acc * dA;
    }
  }
}

std::vector<cdouble> extractCoefs(const HGBasis& basis, const std::vector<cfloat>& field) {
  if (field.size() != basis.xAxis.size() * basis.yAxis.size())
    throw Error(ErrorCode::INVALIDDIMENSION, "field size does not match basis grid");
  std::vector<cdouble> out(basis.modeCount());
  extractCoefs(basis, field.data(), out.data());
  return out;
}

std::vector<cfloat> materialiseModes(const HGBasis& basis, bool fromInt16) {
  const size_t W = basis.xAxis.size(), H = basis.yAxis.size();
  const auto idx = hgModeIndices(basis.groupCount);
  std::vector<cfloat> out(idx.size() * W * H);
  for (size_t k = 0; k < idx.size(); ++k) {
    const int m = idx[k].first, n = idx[k].second;
    for (size_t y = 0; y < H; ++y) {
      const double vy = fromInt16 ? basis.hy16[n * H + y] / double(basis.hyScale[n])
                                  : basis.hy[n * H + y];
      cfloat* row = &out[(k * H + y) * W];
      for (size_t x = 0; x < W; ++x) {
        const double vx = fromInt16 ? basis.hx16[m * W + x] / double(basis.hxScale[m])
                                    : basis.hx[m * W + x];
        row[x] = static_cast<float>(vx * vy);
      }
    }
  }
  return out;
}

std::vector<std::pair<int, int>> lgModeIndices(int groupCount) {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; g < groupCount; ++g)
    for (int l = g; l >= -g; l -= 2) out.emplace_back((g - std::abs(l)) / 2, l);
  return out;
}

std::vector<cdouble> hgToLgTransform(int groupCount) {
  if (groupCount > kLGGroupMax) throw Error(ErrorCode::INVALIDARGUMENT, "LG supports up to 100 groups");
  const int M = modeCountForGroups(groupCount);
  std::vector<cdouble> T(static_cast<size_t>(M) * M, 0.0);
  for (int g = 0; g < groupCount; ++g) {
    const int off = g * (g + 1) / 2;
    const int sz = g + 1;
    Eigen::MatrixXcd B(sz, sz);
    int row = 0;
    for (int l = g; l >= -g; l -= 2, ++row) {
      const int p = (g - std::abs(l)) / 2;
      const int n = p + std::max(l, 0);
      const int m = p + std::max(-l, 0);
      // polynomial coefficients of (1 - t)^n (1 + t)^m
      std::vector<long double> poly(1, 1.0L);
      auto mul = [&](long double s) {
        std::vector<long double> r(poly.size() + 1, 0.0L);
        for (size_t i = 0; i < poly.size(); ++i) {
          r[i] += poly[i];
          r[i + 1] += s * poly[i];
        }
        poly.swap(r);
      };
      for (int i = 0; i < n; ++i) mul(-1.0L);
      for (int i = 0; i < m; ++i) mul(1.0L);
      for (int k = 0; k <= g; ++k) {
        const long double lf = 0.5L * (std::lgamma((long double)(g - k + 1)) +
                                       std::lgamma((long double)(k + 1)) -
                                       g * std::log(2.0L) - std::lgamma((long double)(n + 1)) -
                                       std::lgamma((long double)(m + 1)));
        const double b = static_cast<double>(std::exp(lf) * poly[k]);
        static const cdouble ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const double sgn = (p % 2) ? -1.0 : 1.0;
        B(row, k) = sgn * b * ipow[k % 4];
      }
    }
    // project to the nearest unitary to clean up rounding
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXcd U = svd.matrixU() * svd.matrixV().adjoint();
    for (int r = 0; r < sz; ++r)
      for (int c = 0; c < sz; ++c) T[static_cast<size_t>(off + r) * M + off + c] = U(r, c);
  }
  return T;
}

template <typename TT>
static void applyT(const TT* T, int rows, int cols, const cdouble* in, int inCount, cdouble* out) {
  const int used = std::min(cols, inCount);
  for (int r = 0; r < rows; ++r) {
    cdouble acc = 0;
    const TT* t = T + static_cast<size_t>(r) * cols;
    for (int c = 0; c < used; ++c) acc += cdouble(t[c]) * in[c];
    out[r] = acc;
  }
}

void applyTransform(const cfloat* T, int rows, int cols, const cdouble* in, int inCount,
                    cdouble* out) {
  applyT(T, rows, cols, in, inCount, out);
}

void applyTransform(const cdouble* T, int rows, int cols, const cdouble* in, int inCount,
                    cdouble* out) {
  applyT(T, rows, cols, in, inCount, out);
}

}  // namespace digholo
