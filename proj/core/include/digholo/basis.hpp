#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "digholo/types.hpp"

namespace digholo {

int modeCountForGroups(int groupCount);
// HG (m, n) in group order: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...
std::vector<std::pair<int, int>> hgModeIndices(int groupCount);
// Mode-group index (m + n) of every mode in the order above.
std::vector<int> hgModeGroups(int groupCount);

// Normalised Hermite functions h_m(x), m < orderCount, sampled on axis and
// rescaled so that sum |h_m|^2 dx = 1 on that grid. Result is orderCount x size.
std::vector<double> hermiteProfiles(int orderCount, double waist, const std::vector<double>& axis,
                                    double centre);

// Separable HG basis on a rectangular grid.
struct HGBasis {
  int groupCount = 0;
  double waist = 0;
  std::vector<double> xAxis, yAxis;
  double dx = 1, dy = 1;
  std::vector<double> hx;  // groupCount x xAxis.size()
  std::vector<double> hy;  // groupCount x yAxis.size()
  // int16 storage copy, one scale per 1-D profile (value = stored / scale).
  std::vector<int16_t> hx16, hy16;
  std::vector<float> hxScale, hyScale;

  int width() const { return static_cast<int>(xAxis.size()); }
  int height() const { return static_cast<int>(yAxis.size()); }
  int modeCount() const { return modeCountForGroups(groupCount); }
};

HGBasis generateHGBasis(int groupCount, double waist, const std::vector<double>& xAxis,
                        const std::vector<double>& yAxis, double cx = 0, double cy = 0);

// Overlap coefficients of a height x width field (row-major, x fastest):
// coef(m,n) = sum conj(HG_mn) * field * dx * dy, computed separably.
void extractCoefs(const HGBasis& basis, const cfloat* field, cdouble* coefs);
std::vector<cdouble> extractCoefs(const HGBasis& basis, const std::vector<cfloat>& field);

// 2-D modes (modeCount x height x width), from the double profiles or the int16 copy.
std::vector<cfloat> materialiseModes(const HGBasis& basis, bool fromInt16);

// Coefficient transform from HG to LG: c_LG = T * c_HG, T is modeCount x modeCount
// (row-major) and block diagonal by mode group. Within group g the LG rows are
// ordered l = g, g-2, ..., -g with p = (g - |l|) / 2; l > 0 carries exp(+i l phi).
std::vector<cdouble> hgToLgTransform(int groupCount);
// (p, l) for each LG row of hgToLgTransform.
std::vector<std::pair<int, int>> lgModeIndices(int groupCount);

// out = T * in with T rows x cols (row-major); in has at least min(cols, inCount)
// entries; columns beyond inCount are ignored and missing inputs count as zero.
void applyTransform(const cfloat* T, int rows, int cols, const cdouble* in, int inCount,
                    cdouble* out);
void applyTransform(const cdouble* T, int rows, int cols, const cdouble* in, int inCount,
                    cdouble* out);

}  // namespace digholo
