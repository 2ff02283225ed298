#include "digholo/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "digholo/error.hpp"
#include "digholo/geometry.hpp"

namespace digholo {

Region polRegion(int frameWidth, int frameHeight, int polCount, int pol) {
  Region r;
  r.y0 = 0;
  r.height = frameHeight;
  if (polCount > 1) {
    const int half = frameWidth / 2;
    r.x0 = pol ? half : 0;
    r.width = pol ? frameWidth - half : half;
  } else {
    r.x0 = 0;
    r.width = frameWidth;
  }
  return r;
}

std::vector<double> regionAxis(int size, double pixelSize) { return fieldAxis(size, pixelSize); }

WindowPlacement placeWindow(const Region& r, int nx, int ny, double p, double cx, double cy) {
  if (nx <= 0 || ny <= 0 || nx > r.width || ny > r.height)
    throw Error(ErrorCode::INVALIDDIMENSION, "FFT window larger than polarisation region");
  WindowPlacement w;
  // pixel-index coordinate of the requested centre
  const double ux = r.x0 + 0.5 * r.width + cx / p;
  const double uy = r.y0 + 0.5 * r.height + cy / p;
  w.sx = std::clamp(static_cast<int>(std::lround(ux - 0.5 * nx)), r.x0, r.x0 + r.width - nx);
  w.sy = std::clamp(static_cast<int>(std::lround(uy - 0.5 * ny)), r.y0, r.y0 + r.height - ny);
  w.centreX = (w.sx + 0.5 * nx - r.x0 - 0.5 * r.width) * p;
  w.centreY = (w.sy + 0.5 * ny - r.y0 - 0.5 * r.height) * p;
  w.residualX = cx - w.centreX;
  w.residualY = cy - w.centreY;
  return w;
}

double angleToBins(double angleDeg, int n, double p, double lambda) {
  return std::sin(angleDeg * kDegToRad) * n * p / lambda;
}

double binsToAngle(double bins, int n, double p, double lambda) {
  const double s = std::clamp(bins * lambda / (n * p), -1.0, 1.0);
  return std::asin(s) * kRadToDeg;
}

int windowBoxSize(double radiusBins) {
  if (!(radiusBins >= 0)) return 2;
  return 2 * (static_cast<int>(std::floor(radiusBins)) + 1);
}

int signedBin(int k, int n) {
  int m = k % n;
  if (m < 0) m += n;
  return m > n / 2 ? m - n : m;
}

cfloat halfPlaneAt(const cfloat* F, int nx, int ny, int kx, int ky) {
  const int hw = nx / 2 + 1;
  int mx = kx % nx;
  if (mx < 0) mx += nx;
  int my = ky % ny;
  if (my < 0) my += ny;
  if (mx < hw) return F[static_cast<std::size_t>(my) * hw + mx];
  const int cy = my == 0 ? 0 : ny - my;
  return std::conj(F[static_cast<std::size_t>(cy) * hw + (nx - mx)]);
}

double pixelSinc(int k, int n) {
  const double a = kPi * signedBin(k, n) / n;
  return a == 0 ? 1.0 : std::sin(a) / a;
}

std::vector<double> fieldAxis(int size, double spacing) {
  std::vector<double> a(size > 0 ? size : 0);
  for (int m = 0; m < size; ++m) a[m] = (m - 0.5 * size + 0.5) * spacing;
  return a;
}

float quantiseField(const cfloat* src, std::size_t n, int16_t* re, int16_t* im) {
  float mx = 0;
  for (std::size_t i = 0; i < n; ++i)
    mx = std::max({mx, std::abs(src[i].real()), std::abs(src[i].imag())});
  const float scale = mx > 0 ? 32767.0f / mx : 1.0f;
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = static_cast<int16_t>(std::clamp(std::nearbyint(src[i].real() * scale), -32767.0f, 32767.0f));
    im[i] = static_cast<int16_t>(std::clamp(std::nearbyint(src[i].imag() * scale), -32767.0f, 32767.0f));
  }
  return scale;
}

}  // namespace digholo
