#include "digholo/geometry.hpp"

#include <cmath>

#include "digholo/error.hpp"

namespace digholo {

double windowFractionWrap() { return (-2.0 + std::sqrt(68.0)) / 16.0; }

double maxResolvableAngle(double wavelength, double pixelSize) {
  if (!(wavelength > 0) || !(pixelSize > 0) || !std::isfinite(wavelength) ||
      !std::isfinite(pixelSize))
    throw Error(ErrorCode::INVALIDARGUMENT, "wavelength and pixel size must be positive");
  return wavelength / (2.0 * pixelSize) * kRadToDeg;
}

double maxWindowRadius(double wMax, bool allowWrap) {
  if (!(wMax > 0) || !std::isfinite(wMax))
    throw Error(ErrorCode::INVALIDARGUMENT, "w_max must be positive");
  return (allowWrap ? windowFractionWrap() : kWindowFractionNoWrap) * wMax;
}

std::pair<double, double> recommendedTilt(double wc, double wMax, bool allowWrap) {
  // Fractions are quoted to four decimals, so allow half a unit of that rounding.
  const double limit = maxWindowRadius(wMax, allowWrap) + 5e-5 * wMax;
  if (!(wc >= 0) || wc > limit)
    throw Error(ErrorCode::INVALIDARGUMENT, "window radius outside admissible range");
  if (allowWrap) return {wMax - wc, wMax};
  const double t = 3.0 * wc / std::sqrt(2.0);
  return {t, t};
}

}  // namespace digholo
