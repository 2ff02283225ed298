#pragma once

#include <utility>

namespace digholo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Window radius as a fraction of the maximum resolvable angle.
inline constexpr double kWindowFractionNoWrap = 0.320513;
double windowFractionWrap();  // (-2 + sqrt(68)) / 16

// All angles in degrees, lengths in metres.
double maxResolvableAngle(double wavelength, double pixelSize);
double maxWindowRadius(double wMax, bool allowWrap);
std::pair<double, double> recommendedTilt(double wc, double wMax, bool allowWrap);

}  // namespace digholo
