#pragma once

#include <vector>

#include "digholo/types.hpp"

namespace digholo {

// Pixel region of the frame owned by one polarisation. Dual-pol frames are
// split at frameWidth/2: pol 0 left, pol 1 right.
struct Region {
  int x0 = 0, y0 = 0, width = 0, height = 0;
};
Region polRegion(int frameWidth, int frameHeight, int polCount, int pol);

// Physical coordinate (metres, relative to the region centre) of pixel centres.
std::vector<double> regionAxis(int size, double pixelSize);

// FFT window placement for a requested beam centre (metres, relative to the
// region centre). The window is clamped inside the region; residual holds the
// remaining offset between the requested centre and the window centre.
struct WindowPlacement {
  int sx = 0, sy = 0;             // first pixel, frame coordinates
  double centreX = 0, centreY = 0;  // window centre, metres
  double residualX = 0, residualY = 0;
};
WindowPlacement placeWindow(const Region& r, int nx, int ny, double pixelSize, double cx, double cy);

// Signed bin offset of an angle: sin(theta) * n * p / lambda (not rounded).
double angleToBins(double angleDeg, int n, double pixelSize, double wavelength);
double binsToAngle(double bins, int n, double pixelSize, double wavelength);

// Minimal even bounding box for a window radius of r bins: 2 * (floor(r) + 1).
int windowBoxSize(double radiusBins);

// Value of the full 2-D spectrum at integer bin (kx, ky) read from the
// r2c half plane (ny x (nx/2+1)) using periodicity and Hermitian symmetry.
cfloat halfPlaneAt(const cfloat* F, int nx, int ny, int kx, int ky);

// Wraps k into (-n/2, n/2].
int signedBin(int k, int n);

// Sinc envelope of a 100% fill-factor pixel at signed bin k of an n-point FFT.
double pixelSinc(int k, int n);
inline constexpr double kSincFloor = 1e-3;

// Output coordinates of a reconstructed field axis: (m - size/2 + 0.5) * spacing.
std::vector<double> fieldAxis(int size, double spacing);

// int16 packing: scale = 32767 / max(|re|, |im|), round to nearest even.
float quantiseField(const cfloat* src, std::size_t n, int16_t* re, int16_t* im);

}  // namespace digholo
