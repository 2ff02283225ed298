#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "digholo/engine.hpp"
#include "digholo/geometry.hpp"
#include "digholo/simulator.hpp"

namespace testing_support {

using digholo::cfloat;

inline digholo::SimulationSpec loopSpec(int frames, int size, int groups, int pols = 1) {
  digholo::SimulationSpec s;
  s.frameCount = frames;
  s.frameWidth = size * pols;
  s.frameHeight = size;
  s.pixelSize = 20e-6;
  s.polCount = pols;
  s.beamGroupCount = groups;
  s.wavelengths = {1565e-9};
  return s;
}

// Configures an engine with the simulator's ground truth.
inline void configureFromTruth(digholo::Engine& e, const digholo::SimulationSpec& rs, int groups) {
  auto& c = e.config();
  c.frameWidth = rs.frameWidth;
  c.frameHeight = rs.frameHeight;
  c.framePixelSize = rs.pixelSize;
  c.polCount = rs.polCount;
  c.fftWindowSizeX = rs.frameWidth / rs.polCount;
  c.fftWindowSizeY = rs.frameHeight;
  c.wavelengthCentre = rs.wavelengths[0];
  const double wMax = digholo::maxResolvableAngle(rs.wavelengths[0], rs.pixelSize);
  c.fourierWindowRadius = digholo::maxWindowRadius(wMax, false);
  c.basisGroupCount = groups;
  c.threadCount = 1;
  for (int p = 0; p < rs.polCount; ++p) {
    c.tilt[0][p] = rs.refTiltX[p];
    c.tilt[1][p] = rs.refTiltY[p];
    c.defocus[p] = rs.refDefocus[p];
    c.basisWaist[p] = rs.beamWaist[p];
    c.beamCentre[0][p] = rs.beamCentreX[p];
    c.beamCentre[1][p] = rs.beamCentreY[p];
  }
  std::vector<cfloat> cal(rs.polCount);
  for (int p = 0; p < rs.polCount; ++p)
    cal[p] = cfloat(static_cast<float>(rs.intensityMax), 0.0f) / std::conj(rs.refAmplitude[p]);
  e.setBatchCalibration(cal.data(), rs.polCount, 1);
}

// Per-row diagonal power and off-diagonal leakage of a square coefficient block.
struct RowPower {
  double diag = 0, off = 0;
};
inline std::vector<RowPower> rowPowers(const std::vector<cfloat>& coefs, int rows, int modes) {
  std::vector<RowPower> out(rows);
  for (int b = 0; b < rows; ++b)
    for (int m = 0; m < modes; ++m) {
      const double v = std::norm(coefs[static_cast<size_t>(b) * modes + m]);
      (m == b ? out[b].diag : out[b].off) += v;
    }
  return out;
}

inline std::string tempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("digholo_test_" + name)).string();
}

}  // namespace testing_support
