#pragma once

#include <array>
#include <vector>

#include "digholo/types.hpp"

namespace digholo {

struct HoloConfig {
  int frameWidth = 320;
  int frameHeight = 256;
  double framePixelSize = 20e-6;
  int polCount = 1;

  int fftWindowSizeX = 128;
  int fftWindowSizeY = 128;
  double fourierWindowRadius = 0.4;  // degrees
  int resolutionMode = 0;            // 0 full fft size, 1 window size
  bool fillFactorCorrection = true;

  // [axis][pol]
  std::array<std::array<double, kPolCountMax>, 2> beamCentre{};
  std::array<std::array<double, kPolCountMax>, 2> tilt{};
  std::array<double, kPolCountMax> defocus{};
  std::array<double, kPolCountMax> basisWaist{300e-6, 300e-6};

  int basisGroupCount = 0;
  BasisType basisType = BasisType::HG;
  int customModeCountIn = 0;
  int customModeCountOut = 0;
  std::vector<cfloat> customTransform;  // out x in, row-major

  double wavelengthCentre = 1565e-9;
  std::vector<double> wavelengths;  // empty means {wavelengthCentre}
  std::array<int, 2> wavelengthOrdering{0, 0};

  bool polLockTilt = false;
  bool polLockDefocus = false;
  bool polLockBasisWaist = true;

  bool autoAlignTilt = true;
  bool autoAlignBeamCentre = true;
  bool autoAlignDefocus = true;
  bool autoAlignBasisWaist = true;
  bool autoAlignFourierWindowRadius = true;
  double autoAlignTol = 0.0;
  AutoAlignMode autoAlignMode = AutoAlignMode::FULL;
  int autoAlignGoalIdx = METRIC_IL;
  bool autoAlignPolIndependence = false;
  bool autoAlignBasisMulConjTrans = false;

  int threadCount = defaultThreadCount();
  int verbosity = 0;
  int fftPlanMode = 0;

  int batchCount = 1;
  int avgCount = 1;
  AvgMode avgMode = AvgMode::SEQUENTIAL;

  static int defaultThreadCount();
};

// Largest multiple of kPixelQuanta not above v (negative maps to 0).
int floorToQuanta(int v);

}  // namespace digholo
