#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "digholo/error.hpp"
#include "digholo/types.hpp"

namespace digholo {

// Empty per-pol vectors (and other unset values) are replaced by defaults; the
// resolved spec is returned alongside the frames.
struct SimulationSpec {
  int frameCount = 0;
  int frameWidth = 0, frameHeight = 0;
  double pixelSize = 0;
  int polCount = 1;

  std::vector<double> refTiltX, refTiltY;  // degrees
  std::vector<double> refDefocus;          // dioptre
  std::vector<double> refWaist;            // <= 0 means plane wave
  std::vector<double> refBeamCentreX, refBeamCentreY;
  std::vector<cfloat> refAmplitude;

  int beamGroupCount = 0;
  std::vector<double> beamWaist;
  std::vector<double> beamCentreX, beamCentreY;
  std::vector<cfloat> beamCoefs;  // frameCount x polCount x modeCount

  int cameraPixelLevelCount = 0;
  bool fillFactorCorrection = true;
  std::vector<double> wavelengths;
  int wavelengthOrdering = 0;

  std::string outputFilename;  // raw uint16 frames when non-empty

  // filled on output
  double intensityMax = 0;
};

struct SimulationResult {
  std::vector<float> frames;      // level / (levels - 1), in [0, 1]
  std::vector<uint16_t> frames16;  // quantised levels
  std::vector<float> intensity;    // unquantised |S + R|^2 (after fill-factor filtering)
  SimulationSpec spec;             // resolved
};

inline constexpr int kDefaultPixelLevels = 16384;

// Throws INVALIDDIMENSION / INVALIDARGUMENT on unusable specs.
SimulationResult simulateFrames(const SimulationSpec& spec);

// Handle-style allocation used by the C interface: frames plus their uint16
// copy and resolved spec live in one registered block.
float* simulatorCreate(const SimulationSpec& spec, const SimulationSpec** resolved,
                       const uint16_t** frames16, ErrorCode* err = nullptr);
float* simulatorCreateSimple(int frameCount, int frameWidth, int frameHeight, double pixelSize,
                             int polCount, double wavelength, int verbosity);
const SimulationSpec* simulatorSpec(const float* frames);
const uint16_t* simulatorFrames16(const float* frames);
ErrorCode simulatorDestroy(const float* frames);

}  // namespace digholo
