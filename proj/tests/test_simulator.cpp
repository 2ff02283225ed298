#include <gtest/gtest.h>

#include <cmath>

#include "digholo/basis.hpp"
#include "digholo/frames.hpp"
#include "digholo/geometry.hpp"
#include "digholo/pipeline.hpp"
#include "digholo/simulator.hpp"
#include "support.hpp"

using namespace digholo;
using namespace testing_support;

TEST(Simulator, InterferenceIdentityForFundamentalMode) {
  SimulationSpec s = loopSpec(1, 64, 1);
  s.fillFactorCorrection = false;
  s.refTiltX = {0.8};
  s.refTiltY = {-0.5};
  s.refAmplitude = {cfloat(30.0f, 10.0f)};
  s.beamWaist = {200e-6};
  s.beamCentreX = {40e-6};
  s.beamCentreY = {-20e-6};
  const SimulationResult r = simulateFrames(s);
  const auto ax = fieldAxis(64, 20e-6);
  const double lam = 1565e-9, w = 200e-6;
  const double kx = 2 * kPi * std::sin(0.8 * kPi / 180) / lam;
  const double ky = 2 * kPi * std::sin(-0.5 * kPi / 180) / lam;
  for (int y = 0; y < 64; y += 7)
    for (int x = 0; x < 64; x += 5) {
      const double dx = ax[x] - 40e-6, dy = ax[y] + 20e-6;
      const double S = std::sqrt(2 / kPi) / w * std::exp(-(dx * dx + dy * dy) / (w * w));
      const cdouble R = cdouble(30, 10) * std::polar(1.0, -(kx * ax[x] + ky * ax[y]));
      const double expect = std::norm(S + R);
      EXPECT_NEAR(r.intensity[y * 64 + x], expect, 1e-4 * expect);
    }
}

TEST(Simulator, QuantisationAndResolvedDefaults) {
  SimulationSpec s;
  s.frameCount = 7;
  s.frameWidth = 70;  // floored to 64
  s.frameHeight = 64;
  s.pixelSize = 20e-6;
  s.cameraPixelLevelCount = 256;
  EXPECT_EQ(simulateFrames(s).spec.beamGroupCount, 4);  // smallest G with G(G+1)/2 >= 7
  s.beamGroupCount = 2;
  const SimulationResult r = simulateFrames(s);
  EXPECT_EQ(r.spec.frameWidth, 64);
  EXPECT_EQ(r.spec.beamCoefs.size(), size_t(7) * 3);
  EXPECT_EQ(r.spec.beamCoefs[6 * 3 + 0], cfloat(1.0f));  // frame 6 wraps to mode 0
  const double wMax = maxResolvableAngle(1565e-9, 20e-6);
  EXPECT_NEAR(r.spec.refTiltX[0], recommendedTilt(maxWindowRadius(wMax, false), wMax, false).first, 1e-12);
  uint16_t top = 0;
  for (size_t i = 0; i < r.frames16.size(); ++i) {
    top = std::max(top, r.frames16[i]);
    ASSERT_FLOAT_EQ(r.frames[i], r.frames16[i] / 255.0f);
  }
  EXPECT_EQ(top, 255);
}

TEST(Simulator, RejectsBadSpecs) {
  SimulationSpec s = loopSpec(2, 64, 1);
  s.frameCount = 0;
  EXPECT_THROW(simulateFrames(s), Error);
  s = loopSpec(2, 64, 1);
  s.polCount = 3;
  try {
    simulateFrames(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::INVALIDPOLARISATION);
  }
  s = loopSpec(2, 64, 2);
  s.beamCoefs.assign(5, cfloat{});
  try {
    simulateFrames(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::INVALIDDIMENSION);
  }
  s = loopSpec(2, 8, 1);
  try {
    simulateFrames(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::INVALIDDIMENSION);
  }
}

TEST(Simulator, RegistryLifecycle) {
  const SimulationSpec* resolved = nullptr;
  const uint16_t* f16 = nullptr;
  ErrorCode err = ErrorCode::ERROR;
  float* frames = simulatorCreate(loopSpec(2, 64, 1), &resolved, &f16, &err);
  ASSERT_NE(frames, nullptr);
  EXPECT_EQ(err, ErrorCode::SUCCESS);
  EXPECT_EQ(simulatorSpec(frames), resolved);
  EXPECT_EQ(simulatorFrames16(frames), f16);
  EXPECT_EQ(simulatorDestroy(nullptr), ErrorCode::NULLPOINTER);
  float local = 0;
  EXPECT_EQ(simulatorDestroy(&local), ErrorCode::MEMORYALLOCATION);
  EXPECT_EQ(simulatorDestroy(frames), ErrorCode::SUCCESS);
  EXPECT_EQ(simulatorSpec(frames), nullptr);
  EXPECT_EQ(simulatorCreateSimple(0, 64, 64, 20e-6, 1, 1565e-9, 0), nullptr);
  float* simple = simulatorCreateSimple(3, 64, 64, 20e-6, 1, 1565e-9, 0);
  ASSERT_NE(simple, nullptr);
  EXPECT_EQ(simulatorDestroy(simple), ErrorCode::SUCCESS);
}

TEST(Simulator, FileOutputMatchesMemory) {
  SimulationSpec s = loopSpec(3, 64, 2);
  s.outputFilename = tempPath("sim_frames.bin");
  const SimulationResult r = simulateFrames(s);
  EXPECT_EQ(readUint16File(s.outputFilename), r.frames16);
  std::remove(s.outputFilename.c_str());
}

TEST(Simulator, DualPolFramesOccupyHalves) {
  SimulationSpec s = loopSpec(2, 64, 1, 2);
  s.beamCoefs = {1.0f, 0.0f, 0.0f, 0.0f};  // frame 0 pol 0 only; frame 1 empty
  s.refAmplitude = {cfloat(0.0f), cfloat(0.0f)};
  s.fillFactorCorrection = false;
  const SimulationResult r = simulateFrames(s);
  double left = 0, right = 0, second = 0;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 128; ++x) {
      (x < 64 ? left : right) += r.intensity[y * 128 + x];
      second += r.intensity[128 * 64 + y * 128 + x];
    }
  EXPECT_GT(left, 0.0);
  EXPECT_EQ(right, 0.0);
  EXPECT_EQ(second, 0.0);
  // discrete power of HG00 sampled at the pixel pitch equals 1
  EXPECT_NEAR(left * 20e-6 * 20e-6, 1.0, 1e-3);
}
