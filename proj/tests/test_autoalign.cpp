#include <gtest/gtest.h>

#include "digholo/engine.hpp"
#include "digholo/pipeline.hpp"
#include "support.hpp"

using namespace digholo;
using namespace testing_support;

namespace {

struct Aligned {
  SimulationResult sim;
  Engine engine;
  explicit Aligned(int pols = 1) {
    sim = simulateFrames(loopSpec(6, 128, 3, pols));
    configureFromTruth(engine, sim.spec, 3);
    engine.setBatch(6, sim.frames.data());
    engine.config().autoAlignGoalIdx = METRIC_DIAG;
  }
  double bin() const { return binsToAngle(1.0, 128, 20e-6, 1565e-9); }
};

float goalNow(Engine& e) {
  EXPECT_EQ(e.processBatch(), ErrorCode::SUCCESS);
  EXPECT_EQ(e.calcMetrics(), ErrorCode::SUCCESS);
  return e.metrics().average(METRIC_DIAG);
}

}  // namespace

TEST(AutoAlign, EstimateRunsNoTweakCycles) {
  Aligned a;
  a.engine.config().autoAlignMode = AutoAlignMode::ESTIMATE;
  a.engine.autoAlign();
  EXPECT_EQ(a.engine.lastTweakIterations(), 0);
}

TEST(AutoAlign, TweakDoesNotDegradeGoal) {
  Aligned a;
  auto& c = a.engine.config();
  c.autoAlignMode = AutoAlignMode::TWEAK;
  c.tilt[0][0] += 0.2 * a.bin();
  const float before = goalNow(a.engine);
  const float after = a.engine.autoAlign();
  EXPECT_GE(after, before);
  EXPECT_GE(a.engine.lastTweakIterations(), 1);
  EXPECT_FLOAT_EQ(after, a.engine.metric(METRIC_DIAG));
}

TEST(AutoAlign, LargeToleranceStopsAfterOneCycle) {
  Aligned a;
  auto& c = a.engine.config();
  c.autoAlignMode = AutoAlignMode::TWEAK;
  c.autoAlignTol = 100;
  c.tilt[1][0] -= 0.2 * a.bin();
  a.engine.autoAlign();
  EXPECT_EQ(a.engine.lastTweakIterations(), 1);
}

TEST(AutoAlign, DisabledParametersAreUntouched) {
  Aligned a;
  auto& c = a.engine.config();
  c.tilt[0][0] += 0.2 * a.bin();
  c.beamCentre[0][0] = 25e-6;
  c.defocus[0] = 0.01;
  c.basisWaist[0] *= 1.05;
  c.fourierWindowRadius *= 0.9;
  c.autoAlignBeamCentre = false;
  c.autoAlignDefocus = false;
  c.autoAlignBasisWaist = false;
  c.autoAlignFourierWindowRadius = false;
  const HoloConfig before = c;
  for (AutoAlignMode m : {AutoAlignMode::FULL, AutoAlignMode::TWEAK}) {
    c.autoAlignMode = m;
    a.engine.autoAlign();
    EXPECT_EQ(c.beamCentre, before.beamCentre);
    EXPECT_EQ(c.defocus, before.defocus);
    EXPECT_EQ(c.basisWaist, before.basisWaist);
    EXPECT_EQ(c.fourierWindowRadius, before.fourierWindowRadius);
  }
  EXPECT_NE(c.tilt[0][0], before.tilt[0][0]);
}

TEST(AutoAlign, PolLockKeepsPolarisationsEqual) {
  Aligned a(2);
  auto& c = a.engine.config();
  c.polLockTilt = true;
  c.autoAlignMode = AutoAlignMode::TWEAK;
  c.autoAlignBeamCentre = false;
  c.autoAlignDefocus = false;
  c.autoAlignBasisWaist = false;
  c.tilt[0][0] += 0.2 * a.bin();
  c.tilt[0][1] = c.tilt[0][0];
  a.engine.autoAlign();
  EXPECT_EQ(c.tilt[0][0], c.tilt[0][1]);
  EXPECT_EQ(c.tilt[1][0], c.tilt[1][1]);
}

TEST(AutoAlign, WithoutFramesReturnsZero) {
  Engine e;
  EXPECT_EQ(e.autoAlign(), 0.0f);
}
