#include <gtest/gtest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "digholo/config_access.hpp"
#include "digholo/console.hpp"
#include "digholo/frames.hpp"
#include "digholo/settings.hpp"
#include "support.hpp"

using namespace digholo;
using namespace testing_support;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

struct Scenario {
  SimulationResult sim;
  std::string frames = tempPath("io_frames.bin");
  std::string settings = tempPath("io_settings.txt");
  std::string summary = tempPath("io_summary.txt");
  std::string fields = tempPath("io_fields.bin");
  std::string viewport = tempPath("io_viewport.bmp");
  HoloConfig cfg;

  Scenario() {
    SimulationSpec s = loopSpec(4, 128, 2);
    s.outputFilename = frames;
    sim = simulateFrames(s);
    Engine e;
    configureFromTruth(e, sim.spec, 2);
    cfg = e.config();
    cfg.batchCount = 4;
  }
  ~Scenario() {
    for (const auto& p : {frames, settings, summary, fields, fields + ".txt", viewport}) std::remove(p.c_str());
  }
  std::string text() const {
    return cfg::emitSettings(cfg) + "FrameBufferFilename\t" + frames + "\nOutputFileSummary\t" + summary +
           "\nOutputFilenameFields\t" + fields + "\nOutputFilenameViewport\t" + viewport + "\n";
  }
};

}  // namespace

TEST(Settings, ParseSkipsCommentsAndBlankLines) {
  const auto s = SettingsFile::parse("# comment\n\n% other\nBasisGroupCount\t5\nBeamCentreX\t1e-5\t-2e-5\n");
  ASSERT_EQ(s.entries.size(), 2u);
  EXPECT_EQ(s.entries[1].first, "BeamCentreX");
  ASSERT_EQ(s.entries[1].second.size(), 2u);
  Engine e;
  RunDirectives run;
  EXPECT_EQ(applySettings(e, s, run), ErrorCode::SUCCESS);
  EXPECT_EQ(e.config().basisGroupCount, 5);
  EXPECT_DOUBLE_EQ(e.config().beamCentre[0][0], 1e-5);
  EXPECT_DOUBLE_EQ(e.config().beamCentre[0][1], -2e-5);
}

TEST(Settings, UnknownKeysAreCounted) {
  Engine e;
  RunDirectives run;
  int unknown = 0;
  applySettings(e, SettingsFile::parse("NoSuchKey\t1\nbasisgroupcount\t2\n"), run, &unknown);
  EXPECT_EQ(unknown, 1);
  EXPECT_EQ(e.config().basisGroupCount, 2);
}

TEST(Settings, MissingFile) {
  EXPECT_THROW(SettingsFile::load("/nonexistent/settings.txt"), Error);
  EXPECT_EQ(runBatchFromConfigFile("/nonexistent/settings.txt"), ErrorCode::FILENOTFOUND);
}

TEST(Settings, RunWithoutFramesIsNullPointer) {
  const std::string p = tempPath("io_noframes.txt");
  spit(p, "BasisGroupCount\t2\n");
  EXPECT_EQ(runBatchFromConfigFile(p), ErrorCode::NULLPOINTER);
  std::remove(p.c_str());
}

TEST(Settings, FileRunMatchesInMemoryRun) {
  Scenario sc;
  spit(sc.settings, sc.text());
  ASSERT_EQ(runBatchFromConfigFile(sc.settings), ErrorCode::SUCCESS);

  Engine e;
  e.config() = sc.cfg;
  ASSERT_EQ(e.setFrameBufferUint16(sc.sim.frames16.data(), false), ErrorCode::SUCCESS);
  ASSERT_EQ(e.processBatch(), ErrorCode::SUCCESS);

  const FieldsFile f = readFieldsFile(sc.fields);
  EXPECT_EQ(f.batchCount, 4);
  EXPECT_EQ(f.polCount, 1);
  EXPECT_EQ(f.width, e.fieldWidth());
  EXPECT_EQ(f.height, e.fieldHeight());
  EXPECT_EQ(slurp(sc.fields).size(), size_t(4) * f.width * f.height * 8);
  const auto mem = e.fields();
  ASSERT_EQ(f.data.size(), mem.size());
  EXPECT_EQ(0, std::memcmp(f.data.data(), mem.data(), mem.size() * sizeof(cfloat)));

  const std::string summary = slurp(sc.summary);
  EXPECT_NE(summary.find("batchCount\t4\n"), std::string::npos);
  EXPECT_NE(summary.find("modeCount\t3\n"), std::string::npos);
  EXPECT_NE(summary.find("metric.DIAG\t"), std::string::npos);
  EXPECT_NE(summary.find("field.aeff.pol0\t"), std::string::npos);

  const std::string bmp = slurp(sc.viewport);
  ASSERT_GT(bmp.size(), 54u);
  EXPECT_EQ(bmp.substr(0, 2), "BM");
}

TEST(Settings, ProcessingFailureMapsToError) {
  Scenario sc;
  sc.cfg.fftWindowSizeX = 512;  // larger than the frame
  spit(sc.settings, sc.text());
  EXPECT_EQ(runBatchFromConfigFile(sc.settings), ErrorCode::ERROR);
}

TEST(Settings, FieldsExportNeedsFields) {
  Engine e;
  EXPECT_EQ(writeOutputs(e, "", tempPath("io_none.bin")), ErrorCode::NULLPOINTER);
  EXPECT_THROW(readFieldsFile("/nonexistent/fields.bin"), Error);
}

TEST(Viewport, BitmapHeaderAndRawSize) {
  Viewport v;
  v.width = 5;
  v.height = 3;
  v.rgb.assign(5 * 3 * 3, 0);
  v.rgb[0] = 200;  // top-left red
  const std::string bmpPath = tempPath("vp.bmp"), rawPath = tempPath("vp.rgb");
  ASSERT_EQ(writeViewport(v, bmpPath), ErrorCode::SUCCESS);
  ASSERT_EQ(writeViewport(v, rawPath), ErrorCode::SUCCESS);
  const std::string bmp = slurp(bmpPath);
  const int row = 16;  // 5*3 padded to 4 bytes
  ASSERT_EQ(bmp.size(), size_t(54 + row * 3));
  auto u32 = [&](int off) {
    uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= uint32_t(uint8_t(bmp[off + i])) << (8 * i);
    return x;
  };
  EXPECT_EQ(u32(2), bmp.size());
  EXPECT_EQ(u32(18), 5u);
  EXPECT_EQ(u32(22), 3u);
  EXPECT_EQ(uint8_t(bmp[28]), 24);
  // bottom-up rows, BGR order: the top-left pixel is in the last row
  EXPECT_EQ(uint8_t(bmp[54 + 2 * row + 2]), 200);
  EXPECT_EQ(slurp(rawPath).size(), v.rgb.size());
  EXPECT_EQ(writeViewport(v, "/nonexistent/dir/vp.bmp"), ErrorCode::FILENOTCREATED);
  std::remove(bmpPath.c_str());
  std::remove(rawPath.c_str());
}

TEST(Viewport, ModesAndDeterminism) {
  SimulationResult sim = simulateFrames(loopSpec(1, 128, 2));
  Engine e;
  configureFromTruth(e, sim.spec, 2);
  e.setBatch(1, sim.frames.data());
  EXPECT_TRUE(e.viewport(VIEWPORT_NONE, true).rgb.empty());
  EXPECT_TRUE(e.viewport(VIEWPORT_FIELDPLANE, false).rgb.empty());
  const Viewport field = e.viewport(VIEWPORT_FIELDPLANE, true);
  ASSERT_EQ(field.rgb.size(), size_t(field.width) * field.height * 3);
  EXPECT_FALSE(field.title.empty());
  const Viewport again = e.viewport(VIEWPORT_FIELDPLANE, true);
  EXPECT_EQ(field.rgb, again.rgb);
  // a pure mode is reproduced by its modal reconstruction
  const Viewport modal = e.viewport(VIEWPORT_FIELDPLANEMODE, false);
  ASSERT_EQ(modal.rgb.size(), field.rgb.size());
  double diff = 0;
  for (size_t i = 0; i < field.rgb.size(); ++i) diff += std::abs(int(field.rgb[i]) - int(modal.rgb[i]));
  EXPECT_LT(diff / field.rgb.size(), 2.0);
  for (int m = VIEWPORT_CAMERAPLANE; m < VIEWPORT_COUNT; ++m) {
    const Viewport v = e.viewport(m, false);
    EXPECT_GT(v.width, 0) << m;
    EXPECT_EQ(v.rgb.size(), size_t(v.width) * v.height * 3) << m;
  }
}

TEST(Console, VerbosityZeroIsSilentAndRedirectWorks) {
  const std::string p = tempPath("console.txt");
  ASSERT_EQ(console::redirectToFile(p), ErrorCode::SUCCESS);
  console::print(0, 1, "hidden\n");
  console::print(2, 1, "shown %d\n", 7);
  console::restore();
  EXPECT_EQ(slurp(p), "shown 7\n");
  EXPECT_EQ(console::redirectToFile("/nonexistent/dir/c.txt"), ErrorCode::FILENOTCREATED);
  EXPECT_EQ(console::clampVerbosity(9), 3);
  EXPECT_EQ(console::clampVerbosity(-1), 0);
  std::remove(p.c_str());
}
