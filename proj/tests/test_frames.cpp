#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <numeric>

#include "digholo/error.hpp"
#include "digholo/frames.hpp"
#include "support.hpp"

using namespace digholo;

TEST(Frames, Uint16ConversionIsExactForEveryLevel) {
  std::vector<uint16_t> src(65536);
  std::iota(src.begin(), src.end(), 0);
  std::vector<float> dst(src.size());
  convertUint16Frames(src.data(), dst.data(), 1, 256, 256, false);
  for (size_t i = 0; i < src.size(); ++i) ASSERT_EQ(dst[i], static_cast<float>(src[i]));
}

TEST(Frames, TransposedIngestionMatchesDirect) {
  const int W = 48, H = 32, F = 3;
  std::vector<uint16_t> direct(static_cast<size_t>(F) * W * H), transposed(direct.size());
  for (int f = 0; f < F; ++f)
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        const uint16_t v = static_cast<uint16_t>((f * 7919 + y * 131 + x * 17) & 0xffff);
        direct[(static_cast<size_t>(f) * H + y) * W + x] = v;
        transposed[(static_cast<size_t>(f) * W + x) * H + y] = v;
      }
  std::vector<float> a(direct.size()), b(direct.size());
  convertUint16Frames(direct.data(), a.data(), F, W, H, false);
  convertUint16Frames(transposed.data(), b.data(), F, W, H, true);
  EXPECT_EQ(a, b);
}

TEST(Frames, FileRoundTrip) {
  const std::string path = testing_support::tempPath("frames.bin");
  std::vector<uint16_t> v = {0, 1, 2, 65535, 4096, 12345};
  writeUint16File(path, v.data(), v.size());
  EXPECT_EQ(readUint16File(path), v);
  std::remove(path.c_str());
  try {
    readUint16File(path);
    FAIL() << "expected FILENOTFOUND";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FILENOTFOUND);
  }
}

TEST(Frames, FileSourceRejectsShortFile) {
  const std::string path = testing_support::tempPath("short.bin");
  std::vector<uint16_t> v(16 * 16 - 1, 7);
  writeUint16File(path, v.data(), v.size());
  FrameSource s;
  s.loadFile(path);
  EXPECT_EQ(s.kind(), FrameSourceKind::INTERNAL_FILE);
  try {
    s.stage(1, 16, 16);
    FAIL() << "expected INVALIDDIMENSION";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::INVALIDDIMENSION);
  }
  v.push_back(7);
  writeUint16File(path, v.data(), v.size());
  s.loadFile(path);
  const float* f = s.stage(1, 16, 16);
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f[255], 7.0f);
  std::remove(path.c_str());
}

TEST(Frames, SourceKinds) {
  FrameSource s;
  EXPECT_TRUE(s.empty());
  std::vector<float> f(16 * 16, 1.0f);
  s.setFloat(f.data());
  EXPECT_EQ(s.pointer(), f.data());
  EXPECT_EQ(s.stage(1, 16, 16), f.data());
  std::vector<uint16_t> u(16 * 16, 3);
  s.setUint16(u.data(), false);
  EXPECT_EQ(s.pointer(), u.data());
  EXPECT_EQ(s.stage(1, 16, 16)[10], 3.0f);
}

TEST(RefCalibrationTest, NullDisablesWithoutError) {
  RefCalibration r;
  std::vector<uint16_t> cal(4, 100);
  EXPECT_EQ(r.setIntensity(cal.data(), 1, 2, 2), ErrorCode::SUCCESS);
  EXPECT_TRUE(r.active());
  EXPECT_EQ(r.setIntensity(nullptr, 1, 2, 2), ErrorCode::SUCCESS);
  EXPECT_FALSE(r.active());
  EXPECT_EQ(r.setField(nullptr, 1, 2, 2), ErrorCode::SUCCESS);
  EXPECT_FALSE(r.active());
  EXPECT_EQ(r.setIntensity(cal.data(), 0, 2, 2), ErrorCode::INVALIDARGUMENT);
  EXPECT_FALSE(r.active());
}

TEST(RefCalibrationTest, IntensityIsMaxNormalisedCopy) {
  RefCalibration r;
  std::vector<uint16_t> cal = {100, 200, 400, 50};
  ASSERT_EQ(r.setIntensity(cal.data(), 1, 2, 2), ErrorCode::SUCCESS);
  cal[0] = 0;  // caller buffer may change afterwards
  ASSERT_EQ(r.intensity.size(), 4u);
  EXPECT_FLOAT_EQ(r.intensity[0], 0.25f);
  EXPECT_FLOAT_EQ(r.intensity[2], 1.0f);
  EXPECT_FLOAT_EQ(r.intensity[3], 0.125f);
}

TEST(RefCalibrationTest, FileKindInferredFromSize) {
  const std::string path = testing_support::tempPath("refcal.bin");
  {
    std::vector<uint16_t> v(2 * 16 * 16, 500);
    writeUint16File(path, v.data(), v.size());
  }
  RefCalibration r;
  EXPECT_EQ(r.setFromFile(path, 2, 16, 16), ErrorCode::SUCCESS);
  EXPECT_EQ(r.kind, RefCalibration::Kind::INTENSITY);
  {
    std::vector<cfloat> v(16 * 16, cfloat(1, 2));
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
  }
  EXPECT_EQ(r.setFromFile(path, 1, 16, 16), ErrorCode::SUCCESS);
  EXPECT_EQ(r.kind, RefCalibration::Kind::FIELD);
  EXPECT_EQ(r.field[5], cfloat(1, 2));
  std::remove(path.c_str());
  EXPECT_EQ(r.setFromFile(path, 1, 16, 16), ErrorCode::FILENOTFOUND);
  EXPECT_FALSE(r.active());
}
