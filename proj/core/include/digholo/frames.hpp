#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "digholo/error.hpp"
#include "digholo/types.hpp"

namespace digholo {

enum class FrameSourceKind { NONE, FLOAT32_EXTERNAL, UINT16_EXTERNAL, INTERNAL_FILE };

// Reads a raw little-endian uint16 stream.
std::vector<uint16_t> readUint16File(const std::string& path);
void writeUint16File(const std::string& path, const uint16_t* data, std::size_t count);

// uint16 frames to float32; transpose treats each source frame as width rows of height.
void convertUint16Frames(const uint16_t* src, float* dst, int frameCount, int width, int height,
                         bool transpose);

class FrameSource {
 public:
  void setFloat(const float* frames);
  void setUint16(const uint16_t* frames, bool transpose);
  void loadFile(const std::string& path);  // throws FILENOTFOUND
  void clear();

  FrameSourceKind kind() const { return kind_; }
  bool empty() const { return kind_ == FrameSourceKind::NONE; }
  const void* pointer() const;
  bool transpose() const { return transpose_; }
  std::size_t fileValueCount() const { return file_.size(); }

  // Float32 view of frameCount frames. uint16 sources are reconverted on every call.
  const float* stage(int frameCount, int width, int height);

 private:
  FrameSourceKind kind_ = FrameSourceKind::NONE;
  const float* f32_ = nullptr;
  const uint16_t* u16_ = nullptr;
  bool transpose_ = false;
  std::vector<uint16_t> file_;
  std::vector<float> staging_;
};

struct RefCalibration {
  enum class Kind { DISABLED, INTENSITY, FIELD };
  Kind kind = Kind::DISABLED;
  bool enabled = false;
  int wavelengthCount = 0;
  int width = 0, height = 0;
  std::vector<float> intensity;  // max-normalised, wavelengthCount x height x width
  std::vector<cfloat> field;     // wavelengthCount x height x width

  // Invalid inputs disable calibration. Null data is not an error.
  ErrorCode setIntensity(const uint16_t* data, int lambdaCount, int w, int h);
  ErrorCode setField(const cfloat* data, int lambdaCount, int w, int h);
  ErrorCode setFromFile(const std::string& path, int lambdaCount, int w, int h);
  void disable();
  bool active() const { return enabled && kind != Kind::DISABLED; }
};

inline constexpr float kCalibrationFloor = 1e-6f;

}  // namespace digholo
