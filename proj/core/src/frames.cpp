#include "digholo/frames.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace digholo {

std::vector<uint16_t> readUint16File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FILENOTFOUND, "cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<uint16_t> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint16_t>(static_cast<unsigned char>(bytes[2 * i]) |
                                   (static_cast<unsigned char>(bytes[2 * i + 1]) << 8));
  return out;
}

void writeUint16File(const std::string& path, const uint16_t* data, std::size_t count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FILENOTCREATED, "cannot create " + path);
  std::vector<char> bytes(count * 2);
  for (std::size_t i = 0; i < count; ++i) {
    bytes[2 * i] = static_cast<char>(data[i] & 0xff);
    bytes[2 * i + 1] = static_cast<char>(data[i] >> 8);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::FILENOTCREATED, "write failed " + path);
}

void convertUint16Frames(const uint16_t* src, float* dst, int frameCount, int width, int height,
                         bool transpose) {
  const std::size_t fs = static_cast<std::size_t>(width) * height;
  for (int f = 0; f < frameCount; ++f) {
    const uint16_t* s = src + f * fs;
    float* d = dst + f * fs;
    if (!transpose) {
      for (std::size_t i = 0; i < fs; ++i) d[i] = static_cast<float>(s[i]);
    } else {
      for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
          d[static_cast<std::size_t>(y) * width + x] = static_cast<float>(s[static_cast<std::size_t>(x) * height + y]);
    }
  }
}

void FrameSource::setFloat(const float* frames) {
  clear();
  kind_ = FrameSourceKind::FLOAT32_EXTERNAL;
  f32_ = frames;
}

void FrameSource::setUint16(const uint16_t* frames, bool transpose) {
  clear();
  kind_ = FrameSourceKind::UINT16_EXTERNAL;
  u16_ = frames;
  transpose_ = transpose;
}

void FrameSource::loadFile(const std::string& path) {
  auto data = readUint16File(path);
  clear();
  file_ = std::move(data);
  kind_ = FrameSourceKind::INTERNAL_FILE;
}

void FrameSource::clear() {
  kind_ = FrameSourceKind::NONE;
  f32_ = nullptr;
  u16_ = nullptr;
  transpose_ = false;
  file_.clear();
  file_.shrink_to_fit();
}

const void* FrameSource::pointer() const {
  switch (kind_) {
    case FrameSourceKind::FLOAT32_EXTERNAL: return f32_;
    case FrameSourceKind::UINT16_EXTERNAL: return u16_;
    case FrameSourceKind::INTERNAL_FILE: return file_.data();
    default: return nullptr;
  }
}

const float* FrameSource::stage(int frameCount, int width, int height) {
  const std::size_t n = static_cast<std::size_t>(frameCount) * width * height;
  switch (kind_) {
    case FrameSourceKind::FLOAT32_EXTERNAL:
      return f32_;
    case FrameSourceKind::UINT16_EXTERNAL:
      staging_.resize(n);
      convertUint16Frames(u16_, staging_.data(), frameCount, width, height, transpose_);
      return staging_.data();
    case FrameSourceKind::INTERNAL_FILE:
      if (file_.size() < n) throw Error(ErrorCode::INVALIDDIMENSION, "frame file smaller than batch");
      staging_.resize(n);
      convertUint16Frames(file_.data(), staging_.data(), frameCount, width, height, false);
      return staging_.data();
    default:
      throw Error(ErrorCode::NULLPOINTER, "no frame source");
  }
}

void RefCalibration::disable() {
  kind = Kind::DISABLED;
  enabled = false;
  intensity.clear();
  field.clear();
  wavelengthCount = width = height = 0;
}

ErrorCode RefCalibration::setIntensity(const uint16_t* data, int lambdaCount, int w, int h) {
  if (!data) {
    disable();
    return ErrorCode::SUCCESS;
  }
  if (lambdaCount < 1 || w <= 0 || h <= 0) {
    disable();
    return ErrorCode::INVALIDARGUMENT;
  }
  const std::size_t n = static_cast<std::size_t>(lambdaCount) * w * h;
  disable();
  intensity.resize(n);
  uint16_t mx = 0;
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, data[i]);
  const float s = mx ? 1.0f / mx : 0.0f;
  for (std::size_t i = 0; i < n; ++i) intensity[i] = data[i] * s;
  kind = Kind::INTENSITY;
  enabled = true;
  wavelengthCount = lambdaCount;
  width = w;
  height = h;
  return ErrorCode::SUCCESS;
}

ErrorCode RefCalibration::setField(const cfloat* data, int lambdaCount, int w, int h) {
  if (!data) {
    disable();
    return ErrorCode::SUCCESS;
  }
  if (lambdaCount < 1 || w <= 0 || h <= 0) {
    disable();
    return ErrorCode::INVALIDARGUMENT;
  }
  disable();
  field.assign(data, data + static_cast<std::size_t>(lambdaCount) * w * h);
  kind = Kind::FIELD;
  enabled = true;
  wavelengthCount = lambdaCount;
  width = w;
  height = h;
  return ErrorCode::SUCCESS;
}

ErrorCode RefCalibration::setFromFile(const std::string& path, int lambdaCount, int w, int h) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) {
    disable();
    return ErrorCode::FILENOTFOUND;
  }
  if (lambdaCount < 1 || w <= 0 || h <= 0) {
    disable();
    return ErrorCode::INVALIDARGUMENT;
  }
  const std::size_t bytes = static_cast<std::size_t>(in.tellg());
  const std::size_t n = static_cast<std::size_t>(lambdaCount) * w * h;
  in.seekg(0);
  std::vector<char> buf(bytes);
  in.read(buf.data(), static_cast<std::streamsize>(bytes));
  if (bytes == 2 * n) {
    std::vector<uint16_t> v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = static_cast<uint16_t>(static_cast<unsigned char>(buf[2 * i]) |
                                   (static_cast<unsigned char>(buf[2 * i + 1]) << 8));
    return setIntensity(v.data(), lambdaCount, w, h);
  }
  if (bytes == 8 * n) {
    std::vector<cfloat> v(n);
    std::memcpy(v.data(), buf.data(), bytes);
    return setField(v.data(), lambdaCount, w, h);
  }
  disable();
  return ErrorCode::INVALIDDIMENSION;
}

}  // namespace digholo
