#pragma once

#include <string>
#include <utility>
#include <vector>

#include "digholo/engine.hpp"
#include "digholo/error.hpp"

namespace digholo {

// Tab-delimited settings: one directive per line, key then values. Blank lines
// and lines starting with '#' or '%' are ignored.
struct SettingsFile {
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;

  static SettingsFile parse(const std::string& text);
  static SettingsFile load(const std::string& path);  // throws FILENOTFOUND
};

// Run directives that are not configuration fields.
struct RunDirectives {
  std::string frameFile;
  bool frameTranspose = false;
  std::string summaryFile;
  std::string fieldsFile;
  std::string viewportFile;
  int viewportMode = VIEWPORT_FIELDPLANE;
  bool autoAlign = false;
  std::string refCalibrationFile;
  int refCalibrationWavelengthCount = 1;
  std::string batchCalibrationFile;
  int batchCalibrationPolCount = 1;
  int batchCalibrationBatchCount = 1;
  std::string consoleFile;
};

// Applies every recognised directive; unknown keys are reported at verbosity 1.
// Returns the first setter error, or SUCCESS.
ErrorCode applySettings(Engine& engine, const SettingsFile& settings, RunDirectives& run,
                        int* unknownCount = nullptr);

ErrorCode runBatchFromConfigFile(const std::string& path);

// Summary: "key<TAB>value" lines. Fields: interleaved float32 (re, im) in
// batch, pol, row order, plus a "<fieldsPath>.txt" sidecar with dimensions.
ErrorCode writeOutputs(Engine& engine, const std::string& summaryPath, const std::string& fieldsPath);
std::string summaryText(Engine& engine);

struct FieldsFile {
  int batchCount = 0, polCount = 0, width = 0, height = 0;
  std::vector<cfloat> data;
};
FieldsFile readFieldsFile(const std::string& fieldsPath);  // throws FILENOTFOUND / INVALIDDIMENSION

// Writes raw RGB, or a 24-bit uncompressed bitmap when the path ends in ".bmp".
ErrorCode writeViewport(const Viewport& v, const std::string& path);

}  // namespace digholo
