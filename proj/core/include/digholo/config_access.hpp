#pragma once

#include <string>
#include <vector>

#include "digholo/config.hpp"
#include "digholo/error.hpp"

// Validated setters shared by the C interface and the settings-file runner.
namespace digholo::cfg {

ErrorCode setFrameDimensions(HoloConfig& c, int width, int height);
ErrorCode setFramePixelSize(HoloConfig& c, double pixelSize);
ErrorCode setPolCount(HoloConfig& c, int polCount);
// Return the size actually set (floored to a multiple of 16), 0 when rejected.
int setFftWindowSizeX(HoloConfig& c, int width);
int setFftWindowSizeY(HoloConfig& c, int height);
ErrorCode setFourierWindowRadius(HoloConfig& c, double radius);
ErrorCode setResolutionMode(HoloConfig& c, int mode);

ErrorCode setTilt(HoloConfig& c, int axis, int pol, double value);
ErrorCode setBeamCentre(HoloConfig& c, int axis, int pol, double value);
ErrorCode setDefocus(HoloConfig& c, int pol, double value);
ErrorCode setBasisWaist(HoloConfig& c, int pol, double value);

ErrorCode setBasisGroupCount(HoloConfig& c, int groupCount);
ErrorCode setBasisType(HoloConfig& c, int type);
ErrorCode setBasisTypeCustom(HoloConfig& c, int modeCountIn, int modeCountOut, const cfloat* transform);

ErrorCode setWavelengthCentre(HoloConfig& c, double lambda);
ErrorCode setWavelengths(HoloConfig& c, const double* lambdas, int count);
ErrorCode setWavelengthsLinearFrequency(HoloConfig& c, double start, double stop, int count);
ErrorCode setWavelengthOrdering(HoloConfig& c, int inout, int ordering);

ErrorCode setAutoAlignMode(HoloConfig& c, int mode);
ErrorCode setAutoAlignGoalIdx(HoloConfig& c, int goal);
ErrorCode setAutoAlignTol(HoloConfig& c, double tol);
ErrorCode setThreadCount(HoloConfig& c, int threads);
ErrorCode setVerbosity(HoloConfig& c, int verbosity);
ErrorCode setFftPlanMode(HoloConfig& c, int mode);
ErrorCode setBatchCount(HoloConfig& c, int count);
ErrorCode setAvgCount(HoloConfig& c, int count);
ErrorCode setAvgMode(HoloConfig& c, int mode);

inline constexpr int kThreadCountMax = 1024;

// Named, case-insensitive access used by settings files. Returns INVALIDARGUMENT
// for unknown keys (recognised = false) or malformed values.
ErrorCode setNamed(HoloConfig& c, const std::string& key, const std::vector<std::string>& values,
                   bool& recognised);
// Tab-delimited settings text reproducing every named field.
std::string emitSettings(const HoloConfig& c);
// Keys understood by setNamed, in emit order.
std::vector<std::string> namedKeys();

}  // namespace digholo::cfg
