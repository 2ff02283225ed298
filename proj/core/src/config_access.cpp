#include "digholo/config_access.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "digholo/batch.hpp"
#include "digholo/console.hpp"

namespace digholo::cfg {

namespace {

bool finite(double v) { return std::isfinite(v); }

ErrorCode checkAxisPol(int axis, int pol) {
  if (axis < 0 || axis > 1) return ErrorCode::INVALIDAXIS;
  if (pol < 0 || pol >= kPolCountMax) return ErrorCode::INVALIDPOLARISATION;
  return ErrorCode::SUCCESS;
}

}  // namespace

ErrorCode setFrameDimensions(HoloConfig& c, int width, int height) {
  const int w = floorToQuanta(width), h = floorToQuanta(height);
  if (w <= 0 || h <= 0) return ErrorCode::INVALIDDIMENSION;
  c.frameWidth = w;
  c.frameHeight = h;
  return ErrorCode::SUCCESS;
}

ErrorCode setFramePixelSize(HoloConfig& c, double p) {
  if (!(p > 0) || !finite(p)) return ErrorCode::INVALIDDIMENSION;
  c.framePixelSize = p;
  return ErrorCode::SUCCESS;
}

ErrorCode setPolCount(HoloConfig& c, int polCount) {
  if (polCount < 1 || polCount > kPolCountMax) return ErrorCode::INVALIDPOLARISATION;
  c.polCount = polCount;
  return ErrorCode::SUCCESS;
}

int setFftWindowSizeX(HoloConfig& c, int width) {
  if (width < 0) return 0;
  c.fftWindowSizeX = floorToQuanta(width);
  return c.fftWindowSizeX;
}

int setFftWindowSizeY(HoloConfig& c, int height) {
  if (height < 0) return 0;
  c.fftWindowSizeY = floorToQuanta(height);
  return c.fftWindowSizeY;
}

ErrorCode setFourierWindowRadius(HoloConfig& c, double r) {
  if (!finite(r) || r < 0) return ErrorCode::INVALIDARGUMENT;
  c.fourierWindowRadius = r;
  return ErrorCode::SUCCESS;
}

ErrorCode setResolutionMode(HoloConfig& c, int mode) {
  if (mode < 0 || mode > 1) return ErrorCode::INVALIDARGUMENT;
  c.resolutionMode = mode;
  return ErrorCode::SUCCESS;
}

ErrorCode setTilt(HoloConfig& c, int axis, int pol, double v) {
  if (auto e = checkAxisPol(axis, pol); e != ErrorCode::SUCCESS) return e;
  if (!finite(v)) return ErrorCode::INVALIDARGUMENT;
  c.tilt[axis][pol] = v;
  return ErrorCode::SUCCESS;
}

ErrorCode setBeamCentre(HoloConfig& c, int axis, int pol, double v) {
  if (auto e = checkAxisPol(axis, pol); e != ErrorCode::SUCCESS) return e;
  if (!finite(v)) return ErrorCode::INVALIDARGUMENT;
  c.beamCentre[axis][pol] = v;
  return ErrorCode::SUCCESS;
}

ErrorCode setDefocus(HoloConfig& c, int pol, double v) {
  if (pol < 0 || pol >= kPolCountMax) return ErrorCode::INVALIDPOLARISATION;
  if (!finite(v)) return ErrorCode::INVALIDARGUMENT;
  c.defocus[pol] = v;
  return ErrorCode::SUCCESS;
}

ErrorCode setBasisWaist(HoloConfig& c, int pol, double v) {
  if (pol < 0 || pol >= kPolCountMax) return ErrorCode::INVALIDPOLARISATION;
  if (!(v > 0) || !finite(v)) return ErrorCode::INVALIDARGUMENT;
  c.basisWaist[pol] = v;
  return ErrorCode::SUCCESS;
}

ErrorCode setBasisGroupCount(HoloConfig& c, int groupCount) {
  const int g = std::abs(groupCount);
  if (c.basisType == BasisType::LG && g > kLGGroupMax) return ErrorCode::INVALIDARGUMENT;
  c.basisGroupCount = g;
  return ErrorCode::SUCCESS;
}

ErrorCode setBasisType(HoloConfig& c, int type) {
  if (type < 0 || type > 2) return ErrorCode::INVALIDARGUMENT;
  if (type == static_cast<int>(BasisType::LG) && c.basisGroupCount > kLGGroupMax)
    return ErrorCode::INVALIDARGUMENT;
  c.basisType = static_cast<BasisType>(type);
  return ErrorCode::SUCCESS;
}

ErrorCode setBasisTypeCustom(HoloConfig& c, int in, int out, const cfloat* T) {
  if (!T) return ErrorCode::NULLPOINTER;
  if (in < 1 || out < 1) return ErrorCode::INVALIDDIMENSION;
  c.customTransform.assign(T, T + static_cast<size_t>(in) * out);
  c.customModeCountIn = in;
  c.customModeCountOut = out;
  c.basisType = BasisType::CUSTOM;
  return ErrorCode::SUCCESS;
}

ErrorCode setWavelengthCentre(HoloConfig& c, double lambda) {
  if (!(lambda > 0) || !finite(lambda)) return ErrorCode::INVALIDARGUMENT;
  c.wavelengthCentre = lambda;
  return ErrorCode::SUCCESS;
}

ErrorCode setWavelengths(HoloConfig& c, const double* l, int count) {
  if (!l) return ErrorCode::NULLPOINTER;
  if (count < 1) return ErrorCode::INVALIDDIMENSION;
  for (int i = 0; i < count; ++i)
    if (!(l[i] > 0) || !finite(l[i])) return ErrorCode::INVALIDDIMENSION;
  c.wavelengths.assign(l, l + count);
  return ErrorCode::SUCCESS;
}

ErrorCode setWavelengthsLinearFrequency(HoloConfig& c, double start, double stop, int count) {
  try {
    c.wavelengths = frequencySweepLinear(start, stop, count);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::SUCCESS;
}

ErrorCode setWavelengthOrdering(HoloConfig& c, int inout, int ordering) {
  if (inout < 0 || inout > 1 || ordering < 0 || ordering > 1) return ErrorCode::INVALIDARGUMENT;
  c.wavelengthOrdering[inout] = ordering;
  return ErrorCode::SUCCESS;
}

ErrorCode setAutoAlignMode(HoloConfig& c, int mode) {
  if (mode < 0 || mode > 2) return ErrorCode::INVALIDARGUMENT;
  c.autoAlignMode = static_cast<AutoAlignMode>(mode);
  return ErrorCode::SUCCESS;
}

ErrorCode setAutoAlignGoalIdx(HoloConfig& c, int goal) {
  if (goal < 0 || goal >= METRIC_COUNT) return ErrorCode::INVALIDARGUMENT;
  c.autoAlignGoalIdx = goal;
  return ErrorCode::SUCCESS;
}

ErrorCode setAutoAlignTol(HoloConfig& c, double tol) {
  if (!finite(tol)) return ErrorCode::INVALIDARGUMENT;
  c.autoAlignTol = tol;
  return ErrorCode::SUCCESS;
}

ErrorCode setThreadCount(HoloConfig& c, int threads) {
  c.threadCount = (threads < 1 || threads > kThreadCountMax) ? HoloConfig::defaultThreadCount() : threads;
  return ErrorCode::SUCCESS;
}

ErrorCode setVerbosity(HoloConfig& c, int v) {
  c.verbosity = console::clampVerbosity(v);
  return ErrorCode::SUCCESS;
}

ErrorCode setFftPlanMode(HoloConfig& c, int mode) {
  if (mode < 0 || mode > 3) return ErrorCode::INVALIDARGUMENT;
  c.fftPlanMode = mode;
  return ErrorCode::SUCCESS;
}

ErrorCode setBatchCount(HoloConfig& c, int count) {
  if (count < 1) return ErrorCode::INVALIDARGUMENT;
  c.batchCount = count;
  return ErrorCode::SUCCESS;
}

ErrorCode setAvgCount(HoloConfig& c, int count) {
  if (count < 1) return ErrorCode::INVALIDARGUMENT;
  c.avgCount = count;
  return ErrorCode::SUCCESS;
}

ErrorCode setAvgMode(HoloConfig& c, int mode) {
  c.avgMode = (mode < 0 || mode > 2) ? AvgMode::SEQUENTIAL : static_cast<AvgMode>(mode);
  return ErrorCode::SUCCESS;
}

// ---------------------------------------------------------------- named access

namespace {

using Values = std::vector<double>;

struct Entry {
  const char* name;
  std::function<ErrorCode(HoloConfig&, const Values&)> set;
  std::function<Values(const HoloConfig&)> get;
};

ErrorCode need(const Values& v, size_t n) {
  return v.size() < n ? ErrorCode::INVALIDARGUMENT : ErrorCode::SUCCESS;
}

int asInt(double v) { return static_cast<int>(std::lround(v)); }

Entry flag(const char* name, bool HoloConfig::*m) {
  return {name,
          [m](HoloConfig& c, const Values& v) {
            if (auto e = need(v, 1); e != ErrorCode::SUCCESS) return e;
            c.*m = v[0] != 0;
            return ErrorCode::SUCCESS;
          },
          [m](const HoloConfig& c) { return Values{c.*m ? 1.0 : 0.0}; }};
}

template <typename F>
Entry scalar(const char* name, F setter, std::function<double(const HoloConfig&)> getter) {
  return {name,
          [setter](HoloConfig& c, const Values& v) {
            if (auto e = need(v, 1); e != ErrorCode::SUCCESS) return e;
            return setter(c, v[0]);
          },
          [getter](const HoloConfig& c) { return Values{getter(c)}; }};
}

Entry perPol(const char* name, std::function<ErrorCode(HoloConfig&, int, double)> setter,
             std::function<double(const HoloConfig&, int)> getter) {
  return {name,
          [setter](HoloConfig& c, const Values& v) {
            if (v.empty() || v.size() > static_cast<size_t>(kPolCountMax)) return ErrorCode::INVALIDARGUMENT;
            for (size_t p = 0; p < v.size(); ++p)
              if (auto e = setter(c, static_cast<int>(p), v[p]); e != ErrorCode::SUCCESS) return e;
            return ErrorCode::SUCCESS;
          },
          [getter](const HoloConfig& c) {
            Values out;
            for (int p = 0; p < kPolCountMax; ++p) out.push_back(getter(c, p));
            return out;
          }};
}

const std::vector<Entry>& table() {
  static const std::vector<Entry> t = {
      {"FrameDimensions",
       [](HoloConfig& c, const Values& v) {
         if (auto e = need(v, 2); e != ErrorCode::SUCCESS) return e;
         return setFrameDimensions(c, asInt(v[0]), asInt(v[1]));
       },
       [](const HoloConfig& c) { return Values{double(c.frameWidth), double(c.frameHeight)}; }},
      scalar("FrameWidth", [](HoloConfig& c, double v) { return setFrameDimensions(c, asInt(v), c.frameHeight); },
             [](const HoloConfig& c) { return double(c.frameWidth); }),
      scalar("FrameHeight", [](HoloConfig& c, double v) { return setFrameDimensions(c, c.frameWidth, asInt(v)); },
             [](const HoloConfig& c) { return double(c.frameHeight); }),
      scalar("FramePixelSize", [](HoloConfig& c, double v) { return setFramePixelSize(c, v); },
             [](const HoloConfig& c) { return c.framePixelSize; }),
      scalar("PolCount", [](HoloConfig& c, double v) { return setPolCount(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.polCount); }),
      scalar("fftWindowSizeX",
             [](HoloConfig& c, double v) {
               return setFftWindowSizeX(c, asInt(v)) > 0 ? ErrorCode::SUCCESS : ErrorCode::INVALIDDIMENSION;
             },
             [](const HoloConfig& c) { return double(c.fftWindowSizeX); }),
      scalar("fftWindowSizeY",
             [](HoloConfig& c, double v) {
               return setFftWindowSizeY(c, asInt(v)) > 0 ? ErrorCode::SUCCESS : ErrorCode::INVALIDDIMENSION;
             },
             [](const HoloConfig& c) { return double(c.fftWindowSizeY); }),
      scalar("FourierWindowRadius", [](HoloConfig& c, double v) { return setFourierWindowRadius(c, v); },
             [](const HoloConfig& c) { return c.fourierWindowRadius; }),
      scalar("IFFTResolutionMode", [](HoloConfig& c, double v) { return setResolutionMode(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.resolutionMode); }),
      flag("FillFactorCorrectionEnabled", &HoloConfig::fillFactorCorrection),
      perPol("BeamCentreX", [](HoloConfig& c, int p, double v) { return setBeamCentre(c, 0, p, v); },
             [](const HoloConfig& c, int p) { return c.beamCentre[0][p]; }),
      perPol("BeamCentreY", [](HoloConfig& c, int p, double v) { return setBeamCentre(c, 1, p, v); },
             [](const HoloConfig& c, int p) { return c.beamCentre[1][p]; }),
      perPol("TiltX", [](HoloConfig& c, int p, double v) { return setTilt(c, 0, p, v); },
             [](const HoloConfig& c, int p) { return c.tilt[0][p]; }),
      perPol("TiltY", [](HoloConfig& c, int p, double v) { return setTilt(c, 1, p, v); },
             [](const HoloConfig& c, int p) { return c.tilt[1][p]; }),
      perPol("Defocus", [](HoloConfig& c, int p, double v) { return setDefocus(c, p, v); },
             [](const HoloConfig& c, int p) { return c.defocus[p]; }),
      perPol("BasisWaist", [](HoloConfig& c, int p, double v) { return setBasisWaist(c, p, v); },
             [](const HoloConfig& c, int p) { return c.basisWaist[p]; }),
      scalar("BasisGroupCount", [](HoloConfig& c, double v) { return setBasisGroupCount(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.basisGroupCount); }),
      scalar("BasisType", [](HoloConfig& c, double v) { return setBasisType(c, asInt(v)); },
             [](const HoloConfig& c) { return double(static_cast<int>(c.basisType)); }),
      scalar("WavelengthCentre", [](HoloConfig& c, double v) { return setWavelengthCentre(c, v); },
             [](const HoloConfig& c) { return c.wavelengthCentre; }),
      {"Wavelengths",
       [](HoloConfig& c, const Values& v) {
         if (v.empty()) {
           c.wavelengths.clear();
           return ErrorCode::SUCCESS;
         }
         return setWavelengths(c, v.data(), static_cast<int>(v.size()));
       },
       [](const HoloConfig& c) { return c.wavelengths; }},
      scalar("WavelengthOrderingInput", [](HoloConfig& c, double v) { return setWavelengthOrdering(c, 0, asInt(v)); },
             [](const HoloConfig& c) { return double(c.wavelengthOrdering[0]); }),
      scalar("WavelengthOrderingOutput", [](HoloConfig& c, double v) { return setWavelengthOrdering(c, 1, asInt(v)); },
             [](const HoloConfig& c) { return double(c.wavelengthOrdering[1]); }),
      flag("PolLockTilt", &HoloConfig::polLockTilt),
      flag("PolLockDefocus", &HoloConfig::polLockDefocus),
      flag("PolLockBasisWaist", &HoloConfig::polLockBasisWaist),
      flag("AutoAlignTilt", &HoloConfig::autoAlignTilt),
      flag("AutoAlignBeamCentre", &HoloConfig::autoAlignBeamCentre),
      flag("AutoAlignDefocus", &HoloConfig::autoAlignDefocus),
      flag("AutoAlignBasisWaist", &HoloConfig::autoAlignBasisWaist),
      flag("AutoAlignFourierWindowRadius", &HoloConfig::autoAlignFourierWindowRadius),
      scalar("AutoAlignTol", [](HoloConfig& c, double v) { return setAutoAlignTol(c, v); },
             [](const HoloConfig& c) { return c.autoAlignTol; }),
      scalar("AutoAlignMode", [](HoloConfig& c, double v) { return setAutoAlignMode(c, asInt(v)); },
             [](const HoloConfig& c) { return double(static_cast<int>(c.autoAlignMode)); }),
      scalar("AutoAlignGoalIdx", [](HoloConfig& c, double v) { return setAutoAlignGoalIdx(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.autoAlignGoalIdx); }),
      flag("AutoAlignPolIndependence", &HoloConfig::autoAlignPolIndependence),
      flag("AutoAlignBasisMulConjTrans", &HoloConfig::autoAlignBasisMulConjTrans),
      scalar("ThreadCount", [](HoloConfig& c, double v) { return setThreadCount(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.threadCount); }),
      scalar("Verbosity", [](HoloConfig& c, double v) { return setVerbosity(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.verbosity); }),
      scalar("FFTWPlanMode", [](HoloConfig& c, double v) { return setFftPlanMode(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.fftPlanMode); }),
      scalar("BatchCount", [](HoloConfig& c, double v) { return setBatchCount(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.batchCount); }),
      scalar("BatchAvgCount", [](HoloConfig& c, double v) { return setAvgCount(c, asInt(v)); },
             [](const HoloConfig& c) { return double(c.avgCount); }),
      scalar("BatchAvgMode", [](HoloConfig& c, double v) { return setAvgMode(c, asInt(v)); },
             [](const HoloConfig& c) { return double(static_cast<int>(c.avgMode)); }),
  };
  return t;
}

bool iequals(const std::string& a, const char* b) {
  size_t n = 0;
  for (; b[n]; ++n)
    if (n >= a.size() || std::tolower(static_cast<unsigned char>(a[n])) !=
                             std::tolower(static_cast<unsigned char>(b[n])))
      return false;
  return n == a.size();
}

bool parseNumber(const std::string& s, double& out) {
  const char* p = s.c_str();
  char* end = nullptr;
  out = std::strtod(p, &end);
  return end != p && *end == '\0';
}

}  // namespace

ErrorCode setNamed(HoloConfig& c, const std::string& key, const std::vector<std::string>& values,
                   bool& recognised) {
  recognised = false;
  for (const Entry& e : table()) {
    if (!iequals(key, e.name)) continue;
    recognised = true;
    Values v;
    for (const auto& s : values) {
      double d;
      if (!parseNumber(s, d)) return ErrorCode::INVALIDARGUMENT;
      v.push_back(d);
    }
    return e.set(c, v);
  }
  return ErrorCode::INVALIDARGUMENT;
}

std::string emitSettings(const HoloConfig& c) {
  std::string out;
  char buf[64];
  for (const Entry& e : table()) {
    if (iequals("FrameWidth", e.name) || iequals("FrameHeight", e.name)) continue;
    const Values v = e.get(c);
    if (v.empty()) continue;
    out += e.name;
    for (double d : v) {
      std::snprintf(buf, sizeof buf, "\t%.17g", d);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> namedKeys() {
  std::vector<std::string> k;
  for (const Entry& e : table()) k.emplace_back(e.name);
  return k;
}

}  // namespace digholo::cfg
