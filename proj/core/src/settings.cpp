#include "digholo/settings.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

#include "digholo/config_access.hpp"
#include "digholo/console.hpp"

namespace digholo {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

const char* kMetricNames[METRIC_COUNT] = {"IL",       "MDL",     "DIAG",     "SNRAVG", "DIAGBEST",
                                          "DIAGWORST", "SNRBEST", "SNRWORST", "SNRMG"};
const char* kAnalysisNames[ANALYSIS_COUNT] = {"totalPower", "comX", "comY",    "maxAbs",
                                              "maxAbsIdx",  "aeff", "comYWrap"};

int toInt(const std::vector<std::string>& v, size_t i, int fallback) {
  if (i >= v.size()) return fallback;
  return std::atoi(v[i].c_str());
}

}  // namespace

SettingsFile SettingsFile::parse(const std::string& text) {
  SettingsFile f;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == '%') continue;
    std::vector<std::string> tok;
    if (t.find('\t') != std::string::npos) {
      std::string cur;
      std::istringstream ls(t);
      while (std::getline(ls, cur, '\t')) {
        cur = trim(cur);
        if (!cur.empty()) tok.push_back(cur);
      }
    } else {
      std::istringstream ls(t);
      std::string cur;
      while (ls >> cur) tok.push_back(cur);
    }
    if (tok.empty()) continue;
    f.entries.emplace_back(tok[0], std::vector<std::string>(tok.begin() + 1, tok.end()));
  }
  return f;
}

SettingsFile SettingsFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FILENOTFOUND, "cannot open settings file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

ErrorCode applySettings(Engine& engine, const SettingsFile& settings, RunDirectives& run,
                        int* unknownCount) {
  ErrorCode first = ErrorCode::SUCCESS;
  int unknown = 0;
  HoloConfig& c = engine.config();
  for (const auto& [key, values] : settings.entries) {
    const std::string k = lower(key);
    const std::string v0 = values.empty() ? std::string() : values[0];
    ErrorCode ec = ErrorCode::SUCCESS;
    if (k == "framebufferfilename" || k == "framebuffer" || k == "framefilename") {
      run.frameFile = v0;
    } else if (k == "framebuffertranspose") {
      run.frameTranspose = toInt(values, 0, 0) != 0;
    } else if (k == "outputfilesummary" || k == "outputfilenamesummary") {
      run.summaryFile = v0;
    } else if (k == "outputfilenamefields" || k == "outputfilefields") {
      run.fieldsFile = v0;
    } else if (k == "outputfilenameviewport" || k == "outputfileviewport") {
      run.viewportFile = v0;
    } else if (k == "viewportmode") {
      run.viewportMode = toInt(values, 0, run.viewportMode);
    } else if (k == "autoalign") {
      run.autoAlign = toInt(values, 0, 1) != 0;
    } else if (k == "refcalibrationfilename") {
      run.refCalibrationFile = v0;
      run.refCalibrationWavelengthCount = toInt(values, 1, 1);
    } else if (k == "batchcalibrationfilename") {
      run.batchCalibrationFile = v0;
      run.batchCalibrationPolCount = toInt(values, 1, 1);
      run.batchCalibrationBatchCount = toInt(values, 2, 1);
    } else if (k == "consoleredirect" || k == "consolefilename") {
      run.consoleFile = v0;
    } else {
      bool recognised = false;
      ec = cfg::setNamed(c, key, values, recognised);
      if (!recognised) {
        ++unknown;
        ec = ErrorCode::SUCCESS;
        console::print(c.verbosity, 1, "digholo: unrecognised setting '%s'\n", key.c_str());
      }
    }
    if (ec != ErrorCode::SUCCESS) {
      console::print(c.verbosity, 1, "digholo: setting '%s' rejected (%s)\n", key.c_str(), errorName(ec));
      if (first == ErrorCode::SUCCESS) first = ec;
    }
  }
  if (unknownCount) *unknownCount = unknown;
  return first;
}

std::string summaryText(Engine& e) {
  std::string out;
  char buf[256];
  auto line = [&](const std::string& key, double v) {
    char val[64];
    std::snprintf(val, sizeof val, "\t%.9g\n", v);
    out += key;
    out += val;
  };
  line("batchCount", e.batchCount());
  line("polCount", e.polCount());
  line("wavelengthCount", e.wavelengthCount());
  line("modeCount", e.modeCount());
  line("fieldWidth", e.fieldWidth());
  line("fieldHeight", e.fieldHeight());
  for (size_t l = 0; l < e.wavelengths().size(); ++l) {
    std::snprintf(buf, sizeof buf, "wavelength.%zu", l);
    line(buf, e.wavelengths()[l]);
  }
  const MetricsReport& m = e.metrics();
  for (int k = 0; k < METRIC_COUNT && !m.values.empty(); ++k) {
    std::snprintf(buf, sizeof buf, "metric.%s", kMetricNames[k]);
    line(buf, m.average(k));
    for (int l = 0; m.wavelengthCount > 1 && l < m.wavelengthCount; ++l) {
      std::snprintf(buf, sizeof buf, "metric.%s.%d", kMetricNames[k], l);
      line(buf, m.get(k, l));
    }
  }
  const char* planes[2] = {"fourier", "field"};
  for (int plane = 0; plane < 2; ++plane) {
    const AnalysisSummary* s = e.summary(plane);
    if (!s) continue;
    const int agg = s->totalCount - 1;
    for (int p = 0; p < s->polCount; ++p)
      for (int a = 0; a < ANALYSIS_COUNT; ++a) {
        std::snprintf(buf, sizeof buf, "%s.%s.pol%d", planes[plane], kAnalysisNames[a], p);
        const float v = s->at(a, p, agg);
        line(buf, a == ANALYSIS_MAXABSIDX ? static_cast<double>(unpackIndex(v)) : static_cast<double>(v));
      }
  }
  const HoloConfig& c = e.config();
  for (int p = 0; p < c.polCount; ++p) {
    std::snprintf(buf, sizeof buf, "tiltX.pol%d", p);
    line(buf, c.tilt[0][p]);
    std::snprintf(buf, sizeof buf, "tiltY.pol%d", p);
    line(buf, c.tilt[1][p]);
    std::snprintf(buf, sizeof buf, "beamCentreX.pol%d", p);
    line(buf, c.beamCentre[0][p]);
    std::snprintf(buf, sizeof buf, "beamCentreY.pol%d", p);
    line(buf, c.beamCentre[1][p]);
    std::snprintf(buf, sizeof buf, "defocus.pol%d", p);
    line(buf, c.defocus[p]);
    std::snprintf(buf, sizeof buf, "basisWaist.pol%d", p);
    line(buf, c.basisWaist[p]);
  }
  line("fourierWindowRadius", c.fourierWindowRadius);
  return out;
}

ErrorCode writeOutputs(Engine& e, const std::string& summaryPath, const std::string& fieldsPath) {
  if (!summaryPath.empty()) {
    std::ofstream out(summaryPath);
    if (!out) return ErrorCode::FILENOTCREATED;
    out << summaryText(e);
    if (!out) return ErrorCode::FILENOTCREATED;
  }
  if (!fieldsPath.empty()) {
    if (!e.hasFields()) return ErrorCode::NULLPOINTER;
    const auto f = e.fields();
    std::ofstream out(fieldsPath, std::ios::binary);
    if (!out) return ErrorCode::FILENOTCREATED;
    out.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(cfloat)));
    if (!out) return ErrorCode::FILENOTCREATED;
    std::ofstream side(fieldsPath + ".txt");
    if (!side) return ErrorCode::FILENOTCREATED;
    side << "batchCount\t" << e.batchCount() << "\npolCount\t" << e.polCount() << "\nwidth\t"
         << e.fieldWidth() << "\nheight\t" << e.fieldHeight()
         << "\nformat\tfloat32 interleaved real imag\norder\tbatch pol y x\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", e.fieldXAxis().size() > 1 ? e.fieldXAxis()[1] - e.fieldXAxis()[0] : 0.0);
    side << "pixelSize\t" << buf << "\n";
  }
  return ErrorCode::SUCCESS;
}

FieldsFile readFieldsFile(const std::string& path) {
  FieldsFile f;
  const SettingsFile side = SettingsFile::load(path + ".txt");
  for (const auto& [k, v] : side.entries) {
    const std::string key = lower(k);
    if (key == "batchcount") f.batchCount = toInt(v, 0, 0);
    if (key == "polcount") f.polCount = toInt(v, 0, 0);
    if (key == "width") f.width = toInt(v, 0, 0);
    if (key == "height") f.height = toInt(v, 0, 0);
  }
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::FILENOTFOUND, "cannot open " + path);
  const size_t bytes = static_cast<size_t>(in.tellg());
  const size_t n = static_cast<size_t>(f.batchCount) * f.polCount * f.width * f.height;
  if (bytes != n * sizeof(cfloat)) throw Error(ErrorCode::INVALIDDIMENSION, "fields file size mismatch");
  in.seekg(0);
  f.data.resize(n);
  in.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(bytes));
  return f;
}

ErrorCode writeViewport(const Viewport& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return ErrorCode::FILENOTCREATED;
  const bool bmp = path.size() >= 4 && lower(path.substr(path.size() - 4)) == ".bmp";
  if (!bmp) {
    out.write(reinterpret_cast<const char*>(v.rgb.data()), static_cast<std::streamsize>(v.rgb.size()));
    return out ? ErrorCode::SUCCESS : ErrorCode::FILENOTCREATED;
  }
  const int rowBytes = (v.width * 3 + 3) & ~3;
  const uint32_t imageSize = static_cast<uint32_t>(rowBytes) * v.height;
  std::vector<uint8_t> h(54, 0);
  auto put32 = [&](int off, uint32_t x) {
    for (int i = 0; i < 4; ++i) h[off + i] = static_cast<uint8_t>(x >> (8 * i));
  };
  h[0] = 'B';
  h[1] = 'M';
  put32(2, 54 + imageSize);
  put32(10, 54);
  put32(14, 40);
  put32(18, static_cast<uint32_t>(v.width));
  put32(22, static_cast<uint32_t>(v.height));
  h[26] = 1;
  h[28] = 24;
  put32(34, imageSize);
  put32(38, 2835);
  put32(42, 2835);
  out.write(reinterpret_cast<const char*>(h.data()), 54);
  std::vector<uint8_t> row(rowBytes, 0);
  for (int y = v.height - 1; y >= 0; --y) {
    for (int x = 0; x < v.width; ++x) {
      const uint8_t* px = &v.rgb[(static_cast<size_t>(y) * v.width + x) * 3];
      row[x * 3 + 0] = px[2];
      row[x * 3 + 1] = px[1];
      row[x * 3 + 2] = px[0];
    }
    out.write(reinterpret_cast<const char*>(row.data()), rowBytes);
  }
  return out ? ErrorCode::SUCCESS : ErrorCode::FILENOTCREATED;
}

ErrorCode runBatchFromConfigFile(const std::string& path) {
  SettingsFile settings;
  try {
    settings = SettingsFile::load(path);
  } catch (const Error& e) {
    return e.code();
  }
  try {
    auto engine = std::make_unique<Engine>();
    RunDirectives run;
    applySettings(*engine, settings, run);
    HoloConfig& c = engine->config();
    bool redirected = false;
    if (!run.consoleFile.empty()) {
      if (console::redirectToFile(run.consoleFile) != ErrorCode::SUCCESS) return ErrorCode::FILENOTCREATED;
      redirected = true;
    }
    struct Restore {
      bool on;
      ~Restore() {
        if (on) console::restore();
      }
    } restore{redirected};

    if (run.frameFile.empty()) {
      console::print(c.verbosity, 1, "digholo: no frame file specified\n");
      return ErrorCode::NULLPOINTER;
    }
    if (auto ec = engine->setFrameBufferFromFile(run.frameFile); ec != ErrorCode::SUCCESS) return ec;
    if (!run.refCalibrationFile.empty()) {
      const ErrorCode ec = engine->refCalibration().setFromFile(
          run.refCalibrationFile, run.refCalibrationWavelengthCount, c.frameWidth, c.frameHeight);
      if (ec != ErrorCode::SUCCESS) return ec;
    }
    if (!run.batchCalibrationFile.empty()) {
      const ErrorCode ec = engine->setBatchCalibrationFromFile(
          run.batchCalibrationFile, run.batchCalibrationPolCount, run.batchCalibrationBatchCount);
      if (ec != ErrorCode::SUCCESS) return ec;
    }
    if (engine->processBatch() != ErrorCode::SUCCESS) return ErrorCode::ERROR;
    if (run.autoAlign) engine->autoAlign();
    if (engine->hasCoefs()) engine->calcMetrics();
    console::print(c.verbosity, 1, "digholo: processed %d batch elements from %s\n", engine->batchCount(),
                   run.frameFile.c_str());
    if (auto ec = writeOutputs(*engine, run.summaryFile, run.fieldsFile); ec != ErrorCode::SUCCESS) return ec;
    if (!run.viewportFile.empty()) {
      const Viewport v = engine->viewport(run.viewportMode, false);
      if (auto ec = writeViewport(v, run.viewportFile); ec != ErrorCode::SUCCESS) return ec;
    }
  } catch (const std::bad_alloc&) {
    return ErrorCode::MEMORYALLOCATION;
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::SUCCESS;
}

}  // namespace digholo
