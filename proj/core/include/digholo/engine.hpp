#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "digholo/basis.hpp"
#include "digholo/config.hpp"
#include "digholo/error.hpp"
#include "digholo/fft.hpp"
#include "digholo/frames.hpp"
#include "digholo/metrics.hpp"
#include "digholo/pipeline.hpp"
#include "digholo/thread_pool.hpp"
#include "digholo/types.hpp"

namespace digholo {

struct BatchCalibration {
  std::vector<cfloat> cal;  // polCountCal x batchCountCal
  int polCount = 0;
  int batchCount = 0;
  bool enabled = false;
  cfloat factor(int pol, int batchIdx) const;
};

struct Viewport {
  int width = 0, height = 0;
  std::vector<uint8_t> rgb;  // height x width x 3
  std::string title;
};

struct BenchmarkResult {
  double batchesPerSecond = 0;
  std::array<double, BENCH_COUNT> info{};  // Hz per stage
};

// Per-handle processing engine: configuration, frame source, pipeline buffers.
class Engine {
 public:
  Engine();
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  HoloConfig& config() { return cfg_; }
  const HoloConfig& config() const { return cfg_; }

  void backupSave();
  ErrorCode backupLoad();

  // frame sources
  ErrorCode setFrameBuffer(const float* frames);
  ErrorCode setFrameBufferUint16(const uint16_t* frames, bool transpose);
  ErrorCode setFrameBufferFromFile(const std::string& path);
  const void* frameBuffer() const { return source_.pointer(); }
  FrameSource& frameSource() { return source_; }

  RefCalibration& refCalibration() { return refCal_; }
  BatchCalibration& batchCalibration() { return batchCal_; }
  ErrorCode setBatchCalibration(const cfloat* cal, int polCountCal, int batchCountCal);
  ErrorCode setBatchCalibrationFromFile(const std::string& path, int polCountCal, int batchCountCal);

  ErrorCode setBatch(int batchCount, const float* frames);
  ErrorCode setBatchAvg(int batchCount, const float* frames, int avgCount, int avgMode);
  ErrorCode setBatchUint16(int batchCount, const uint16_t* frames, bool transpose);
  ErrorCode setBatchAvgUint16(int batchCount, const uint16_t* frames, int avgCount, int avgMode,
                              bool transpose);

  // staged processing
  ErrorCode processFFT();
  ErrorCode processIFFT();
  ErrorCode processRemoveTilt();
  ErrorCode processExtractCoefs();
  ErrorCode processBatch();
  ErrorCode processBatchFrequencySweepLinear(double lambdaStart, double lambdaStop, int lambdaCount);
  ErrorCode processBatchWavelengthSweepArbitrary(const double* wavelengths, int lambdaCount);

  // results
  bool hasFourierPlane() const { return ran_.fft; }
  bool hasFourierWindow() const { return ran_.ifft; }
  bool hasFields() const { return ran_.tilt; }
  bool hasCoefs() const { return ran_.coefs; }
  int batchCount() const { return run_.batchCount; }
  int frameCount() const { return run_.batchCount * run_.avgCount; }
  int polCount() const { return run_.polCount; }
  int wavelengthCount() const { return static_cast<int>(run_.lambdas.size()); }
  const std::vector<double>& wavelengths() const { return run_.lambdas; }
  int fftWidth() const { return run_.nx; }
  int fftHeight() const { return run_.ny; }

  const std::vector<cfloat>& fourierPlaneFull() const { return fourierFull_; }
  int fourierWindowWidth() const { return win_.wx; }
  int fourierWindowHeight() const { return win_.wy; }
  const std::vector<cfloat>& fourierWindow() const { return windowData_; }

  int fieldWidth() const { return win_.outW; }
  int fieldHeight() const { return win_.outH; }
  const std::vector<double>& fieldXAxis() const { return win_.xAxis; }
  const std::vector<double>& fieldYAxis() const { return win_.yAxis; }
  const std::vector<int16_t>& fieldsReal16() const { return fieldR_; }
  const std::vector<int16_t>& fieldsImag16() const { return fieldI_; }
  const std::vector<float>& fieldScales() const { return fieldScale_; }
  std::vector<cfloat> fields() const;  // dequantised

  int modeCount() const { return modeCountOut_; }
  const std::vector<cfloat>& coefs() const { return coefs_; }
  std::vector<int> coefWavelengthIndex() const { return slotLambda_; }
  std::vector<int> modeGroups() const;

  const std::vector<cfloat>& basisFields(int& modeCountOut, int& width, int& height);
  const HGBasis* basis(int pol) const;

  const AnalysisSummary* summary(int plane) const;

  // applied reference calibration per (wavelength, pol) at field dimensions
  const std::vector<cfloat>& refCalibrationApplied(int& lambdaCount, int& pols) const;

  // metrics and alignment
  ErrorCode calcMetrics();
  const MetricsReport& metrics() const { return metrics_; }
  float metric(int idx) const;
  float autoAlign();
  int lastTweakIterations() const { return tweakIterations_; }

  // diagnostics
  Viewport viewport(int mode, bool forceProcessing);
  BenchmarkResult benchmark(double goalDuration);
  int estimateThreadCountOptimal(double goalDuration, int maxThreads = 0);

  ThreadPool& pool();

 private:
  friend class AutoAligner;

  struct Stages {
    bool fft = false, ifft = false, tilt = false, coefs = false;
  };
  struct RunState {
    int frameWidth = 0, frameHeight = 0;
    int nx = 0, ny = 0;
    double pixel = 0;
    int polCount = 1;
    int batchCount = 1, avgCount = 1;
    AvgMode avgMode = AvgMode::SEQUENTIAL;
    std::vector<double> lambdas;
    std::array<int, 2> ordering{0, 0};
    std::array<Region, kPolCountMax> region{};
    std::array<WindowPlacement, kPolCountMax> place{};
    std::array<double, kPolCountMax> cx{}, cy{};
  };
  struct WindowState {
    int wx = 0, wy = 0;        // Fourier window box
    int outW = 0, outH = 0;    // reconstructed field size
    double dx = 0, dy = 0;
    std::vector<double> xAxis, yAxis;
    std::vector<int> k0x, k0y;          // per (batch, pol) integer carrier bin
    std::vector<double> ftx, fty;       // per (batch, pol) carrier, cycles/m
  };

  void runFFT();
  void runIFFT();
  void runRemoveTilt();
  void runExtract();
  void runAll();
  void computeRefCalibration();
  void ensureBasis();
  int lambdaIndexOfBatch(int b) const;
  double tiltOf(int axis, int pol) const;
  double defocusOf(int pol) const;
  double waistOf(int pol) const;
  void invalidateFrom(int stage);
  ErrorCode guard(void (Engine::*fn)());

  HoloConfig cfg_;
  std::optional<HoloConfig> backup_;
  FrameSource source_;
  RefCalibration refCal_;
  BatchCalibration batchCal_;
  std::unique_ptr<ThreadPool> pool_;

  Stages ran_;
  RunState run_;
  WindowState win_;

  std::unique_ptr<FftR2C> fftPlan_;
  std::unique_ptr<FftC2C> ifftPlan_;
  std::unique_ptr<FftC2C> calPlan_;

  std::vector<cfloat> fourierFull_;
  std::vector<cfloat> windowData_;
  std::vector<cfloat> fieldPre_;
  std::vector<int16_t> fieldR_, fieldI_;
  std::vector<float> fieldScale_;
  std::vector<int> slotLambda_;
  AnalysisSummary fourierSummary_, fieldSummary_;
  std::vector<cfloat> refCalApplied_;
  int refCalLambdaCount_ = 0;

  std::array<std::unique_ptr<HGBasis>, kPolCountMax> basis_;
  std::vector<cdouble> lgTransform_;
  int lgGroups_ = -1;
  int modeCountOut_ = 0;
  std::vector<cfloat> coefs_;

  MetricsReport metrics_;
  int tweakIterations_ = 0;

  std::vector<cfloat> basisExport_;
};

}  // namespace digholo
