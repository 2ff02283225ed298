#include "digholo/batch.hpp"

#include <cmath>

namespace digholo {

int averagingFrameIndex(int b, int a, int batchCount, int avgCount, AvgMode mode, int lambdaCount) {
  switch (mode) {
    case AvgMode::INTERLACED:
      return a * batchCount + b;
    case AvgMode::SEQUENTIALSWEEP:
      if (lambdaCount > 1 && batchCount % lambdaCount == 0) {
        const int sweep = b / lambdaCount, l = b % lambdaCount;
        return (sweep * avgCount + a) * lambdaCount + l;
      }
      [[fallthrough]];
    case AvgMode::SEQUENTIAL:
    default:
      return b * avgCount + a;
  }
}

int wavelengthOrderingCalc(int idxIn, int lambdaCount, int batchCount, int orderingIn,
                           int orderingOut, int& lambdaIdx, int& subBatchIdx) {
  if (lambdaCount <= 0) {
    lambdaIdx = 0;
    subBatchIdx = 0;
    return idxIn;
  }
  const int sub = batchCount / lambdaCount;
  if (!orderingIn) {
    lambdaIdx = idxIn % lambdaCount;
    subBatchIdx = idxIn / lambdaCount;
  } else if (sub) {
    subBatchIdx = idxIn % sub;
    lambdaIdx = idxIn / sub;
  } else {
    lambdaIdx = 0;
    subBatchIdx = 0;
  }
  return orderingOut ? lambdaIdx * sub + subBatchIdx : subBatchIdx * lambdaCount + lambdaIdx;
}

int batchWavelengthIndex(int b, int batchCount, int lambdaCount, int orderingIn) {
  if (lambdaCount <= 1) return 0;
  if (!orderingIn) return b % lambdaCount;
  const int sub = batchCount / lambdaCount;
  if (sub == 0) return b % lambdaCount;
  return (b / sub) % lambdaCount;
}

std::vector<double> frequencySweepLinear(double lambdaStart, double lambdaStop, int lambdaCount) {
  if (lambdaCount < 1 || !(lambdaStart > 0) || !(lambdaStop > 0))
    throw Error(ErrorCode::INVALIDDIMENSION, "invalid sweep");
  std::vector<double> out(lambdaCount);
  if (lambdaCount == 1) {
    out[0] = lambdaStart;
    return out;
  }
  const double f0 = 1.0 / lambdaStart, f1 = 1.0 / lambdaStop;
  const double df = (f1 - f0) / (lambdaCount - 1);
  for (int k = 0; k < lambdaCount; ++k) out[k] = 1.0 / (f0 + k * df);
  return out;
}

}  // namespace digholo
