#pragma once

#include <cstddef>
#include <vector>

#include "digholo/error.hpp"
#include "digholo/types.hpp"

namespace digholo {

// Frame index of averaging member a (of avgCount) for output batch element b.
int averagingFrameIndex(int b, int a, int batchCount, int avgCount, AvgMode mode, int lambdaCount);

// Maps an index between wavelength orderings; also reports its wavelength and
// sub-batch indices under the input ordering.
int wavelengthOrderingCalc(int idxIn, int lambdaCount, int batchCount, int orderingIn,
                           int orderingOut, int& lambdaIdx, int& subBatchIdx);

// Wavelength index of batch element b under the given input ordering, with
// modular wrap when the batch has more elements than wavelengths.
int batchWavelengthIndex(int b, int batchCount, int lambdaCount, int orderingIn);

// 1/lambda linearly spaced from start to stop.
std::vector<double> frequencySweepLinear(double lambdaStart, double lambdaStop, int lambdaCount);

// Permutes elements (each blockSize values) between FAST and SLOW layouts.
template <typename T>
std::vector<T> applyWavelengthOrdering(const std::vector<T>& data, int lambdaCount,
                                       int orderingIn, int orderingOut, std::size_t blockSize = 1) {
  if (lambdaCount <= 0 || blockSize == 0 || data.size() % blockSize)
    throw Error(ErrorCode::INVALIDARGUMENT, "bad ordering dimensions");
  const std::size_t count = data.size() / blockSize;
  if (count % static_cast<std::size_t>(lambdaCount))
    throw Error(ErrorCode::INVALIDARGUMENT, "element count not divisible by wavelength count");
  if (orderingIn == orderingOut) return data;
  std::vector<T> out(data.size());
  for (std::size_t i = 0; i < count; ++i) {
    int l, s;
    const int j = wavelengthOrderingCalc(static_cast<int>(i), lambdaCount, static_cast<int>(count),
                                         orderingIn, orderingOut, l, s);
    for (std::size_t k = 0; k < blockSize; ++k) out[j * blockSize + k] = data[i * blockSize + k];
  }
  return out;
}

}  // namespace digholo
