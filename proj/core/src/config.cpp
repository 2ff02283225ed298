#include "digholo/config.hpp"

#include <thread>

namespace digholo {

int HoloConfig::defaultThreadCount() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

int floorToQuanta(int v) {
  if (v <= 0) return 0;
  return kPixelQuanta * (v / kPixelQuanta);
}

}  // namespace digholo
