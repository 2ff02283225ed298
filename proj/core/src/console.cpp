#include "digholo/console.hpp"

#include <algorithm>
#include <cstdarg>
#include <mutex>

#include "digholo/types.hpp"

namespace digholo::console {

namespace {
std::mutex g_mutex;
std::FILE* g_file = nullptr;
}  // namespace

ErrorCode redirectToFile(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) return ErrorCode::FILENOTCREATED;
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_file) std::fclose(g_file);
  g_file = f;
  return ErrorCode::SUCCESS;
}

void restore() {
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_file) std::fclose(g_file);
  g_file = nullptr;
}

std::FILE* stream() { return g_file ? g_file : stdout; }

int clampVerbosity(int v) { return std::clamp(v, 0, kVerbosityMax); }

void print(int verbosity, int level, const char* fmt, ...) {
  if (level > clampVerbosity(verbosity)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::FILE* out = g_file ? g_file : stdout;
  va_list args;
  va_start(args, fmt);
  std::vfprintf(out, fmt, args);
  va_end(args);
  std::fflush(out);
}

}  // namespace digholo::console
