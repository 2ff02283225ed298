#pragma once

#include <cstdio>
#include <string>

#include "digholo/error.hpp"

namespace digholo::console {

// Process-wide destination for library output (stdout unless redirected).
ErrorCode redirectToFile(const std::string& path);
void restore();
std::FILE* stream();

// Prints when level <= verbosity. Verbosity is clamped into [0, 3].
void print(int verbosity, int level, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 3, 4)))
#endif
    ;

int clampVerbosity(int v);

}  // namespace digholo::console
