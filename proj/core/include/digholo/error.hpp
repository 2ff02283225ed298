#pragma once

#include <stdexcept>
#include <string>

namespace digholo {

enum class ErrorCode : int {
  SUCCESS = 0,
  ERROR = 1,
  INVALIDHANDLE = 2,
  NULLPOINTER = 3,
  SETFRAMEBUFFERDISABLED = 4,
  INVALIDDIMENSION = 5,
  INVALIDPOLARISATION = 6,
  INVALIDAXIS = 7,
  INVALIDARGUMENT = 8,
  MEMORYALLOCATION = 9,
  FILENOTCREATED = 10,
  FILENOTFOUND = 11,
};

inline constexpr int kErrorCodeCount = 12;

const char* errorName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace digholo
