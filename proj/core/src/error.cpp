#include "digholo/error.hpp"

namespace digholo {

const char* errorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::SUCCESS: return "SUCCESS";
    case ErrorCode::ERROR: return "ERROR";
    case ErrorCode::INVALIDHANDLE: return "INVALIDHANDLE";
    case ErrorCode::NULLPOINTER: return "NULLPOINTER";
    case ErrorCode::SETFRAMEBUFFERDISABLED: return "SETFRAMEBUFFERDISABLED";
    case ErrorCode::INVALIDDIMENSION: return "INVALIDDIMENSION";
    case ErrorCode::INVALIDPOLARISATION: return "INVALIDPOLARISATION";
    case ErrorCode::INVALIDAXIS: return "INVALIDAXIS";
    case ErrorCode::INVALIDARGUMENT: return "INVALIDARGUMENT";
    case ErrorCode::MEMORYALLOCATION: return "MEMORYALLOCATION";
    case ErrorCode::FILENOTCREATED: return "FILENOTCREATED";
    case ErrorCode::FILENOTFOUND: return "FILENOTFOUND";
  }
  return "UNKNOWN";
}

}  // namespace digholo
