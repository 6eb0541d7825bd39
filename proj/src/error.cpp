#include "paraloq/error.hpp"

namespace paraloq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kClockRange: return "clock-range";
    case ErrorKind::kDeviceTimeout: return "device-timeout";
    case ErrorKind::kUnsupportedMode: return "unsupported-mode";
    case ErrorKind::kInconsistentReading: return "inconsistent-reading";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kStorage: return "storage";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

}  // namespace paraloq
