#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paraloq {

enum class ErrorKind {
  kInvalidInput,
  kClockRange,
  kDeviceTimeout,
  kUnsupportedMode,
  kInconsistentReading,
  kEmptyInput,
  kStorage,
  kParse,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so the
// CLI can map it to a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace paraloq
