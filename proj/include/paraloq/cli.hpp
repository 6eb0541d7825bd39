#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace paraloq::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInvalidArgs = 2,
  kDeviceTimeout = 3,
  kStorageError = 4,
  kParseError = 5,
};

// args excludes the program name. Output goes to out/err, never to the
// process streams directly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paraloq::cli
