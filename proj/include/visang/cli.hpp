#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

namespace visang::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

struct RunReport {
  nlohmann::ordered_json json;  // empty for --help and usage errors
  int exit_code = kPass;
};

/// Runs one command line (without the program name). The JSON report goes to
/// `out`; usage errors and help go to `err` and `out` respectively. When a CSV
/// dump is sent to stdout (`--emit csv` or `--emit -`), the report goes to `err`.
RunReport run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace visang::cli
