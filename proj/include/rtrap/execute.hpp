#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rtrap/config.hpp"

namespace rtrap {

inline constexpr const char* kVersion = "1.0.0";

struct RunOutcome {
  int exitCode = 0;  // 0 ok, 1 validation, 2 numeric failure
  std::vector<std::string> files;
};

/// Runs one configured command, writing its files under config.outputDir.
/// Diagnostics go to err; on failure every file written so far is removed.
RunOutcome execute(const RunConfig& config, std::ostream& err);

/// parse_config + execute with the same exit code convention.
RunOutcome execute_text(const std::string& configText, std::ostream& err);

}  // namespace rtrap
