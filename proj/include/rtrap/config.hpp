#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rtrap/model.hpp"

namespace rtrap {

enum class Command { Model, Sweep, Analytic, Scatter, OracleCheck };
const char* to_string(Command c);

struct RunConfig {
  Command command = Command::Sweep;
  SpectrumSpec model;
  double alphaStart = 0.01;
  double alphaEnd = 2.0;
  int alphaSteps = 200;
  bool logSpacing = false;
  double phiDegrees = 0.0;
  double alpha = 0.0;  // single coupling for scatter / oracle-check
  bool haveEnergyWindow = false;
  double energyMin = 0.0;
  double energyMax = 0.0;
  int pointsPerSpacing = 20;
  double window = 1.0;
  std::string outputDir = ".";
  bool svg = false;
  // key -> value exactly as given, for the provenance echo
  std::map<std::string, std::string> echo;
};

/// Line-oriented "key = value" with # comments. Unknown keys, duplicates,
/// bad values and missing required keys are Validation errors naming the line.
RunConfig parse_config(const std::string& text);

std::vector<std::string> known_config_keys();

}  // namespace rtrap
