#include "rtrap/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "rtrap/error.hpp"

namespace rtrap {

const char* to_string(Command c) {
  switch (c) {
    case Command::Model: return "model";
    case Command::Sweep: return "sweep";
    case Command::Analytic: return "analytic";
    case Command::Scatter: return "scatter";
    case Command::OracleCheck: return "oracle-check";
  }
  return "?";
}

namespace {

const std::vector<std::string> kKeys = {
    "command",     "family",       "N",           "D",          "p",
    "r",           "offset",       "seed",        "mean_v",     "var_v",
    "alpha_start", "alpha_end",    "alpha_steps", "alpha_spacing", "phi",
    "alpha",       "energy_min",   "energy_max",  "points_per_spacing", "window",
    "output_dir",  "svg",
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorCode::Validation, "line " + std::to_string(line) + ": " + msg);
}

double as_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end || !std::isfinite(v)) {
    fail(e.line, "'" + key + "' expects a real number, got '" + e.value + "'");
  }
  return v;
}

long long as_int(const std::string& key, const Entry& e) {
  long long v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end) {
    fail(e.line, "'" + key + "' expects an integer, got '" + e.value + "'");
  }
  return v;
}

std::uint64_t as_u64(const std::string& key, const Entry& e) {
  std::uint64_t v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end) {
    fail(e.line, "'" + key + "' expects a non-negative integer, got '" + e.value + "'");
  }
  return v;
}

bool as_bool(const std::string& key, const Entry& e) {
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(e.line, "'" + key + "' expects true or false, got '" + e.value + "'");
}

}  // namespace

std::vector<std::string> known_config_keys() { return kKeys; }

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Entry> kv;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      fail(line, "unknown key '" + key + "'");
    }
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    if (kv.count(key)) {
      fail(line, "duplicate key '" + key + "' (first set on line " + std::to_string(kv[key].line) + ")");
    }
    kv[key] = {value, line};
  }

  RunConfig c;
  for (const auto& [k, e] : kv) c.echo[k] = e.value;
  auto has = [&](const char* k) { return kv.count(k) > 0; };

  if (has("command")) {
    const Entry& e = kv["command"];
    const std::string& v = e.value;
    if (v == "model") c.command = Command::Model;
    else if (v == "sweep") c.command = Command::Sweep;
    else if (v == "analytic") c.command = Command::Analytic;
    else if (v == "scatter") c.command = Command::Scatter;
    else if (v == "oracle-check") c.command = Command::OracleCheck;
    else fail(e.line, "unknown command '" + v + "'");
  }

  auto require = [&](const char* k) {
    if (!has(k)) {
      throw Error(ErrorCode::Validation,
                  std::string("missing required key '") + k + "' for command " + to_string(c.command));
    }
  };
  if (has("alpha_start") && has("alpha_end")) {
    const double a = as_double("alpha_start", kv["alpha_start"]);
    const double b = as_double("alpha_end", kv["alpha_end"]);
    if (!(a < b)) {
      throw Error(ErrorCode::Validation,
                  "range error: alpha_start (line " + std::to_string(kv["alpha_start"].line) +
                      ") must be less than alpha_end (line " + std::to_string(kv["alpha_end"].line) + ")");
    }
  }

  require("family");
  require("N");
  {
    const Entry& e = kv["family"];
    try {
      c.model.family = family_from_string(e.value);
    } catch (const Error&) {
      fail(e.line, "unknown family '" + e.value + "'");
    }
  }
  {
    const long long n = as_int("N", kv["N"]);
    if (n < 0 || n > 100000) fail(kv["N"].line, "N must be in [0, 100000]");
    c.model.n = static_cast<int>(n);
  }
  if (has("D")) c.model.disturbance = as_double("D", kv["D"]);
  if (has("p")) {
    c.model.levelExponent = as_double("p", kv["p"]);
    if (!(c.model.levelExponent > 0.0)) fail(kv["p"].line, "p must be > 0");
  }
  if (has("r")) {
    c.model.couplingExponent = as_double("r", kv["r"]);
    if (!(c.model.couplingExponent >= 0.0)) fail(kv["r"].line, "r must be >= 0");
  }
  if (has("offset")) c.model.couplingOffset = as_bool("offset", kv["offset"]);
  if (has("seed")) c.model.seed = as_u64("seed", kv["seed"]);
  if (has("mean_v")) c.model.meanV = as_double("mean_v", kv["mean_v"]);
  if (has("var_v")) {
    c.model.varV = as_double("var_v", kv["var_v"]);
    if (!(c.model.varV >= 0.0)) fail(kv["var_v"].line, "var_v must be >= 0");
  }

  if (has("phi")) {
    c.phiDegrees = as_double("phi", kv["phi"]);
    if (!(std::abs(c.phiDegrees) < 90.0)) fail(kv["phi"].line, "phi must lie in (-90, 90) degrees");
  }
  if (has("output_dir")) c.outputDir = kv["output_dir"].value;
  if (has("svg")) c.svg = as_bool("svg", kv["svg"]);

  if (c.command == Command::Sweep || c.command == Command::Analytic) {
    if (c.command == Command::Sweep) {
      require("alpha_start");
      require("alpha_end");
      require("alpha_steps");
    }
    if (has("alpha_start")) c.alphaStart = as_double("alpha_start", kv["alpha_start"]);
    if (has("alpha_end")) c.alphaEnd = as_double("alpha_end", kv["alpha_end"]);
    if (has("alpha_steps")) {
      const long long n = as_int("alpha_steps", kv["alpha_steps"]);
      if (n < 2 || n > 1000000) fail(kv["alpha_steps"].line, "alpha_steps must be in [2, 1000000]");
      c.alphaSteps = static_cast<int>(n);
    }
    if (!(c.alphaStart >= 0.0)) {
      fail(has("alpha_start") ? kv["alpha_start"].line : 0, "alpha_start must be >= 0");
    }
    if (!(c.alphaStart < c.alphaEnd)) {
      throw Error(ErrorCode::Validation, "range error: alpha_start must be less than alpha_end");
    }
    if (has("alpha_spacing")) {
      const Entry& e = kv["alpha_spacing"];
      if (e.value == "log") c.logSpacing = true;
      else if (e.value != "linear") fail(e.line, "alpha_spacing must be linear or log");
      if (c.logSpacing && !(c.alphaStart > 0.0)) fail(e.line, "log spacing needs alpha_start > 0");
    }
  }

  if (c.command == Command::Scatter || c.command == Command::OracleCheck || c.command == Command::Model) {
    if (c.command != Command::Model) require("alpha");
    if (has("alpha")) {
      c.alpha = as_double("alpha", kv["alpha"]);
      if (!(c.alpha >= 0.0)) fail(kv["alpha"].line, "alpha must be >= 0");
    }
  }

  if (has("energy_min") || has("energy_max")) {
    require("energy_min");
    require("energy_max");
    c.haveEnergyWindow = true;
    c.energyMin = as_double("energy_min", kv["energy_min"]);
    c.energyMax = as_double("energy_max", kv["energy_max"]);
    if (!(c.energyMin < c.energyMax)) {
      throw Error(ErrorCode::Validation, "range error: energy_min (line " +
                                             std::to_string(kv["energy_min"].line) +
                                             ") must be less than energy_max (line " +
                                             std::to_string(kv["energy_max"].line) + ")");
    }
  }
  if (has("points_per_spacing")) {
    const long long n = as_int("points_per_spacing", kv["points_per_spacing"]);
    if (n < 1 || n > 10000) fail(kv["points_per_spacing"].line, "points_per_spacing must be in [1, 10000]");
    c.pointsPerSpacing = static_cast<int>(n);
  }
  if (has("window")) {
    c.window = as_double("window", kv["window"]);
    if (!(c.window >= 0.0)) fail(kv["window"].line, "window must be >= 0");
  }
  return c;
}

}  // namespace rtrap
