// Command-line front end: rtrap CONFIG [-o DIR] [--svg] [--simd NAME]

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rtrap/config.hpp"
#include "rtrap/error.hpp"
#include "rtrap/execute.hpp"
#include "rtrap/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue trajectories and resonance trapping in one-channel open systems"};
  std::string configPath;
  std::string outputDir;
  std::string simd = "auto";
  bool svg = false;
  app.add_option("config", configPath, "key = value configuration file")->required();
  app.add_option("-o,--output-dir", outputDir, "overrides output_dir");
  app.add_flag("--svg", svg, "also write plot_*.svg");
  app.add_option("--simd", simd, "kernel set: auto, avx2 or scalar")
      ->check(CLI::IsMember({"auto", "avx2", "scalar"}));
  app.set_version_flag("--version", rtrap::kVersion);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (!rtrap::kernels::select(simd)) {
    std::cerr << "error: kernel set '" << simd << "' is not available on this machine\n";
    return 1;
  }

  std::ifstream in(configPath, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << configPath << "'\n";
    return 1;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  rtrap::RunConfig config;
  try {
    config = rtrap::parse_config(buf.str());
  } catch (const rtrap::Error& e) {
    std::cerr << "error: " << configPath << ": " << e.what() << "\n";
    return rtrap::is_validation(e) ? 1 : 2;
  }
  if (!outputDir.empty()) config.outputDir = outputDir;
  if (svg) config.svg = true;

  const auto outcome = rtrap::execute(config, std::cerr);
  for (const auto& f : outcome.files) std::cout << f << "\n";
  return outcome.exitCode;
}
