#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "issglf/acceptance.hpp"
#include "issglf/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw issglf::Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& path) {
  issglf::RunConfig cfg;
  try {
    cfg = issglf::parse_config(read_file(path));
  } catch (const issglf::Error& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return 2;
  }
  const auto out = issglf::run_config(cfg);
  std::cout << out.summary;
  std::cerr << "wrote " << out.files.size() << " files to " << out.directory.string() << '\n';
  return out.exit_code;
}

int cmd_verify(const std::string& suite_name, std::uint64_t seed) {
  const auto suite = issglf::acceptance::parse_suite(suite_name);
  if (!suite) {
    std::cerr << "unknown suite '" << suite_name << "' (trunc, parabolic, transport, wave, all)\n";
    return 2;
  }
  const auto out = issglf::acceptance::verify(*suite, seed);
  std::cout << out.report;
  return out.pass ? 0 : 1;
}

int cmd_list(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "scenario directory " << dir.string() << " not found\n";
    return 2;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".yaml") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  int status = 0;
  for (const auto& f : files) {
    try {
      const auto cfg = issglf::parse_config(read_file(f));
      std::cout << f.filename().string() << "  [" << to_string(cfg.scenario.cls) << "]  "
                << cfg.scenario.description << '\n';
    } catch (const issglf::Error& e) {
      std::cout << f.filename().string() << "  [invalid]  " << e.what() << '\n';
      status = 2;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulate and certify input-to-state stability bounds"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "solve one config, audit its bounds and write CSV artifacts");
  run->add_option("config", config, "YAML config file")->required()->check(CLI::ExistingFile);

  std::string suite;
  std::uint64_t seed = 0;
  auto* verify = app.add_subcommand("verify", "run the built-in acceptance checks");
  verify->add_option("suite", suite, "trunc, parabolic, transport, wave or all")->required();
  verify->add_option("--seed", seed, "RNG seed for sampled checks")->required();

  std::string dir = ISSGLF_SCENARIO_DIR;
  auto* list = app.add_subcommand("list-scenarios", "list the bundled example configs");
  list->add_option("--dir", dir, "directory to scan");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config);
    if (*verify) return cmd_verify(suite, seed);
    if (*list) return cmd_list(dir);
  } catch (const std::exception& e) {
    std::cerr << "issglf: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
