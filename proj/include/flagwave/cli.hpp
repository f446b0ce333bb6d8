// Command-line driver: flagwave <command> --config <path> [--out <dir>]
// [--seed <int>] [--workers <int>].
//
// Exit 0 when every check passes, 1 on a failed check, 2 on a config or
// precondition error. report.json is written in every case; wall-clock
// timestamps go only to run.log.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flagwave/config.hpp"
#include "json.hpp"

namespace flagwave {

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  std::string relation;  // "<=" or ">="
  bool passed = true;
};

struct Report {
  std::string command;
  std::string status = "pass";  // pass, fail, error
  std::string message;
  std::vector<Check> checks;
  std::vector<std::string> artifacts;

  void check_le(const std::string& name, double value, double limit);
  void check_ge(const std::string& name, double value, double limit);
  bool passed() const;
  nlohmann::json to_json() const;
};

extern const std::vector<std::string> kCommands;

// Runs one command with an already validated config, writing artifacts
// under config.output_dir.
Report run_command(const std::string& command, const RunConfig& config);

int run_cli(int argc, char** argv);

}  // namespace flagwave
