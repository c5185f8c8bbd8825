#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace recho::cli {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string records_dir;  // defaults to out_dir when empty
  std::string events_path;
  std::uint64_t seed = 0;
  bool force = false;
  bool truth_centers = false;
};

enum class Status { ok, warn, fail };

struct CommandOutcome {
  std::string command;
  Status status = Status::ok;
  std::vector<std::string> artifacts;
  std::map<std::string, double> metrics;
  std::string note;  // warn/fail explanation
};

CommandOutcome cmd_simulate(const CommonArgs& args);
CommandOutcome cmd_identify(const CommonArgs& args);
CommandOutcome cmd_reconstruct(const CommonArgs& args);
CommandOutcome cmd_check(const CommonArgs& args);

// Prints the outcome summary and returns the process exit code
// (ok = 0, warn = 0 with a stderr notice, fail != 0).
int report(const CommandOutcome& outcome);

}  // namespace recho::cli
