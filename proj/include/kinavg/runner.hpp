#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kinavg/config.hpp"
#include "kinavg/report.hpp"

namespace kinavg {

struct CommandOutput {
  json body;
  std::vector<std::pair<std::string, Table>> tables;
  std::optional<bool> pass;  // empty for purely descriptive commands
  std::vector<std::string> lines;  // human summary
};

// Executes cfg.text("command"). Throws InputError on bad parameters. Long
// commands report each finished step on `progress` when given.
CommandOutput run_command(const ExperimentConfig& cfg, std::ostream* progress = nullptr);

// Runs the command, prints the summary to `out`, writes <command>.json and its
// CSV tables under output_dir. Returns 0 on pass, 2 when a check fails, 1 on
// input errors (reported on `err`).
int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace kinavg
