#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fracfast/bench.hpp"

namespace fracfast {

/// One experiment invocation: which table to reproduce plus the sweep
/// overrides. Empty vectors mean the experiment's defaults.
struct ExperimentConfig {
  std::string id;
  std::vector<double> alphas;
  std::vector<double> hs;
  std::vector<int> cells;
  std::vector<std::string> schemes;
  int ntau = 2;
  int kdeg = -1;  // -1: the default degree pairing per interpolation order
  std::string outdir = "out";
  std::string refdir;  // empty: $FRACFAST_REFDIR, else <outdir>/refs
  bool check = false;
  int jobs = 1;

  std::string refdir_or_default() const;
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // every problem found, not just the first
};

/// Key=value configuration, used both for config files (one entry per line,
/// '#' comments) and for command-line flag overrides. Later entries win.
ParseOutcome parse_config(const std::vector<std::pair<std::string, std::string>>& entries);
ParseOutcome parse_config_text(const std::string& text);

const std::vector<std::string>& experiment_ids();

struct CheckLine {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct ExperimentResult {
  int exit_code = 0;  // 0 ok, 2 check failure (with check set), 1 runtime error
  std::vector<std::string> notes;
  std::vector<CheckLine> checks;
  std::vector<std::string> files;

  bool all_passed() const {
    for (const CheckLine& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace fracfast
