#pragma once

// Command-line surface: argument/config parsing, dispatch, report assembly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvlab/cones.hpp"
#include "curvlab/hamilton.hpp"
#include "curvlab/models.hpp"

namespace curvlab::cli {

enum class Command { Model, Membership, Flow, Invariance, ConditionCheck, Rigidity };
std::string command_name(Command c);

enum class Format { Json, Csv };

struct ExperimentConfig {
  Command command = Command::Model;
  std::optional<ConeSpec> cone;
  std::optional<ModelSpec> model;
  std::optional<std::string> input;
  std::string output;  // empty: stdout
  std::uint64_t seed = 0;
  Format format = Format::Json;
  bool force = false;  // accept inputs with a large Bianchi projection residual

  FlowOptions flow;
  int samples = 200;
  int trajectories = 0;
  double trajectory_t_end = 0.5;
  double violation_tol = 0.0;
  std::string which = "iv";
  std::string input_id;
};

/// Validates cross-field invariants (exactly one tensor source when needed, ...).
void validate(const ExperimentConfig& config);

/// Parses `prog <command> [flags]`. A `--config file.json` whose keys are flag
/// names supplies defaults; explicit flags override it. Throws UsageError.
ExperimentConfig parse_args(const std::vector<std::string>& args);

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 usage/input error, 2 assertion-style failure
  std::string output;
  std::string error;
};

/// Executes the command and returns the report text. Reports carry a config echo,
/// the tool version, and a single "timestamp" object holding every
/// non-deterministic field.
RunResult run(const ExperimentConfig& config);

nlohmann::json config_echo(const ExperimentConfig& config);

/// Full entry point used by the executable: parse, run, write output.
int main_entry(const std::vector<std::string>& args);

}  // namespace curvlab::cli
