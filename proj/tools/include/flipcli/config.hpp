#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flip/integrator.hpp"
#include "flip/planar.hpp"
#include "flip/rule.hpp"
#include "flip/step_graphon.hpp"

namespace flipcli {

inline const std::vector<std::string> kModes = {"simulate",      "trajectory",     "transference",
                                                "fixed-points",  "velocity-field", "periodic-demo"};

// Every field mirrors a command-line flag (and a key of the JSON config file
// with the same name). Unset fields fall back to per-mode defaults.
struct ExperimentConfig {
  std::string mode;
  std::optional<std::string> rule;
  std::optional<std::string> rule_file;
  std::optional<std::string> init;
  std::optional<std::string> init_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> graph_out;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<std::string> method;
  std::optional<double> step;
  std::optional<int> n;
  std::optional<double> t_end;
  std::optional<std::int64_t> steps;
  std::optional<int> checkpoints;
  std::optional<int> grid;
  std::optional<std::string> cls;
  std::optional<int> replicates;
  std::optional<std::string> start;
  std::optional<double> theta;
  std::optional<double> offdiag;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
// Appends problems to `errors` instead of throwing; unknown keys are errors.
ExperimentConfig config_from_json(const std::string& text, std::vector<std::string>& errors);

// Fields set in `flags` replace those of `base`.
ExperimentConfig merge(const ExperimentConfig& base, const ExperimentConfig& flags);

// All schema problems at once; empty when the config is runnable.
std::vector<std::string> validate(const ExperimentConfig& cfg);

// "const:d", "twoblock:x,y" (two equal parts, x inside, y across) or
// "block2:mu,d11,d22,d12".
flip::StepGraphon parse_init(const std::string& spec);

flip::Rule load_rule(const ExperimentConfig& cfg);
flip::StepGraphon load_init(const ExperimentConfig& cfg);
flip::IntegratorOptions integrator_options(const ExperimentConfig& cfg);

}  // namespace flipcli
