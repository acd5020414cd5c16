#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace htmab {

// Per-policy parameter overrides; unset fields fall back to the planner
// (lambda, mu), q = 1/2, and the robust UCB defaults (c = 4, M = arm moment scale).
struct PolicyOverrides {
  std::optional<double> lambda;
  std::optional<double> mu;
  std::optional<double> q;
  std::optional<double> c;
  std::optional<double> M;
};

// Two-arm style study: arm i loses beta_i * xi with xi log-Pareto(alpha)
// and beta_i chosen so that the mean loss of arm i is means[i].
struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<double> alphas;
  std::uint64_t horizon = 8000;
  std::uint64_t repetitions = 100;
  std::uint64_t base_seed = 1;
  std::uint64_t filter_window = 30;
  std::vector<double> means{3.0, 3.1};
  // Policy ids in file order: inf_clip, skip_inf, robust_ucb.
  std::vector<std::pair<std::string, PolicyOverrides>> policies;
  bool raw_traces = false;
  std::optional<std::filesystem::path> output;

  // Throws ConfigError naming the offending field.
  void validate() const;
};

inline const std::vector<std::string>& known_policy_ids() {
  static const std::vector<std::string> ids{"inf_clip", "skip_inf", "robust_ucb"};
  return ids;
}

// Parses the YAML experiment file. Unknown keys, wrong types and invalid
// values raise ConfigError with the 1-based line of the offending node.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace htmab
