#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "htmab/config.hpp"
#include "htmab/distributions.hpp"

namespace htmab {

// Trailing average: out[t] = mean(in[max(0, t-window+1) .. t]).
std::vector<double> moving_average(std::span<const double> curve, std::size_t window);

// Arms beta_i * xi with xi log-Pareto(alpha) and beta_i = means[i] / E xi.
std::vector<HeavyTailSpec> arms_for_means(double alpha, std::span<const double> means);

// Thread count from HTMAB_THREADS, else the hardware concurrency (>= 1).
unsigned default_thread_count();

// Runs fn(0) .. fn(count-1) on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Effective parameters of one policy at one alpha.
struct ResolvedPolicy {
  std::string id;
  std::optional<double> lambda, mu, q;  // Tsallis policies
  std::optional<double> c, M;           // robust UCB
  std::optional<double> regret_bound;   // planner bound when (lambda, mu) come from it
};

struct AggregateCurve {
  std::string algo;
  double alpha = 0.0;
  std::uint64_t seed_base = 0;
  ResolvedPolicy params;
  std::vector<double> mean_prob_optimal;  // across repetitions, unfiltered
  std::vector<double> std_prob_optimal;   // sample std, 0 for one repetition
  std::vector<double> mean_cum_regret;
  std::vector<double> filtered_mean;      // moving_average(mean_prob_optimal)
  std::vector<double> filtered_std;       // moving_average(std_prob_optimal)
  std::vector<double> terminal_average_regret;  // per run, ordered by run index
  std::vector<std::vector<double>> raw_prob_optimal;  // per run, when requested
  std::vector<std::vector<double>> raw_cum_regret;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<AggregateCurve> curves;  // alpha-major, then policy file order
};

// Run r of every (alpha, policy) pair uses seed base_seed + r with the loss
// stream 0 and the policy stream 1, so results do not depend on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads);

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

// Header algo,alpha,seed_base,t,mean_prob_optimal,std_prob_optimal,mean_cum_regret
// with the filtered probability curves.
void write_curves_csv(const ExperimentResult& result, std::ostream& out);
void write_raw_csv(const ExperimentResult& result, std::ostream& out);
void write_meta_json(const ExperimentResult& result, std::ostream& out);

// Writes <name>.csv, <name>.meta.json and (if requested) <name>.raw.csv
// into dir; returns the paths written.
std::vector<std::filesystem::path> write_experiment(const ExperimentResult& result,
                                                    const std::filesystem::path& dir);

}  // namespace htmab
