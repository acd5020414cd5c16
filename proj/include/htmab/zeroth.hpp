#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "htmab/envs.hpp"
#include "htmab/planner.hpp"
#include "htmab/prox.hpp"
#include "htmab/rng.hpp"

namespace htmab {

// Uniform direction on the unit Euclidean sphere in R^n (normalized
// Gaussian vector; an all-zero draw is resampled).
std::vector<double> sample_sphere(std::size_t n, SeededRng& rng);

// (n / tau) * loss_value * e with n = e.size().
std::vector<double> one_point_gradient(double loss_value, std::span<const double> e, double tau);

// Noisy loss observation at the query point z in round t.
using LossOracle = std::function<double(std::span<const double> z, std::uint64_t t)>;

struct ZoStep {
  std::vector<double> z;      // query point x_t + tau e_t
  double observed = 0.0;      // phi_t(z_t)
  std::vector<double> g;      // one-point estimate
  std::vector<double> g_hat;  // q-norm clipped estimate
  std::vector<double> next;   // x_{t+1}
};

// One round: query at z = x_t + tau e, clip the one-point gradient in the
// prox's dual norm at cfg.lambda, then mirror step and Bregman projection.
ZoStep zo_step(std::span<const double> x_t, std::uint64_t t, const ZoConfig& cfg,
               const ProxMap& prox, const LossOracle& oracle, SeededRng& rng);

struct ZoTrace {
  std::vector<double> running_average_regret;  // (1/t) sum_{s<=t} (l(z_s) - l(u))
  std::vector<double> final_point;
  double average_regret = 0.0;
};

// Runs cfg.T rounds from prox.initial_point(). Regret uses the noiseless
// expected loss at the query points z_t against the competitor u; directions
// come from algo_rng and loss noise from env_rng.
ZoTrace run_zo(const ZoConfig& cfg, const ProxMap& prox, const FunctionEnvironment& env,
               std::span<const double> competitor, SeededRng& algo_rng, SeededRng& env_rng);

struct SmoothingProbe {
  std::vector<double> x;
  double f = 0.0;
  double smoothed = 0.0;  // Monte-Carlo estimate of E f(x + tau e)
  double std_error = 0.0;
  double bound = 0.0;     // tau M or L tau^2 / 2
  bool ok = false;
};

struct SmoothingReport {
  std::vector<SmoothingProbe> probes;
  bool passed() const {
    for (const auto& p : probes) {
      if (!p.ok) return false;
    }
    return true;
  }
};

// Checks |E f(x + tau e) - f(x)| <= bound + 3 std_error at each probe, where
// bound = tau * constant (Lipschitz) or constant * tau^2 / 2 (smooth).
SmoothingReport smoothing_gap_check(const std::function<double(std::span<const double>)>& f,
                                    Regularity regularity, double constant, double tau,
                                    const std::vector<std::vector<double>>& probes,
                                    std::size_t n_samples, SeededRng& rng);

}  // namespace htmab
