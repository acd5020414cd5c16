#include "htmab/zeroth.hpp"

#include <cmath>
#include <stdexcept>

#include "htmab/clip.hpp"

namespace htmab {

std::vector<double> sample_sphere(std::size_t n, SeededRng& rng) {
  if (n < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  std::vector<double> e(n);
  for (;;) {
    double norm2 = 0.0;
    for (double& v : e) {
      v = rng.normal();
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& v : e) v *= inv;
      return e;
    }
  }
}

std::vector<double> one_point_gradient(double loss_value, std::span<const double> e, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const double factor = static_cast<double>(e.size()) / tau * loss_value;
  std::vector<double> g(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) g[i] = factor * e[i];
  return g;
}

ZoStep zo_step(std::span<const double> x_t, std::uint64_t t, const ZoConfig& cfg,
               const ProxMap& prox, const LossOracle& oracle, SeededRng& rng) {
  const std::size_t n = prox.dimension();
  if (x_t.size() != n || cfg.dim != n) throw std::invalid_argument("zo_step: dimension mismatch");
  if (cfg.q != prox.dual_q()) throw std::invalid_argument("zo_step: cfg.q does not match the prox");

  ZoStep step;
  const auto e = sample_sphere(n, rng);
  step.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) step.z[i] = x_t[i] + cfg.tau * e[i];
  step.observed = oracle(step.z, t);
  step.g = one_point_gradient(step.observed, e, cfg.tau);
  step.g_hat = clip_vector(step.g, ClipLevel(cfg.lambda), cfg.q);
  std::vector<double> dual_step(n);
  for (std::size_t i = 0; i < n; ++i) dual_step[i] = cfg.mu * step.g_hat[i];
  step.next = prox.mirror_step(x_t, dual_step);
  return step;
}

ZoTrace run_zo(const ZoConfig& cfg, const ProxMap& prox, const FunctionEnvironment& env,
               std::span<const double> competitor, SeededRng& algo_rng, SeededRng& env_rng) {
  cfg.validate();
  if (env.dimension() != prox.dimension()) throw std::invalid_argument("run_zo: dimension mismatch");
  const LossOracle oracle = [&](std::span<const double> z, std::uint64_t t) {
    return env.query(z, t, env_rng);
  };
  const double reference = env.expected_loss(competitor);

  ZoTrace trace;
  trace.running_average_regret.reserve(cfg.T);
  std::vector<double> x = prox.initial_point();
  double total = 0.0;
  for (std::uint64_t t = 1; t <= cfg.T; ++t) {
    auto step = zo_step(x, t, cfg, prox, oracle, algo_rng);
    total += env.expected_loss(step.z) - reference;
    trace.running_average_regret.push_back(total / static_cast<double>(t));
    x = std::move(step.next);
  }
  trace.final_point = std::move(x);
  trace.average_regret = total / static_cast<double>(cfg.T);
  return trace;
}

SmoothingReport smoothing_gap_check(const std::function<double(std::span<const double>)>& f,
                                    Regularity regularity, double constant, double tau,
                                    const std::vector<std::vector<double>>& probes,
                                    std::size_t n_samples, SeededRng& rng) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples per probe");
  SmoothingReport report;
  const double bound =
      regularity == Regularity::Lipschitz ? tau * constant : 0.5 * constant * tau * tau;
  for (const auto& x : probes) {
    SmoothingProbe p;
    p.x = x;
    p.f = f(x);
    p.bound = bound;
    std::vector<double> z(x.size());
    // Accumulate deviations from f(x) to keep the variance sum well scaled.
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
      const auto e = sample_sphere(x.size(), rng);
      for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + tau * e[i];
      const double d = f(z) - p.f;
      sum += d;
      sum_sq += d * d;
    }
    const double m = static_cast<double>(n_samples);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    p.smoothed = p.f + mean;
    p.std_error = std::sqrt(var / m);
    p.ok = std::abs(mean) <= bound + 3.0 * p.std_error;
    report.probes.push_back(std::move(p));
  }
  return report;
}

}  // namespace htmab
