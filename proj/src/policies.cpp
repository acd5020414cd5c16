#include "htmab/policies.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace htmab {

std::size_t sample_index(const SimplexPoint& x, SeededRng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    cumulative += x[i];
    if (u < cumulative) return i;
  }
  return x.size() - 1;
}

InfPolicy::InfPolicy(std::size_t n, TsallisConfig cfg, ClipLevel lambda, Feedback feedback,
                     SeededRng rng)
    : x_(SimplexPoint::uniform(n)), cfg_(cfg), lambda_(lambda), feedback_(feedback), rng_(rng) {
  cfg_.validate();
}

std::unique_ptr<InfPolicy> InfPolicy::inf_clip(std::size_t n, TsallisConfig cfg,
                                               ClipLevel lambda, SeededRng rng) {
  return std::make_unique<InfPolicy>(n, cfg, lambda, Feedback::Clip, rng);
}

std::unique_ptr<InfPolicy> InfPolicy::skip_inf(std::size_t n, TsallisConfig cfg,
                                               ClipLevel lambda, SeededRng rng) {
  return std::make_unique<InfPolicy>(n, cfg, lambda, Feedback::Skip, rng);
}

std::string InfPolicy::name() const {
  return feedback_ == Feedback::Clip ? "inf_clip" : "skip_inf";
}

std::size_t InfPolicy::select(std::uint64_t) { return sample_index(x_, rng_); }

void InfPolicy::update(std::size_t arm, double loss) {
  if (feedback_ == Feedback::Skip && loss > lambda_.value()) {
    // Skipped sample: zero estimate, whose step is the identity.
    last_ = {};
    return;
  }
  const auto estimate = iw_clipped_estimate(loss, arm, x_, lambda_);
  ++informative_;
  if (estimate.values[arm] == 0.0) {
    // x_t minimizes the step objective exactly; avoid solver round-off.
    last_ = {};
    return;
  }
  auto result = omd_step(x_, estimate.values, cfg_);
  x_ = std::move(result.next);
  last_ = result.diagnostics;
}

RobustUcbPolicy::RobustUcbPolicy(std::size_t n, RobustUcbConfig cfg)
    : cfg_(cfg), pulls_(n, 0), retained_sum_(n, 0.0) {
  if (n == 0) throw std::invalid_argument("robust UCB needs at least one arm");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  if (!(cfg.M > 0.0)) throw std::invalid_argument("M must be > 0");
  if (!(cfg.c >= 0.0)) throw std::invalid_argument("c must be >= 0");
}

double RobustUcbPolicy::confidence_width(std::uint64_t t, std::uint64_t s) const {
  const double log_t2 = 2.0 * std::log(static_cast<double>(t));
  return cfg_.c * cfg_.M *
         std::pow(log_t2 / static_cast<double>(s), cfg_.alpha / (1.0 + cfg_.alpha));
}

double RobustUcbPolicy::truncated_mean(std::size_t arm) const {
  const auto s = pulls_.at(arm);
  return s == 0 ? 0.0 : retained_sum_[arm] / static_cast<double>(s);
}

std::size_t RobustUcbPolicy::select(std::uint64_t t) {
  if (t == 0) throw std::invalid_argument("rounds are numbered from 1");
  const std::size_t n = pulls_.size();
  if (t <= n) return last_choice_ = static_cast<std::size_t>(t - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (pulls_[i] == 0) return last_choice_ = i;
  }
  // Thresholds shrink as t grows, so a sample once truncated stays truncated.
  const double log_t = std::log(static_cast<double>(t));
  while (!expiry_.empty() && expiry_.top().drop_log_t < log_t) {
    retained_sum_[expiry_.top().arm] -= expiry_.top().value;
    expiry_.pop();
  }
  std::size_t best = 0;
  double best_index = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double index = truncated_mean(i) - confidence_width(t, pulls_[i]);
    if (index < best_index) {
      best_index = index;
      best = i;
    }
  }
  return last_choice_ = best;
}

void RobustUcbPolicy::update(std::size_t arm, double loss) {
  const auto j = ++pulls_.at(arm);
  // Retained while |X_j|^(1+a) 2 log t <= M^(1+a) j.
  const double mag = std::pow(std::abs(loss), 1.0 + cfg_.alpha);
  if (mag == 0.0) return;  // contributes nothing either way
  const double drop =
      std::pow(cfg_.M, 1.0 + cfg_.alpha) * static_cast<double>(j) / (2.0 * mag);
  retained_sum_[arm] += loss;
  expiry_.push({drop, arm, loss});
}

PolicyTrace run_policy(Policy& policy, const ArmEnvironment& env, std::uint64_t T,
                       std::size_t competitor, SeededRng& env_rng) {
  if (T == 0) throw std::invalid_argument("horizon must be >= 1");
  if (competitor >= env.num_arms()) throw std::out_of_range("competitor arm out of range");
  if (policy.num_arms() != env.num_arms()) {
    throw std::invalid_argument("policy and environment disagree on the number of arms");
  }
  PolicyTrace trace;
  trace.competitor = competitor;
  trace.optimal_arm = env.best_arm();
  trace.arms.reserve(T);
  trace.losses.reserve(T);
  trace.prob_optimal.reserve(T);
  trace.cum_loss.reserve(T);
  trace.cum_pseudo_regret.reserve(T);

  const auto& means = env.known_means();
  double cum_loss = 0.0, regret = 0.0;
  std::vector<double> round_losses;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const std::size_t arm = policy.select(t);
    trace.prob_optimal.push_back(policy.current_probability(trace.optimal_arm));
    env.draw_round(env_rng, round_losses);
    const double loss = round_losses[arm];
    policy.update(arm, loss);
    cum_loss += loss;
    regret += means[arm] - means[competitor];
    trace.arms.push_back(arm);
    trace.losses.push_back(loss);
    trace.cum_loss.push_back(cum_loss);
    trace.cum_pseudo_regret.push_back(regret);
  }
  trace.terminal_regret = regret;
  return trace;
}

}  // namespace htmab
