#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <queue>
#include <string>
#include <vector>

#include "htmab/clip.hpp"
#include "htmab/envs.hpp"
#include "htmab/rng.hpp"
#include "htmab/simplex.hpp"
#include "htmab/tsallis.hpp"

namespace htmab {

// Loss-minimizing bandit policy. A round is select(t) followed by
// update(arm, loss) with t = 1, 2, ...
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;
  virtual std::size_t num_arms() const = 0;
  virtual std::size_t select(std::uint64_t t) = 0;
  virtual void update(std::size_t arm, double loss) = 0;
  // Probability that the decision rule of the current round picks arm. For
  // randomized policies this is the sampling distribution; for index
  // policies it is the indicator of the selected arm.
  virtual double current_probability(std::size_t arm) const = 0;
};

// Tsallis-INF with either clipped (min(loss, lambda)) or skipped (zero
// estimate when loss > lambda) importance-weighted feedback.
class InfPolicy : public Policy {
 public:
  enum class Feedback { Clip, Skip };

  InfPolicy(std::size_t n, TsallisConfig cfg, ClipLevel lambda, Feedback feedback,
            SeededRng rng);

  static std::unique_ptr<InfPolicy> inf_clip(std::size_t n, TsallisConfig cfg, ClipLevel lambda,
                                             SeededRng rng);
  static std::unique_ptr<InfPolicy> skip_inf(std::size_t n, TsallisConfig cfg, ClipLevel lambda,
                                             SeededRng rng);

  std::string name() const override;
  std::size_t num_arms() const override { return x_.size(); }
  std::size_t select(std::uint64_t t) override;
  void update(std::size_t arm, double loss) override;
  double current_probability(std::size_t arm) const override { return x_[arm]; }

  const SimplexPoint& distribution() const { return x_; }
  const TsallisConfig& config() const { return cfg_; }
  ClipLevel clip_level() const { return lambda_; }
  Feedback feedback() const { return feedback_; }
  // Updates whose estimate was not discarded.
  std::uint64_t informative_updates() const { return informative_; }
  const StepSolveDiagnostics& last_diagnostics() const { return last_; }

 private:
  SimplexPoint x_;
  TsallisConfig cfg_;
  ClipLevel lambda_;
  Feedback feedback_;
  SeededRng rng_;
  std::uint64_t informative_ = 0;
  StepSolveDiagnostics last_;
};

// Draws an index from x using one uniform variate.
std::size_t sample_index(const SimplexPoint& x, SeededRng& rng);

struct RobustUcbConfig {
  double alpha = 1.0;  // moment exponent of the losses
  double M = 1.0;      // moment scale: E|X|^(1+alpha) <= M^(1+alpha)
  double c = 4.0;      // confidence multiplier
};

// Truncated-mean robust UCB adapted to losses: after one round-robin pass
// it picks the arm minimizing
//   mu_hat_i - c M (log t^2 / s_i)^(alpha/(1+alpha)),
// where mu_hat_i averages the arm's samples with the j-th sample zeroed once
// |X_j| > (M^(1+alpha) j / log t^2)^(1/(1+alpha)).
class RobustUcbPolicy : public Policy {
 public:
  RobustUcbPolicy(std::size_t n, RobustUcbConfig cfg);

  std::string name() const override { return "robust_ucb"; }
  std::size_t num_arms() const override { return pulls_.size(); }
  std::size_t select(std::uint64_t t) override;
  void update(std::size_t arm, double loss) override;
  double current_probability(std::size_t arm) const override {
    return arm == last_choice_ ? 1.0 : 0.0;
  }

  std::uint64_t pulls(std::size_t arm) const { return pulls_.at(arm); }
  // Truncated mean of arm as of the last select() call.
  double truncated_mean(std::size_t arm) const;
  // c M (log t^2 / s)^(alpha/(1+alpha)).
  double confidence_width(std::uint64_t t, std::uint64_t s) const;

 private:
  struct Retained {
    double drop_log_t;  // sample leaves the mean once log t exceeds this
    std::size_t arm;
    double value;
    bool operator>(const Retained& o) const { return drop_log_t > o.drop_log_t; }
  };

  RobustUcbConfig cfg_;
  std::vector<std::uint64_t> pulls_;
  std::vector<double> retained_sum_;
  std::priority_queue<Retained, std::vector<Retained>, std::greater<>> expiry_;
  std::size_t last_choice_ = 0;
};

struct PolicyTrace {
  std::vector<std::size_t> arms;
  std::vector<double> losses;
  std::vector<double> prob_optimal;       // mass on the best arm in round t
  std::vector<double> cum_loss;
  std::vector<double> cum_pseudo_regret;  // sum of mean(chosen) - mean(competitor)
  double terminal_regret = 0.0;
  std::size_t competitor = 0;
  std::size_t optimal_arm = 0;

  std::size_t size() const { return arms.size(); }
  double average_regret() const {
    return arms.empty() ? 0.0 : terminal_regret / static_cast<double>(arms.size());
  }
};

// Runs T rounds. Each round draws the full loss vector from env_rng and
// reveals only the chosen arm's entry; the policy uses its own stream.
PolicyTrace run_policy(Policy& policy, const ArmEnvironment& env, std::uint64_t T,
                       std::size_t competitor, SeededRng& env_rng);

}  // namespace htmab
