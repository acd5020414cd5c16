#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "htmab/distributions.hpp"
#include "htmab/simplex.hpp"

namespace htmab {

// Clipping threshold lambda; finite and strictly positive.
class ClipLevel {
 public:
  explicit ClipLevel(double lambda);
  double value() const { return lambda_; }

 private:
  double lambda_;
};

// Importance-weighted loss estimate. Bandit estimates are zero outside
// source_arm; dense (zeroth-order) estimates carry no source arm.
struct GradientEstimate {
  std::vector<double> values;
  std::optional<std::size_t> source_arm;
};

// One-sided cap min(g, lambda). Negative losses pass through.
double clip_scalar(double g, ClipLevel lambda);

// g * min(1, lambda / ||g||_q); q in [2, inf], q = inf is the max-norm.
std::vector<double> clip_vector(std::span<const double> g, ClipLevel lambda, double q);

inline constexpr double kProbabilityFloor = 1e-15;

// values[arm] = min(loss, lambda) / x[arm], zeros elsewhere. Throws
// DegenerateProbability when x[arm] is below kProbabilityFloor.
GradientEstimate iw_clipped_estimate(double loss, std::size_t arm, const SimplexPoint& x,
                                     ClipLevel lambda);

// Monte-Carlo check of the clipped-estimator lemmas for a scalar law X:
//   (a) |clip(X) - E clip(X)| <= 2 lambda for every draw,
//   (b) E clip(X)^2 <= sigma^(1+alpha) lambda^(1-alpha),
//   (c) |E X - E clip(X)| <= sigma^(1+alpha) / lambda^alpha,
// with sigma the moment scale of the law. (b) and (c) get the 1.1 slack and
// (c) a 3-sigma Monte-Carlo allowance on top.
struct ClipLemmaReport {
  std::size_t samples = 0;
  double max_deviation = 0.0;
  double deviation_bound = 0.0;
  double second_moment = 0.0;
  double second_moment_bound = 0.0;
  double bias = 0.0;
  double bias_bound = 0.0;
  double bias_mc_allowance = 0.0;
  bool deviation_ok = false;
  bool second_moment_ok = false;
  bool bias_ok = false;

  bool passed() const { return deviation_ok && second_moment_ok && bias_ok; }
};

using ScalarClip = std::function<double(double value, double lambda)>;

// The norm clip restricted to one dimension: sign(x) min(|x|, lambda).
double clip_norm_1d(double value, double lambda);

ClipLemmaReport verify_clip_lemma(const HeavyTailSpec& spec, ClipLevel lambda,
                                  std::size_t n_samples, SeededRng& rng,
                                  const ScalarClip& clip = clip_norm_1d);

}  // namespace htmab
