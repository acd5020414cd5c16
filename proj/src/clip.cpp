#include "htmab/clip.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "htmab/error.hpp"

namespace htmab {

ClipLevel::ClipLevel(double lambda) : lambda_(lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("clip level must be finite and > 0");
  }
}

double clip_scalar(double g, ClipLevel lambda) { return std::min(g, lambda.value()); }

std::vector<double> clip_vector(std::span<const double> g, ClipLevel lambda, double q) {
  if (!(q >= 2.0)) throw std::invalid_argument("clip_vector needs q in [2, inf]");
  std::vector<double> out(g.begin(), g.end());
  const double norm = lp_norm(g, q);
  if (norm > lambda.value()) {
    const double factor = lambda.value() / norm;
    for (double& v : out) v *= factor;
  }
  return out;
}

GradientEstimate iw_clipped_estimate(double loss, std::size_t arm, const SimplexPoint& x,
                                     ClipLevel lambda) {
  if (arm >= x.size()) throw std::out_of_range("arm index out of range");
  if (x[arm] < kProbabilityFloor) {
    throw DegenerateProbability("probability of arm " + std::to_string(arm) +
                                " is below the floor");
  }
  GradientEstimate est{std::vector<double>(x.size(), 0.0), arm};
  est.values[arm] = clip_scalar(loss, lambda) / x[arm];
  return est;
}

double clip_norm_1d(double value, double lambda) {
  return std::abs(value) <= lambda ? value : std::copysign(lambda, value);
}

ClipLemmaReport verify_clip_lemma(const HeavyTailSpec& spec, ClipLevel lambda,
                                  std::size_t n_samples, SeededRng& rng,
                                  const ScalarClip& clip) {
  if (n_samples < 100000) throw std::invalid_argument("clip lemma check needs >= 1e5 samples");
  const double lam = lambda.value();
  const double alpha = spec.alpha();
  const double sigma_pow = std::pow(spec.moment_scale(), 1.0 + alpha);

  std::vector<double> clipped(n_samples);
  double sum_raw = 0.0, sum_clipped = 0.0, sum_sq_clipped = 0.0;
  double sum_gap = 0.0, sum_gap_sq = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = spec.sample(rng);
    const double c = clip(x, lam);
    clipped[i] = c;
    sum_raw += x;
    sum_clipped += c;
    sum_sq_clipped += c * c;
    const double gap = x - c;
    sum_gap += gap;
    sum_gap_sq += gap * gap;
  }
  const double n = static_cast<double>(n_samples);
  const double mean_clipped = sum_clipped / n;

  ClipLemmaReport r;
  r.samples = n_samples;
  for (double c : clipped) r.max_deviation = std::max(r.max_deviation, std::abs(c - mean_clipped));
  r.deviation_bound = 2.0 * lam;
  r.deviation_ok = r.max_deviation <= r.deviation_bound + 1e-12;

  r.second_moment = sum_sq_clipped / n;
  r.second_moment_bound = sigma_pow * std::pow(lam, 1.0 - alpha);
  r.second_moment_ok = r.second_moment <= 1.1 * r.second_moment_bound;

  r.bias = std::abs(sum_raw / n - mean_clipped);
  r.bias_bound = sigma_pow / std::pow(lam, alpha);
  const double gap_mean = sum_gap / n;
  const double gap_var = std::max(0.0, sum_gap_sq / n - gap_mean * gap_mean);
  r.bias_mc_allowance = 3.0 * std::sqrt(gap_var / n);
  r.bias_ok = r.bias <= 1.1 * r.bias_bound + r.bias_mc_allowance;
  return r;
}

}  // namespace htmab
