#pragma once

#include <memory>
#include <utility>

#include "htmab/rng.hpp"

namespace htmab {

enum class TailKind { ParetoScaled, LogPareto, PointMass };

// Normalizer and mean of the log-Pareto variable xi on [2, inf) with density
// C / (x^(2+alpha) ln^2 x).
struct LogParetoNormalizer {
  double C;
  double mean;
};

// Computed by adaptive quadrature in log space with an analytic tail bound.
// Throws NonConvergence when the quadrature misses tolerance.
LogParetoNormalizer log_pareto_normalizer(double alpha);

namespace detail {
class LogParetoLaw;
}

// A loss/reward law together with certified moment parameters (alpha, M):
// E|X|^(1+alpha) <= M^(1+alpha). Immutable and cheap to copy; the log-Pareto
// inverse-CDF table is shared between copies.
class HeavyTailSpec {
 public:
  static HeavyTailSpec point_mass(double value, double alpha = 1.0);
  // Pareto(shape, scale) has E X^(1+alpha) finite only for shape > 1 + alpha.
  static HeavyTailSpec pareto(double shape, double scale, double alpha);
  // beta * xi with xi the log-Pareto variable above; support [2 beta, inf).
  static HeavyTailSpec log_pareto(double alpha, double beta);

  TailKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double moment_scale() const { return moment_scale_; }
  double mean() const { return mean_; }
  double scale() const { return scale_; }
  double shape() const { return shape_; }
  double support_min() const;

  double cdf(double x) const;
  double sample(SeededRng& rng) const;

  // Law of factor * X for factor > 0.
  HeavyTailSpec scaled(double factor) const;

 private:
  HeavyTailSpec() = default;

  TailKind kind_ = TailKind::PointMass;
  double alpha_ = 1.0;
  double moment_scale_ = 0.0;
  double mean_ = 0.0;
  double scale_ = 0.0;
  double shape_ = 0.0;
  std::shared_ptr<const detail::LogParetoLaw> law_;
};

inline double sample(const HeavyTailSpec& spec, SeededRng& rng) { return spec.sample(rng); }

// The two-arm study: arms beta_i * xi with beta_0 = 3/E[xi] and
// beta_1 = 3.1/E[xi], so mean losses are 3.0 and 3.1 and arm 0 is optimal.
std::pair<HeavyTailSpec, HeavyTailSpec> experiment_arms(double alpha);

namespace detail {

// Unit-scale log-Pareto law, parameterised in s = ln x where the density is
// C exp(-(1+alpha) s) / s^2 on [ln 2, inf).
class LogParetoLaw {
 public:
  static constexpr int kKnots = 4096;

  explicit LogParetoLaw(double alpha);

  double alpha() const { return alpha_; }
  double normalizer() const { return C_; }
  double mean() const { return mean_; }
  // (E xi^(1+alpha))^(1/(1+alpha))
  double moment_scale() const { return moment_scale_; }

  double density_log(double s) const;
  double survival_log(double s) const;
  double cdf(double x) const;
  double sample(SeededRng& rng) const;
  double knot(int k) const { return knots_[k]; }

 private:
  double invert_tail(double survival, double s_start) const;

  double alpha_;
  double C_;
  double mean_;
  double moment_scale_;
  std::unique_ptr<double[]> knots_;
  std::unique_ptr<double[]> slopes_;
};

// Shared instance per alpha; construction cost is paid once per process.
std::shared_ptr<const LogParetoLaw> log_pareto_law(double alpha);

// Integral of exp(-a v) / v^2 over [s, inf), returned as exp(a s) times the
// integral so large s does not underflow. Requires a > 0, s > 0.
double scaled_exp_tail(double a, double s);

}  // namespace detail
}  // namespace htmab
