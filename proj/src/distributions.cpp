#include "htmab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "htmab/error.hpp"
#include "htmab/quadrature.hpp"

namespace htmab {
namespace {

constexpr double kLn2 = 0.693147180559945309417232121458176568;
constexpr double kTailRelTol = 1e-14;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

}  // namespace

namespace detail {

double scaled_exp_tail(double a, double s) {
  if (!(a > 0.0) || !(s > 0.0)) throw std::invalid_argument("scaled_exp_tail needs a, s > 0");
  // exp(-a s)/(s (a s + 2)) <= tail <= exp(-a s)/(a s^2); the lower end sets
  // the scale for the truncation tolerance.
  const double rough = 1.0 / (s * (a * s + 2.0));
  auto bound_beyond = [&](double w) { return std::exp(-a * w) / (a * (s + w) * (s + w)); };
  double width = 8.0 / a;
  while (bound_beyond(width) >= kTailRelTol * rough) width *= 1.5;

  const auto integrand = [a, s](double v) { return std::exp(-a * (v - s)) / (v * v); };
  const auto body = quad::integrate(integrand, s, s + width, 1e-3 * kTailRelTol * rough, 1e-14);
  return body.value + bound_beyond(width);
}

LogParetoLaw::LogParetoLaw(double alpha)
    : alpha_(alpha), knots_(new double[kKnots]), slopes_(new double[kKnots]) {
  require_alpha(alpha);
  const double a = 1.0 + alpha;
  const auto norm = log_pareto_normalizer(alpha);
  C_ = norm.C;
  mean_ = norm.mean;

  // E xi^(1+alpha) = C * integral of v^-2 over [ln 2, inf); quadrature on a
  // finite range plus the exact remainder 1/cut.
  constexpr double kMomentCut = 64.0;
  const auto body = quad::integrate([](double v) { return 1.0 / (v * v); }, kLn2, kMomentCut,
                                    1e-15, 1e-14);
  moment_scale_ = std::pow(C_ * (body.value + 1.0 / kMomentCut), 1.0 / a);

  knots_[0] = kLn2;
  slopes_[0] = 1.0 / density_log(kLn2);
  for (int k = 1; k < kKnots; ++k) {
    const double target = static_cast<double>(kKnots - k) / kKnots;
    knots_[k] = invert_tail(target, knots_[k - 1]);
    slopes_[k] = 1.0 / density_log(knots_[k]);
  }
}

double LogParetoLaw::density_log(double s) const {
  return C_ * std::exp(-(1.0 + alpha_) * s) / (s * s);
}

double LogParetoLaw::survival_log(double s) const {
  if (s <= kLn2) return 1.0;
  const double a = 1.0 + alpha_;
  return C_ * std::exp(-a * s) * scaled_exp_tail(a, s);
}

double LogParetoLaw::cdf(double x) const {
  if (x <= 2.0) return 0.0;
  return 1.0 - survival_log(std::log(x));
}

// Solves survival(s) = target for s >= s_start by Newton on log-survival,
// safeguarded by bisection. log-survival has derivative
// -1 / (s^2 * scaled_exp_tail(1+alpha, s)).
double LogParetoLaw::invert_tail(double target, double s_start) const {
  const double a = 1.0 + alpha_;
  const double log_target = std::log(target);
  auto residual = [&](double s, double& slope) {
    const double scaled = scaled_exp_tail(a, s);
    slope = -1.0 / (s * s * scaled);
    return std::log(C_) - a * s + std::log(scaled) - log_target;
  };

  double lo = s_start;
  double slope = 0.0;
  double r_lo = residual(lo, slope);
  if (r_lo <= 0.0) return lo;
  double hi = lo + 1.0;
  double dummy;
  while (residual(hi, dummy) > 0.0) {
    lo = hi;
    hi = lo + 2.0 * (hi - s_start + 1.0);
  }

  double s = lo;
  double r = residual(s, slope);
  for (int iter = 0; iter < 200; ++iter) {
    if (r > 0.0) lo = s; else hi = s;
    double next = s - r / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    r = residual(s, slope);
    if (step <= 1e-14 * std::max(1.0, s) || hi - lo <= 1e-14 * std::max(1.0, s)) return s;
  }
  throw NonConvergence("log-Pareto tail inversion did not converge");
}

double LogParetoLaw::sample(SeededRng& rng) const {
  const double u = rng.uniform();
  const double scaled = u * kKnots;
  const int k = static_cast<int>(scaled);
  if (k >= kKnots - 1) {
    return std::exp(invert_tail(1.0 - u, knots_[kKnots - 1]));
  }

  // Cubic Hermite guess for s(F) on the cell, then Newton on the CDF with the
  // cell as bracket.
  const double t = scaled - k;
  const double h = 1.0 / kKnots;
  const double t2 = t * t;
  const double t3 = t2 * t;
  double lo = knots_[k];
  double hi = knots_[k + 1];
  double s = (2 * t3 - 3 * t2 + 1) * lo + (t3 - 2 * t2 + t) * h * slopes_[k] +
             (-2 * t3 + 3 * t2) * hi + (t3 - t2) * h * slopes_[k + 1];
  s = std::clamp(s, lo, hi);

  const double cell_base = static_cast<double>(k) / kKnots;
  const double cell_lo = knots_[k];
  auto density = [this](double v) { return density_log(v); };
  for (int iter = 0; iter < 16; ++iter) {
    const double F = cell_base + (s > cell_lo ? quad::gauss_kronrod15(density, cell_lo, s).value : 0.0);
    const double diff = u - F;
    if (diff > 0.0) lo = s; else hi = s;
    double next = s + diff / density_log(s);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= 1e-8 * (knots_[k + 1] - knots_[k]) || step <= 1e-15 * s) break;
  }
  return std::exp(s);
}

std::shared_ptr<const LogParetoLaw> log_pareto_law(double alpha) {
  static std::mutex mutex;
  static std::map<double, std::shared_ptr<const LogParetoLaw>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[alpha];
  if (!slot) slot = std::make_shared<const LogParetoLaw>(alpha);
  return slot;
}

}  // namespace detail

LogParetoNormalizer log_pareto_normalizer(double alpha) {
  require_alpha(alpha);
  const double a = 1.0 + alpha;
  const double C = 1.0 / (std::exp(-a * kLn2) * detail::scaled_exp_tail(a, kLn2));
  const double mean = C * std::exp(-alpha * kLn2) * detail::scaled_exp_tail(alpha, kLn2);
  return {C, mean};
}

HeavyTailSpec HeavyTailSpec::point_mass(double value, double alpha) {
  require_alpha(alpha);
  if (!std::isfinite(value)) throw std::invalid_argument("point mass value must be finite");
  HeavyTailSpec spec;
  spec.kind_ = TailKind::PointMass;
  spec.alpha_ = alpha;
  spec.scale_ = value;
  spec.mean_ = value;
  spec.moment_scale_ = std::abs(value);
  return spec;
}

HeavyTailSpec HeavyTailSpec::pareto(double shape, double scale, double alpha) {
  require_alpha(alpha);
  if (!(scale > 0.0)) throw std::invalid_argument("pareto scale must be > 0");
  if (!(shape > 1.0 + alpha)) {
    throw std::invalid_argument("pareto shape must exceed 1 + alpha for a finite moment");
  }
  HeavyTailSpec spec;
  spec.kind_ = TailKind::ParetoScaled;
  spec.alpha_ = alpha;
  spec.shape_ = shape;
  spec.scale_ = scale;
  spec.mean_ = shape * scale / (shape - 1.0);
  const double a = 1.0 + alpha;
  spec.moment_scale_ = scale * std::pow(shape / (shape - a), 1.0 / a);
  return spec;
}

HeavyTailSpec HeavyTailSpec::log_pareto(double alpha, double beta) {
  require_alpha(alpha);
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("beta must be > 0");
  HeavyTailSpec spec;
  spec.kind_ = TailKind::LogPareto;
  spec.alpha_ = alpha;
  spec.scale_ = beta;
  spec.law_ = detail::log_pareto_law(alpha);
  spec.mean_ = beta * spec.law_->mean();
  spec.moment_scale_ = beta * spec.law_->moment_scale();
  return spec;
}

double HeavyTailSpec::support_min() const {
  switch (kind_) {
    case TailKind::PointMass: return scale_;
    case TailKind::ParetoScaled: return scale_;
    case TailKind::LogPareto: return 2.0 * scale_;
  }
  return 0.0;
}

double HeavyTailSpec::cdf(double x) const {
  switch (kind_) {
    case TailKind::PointMass: return x >= scale_ ? 1.0 : 0.0;
    case TailKind::ParetoScaled: return x <= scale_ ? 0.0 : 1.0 - std::pow(scale_ / x, shape_);
    case TailKind::LogPareto: return law_->cdf(x / scale_);
  }
  return 0.0;
}

double HeavyTailSpec::sample(SeededRng& rng) const {
  switch (kind_) {
    case TailKind::PointMass: return scale_;
    case TailKind::ParetoScaled: return scale_ * std::pow(rng.uniform(), -1.0 / shape_);
    case TailKind::LogPareto: return scale_ * law_->sample(rng);
  }
  return 0.0;
}

HeavyTailSpec HeavyTailSpec::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("scale factor must be finite and > 0");
  }
  HeavyTailSpec out = *this;
  out.scale_ *= factor;
  out.mean_ *= factor;
  out.moment_scale_ *= factor;
  return out;
}

std::pair<HeavyTailSpec, HeavyTailSpec> experiment_arms(double alpha) {
  const double mean_xi = detail::log_pareto_law(alpha)->mean();
  return {HeavyTailSpec::log_pareto(alpha, 3.0 / mean_xi),
          HeavyTailSpec::log_pareto(alpha, 3.1 / mean_xi)};
}

}  // namespace htmab
