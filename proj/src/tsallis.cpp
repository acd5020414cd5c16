#include "htmab/tsallis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "htmab/error.hpp"

namespace htmab {

void TsallisConfig::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("Tsallis q must lie in (0, 1)");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("stepsize mu must be > 0");
}

double tsallis_potential(std::span<const double> x, double q) {
  double s = 0.0;
  for (double v : x) s += std::pow(v, q);
  return (1.0 - s) / (1.0 - q);
}

double bregman(std::span<const double> x, std::span<const double> y, double q) {
  if (x.size() != y.size()) throw std::invalid_argument("bregman: size mismatch");
  // Summed per coordinate: y^q - x^q + q y^(q-1) (x - y), all over (1-q).
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) throw std::invalid_argument("bregman: y must be strictly positive");
    s += std::pow(y[i], q) - std::pow(x[i], q) + q * std::pow(y[i], q - 1.0) * (x[i] - y[i]);
  }
  return s / (1.0 - q);
}

double step_objective(std::span<const double> x, const SimplexPoint& previous,
                      std::span<const double> g_hat, const TsallisConfig& cfg) {
  const double q = cfg.q;
  double linear = 0.0, entropy = 0.0, anchor = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    linear += x[i] * g_hat[i];
    entropy += std::pow(x[i], q);
    anchor += std::pow(previous[i], q - 1.0) * x[i];
  }
  return cfg.mu * linear - entropy / (1.0 - q) + q / (1.0 - q) * anchor;
}

OmdStepResult omd_step(const SimplexPoint& previous, std::span<const double> g_hat,
                       const TsallisConfig& cfg) {
  cfg.validate();
  const std::size_t n = previous.size();
  if (g_hat.size() != n) throw std::invalid_argument("omd_step: gradient size mismatch");
  for (double g : g_hat) {
    if (!std::isfinite(g)) throw std::invalid_argument("omd_step: gradient must be finite");
  }
  if (n == 1) return {SimplexPoint({1.0}), {}};

  const double q = cfg.q;
  const double k = (1.0 - q) / q;
  const double expo = 1.0 / (q - 1.0);

  // x_i(nu) = (anchor_i + k (shift_i + nu))^expo, decreasing in nu.
  std::vector<double> anchor(n), shift(n);
  for (std::size_t i = 0; i < n; ++i) {
    anchor[i] = std::pow(previous[i], q - 1.0);
    shift[i] = cfg.mu * g_hat[i];
  }
  auto excess = [&](double nu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(anchor[i] + k * (shift[i] + nu), expo);
    return s - 1.0;
  };
  auto excess_slope = [&](double nu) {
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d += expo * k * std::pow(anchor[i] + k * (shift[i] + nu), expo - 1.0);
    }
    return d;
  };

  // Closed-form bracket: at nu_lo some coordinate equals 1, at nu_hi every
  // coordinate is at most 1/n. nu_floor is where a base first hits zero.
  double nu_lo = -std::numeric_limits<double>::infinity();
  double nu_hi = -std::numeric_limits<double>::infinity();
  double nu_floor = -std::numeric_limits<double>::infinity();
  const double top = std::pow(static_cast<double>(n), 1.0 - q);
  for (std::size_t i = 0; i < n; ++i) {
    nu_lo = std::max(nu_lo, (1.0 - anchor[i]) / k - shift[i]);
    nu_hi = std::max(nu_hi, (top - anchor[i]) / k - shift[i]);
    nu_floor = std::max(nu_floor, -anchor[i] / k - shift[i]);
  }

  int iterations = 0;
  // Rounding can spoil the analytic bracket; widen geometrically until the
  // sign change is confirmed.
  for (double width = std::max(1.0, std::abs(nu_hi - nu_lo)); excess(nu_hi) > 0.0; width *= 2.0) {
    nu_hi += width;
    if (++iterations > 200) throw RootBracketFailure("omd_step: no upper bracket for nu");
  }
  while (excess(nu_lo) < 0.0) {
    nu_lo = nu_floor + 0.5 * (nu_lo - nu_floor);
    if (++iterations > 200) throw RootBracketFailure("omd_step: no lower bracket for nu");
  }

  while (nu_hi - nu_lo > 1e-13 * std::max(1.0, std::abs(nu_lo))) {
    const double mid = 0.5 * (nu_lo + nu_hi);
    if (mid <= nu_lo || mid >= nu_hi) break;
    if (excess(mid) > 0.0) nu_lo = mid; else nu_hi = mid;
    ++iterations;
  }
  double nu = 0.5 * (nu_lo + nu_hi);
  for (int polish = 0; polish < 2; ++polish) {
    const double slope = excess_slope(nu);
    if (slope == 0.0) break;
    const double next = nu - excess(nu) / slope;
    if (next >= nu_lo && next <= nu_hi) nu = next;
    ++iterations;
  }

  std::vector<double> x(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::pow(anchor[i] + k * (shift[i] + nu), expo);
    total += x[i];
  }
  const double residual = total - 1.0;
  for (double& v : x) v /= total;
  return {SimplexPoint(std::move(x)), {nu, iterations, residual}};
}

}  // namespace htmab
