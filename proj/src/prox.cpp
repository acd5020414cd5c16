#include "htmab/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "htmab/error.hpp"

namespace htmab {

ProxMap::ProxMap(ProxKind kind, Domain domain, double gamma)
    : kind_(kind), domain_(std::move(domain)), gamma_(gamma) {
  validate(domain_);
}

ProxMap ProxMap::euclidean(Domain domain) { return ProxMap(ProxKind::Euclidean, std::move(domain), 0.0); }

ProxMap ProxMap::shifted_negentropy(std::size_t n, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be > 0");
  return ProxMap(ProxKind::ShiftedNegentropy, ProbabilitySimplex{n}, gamma);
}

double ProxMap::primal_p() const { return kind_ == ProxKind::Euclidean ? 2.0 : 1.0; }

double ProxMap::dual_q() const {
  return kind_ == ProxKind::Euclidean ? 2.0 : std::numeric_limits<double>::infinity();
}

double ProxMap::potential(std::span<const double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("potential: dimension mismatch");
  if (kind_ == ProxKind::Euclidean) return 0.5 * std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  const double shift = gamma_ / static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v + shift) * std::log(v + shift);
  return (1.0 + gamma_) * s;
}

double ProxMap::divergence(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != dimension() || y.size() != dimension()) {
    throw std::invalid_argument("divergence: dimension mismatch");
  }
  double s = 0.0;
  if (kind_ == ProxKind::Euclidean) {
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return 0.5 * s;
  }
  const double shift = gamma_ / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = x[i] + shift, b = y[i] + shift;
    s += a * std::log(a / b) - a + b;
  }
  return (1.0 + gamma_) * s;
}

std::vector<double> ProxMap::mirror_step(std::span<const double> x_t,
                                         std::span<const double> step) const {
  const std::size_t n = dimension();
  if (x_t.size() != n || step.size() != n) throw std::invalid_argument("mirror_step: dimension mismatch");
  if (kind_ == ProxKind::Euclidean) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x_t[i] - step[i];
    return project_euclidean(domain_, y);
  }

  // Shifted coordinates w = x + g/n live on {w >= g/n, sum w = 1 + g}. The
  // dual step gives v = w_t exp(-step / (1+g)); the projection is
  // w_i = max(g/n, s v_i) with the scale s fixed by the sum constraint.
  const double floor = gamma_ / static_cast<double>(n);
  const double total = 1.0 + gamma_;
  std::vector<double> log_v(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_v[i] = std::log(x_t[i] + floor) - step[i] / (1.0 + gamma_);
  }
  const double top = *std::max_element(log_v.begin(), log_v.end());
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::exp(log_v[i] - top);  // scale-free

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  double scale = 0.0, head = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    head += v[order[k - 1]];
    const double candidate = (total - static_cast<double>(n - k) * floor) / head;
    const bool active_ok = candidate * v[order[k - 1]] > floor;
    const bool rest_ok = k == n || candidate * v[order[k]] <= floor;
    if (active_ok && rest_ok) {
      scale = candidate;
      break;
    }
  }
  if (!(scale > 0.0)) throw ProjectionFailure("negentropy projection found no consistent support");

  std::vector<double> x(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::max(floor, scale * v[i]);
    sum += w;
    x[i] = std::max(0.0, w - floor);
  }
  if (std::abs(sum - total) > kProjectionTolerance) {
    throw ProjectionFailure("negentropy projection residual " + std::to_string(sum - total));
  }
  return x;
}

double ProxMap::sup_divergence() const {
  if (kind_ == ProxKind::Euclidean) {
    const double d = euclidean_diameter(domain_);
    return 0.5 * d * d;
  }
  // Attained at a pair of distinct vertices (joint convexity).
  const double n = static_cast<double>(dimension());
  return n > 1 ? (1.0 + gamma_) * std::log(1.0 + n / gamma_) : 0.0;
}

std::vector<double> ProxMap::initial_point() const {
  const std::size_t n = dimension();
  if (std::holds_alternative<ProbabilitySimplex>(domain_)) {
    return std::vector<double>(n, 1.0 / static_cast<double>(n));
  }
  // Ball or box under ||x||^2 / 2: the point of S closest to the origin.
  return project_euclidean(domain_, std::vector<double>(n, 0.0));
}

}  // namespace htmab
