#include "htmab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace htmab {

SimplexPoint::SimplexPoint(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("simplex point needs at least one entry");
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("simplex entries must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("simplex entries must sum to one");
  }
  for (double& p : probs_) p = std::max(p, kFloor);
  total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  for (double& p : probs_) p = std::max(p / total, kFloor);
}

SimplexPoint SimplexPoint::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("simplex point needs at least one entry");
  return SimplexPoint(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double lp_norm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  // Scale by the max entry so large p does not overflow.
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  if (p == 2.0) {
    double s = 0.0;
    for (double x : v) s += (x / m) * (x / m);
    return m * std::sqrt(s);
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace htmab
