#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "htmab/domain.hpp"

namespace htmab {

enum class ProxKind { Euclidean, ShiftedNegentropy };

// Prox-function psi together with its mirror step and Bregman projection
// onto the feasible set. Two entries exist:
//  - Euclidean: psi = ||x||^2 / 2 on a ball, box or simplex (p = q = 2);
//  - ShiftedNegentropy: psi = (1+g) sum (x_i + g/n) log(x_i + g/n) on the
//    probability simplex (p = 1, q = inf), 1-strongly convex in the 1-norm.
class ProxMap {
 public:
  static constexpr double kDefaultGamma = 1e-3;
  static constexpr double kProjectionTolerance = 1e-10;

  static ProxMap euclidean(Domain domain);
  static ProxMap shifted_negentropy(std::size_t n, double gamma = kDefaultGamma);

  ProxKind kind() const { return kind_; }
  const Domain& domain() const { return domain_; }
  std::size_t dimension() const { return htmab::dimension(domain_); }
  double gamma() const { return gamma_; }
  double primal_p() const;
  double dual_q() const;

  double potential(std::span<const double> x) const;
  // B(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>.
  double divergence(std::span<const double> x, std::span<const double> y) const;

  // argmin_{x in S} B(x, y) with grad psi(y) = grad psi(x_t) - step.
  // Throws ProjectionFailure if the projection misses kProjectionTolerance.
  std::vector<double> mirror_step(std::span<const double> x_t, std::span<const double> step) const;

  // sup_{x, y in S} B(x, y).
  double sup_divergence() const;
  // Minimizer of psi over S, the usual starting point.
  std::vector<double> initial_point() const;

 private:
  ProxMap(ProxKind kind, Domain domain, double gamma);

  ProxKind kind_;
  Domain domain_;
  double gamma_;
};

}  // namespace htmab
