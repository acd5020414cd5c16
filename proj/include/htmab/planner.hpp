#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "htmab/prox.hpp"

namespace htmab {

// Linear-bandit schedule: clip level, stepsize and the average-regret bound
//   lambda = T^(1/(1+a)) (2a/(1-a))^(2/(1+a)) / (8n)^(1/(1+a)) M
//   mu     = sqrt(2) / sqrt(T lambda^(1-a) M^(1+a))
//   bound  = T^(-a/(1+a)) M n^(a/(1+a)) 2^(2 - a^2/(1+a)) (a/(1-a))^(2/(1+a))
struct Theorem1Plan {
  double lambda;
  double mu;
  double bound;
};

// Throws DegenerateAlpha for alpha >= 1.
Theorem1Plan theorem1_planner(double T, double alpha, std::size_t n, double M);

// a_q = n^(1/q - 1/2) min{sqrt(32 ln n - 8), sqrt(2q - 1)}; q = inf keeps the
// logarithmic branch. Throws InvalidDimension for n = 1.
double a_q_constant(std::size_t n, double q);

// sigma_q with sigma^(a+1) = 2^a (n a_q B / tau)^(a+1) + 2^a (n a_q Delta / tau)^(a+1).
double sigma_q(std::size_t n, double q, double alpha, double B, double delta, double tau);

// Inputs of the zeroth-order method. p and q are conjugate (p = 1 pairs with
// q = inf). Exactly one of lipschitz_M / smooth_L is normally set.
struct ZoConfig {
  std::size_t dim = 2;
  double tau = 0.1;
  double p = 2.0;
  double q = 2.0;
  double gamma = ProxMap::kDefaultGamma;
  double mu = 1e-3;
  double lambda = 1.0;
  std::uint64_t T = 1000;
  double alpha = 0.5;
  double delta = 0.0;
  double B = 1.0;
  std::optional<double> lipschitz_M;
  std::optional<double> smooth_L;

  void validate() const;
};

struct PlannerOutput {
  double a_q;
  double sigma_q;
  double mu_star;
  double lambda_star;
  double tau_star;  // cfg.tau unless an accuracy target was given
  double R1;
  double D_psi;
  std::optional<double> iterations;  // T_M or T_L for the accuracy target
  double regret_bound;               // right-hand side of the average-regret bound
};

// Distance terms derived from the prox geometry:
// D^((a+1)/a) = (a+1)/a sup B(x, y); R1 uses the same supremum because the
// minimizer is unknown in advance.
struct DomainGeometry {
  double sup_divergence;
  double D_psi;
  double R1;
};
DomainGeometry domain_geometry(const ProxMap& prox, double alpha);

// Evaluates the closed-form schedule
//   mu* = (R1^2 / (4 T sigma^(a+1) D^(1-a)))^(1/(a+1)),  lambda* = 2 a D / ((1-a) mu*)
// and, for an accuracy target eps, tau_M = eps/(8M) or tau_L = sqrt(eps/(4L))
// with the matching iteration count. sigma_q is evaluated at tau_star.
// Throws DegenerateAlpha for alpha >= 1.
PlannerOutput plan_parameters(const ZoConfig& cfg, double R1, double D_psi,
                              std::optional<double> eps = std::nullopt);

// Average-regret bound
//   4 M tau (or 2 L tau^2) + Delta sqrt(n) D / tau
//   + 4 R1^(2a/(a+1)) D^((1-a)/(a+1)) n a_q (Delta + B) / (tau T^(a/(a+1))).
double zo_regret_bound(const ZoConfig& cfg, double R1, double D_psi);

}  // namespace htmab
