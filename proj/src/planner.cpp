#include "htmab/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "htmab/error.hpp"

namespace htmab {
namespace {

void require_alpha_below_one(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (alpha >= 1.0) throw DegenerateAlpha("schedule needs alpha < 1 (divides by 1 - alpha)");
}

bool conjugate(double p, double q) {
  if (std::isinf(q)) return p == 1.0;
  return std::abs(1.0 / p + 1.0 / q - 1.0) < 1e-12;
}

}  // namespace

Theorem1Plan theorem1_planner(double T, double alpha, std::size_t n, double M) {
  require_alpha_below_one(alpha);
  if (!(T >= 1.0)) throw std::invalid_argument("T must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(M > 0.0)) throw std::invalid_argument("M must be > 0");
  const double a = alpha;
  const double nn = static_cast<double>(n);
  const double ratio = a / (1.0 - a);
  Theorem1Plan plan{};
  plan.lambda = std::pow(T, 1.0 / (1.0 + a)) * std::pow(2.0 * ratio, 2.0 / (1.0 + a)) /
                std::pow(8.0 * nn, 1.0 / (1.0 + a)) * M;
  plan.mu = std::sqrt(2.0) / std::sqrt(T * std::pow(plan.lambda, 1.0 - a) * std::pow(M, 1.0 + a));
  plan.bound = std::pow(T, -a / (1.0 + a)) * M * std::pow(nn, a / (1.0 + a)) *
               std::pow(2.0, 2.0 - a * a / (1.0 + a)) * std::pow(ratio, 2.0 / (1.0 + a));
  return plan;
}

double a_q_constant(std::size_t n, double q) {
  if (!(q >= 2.0)) throw std::invalid_argument("a_q needs q in [2, inf]");
  if (n < 2) throw InvalidDimension("a_q is undefined for n = 1 (32 ln n - 8 < 0)");
  const double nn = static_cast<double>(n);
  const double log_branch = std::sqrt(32.0 * std::log(nn) - 8.0);
  if (std::isinf(q)) return log_branch / std::sqrt(nn);
  return std::pow(nn, 1.0 / q - 0.5) * std::min(log_branch, std::sqrt(2.0 * q - 1.0));
}

double sigma_q(std::size_t n, double q, double alpha, double B, double delta, double tau) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  if (!(B >= 0.0) || !(delta >= 0.0)) throw std::invalid_argument("B and Delta must be >= 0");
  const double scale = static_cast<double>(n) * a_q_constant(n, q) / tau;
  const double power = std::pow(2.0, alpha) * (std::pow(scale * B, alpha + 1.0) +
                                               std::pow(scale * delta, alpha + 1.0));
  return std::pow(power, 1.0 / (alpha + 1.0));
}

void ZoConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be > 0");
  if (!(q >= 2.0)) throw std::invalid_argument("q must lie in [2, inf]");
  if (!conjugate(p, q)) throw std::invalid_argument("p and q must be conjugate");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(delta >= 0.0)) throw std::invalid_argument("Delta must be >= 0");
  if (!(B > 0.0)) throw std::invalid_argument("B must be > 0");
  if (lipschitz_M && !(*lipschitz_M > 0.0)) throw std::invalid_argument("M must be > 0");
  if (smooth_L && !(*smooth_L > 0.0)) throw std::invalid_argument("L must be > 0");
}

DomainGeometry domain_geometry(const ProxMap& prox, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  DomainGeometry g{};
  g.sup_divergence = prox.sup_divergence();
  g.D_psi = std::pow((alpha + 1.0) / alpha * g.sup_divergence, alpha / (alpha + 1.0));
  g.R1 = g.D_psi;
  return g;
}

PlannerOutput plan_parameters(const ZoConfig& cfg, double R1, double D_psi,
                              std::optional<double> eps) {
  cfg.validate();
  require_alpha_below_one(cfg.alpha);
  if (!(R1 > 0.0) || !(D_psi > 0.0)) throw std::invalid_argument("R1 and D_psi must be > 0");
  const double a = cfg.alpha;
  const double n = static_cast<double>(cfg.dim);

  PlannerOutput out{};
  out.R1 = R1;
  out.D_psi = D_psi;
  out.a_q = a_q_constant(cfg.dim, cfg.q);
  out.tau_star = cfg.tau;
  const double core = 4.0 * std::pow(R1, 2.0 * a / (a + 1.0)) *
                      std::pow(D_psi, (1.0 - a) / (a + 1.0)) * n * out.a_q * cfg.B;
  if (eps) {
    if (!(*eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    if (cfg.lipschitz_M) {
      out.tau_star = *eps / (8.0 * *cfg.lipschitz_M);
      out.iterations = std::pow(8.0 * *cfg.lipschitz_M * core / (*eps * *eps), (a + 1.0) / a);
    } else if (cfg.smooth_L) {
      out.tau_star = std::sqrt(*eps / (4.0 * *cfg.smooth_L));
      out.iterations =
          std::pow(std::sqrt(4.0 * *cfg.smooth_L) * core / std::pow(*eps, 1.5), (a + 1.0) / a);
    } else {
      throw std::invalid_argument("an accuracy target needs lipschitz_M or smooth_L");
    }
  }
  out.sigma_q = sigma_q(cfg.dim, cfg.q, a, cfg.B, cfg.delta, out.tau_star);
  const double T = static_cast<double>(cfg.T);
  out.mu_star = std::pow(R1 * R1 / (4.0 * T * std::pow(out.sigma_q, a + 1.0) *
                                    std::pow(D_psi, 1.0 - a)),
                         1.0 / (a + 1.0));
  out.lambda_star = 2.0 * a * D_psi / ((1.0 - a) * out.mu_star);
  ZoConfig at_tau = cfg;
  at_tau.tau = out.tau_star;
  out.regret_bound = zo_regret_bound(at_tau, R1, D_psi);
  return out;
}

double zo_regret_bound(const ZoConfig& cfg, double R1, double D_psi) {
  cfg.validate();
  const double a = cfg.alpha;
  const double n = static_cast<double>(cfg.dim);
  double smoothing = 0.0;
  if (cfg.lipschitz_M) {
    smoothing = 4.0 * *cfg.lipschitz_M * cfg.tau;
  } else if (cfg.smooth_L) {
    smoothing = 2.0 * *cfg.smooth_L * cfg.tau * cfg.tau;
  }
  const double adversarial = cfg.delta * std::sqrt(n) / cfg.tau * D_psi;
  const double stochastic = 4.0 * std::pow(R1, 2.0 * a / (a + 1.0)) *
                            std::pow(D_psi, (1.0 - a) / (a + 1.0)) * n *
                            a_q_constant(cfg.dim, cfg.q) * (cfg.delta + cfg.B) /
                            (cfg.tau * std::pow(static_cast<double>(cfg.T), a / (a + 1.0)));
  return smoothing + adversarial + stochastic;
}

}  // namespace htmab
