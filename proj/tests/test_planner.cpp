#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "htmab/error.hpp"
#include "htmab/planner.hpp"
#include "htmab/prox.hpp"
#include "htmab/rng.hpp"
#include "oracles.hpp"

using namespace htmab;
using oracle::mp;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

ZoConfig config(std::size_t n, double q, double alpha, double B, double delta, double tau, std::uint64_t T) {
  ZoConfig cfg;
  cfg.dim = n;
  cfg.q = q;
  cfg.p = std::isinf(q) ? 1.0 : q / (q - 1.0);
  cfg.alpha = alpha;
  cfg.B = B;
  cfg.delta = delta;
  cfg.tau = tau;
  cfg.T = T;
  return cfg;
}

}  // namespace

TEST_CASE("a_q examples") {
  CHECK(a_q_constant(2, 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(a_q_constant(2, kInf) == doctest::Approx(std::sqrt(32 * std::log(2.0) - 8) / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(a_q_constant(2, kInf) == doctest::Approx(2.66278).epsilon(1e-5));
  CHECK_THROWS_AS(a_q_constant(1, 2.0), InvalidDimension);
  CHECK_THROWS_AS(a_q_constant(1, kInf), InvalidDimension);
  CHECK_THROWS_AS(a_q_constant(3, 1.5), std::invalid_argument);
}

TEST_CASE("linear-bandit schedule example") {
  const auto p = theorem1_planner(8000, 0.5, 2, 1.0);
  CHECK(p.lambda == doctest::Approx(158.740).epsilon(1e-5));
  CHECK(p.mu == doctest::Approx(4.455e-3).epsilon(1e-3));
  CHECK(p.bound == doctest::Approx(0.22449).epsilon(1e-4));
  const auto o = oracle::bandit_schedule(8000, mp(1) / 2, 2, 1);
  CHECK(oracle::rel_err(p.lambda, o.lambda) <= 1e-12);
  CHECK(oracle::rel_err(p.mu, o.mu) <= 1e-12);
  CHECK(oracle::rel_err(p.bound, o.bound) <= 1e-12);
}

TEST_CASE("linear-bandit schedule matches the multiprecision oracle on 20 tuples") {
  SeededRng rng(1);
  for (int i = 0; i < 20; ++i) {
    const double T = std::floor(std::exp(2.0 + 12.0 * rng.uniform()));
    const double a = 0.05 + 0.85 * rng.uniform();
    const std::size_t n = 1 + rng.below(50);
    const double M = std::exp(3.0 * rng.normal());
    const auto p = theorem1_planner(T, a, n, M);
    const auto o = oracle::bandit_schedule(mp(T), mp(a), mp(double(n)), mp(M));
    CAPTURE(T);
    CAPTURE(a);
    CHECK(oracle::rel_err(p.lambda, o.lambda) <= 1e-10);
    CHECK(oracle::rel_err(p.mu, o.mu) <= 1e-10);
    CHECK(oracle::rel_err(p.bound, o.bound) <= 1e-10);
  }
}

TEST_CASE("linear-bandit schedule is homogeneous in M and scales with T as a power law") {
  SeededRng rng(2);
  for (int i = 0; i < 20; ++i) {
    const double T = 100 + 1e5 * rng.uniform(), a = 0.1 + 0.8 * rng.uniform(), M = 0.1 + 5 * rng.uniform();
    const auto p = theorem1_planner(T, a, 3, M);
    const auto q = theorem1_planner(T, a, 3, 2 * M);
    CHECK(q.lambda == doctest::Approx(2 * p.lambda).epsilon(1e-13));
    CHECK(q.bound == doctest::Approx(2 * p.bound).epsilon(1e-13));
    CHECK(q.mu == doctest::Approx(p.mu / 2).epsilon(1e-13));
    const auto r = theorem1_planner(16 * T, a, 3, M);
    CHECK(r.bound == doctest::Approx(p.bound * std::pow(16.0, -a / (1 + a))).epsilon(1e-13));
  }
}

TEST_CASE("degenerate alpha is rejected") {
  CHECK_THROWS_AS(theorem1_planner(1000, 1.0, 2, 1.0), DegenerateAlpha);
  const auto cfg = config(2, 2.0, 1.0, 1, 0, 0.1, 1000);
  CHECK_THROWS_AS(plan_parameters(cfg, 1, 1), DegenerateAlpha);
  CHECK_THROWS_AS(theorem1_planner(1000, 0.0, 2, 1.0), std::invalid_argument);
}

TEST_CASE("zeroth-order schedule example regression") {
  const auto cfg = config(2, 2.0, 0.5, 1.0, 0.0, 0.1, 1000);
  const auto p = plan_parameters(cfg, 1.0, 1.0);
  const auto o = oracle::zo_schedule(2, 2, mp(1) / 2, 1, 0, mp(1) / 10, 1000, 1, 1);
  CHECK(oracle::rel_err(p.a_q, o.a_q) <= 1e-10);
  CHECK(oracle::rel_err(p.sigma_q, o.sigma) <= 1e-10);
  CHECK(oracle::rel_err(p.mu_star, o.mu) <= 1e-10);
  CHECK(oracle::rel_err(p.lambda_star, o.lambda) <= 1e-10);
  // Stored values.
  CHECK(p.sigma_q == doctest::Approx(43.644945438868845).epsilon(1e-13));
  CHECK(p.mu_star == doctest::Approx(9.092696966431018e-05).epsilon(1e-13));
  CHECK(p.lambda_star == doctest::Approx(21995.674191977625).epsilon(1e-13));
  CHECK(p.tau_star == 0.1);
  CHECK_FALSE(p.iterations.has_value());
}

TEST_CASE("zeroth-order schedule matches the multiprecision oracle on 20 tuples") {
  SeededRng rng(3);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + rng.below(30);
    const double q = rng.uniform() < 0.3 ? kInf : 2.0 + 20.0 * rng.uniform();
    const double a = 0.05 + 0.9 * rng.uniform();
    const double B = std::exp(rng.normal()), delta = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    const double tau = 0.01 + rng.uniform();
    const std::uint64_t T = 10 + rng.below(1000000);
    const double R1 = 0.1 + 3 * rng.uniform(), D = 0.1 + 3 * rng.uniform();
    const auto p = plan_parameters(config(n, q, a, B, delta, tau, T), R1, D);
    const auto o = oracle::zo_schedule(mp(double(n)), std::isinf(q) ? mp(-1) : mp(q), mp(a), mp(B), mp(delta),
                                    mp(tau), mp(double(T)), mp(R1), mp(D));
    CAPTURE(n);
    CAPTURE(q);
    CHECK(oracle::rel_err(p.a_q, o.a_q) <= 1e-10);
    CHECK(oracle::rel_err(a_q_constant(n, q), o.a_q) <= 1e-10);
    CHECK(oracle::rel_err(p.sigma_q, o.sigma) <= 1e-10);
    CHECK(oracle::rel_err(sigma_q(n, q, a, B, delta, tau), o.sigma) <= 1e-10);
    CHECK(oracle::rel_err(p.mu_star, o.mu) <= 1e-10);
    CHECK(oracle::rel_err(p.lambda_star, o.lambda) <= 1e-10);
  }
}

TEST_CASE("accuracy targets fix the smoothing radius") {
  auto cfg = config(2, 2.0, 0.5, 1.0, 0.0, 0.1, 1000);
  cfg.lipschitz_M = 1.0;
  const auto pm = plan_parameters(cfg, 1.0, 1.0, 0.1);
  CHECK(pm.tau_star == doctest::Approx(0.0125).epsilon(1e-15));
  REQUIRE(pm.iterations.has_value());
  CHECK(*pm.iterations > 0.0);
  // sigma is evaluated at the planned radius.
  CHECK(pm.sigma_q == doctest::Approx(sigma_q(2, 2.0, 0.5, 1.0, 0.0, 0.0125)).epsilon(1e-15));

  cfg.lipschitz_M.reset();
  cfg.smooth_L = 1.0;
  const auto pl = plan_parameters(cfg, 1.0, 1.0, 0.1);
  CHECK(pl.tau_star == doctest::Approx(std::sqrt(0.025)).epsilon(1e-15));
  CHECK(pl.tau_star == doctest::Approx(0.1581139).epsilon(1e-7));

  cfg.smooth_L.reset();
  CHECK_THROWS_AS(plan_parameters(cfg, 1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("tau_M and tau_L match the multiprecision oracle on 20 tuples") {
  SeededRng rng(4);
  using boost::multiprecision::sqrt;
  for (int i = 0; i < 20; ++i) {
    const double eps = std::exp(-3.0 * rng.uniform()), c = std::exp(2.0 * rng.normal());
    auto cfg = config(3, kInf, 0.5, 1.0, 0.0, 0.1, 1000);
    cfg.lipschitz_M = c;
    CHECK(oracle::rel_err(plan_parameters(cfg, 1, 1, eps).tau_star, mp(eps) / (8 * mp(c))) <= 1e-10);
    cfg.lipschitz_M.reset();
    cfg.smooth_L = c;
    CHECK(oracle::rel_err(plan_parameters(cfg, 1, 1, eps).tau_star, sqrt(mp(eps) / (4 * mp(c)))) <= 1e-10);
  }
}

TEST_CASE("zeroth-order regret bound terms") {
  auto cfg = config(4, 2.0, 0.5, 2.0, 0.3, 0.2, 5000);
  cfg.lipschitz_M = 1.5;
  const double R1 = 0.7, D = 1.1;
  const double aq = a_q_constant(4, 2.0);
  const double want = 4 * 1.5 * 0.2 + 0.3 * 2.0 / 0.2 * D +
                      4 * std::pow(R1, 2.0 / 3.0) * std::pow(D, 1.0 / 3.0) * 4 * aq * 2.3 /
                          (0.2 * std::pow(5000.0, 1.0 / 3.0));
  CHECK(zo_regret_bound(cfg, R1, D) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("domain geometry of the built-in prox maps") {
  const double a = 0.5;
  const auto euc = domain_geometry(ProxMap::euclidean(Ball{{0.0, 0.0}, 1.0}), a);
  CHECK(euc.sup_divergence == doctest::Approx(2.0));  // half the squared diameter
  CHECK(euc.D_psi == doctest::Approx(std::pow(3.0 * 2.0, 1.0 / 3.0)));
  CHECK(euc.R1 == euc.D_psi);
  const double gamma = 1e-3;
  const auto neg = domain_geometry(ProxMap::shifted_negentropy(3, gamma), a);
  CHECK(neg.sup_divergence == doctest::Approx((1 + gamma) * std::log(1 + 3 / gamma)));
  CHECK(neg.D_psi > 0.0);
}

TEST_CASE("config validation") {
  auto cfg = config(2, 2.0, 0.5, 1, 0, 0.1, 100);
  cfg.p = 3.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = config(2, kInf, 0.5, 1, 0, 0.1, 100);
  CHECK_NOTHROW(cfg.validate());
  cfg.tau = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
