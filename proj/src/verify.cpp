#include "htmab/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <utility>

#include "htmab/distributions.hpp"
#include "htmab/envs.hpp"
#include "htmab/planner.hpp"
#include "htmab/prox.hpp"
#include "htmab/tsallis.hpp"
#include "htmab/zeroth.hpp"

namespace htmab {
namespace {

using Outcome = std::pair<bool, std::string>;

std::string printf_string(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::vector<double> random_simplex(std::size_t n, SeededRng& rng) {
  std::vector<double> x(n);
  double s = 0.0;
  for (double& v : x) {
    v = -std::log(rng.uniform());
    s += v;
  }
  for (double& v : x) v /= s;
  return x;
}

Outcome moment_certification(std::size_t samples, SeededRng& rng) {
  const std::vector<HeavyTailSpec> specs{HeavyTailSpec::log_pareto(0.3, 1.0),
                                         HeavyTailSpec::log_pareto(0.5, 0.5),
                                         HeavyTailSpec::pareto(3.0, 1.0, 0.5)};
  double worst = 0.0;
  for (const auto& spec : specs) {
    double s = 0.0;
    for (std::size_t i = 0; i < samples; ++i) s += std::pow(std::abs(spec.sample(rng)), 1.0 + spec.alpha());
    const double ratio = s / static_cast<double>(samples) / std::pow(spec.moment_scale(), 1.0 + spec.alpha());
    worst = std::max(worst, ratio);
  }
  return {worst <= 1.1, printf_string("max E|X|^(1+a) / M^(1+a) = %.4f (limit 1.1)", worst)};
}

Outcome log_pareto_support_and_cdf(std::size_t samples, SeededRng& rng) {
  const auto spec = HeavyTailSpec::log_pareto(0.5, 1.0);
  std::vector<double> draws(samples);
  double lowest = std::numeric_limits<double>::infinity();
  for (double& d : draws) {
    d = spec.sample(rng);
    lowest = std::min(lowest, d);
  }
  std::sort(draws.begin(), draws.end());
  // Compare the empirical CDF with the model CDF at 20 empirical quantiles.
  double worst = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const std::size_t idx = std::min(samples - 1, samples * static_cast<std::size_t>(k) / 21);
    const double empirical = static_cast<double>(idx + 1) / static_cast<double>(samples);
    worst = std::max(worst, std::abs(empirical - spec.cdf(draws[idx])));
  }
  const double tol = std::max(5e-3, 2.5 / std::sqrt(static_cast<double>(samples)));
  return {lowest >= 2.0 && worst <= tol,
          printf_string("min draw %.6f (>= 2), max CDF gap %.2e (tol %.2e)", lowest, worst, tol)};
}

Outcome clip_lemma(const ScalarClip& clip, std::size_t samples, SeededRng& rng) {
  const auto r = verify_clip_lemma(HeavyTailSpec::log_pareto(0.5, 1.0), ClipLevel(100.0),
                                   std::max<std::size_t>(samples, 100000), rng, clip);
  return {r.passed(),
          printf_string("dev %.3g/%.3g, E c^2 %.4g/%.4g, bias %.4g/%.4g(+%.3g)", r.max_deviation,
                        r.deviation_bound, r.second_moment, 1.1 * r.second_moment_bound, r.bias,
                        1.1 * r.bias_bound, r.bias_mc_allowance)};
}

Outcome clip_lemma_point_mass(const ScalarClip& clip, SeededRng& rng) {
  const auto r = verify_clip_lemma(HeavyTailSpec::point_mass(3.0), ClipLevel(5.0), 100000, rng, clip);
  return {r.passed() && r.bias == 0.0, printf_string("bias %.3g (expect 0)", r.bias)};
}

Outcome iw_unbiasedness(SeededRng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    const SimplexPoint x(random_simplex(n, rng));
    const double lambda = 0.5 + 20.0 * rng.uniform();
    std::vector<double> losses(n), expected(n, 0.0);
    for (double& l : losses) l = 30.0 * rng.uniform() - 5.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto est = iw_clipped_estimate(losses[i], i, x, ClipLevel(lambda));
      for (std::size_t j = 0; j < n; ++j) expected[j] += x[i] * est.values[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(expected[j] - clip_scalar(losses[j], ClipLevel(lambda))));
    }
  }
  return {worst <= 1e-12, printf_string("max |sum_i x_i g(i)_j - clip(l_j)| = %.2e", worst)};
}

Outcome vector_clip_norm(SeededRng& rng) {
  double worst = 0.0;
  const double qs[] = {2.0, 3.0, 7.5, std::numeric_limits<double>::infinity()};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> g(n);
    for (double& v : g) v = 10.0 * rng.normal();
    const double q = qs[rng.below(4)];
    const double lambda = 0.1 + 20.0 * rng.uniform();
    const auto c = clip_vector(g, ClipLevel(lambda), q);
    const double want = std::min(lp_norm(g, q), lambda);
    worst = std::max(worst, std::abs(lp_norm(c, q) - want) / std::max(1.0, want));
  }
  return {worst <= 1e-12, printf_string("max relative norm error %.2e", worst)};
}

Outcome tsallis_solver(SeededRng& rng) {
  double worst_residual = 0.0, worst_descent = 0.0;
  const double qs[] = {0.3, 0.5, 0.8};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(3);
    const SimplexPoint x(random_simplex(n, rng));
    const TsallisConfig cfg{qs[rng.below(3)], std::pow(10.0, -3.0 + 3.0 * rng.uniform())};
    std::vector<double> g(n);
    for (double& v : g) v = 20.0 * rng.uniform();
    const auto res = omd_step(x, g, cfg);
    worst_residual = std::max(worst_residual, std::abs(res.diagnostics.residual));
    const double base = step_objective(res.next.probs(), x, g, cfg);
    // No feasible perturbation may lower the objective.
    for (int k = 0; k < 20; ++k) {
      std::vector<double> d(n);
      double mean = 0.0;
      for (double& v : d) {
        v = rng.normal();
        mean += v / static_cast<double>(n);
      }
      double step = 1e-4;
      for (std::size_t i = 0; i < n; ++i) {
        d[i] -= mean;
        if (d[i] < 0.0) step = std::min(step, 0.5 * res.next[i] / -d[i]);
      }
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = res.next[i] + step * d[i];
      worst_descent = std::max(worst_descent, base - step_objective(y, x, g, cfg));
    }
  }
  return {worst_residual <= 1e-12 && worst_descent <= 1e-10,
          printf_string("max |residual| %.2e, max objective decrease %.2e", worst_residual,
                        worst_descent)};
}

Outcome tsallis_monotone(SeededRng& rng) {
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(3);
    const SimplexPoint x(random_simplex(n, rng));
    const TsallisConfig cfg{0.5, 0.1};
    std::vector<double> g(n);
    for (double& v : g) v = 5.0 * rng.uniform();
    const std::size_t i = rng.below(n);
    const double before = omd_step(x, g, cfg).next[i];
    g[i] += 0.5 + rng.uniform();
    if (omd_step(x, g, cfg).next[i] > before) ++violations;
  }
  return {violations == 0, printf_string("%d violations in 200 instances", violations)};
}

Outcome sphere_norms(std::size_t samples, SeededRng& rng) {
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const auto e = sample_sphere(1 + k % 10, rng);
    worst = std::max(worst, std::abs(lp_norm(e, 2.0) - 1.0));
  }
  return {worst <= 1e-12, printf_string("max | ||e|| - 1 | = %.2e", worst)};
}

Outcome inner_product_lemma(std::size_t samples, SeededRng& rng) {
  const std::size_t n = 10;
  std::vector<double> r(n);
  for (double& v : r) v = rng.normal();
  double s = 0.0;
  for (std::size_t k = 0; k < samples; ++k) s += std::abs(dot(sample_sphere(n, rng), r));
  const double ratio = s / static_cast<double>(samples) / (lp_norm(r, 2.0) / std::sqrt(double(n)));
  return {ratio <= 1.05, printf_string("E|<e,r>| / (||r|| / sqrt n) = %.4f (limit 1.05)", ratio)};
}

Outcome jensen_norm(SeededRng& rng) {
  int violations = 0;
  const double qs[] = {2.0, 3.0, 6.0, std::numeric_limits<double>::infinity()};
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> x(n), y(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
      d[i] = x[i] - y[i];
    }
    const double q = qs[rng.below(4)];
    const double a = rng.uniform();
    const double lhs = std::pow(lp_norm(d, q), a + 1.0);
    const double rhs = std::pow(2.0, a) * (std::pow(lp_norm(x, q), a + 1.0) + std::pow(lp_norm(y, q), a + 1.0));
    if (lhs > rhs * (1.0 + 1e-12)) ++violations;
  }
  return {violations == 0, printf_string("%d violations in 10000 tuples", violations)};
}

Outcome gradient_moment(std::size_t samples, SeededRng& rng) {
  const std::size_t n = 3;
  const double tau = 0.1, alpha = 0.5;
  FunctionEnvironment env(ProbabilitySimplex{n}, tau, LinearLoss{{0.2, 0.5, 1.0}},
                          NoiseModel::multiplicative(HeavyTailSpec::log_pareto(alpha, 1.0)));
  double worst = 0.0;
  for (double q : {2.0, std::numeric_limits<double>::infinity()}) {
    const double sigma = sigma_q(n, q, alpha, env.moment_bound(), 0.0, tau);
    double s = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      const auto x = random_simplex(n, rng);
      const auto e = sample_sphere(n, rng);
      std::vector<double> z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = x[i] + tau * e[i];
      s += std::pow(lp_norm(one_point_gradient(env.query(z, k, rng), e, tau), q), alpha + 1.0);
    }
    worst = std::max(worst, s / static_cast<double>(samples) / std::pow(sigma, alpha + 1.0));
  }
  return {worst <= 1.1, printf_string("max E||g||_q^(a+1) / sigma_q^(a+1) = %.4f", worst)};
}

Outcome smoothing(std::size_t samples, SeededRng& rng) {
  const std::size_t n = 3;
  const double tau = 0.1;
  std::vector<std::vector<double>> probes;
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    probes.push_back(x);
  }
  const std::size_t per_probe = std::max<std::size_t>(samples / 10, 1000);
  const auto norm = [](std::span<const double> x) { return lp_norm(x, 2.0); };
  const auto quad = [](std::span<const double> x) { return 1.5 * dot(x, x); };  // L = 3
  const auto lin = [](std::span<const double> x) { return x[0] - 2.0 * x[1] + 0.5 * x[2]; };
  const auto r1 = smoothing_gap_check(norm, Regularity::Lipschitz, 1.0, tau, probes, per_probe, rng);
  const auto r2 = smoothing_gap_check(quad, Regularity::Smooth, 3.0, tau, probes, per_probe, rng);
  const auto r3 = smoothing_gap_check(lin, Regularity::Lipschitz, 0.0, tau, probes, per_probe, rng);
  return {r1.passed() && r2.passed() && r3.passed(),
          printf_string("norm %s, quadratic %s, linear %s", r1.passed() ? "ok" : "FAIL",
                        r2.passed() ? "ok" : "FAIL", r3.passed() ? "ok" : "FAIL")};
}

Outcome zo_feasibility(SeededRng& rng) {
  const std::size_t n = 3;
  FunctionEnvironment env(ProbabilitySimplex{n}, 0.5, LinearLoss{{0.0, 1.0, 0.5}},
                          NoiseModel::multiplicative(HeavyTailSpec::log_pareto(0.5, 1.0)));
  double worst = 0.0;
  for (const auto& prox : {ProxMap::shifted_negentropy(n), ProxMap::euclidean(ProbabilitySimplex{n})}) {
    ZoConfig cfg;
    cfg.dim = n;
    cfg.tau = 0.5;
    cfg.p = prox.primal_p();
    cfg.q = prox.dual_q();
    cfg.mu = 0.05;
    cfg.lambda = 50.0;
    std::vector<double> x = prox.initial_point();
    SeededRng env_rng(rng(), 0);
    const LossOracle oracle = [&](std::span<const double> z, std::uint64_t t) {
      return env.query(z, t, env_rng);
    };
    for (std::uint64_t t = 1; t <= 2000; ++t) {
      auto step = zo_step(x, t, cfg, prox, oracle, rng);
      x = std::move(step.next);
      double sum = 0.0, neg = 0.0;
      for (double v : x) {
        sum += v;
        neg = std::min(neg, v);
      }
      worst = std::max({worst, std::abs(sum - 1.0), -neg});
    }
  }
  return {worst <= 1e-9, printf_string("max simplex violation %.2e", worst)};
}

Outcome env_certification(std::size_t samples, SeededRng& rng) {
  const std::size_t n = 3;
  const double tau = 0.2;
  const Adversary adversary = Adversary::sign_oscillating(0.05, {1.0, -2.0, 0.5});
  FunctionEnvironment noisy(ProbabilitySimplex{n}, tau, LinearLoss{{1.0, 0.5, 2.0}},
                            NoiseModel::multiplicative(HeavyTailSpec::log_pareto(0.5, 1.0)));
  FunctionEnvironment clean(ProbabilitySimplex{n}, tau, LinearLoss{{1.0, 0.5, 2.0}}, {}, adversary);
  const double a = noisy.alpha();
  double s = 0.0, worst_delta = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    auto z = random_simplex(n, rng);
    const auto e = sample_sphere(n, rng);
    for (std::size_t i = 0; i < n; ++i) z[i] += tau * e[i];
    s += std::pow(std::abs(noisy.query(z, k, rng)), a + 1.0);
    worst_delta = std::max(worst_delta, std::abs(clean.query(z, k, rng) - clean.expected_loss(z)));
  }
  const double ratio = s / static_cast<double>(samples) / std::pow(noisy.moment_bound(), a + 1.0);
  return {ratio <= 1.1 && worst_delta <= 0.05 * (1.0 + 1e-12),
          printf_string("E|l|^(a+1) / B^(a+1) = %.4f, max |delta| = %.3g (bound 0.05)", ratio,
                        worst_delta)};
}

}  // namespace

std::size_t verify_samples(VerifyLevel level) {
  return level == VerifyLevel::Quick ? 10000 : 1000000;
}

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const VerifyEntry& e) { return !e.passed; }));
}

std::string VerifyReport::to_json() const {
  nlohmann::ordered_json out;
  out["level"] = level == VerifyLevel::Quick ? "quick" : "full";
  out["passed"] = passed();
  out["failures"] = failures();
  auto list = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    list.push_back({{"name", e.name}, {"passed", e.passed}, {"detail", e.detail}, {"seconds", e.seconds}});
  }
  out["checks"] = std::move(list);
  return out.dump(2);
}

VerifyReport verify_all(const VerifyOptions& options) {
  VerifyReport report;
  report.level = options.level;
  const std::size_t samples = verify_samples(options.level);
  std::uint64_t stream = 0;
  const auto run = [&](const std::string& name, const std::function<Outcome(SeededRng&)>& check) {
    SeededRng rng(options.seed, stream++);
    VerifyEntry entry;
    entry.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
      auto [ok, detail] = check(rng);
      entry.passed = ok;
      entry.detail = std::move(detail);
    } catch (const std::exception& e) {
      entry.passed = false;
      entry.detail = std::string("exception: ") + e.what();
    }
    entry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.entries.push_back(std::move(entry));
  };

  run("rngdist.moment_certification", [&](SeededRng& r) { return moment_certification(samples, r); });
  run("rngdist.log_pareto_support_cdf", [&](SeededRng& r) { return log_pareto_support_and_cdf(samples, r); });
  run("clipcore.clip_lemma", [&](SeededRng& r) { return clip_lemma(options.clip, samples, r); });
  run("clipcore.clip_lemma_point_mass", [&](SeededRng& r) { return clip_lemma_point_mass(options.clip, r); });
  run("clipcore.iw_unbiasedness", iw_unbiasedness);
  run("clipcore.vector_clip_norm", vector_clip_norm);
  run("tsallis.step_optimality", tsallis_solver);
  run("tsallis.monotone_response", tsallis_monotone);
  run("zeroth.sphere_unit_norm", [&](SeededRng& r) { return sphere_norms(samples, r); });
  run("zeroth.inner_product_lemma", [&](SeededRng& r) { return inner_product_lemma(samples, r); });
  run("zeroth.jensen_norm", jensen_norm);
  run("zeroth.gradient_moment", [&](SeededRng& r) { return gradient_moment(samples, r); });
  run("zeroth.smoothing_gap", [&](SeededRng& r) { return smoothing(samples, r); });
  run("zeroth.iterate_feasibility", zo_feasibility);
  run("envs.moment_and_adversary_bounds", [&](SeededRng& r) { return env_certification(samples, r); });
  return report;
}

}  // namespace htmab
