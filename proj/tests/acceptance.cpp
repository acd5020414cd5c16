// End-to-end acceptance run: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "htmab/bench.hpp"
#include "htmab/clip.hpp"
#include "htmab/config.hpp"
#include "htmab/envs.hpp"
#include "htmab/planner.hpp"
#include "htmab/policies.hpp"
#include "htmab/prox.hpp"
#include "htmab/rng.hpp"
#include "htmab/simplex.hpp"
#include "htmab/tsallis.hpp"
#include "htmab/zeroth.hpp"
#include "oracles.hpp"

using namespace htmab;
namespace fs = std::filesystem;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds; 0 means unbounded
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double sample_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

SimplexPoint random_point(SeededRng& rng, std::size_t n) {
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& v : p) total += v = -std::log(rng.uniform());
  for (auto& v : p) v /= total;
  return SimplexPoint(p);
}

// 1. OMD step vs the nested-Brent simplex minimizer.
Outcome omd_vs_oracle() {
  SeededRng rng(9001);
  double worst_x = 0.0, worst_obj = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const double q = std::vector<double>{0.3, 0.5, 0.8}[rng.below(3)];
    const double mu = std::exp(std::log(1e-3) * rng.uniform());
    const auto x = random_point(rng, n);
    std::vector<double> g(n);
    for (auto& v : g) v = 20.0 * rng.uniform();
    const auto r = omd_step(x, g, TsallisConfig{q, mu});
    const std::vector<double> prev(x.probs().begin(), x.probs().end());
    const auto f = [&](const std::vector<long double>& z) {
      return oracle::tsallis_step_objective(z, prev, g, q, mu);
    };
    const auto [z, best] = oracle::minimize_on_simplex(f, n);
    const std::vector<long double> ours(r.next.probs().begin(), r.next.probs().end());
    for (std::size_t i = 0; i < n; ++i) worst_x = std::max(worst_x, std::abs(double(z[i]) - r.next[i]));
    worst_obj = std::max(worst_obj, double(f(ours) - best));
  }
  return {worst_x <= 1e-6 && worst_obj <= 1e-10,
          "max |x - oracle| = " + fmt(worst_x) + " (<= 1e-6), max objective excess = " + fmt(worst_obj) +
              " (<= 1e-10)"};
}

// 2. Clipped-estimator deviation, second moment and bias over 1e6 draws.
Outcome clip_lemma() {
  bool ok = true;
  std::string detail;
  SeededRng rng(2718);
  for (double alpha : {0.3, 0.5, 0.8}) {
    for (double lambda : {10.0, 100.0}) {
      const auto rep = verify_clip_lemma(HeavyTailSpec::log_pareto(alpha, 1.0), ClipLevel(lambda), 1000000, rng);
      ok = ok && rep.passed();
      if (!detail.empty()) detail += "; ";
      detail += "a=" + fmt(alpha) + " l=" + fmt(lambda) + ": dev " + fmt(rep.max_deviation) + "/" +
                fmt(rep.deviation_bound) + ", m2 " + fmt(rep.second_moment) + "/" +
                fmt(1.1 * rep.second_moment_bound) + ", bias " + fmt(rep.bias) + "/" +
                fmt(1.1 * rep.bias_bound + rep.bias_mc_allowance);
    }
  }
  return {ok, detail};
}

// 3. E_{i~x}[g_hat] = clip(loss) exactly, by enumeration.
Outcome enumeration_identity() {
  SeededRng rng(33);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(8);
    std::vector<double> p(n), losses(n);
    double total = 0;
    for (auto& v : p) total += v = 0.01 + rng.uniform();
    for (auto& v : p) v /= total;
    const SimplexPoint x(p);
    const ClipLevel lam(0.5 + 20.0 * rng.uniform());
    for (auto& l : losses) l = std::exp(3.0 * rng.normal());
    std::vector<double> expectation(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = iw_clipped_estimate(losses[i], i, x, lam);
      for (std::size_t j = 0; j < n; ++j) expectation[j] += x[i] * e.values[j];
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double want = clip_scalar(losses[j], lam);
      worst = std::max(worst, std::abs(expectation[j] - want) / std::max(1.0, std::abs(want)));
    }
  }
  return {worst <= 1e-12, "max relative error = " + fmt(worst) + " (<= 1e-12)"};
}

// 4. Linear-bandit schedule: two log-Pareto arms with moment scales 1/4 and 1.
Outcome bandit_regret_bound() {
  const double alpha = 0.5;
  const double b1 = 1.0 / detail::log_pareto_law(alpha)->moment_scale();
  const ArmEnvironment env({HeavyTailSpec::log_pareto(alpha, b1 / 4), HeavyTailSpec::log_pareto(alpha, b1)});
  const auto plan = theorem1_planner(8000, alpha, 2, 1.0);
  std::vector<double> regret;
  for (int r = 0; r < 100; ++r) {
    SeededRng env_rng(1000 + r, 0);
    auto policy = InfPolicy::inf_clip(2, {0.5, plan.mu}, ClipLevel(plan.lambda), SeededRng(1000 + r, 1));
    regret.push_back(run_policy(*policy, env, 8000, 0, env_rng).average_regret());
  }
  const double m = mean_of(regret);
  return {m <= plan.bound, "mean average regret = " + fmt(m) + " (sd " + fmt(sample_std(regret)) +
                               "), bound = " + fmt(plan.bound)};
}

// 5. Clipping beats skipping on the (3.0, 3.1) arms at t = 8000.
Outcome clip_beats_skip() {
  const auto cfg = parse_experiment_config(R"(
name: clip_vs_skip
alphas: [0.1, 0.3]
horizon: 8000
repetitions: 100
base_seed: 0
policies:
  inf_clip:
  skip_inf:
)");
  const auto res = run_experiment(cfg, default_thread_count());
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k + 1 < res.curves.size(); k += 2) {
    const auto& clip = res.curves[k];
    const auto& skip = res.curves[k + 1];
    const double R = double(cfg.repetitions);
    const double mc = clip.mean_prob_optimal.back(), ms = skip.mean_prob_optimal.back();
    const double sc = clip.std_prob_optimal.back(), ss = skip.std_prob_optimal.back();
    const double margin = 2.0 * std::sqrt(sc * sc / R + ss * ss / R);
    ok = ok && (mc - ms > margin);
    if (!detail.empty()) detail += "; ";
    detail += "a=" + fmt(clip.alpha) + ": clip " + fmt(mc) + " skip " + fmt(ms) + " diff " + fmt(mc - ms) +
              " vs 2 sigma " + fmt(margin);
  }
  return {ok, detail};
}

struct ZoSetup {
  FunctionEnvironment env;
  ProxMap prox;
  DomainGeometry geo;
};

ZoSetup zo_setup(Adversary adversary = Adversary::zero()) {
  FunctionEnvironment env(ProbabilitySimplex{2}, 2.0, LinearLoss{{-1.0, 1.0}},
                          NoiseModel::multiplicative(HeavyTailSpec::log_pareto(0.5, 1.0)), adversary);
  auto prox = ProxMap::shifted_negentropy(2);
  const auto geo = domain_geometry(prox, 0.5);
  return {std::move(env), std::move(prox), geo};
}

ZoConfig zo_config(const ZoSetup& s, std::uint64_t T, double delta) {
  ZoConfig cfg;
  cfg.dim = 2;
  cfg.tau = s.env.tau();
  cfg.p = s.prox.primal_p();
  cfg.q = s.prox.dual_q();
  cfg.alpha = 0.5;
  cfg.B = s.env.moment_bound();
  cfg.delta = delta;
  cfg.lipschitz_M = s.env.regularity_constant();
  cfg.T = T;
  const auto plan = plan_parameters(cfg, s.geo.R1, s.geo.D_psi);
  cfg.mu = plan.mu_star;
  cfg.lambda = plan.lambda_star;
  return cfg;
}

// 6. Zeroth-order average regret decays at least like T^(-1/3 + 0.15).
Outcome zo_slope() {
  const auto s = zo_setup();
  const auto u = s.env.minimizer();
  std::vector<double> xs, ys;
  std::string detail;
  for (int k = 10; k <= 14; ++k) {
    const std::uint64_t T = std::uint64_t(1) << k;
    const auto cfg = zo_config(s, T, 0.0);
    double total = 0.0;
    for (int r = 0; r < 50; ++r) {
      SeededRng algo(r, 1), env_rng(r, 0);
      total += run_zo(cfg, s.prox, s.env, u, algo, env_rng).average_regret;
    }
    xs.push_back(std::log(double(T)));
    ys.push_back(std::log(total / 50.0));
    detail += "T=2^" + std::to_string(k) + ": " + fmt(total / 50.0) + ", ";
  }
  const double mx = mean_of(xs), my = mean_of(ys);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx, threshold = -0.5 / 1.5 + 0.15;
  return {slope <= threshold, detail + "slope = " + fmt(slope) + " (<= " + fmt(threshold) + ")"};
}

// 7. A bounded adversary costs at most Delta sqrt(n) D / tau in average regret.
Outcome adversary_excess() {
  const double delta = 0.5;
  const std::uint64_t T = 4096;
  const int R = 50;
  const auto clean = zo_setup();
  const auto noisy = zo_setup(Adversary::sign_oscillating(delta, {1.0, -1.0}));
  const auto cfg = zo_config(noisy, T, delta);
  const auto u = clean.env.minimizer();
  std::vector<double> diff;
  for (int r = 0; r < R; ++r) {
    SeededRng a0(r, 1), e0(r, 0), a1(r, 1), e1(r, 0);
    const double base = run_zo(cfg, clean.prox, clean.env, u, a0, e0).average_regret;
    const double pert = run_zo(cfg, noisy.prox, noisy.env, u, a1, e1).average_regret;
    diff.push_back(pert - base);
  }
  const double excess = mean_of(diff);
  const double sigma = sample_std(diff) / std::sqrt(double(R));
  const double allowance = delta * std::sqrt(2.0) * clean.geo.D_psi / cfg.tau;
  return {excess <= allowance + 3.0 * sigma, "excess = " + fmt(excess) + ", allowance " + fmt(allowance) +
                                                 " + 3 sigma " + fmt(3.0 * sigma)};
}

// 8. Closed-form schedules vs 50-digit arithmetic.
Outcome planners_vs_oracle() {
  using oracle::mp;
  double worst = 0.0;
  SeededRng rng(808);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + rng.below(30);
    const double q = rng.uniform() < 0.3 ? kInf : 2.0 + 20.0 * rng.uniform();
    const double a = 0.05 + 0.9 * rng.uniform();
    const double B = std::exp(rng.normal()), delta = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    const double tau = 0.01 + rng.uniform();
    const std::uint64_t T = 10 + rng.below(1000000);
    const double R1 = 0.1 + 3 * rng.uniform(), D = 0.1 + 3 * rng.uniform();
    ZoConfig cfg;
    cfg.dim = n;
    cfg.q = q;
    cfg.p = std::isinf(q) ? 1.0 : q / (q - 1.0);
    cfg.alpha = a;
    cfg.B = B;
    cfg.delta = delta;
    cfg.tau = tau;
    cfg.T = T;
    const auto p = plan_parameters(cfg, R1, D);
    const auto o = oracle::zo_schedule(mp(double(n)), std::isinf(q) ? mp(-1) : mp(q), mp(a), mp(B), mp(delta),
                                    mp(tau), mp(double(T)), mp(R1), mp(D));
    for (double e : {oracle::rel_err(p.a_q, o.a_q), oracle::rel_err(p.sigma_q, o.sigma),
                     oracle::rel_err(p.mu_star, o.mu), oracle::rel_err(p.lambda_star, o.lambda)}) {
      worst = std::max(worst, e);
    }
    const double eps = std::exp(-3.0 * rng.uniform()), c = std::exp(2.0 * rng.normal());
    cfg.lipschitz_M = c;
    worst = std::max(worst, oracle::rel_err(plan_parameters(cfg, R1, D, eps).tau_star, mp(eps) / (8 * mp(c))));
    cfg.lipschitz_M.reset();
    cfg.smooth_L = c;
    worst = std::max(worst, oracle::rel_err(plan_parameters(cfg, R1, D, eps).tau_star,
                                            boost::multiprecision::sqrt(mp(eps) / (4 * mp(c)))));
    const double Tb = std::floor(std::exp(2.0 + 12.0 * rng.uniform()));
    const double ab = 0.05 + 0.85 * rng.uniform(), M = std::exp(3.0 * rng.normal());
    const auto t1 = theorem1_planner(Tb, ab, n, M);
    const auto o1 = oracle::bandit_schedule(mp(Tb), mp(ab), mp(double(n)), mp(M));
    for (double e : {oracle::rel_err(t1.lambda, o1.lambda), oracle::rel_err(t1.mu, o1.mu),
                     oracle::rel_err(t1.bound, o1.bound)}) {
      worst = std::max(worst, e);
    }
  }
  return {worst <= 1e-10, "max relative error = " + fmt(worst) + " (<= 1e-10)"};
}

// 9. Sphere sampling, inner-product lemma and smoothing gaps.
Outcome sphere_and_smoothing() {
  SeededRng rng(99);
  double worst_norm = 0.0;
  for (std::size_t n : {1u, 2u, 3u, 10u, 100u}) {
    for (int i = 0; i < 10000; ++i) worst_norm = std::max(worst_norm, std::abs(lp_norm(sample_sphere(n, rng), 2.0) - 1.0));
  }
  double worst_ratio = 0.0;
  for (std::size_t dim : {2u, 5u, 20u}) {
    std::vector<double> r(dim);
    for (auto& v : r) v = rng.normal();
    double s = 0.0;
    const int draws = 1000000;
    for (int i = 0; i < draws; ++i) s += std::abs(dot(sample_sphere(dim, rng), r));
    worst_ratio = std::max(worst_ratio, (s / draws) / (lp_norm(r, 2.0) / std::sqrt(double(dim))));
  }
  std::vector<std::vector<double>> probes(20);
  for (auto& p : probes) p = {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
  probes[0] = {0.0, 0.0, 0.0};
  const auto norm = [](std::span<const double> x) { return lp_norm(x, 2.0); };
  const auto quad = [](std::span<const double> x) { return 1.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
  const bool lip = smoothing_gap_check(norm, Regularity::Lipschitz, 1.0, 0.1, probes, 20000, rng).passed();
  const bool smooth = smoothing_gap_check(quad, Regularity::Smooth, 3.0, 0.1, probes, 20000, rng).passed();
  const bool ok = worst_norm <= 1e-12 && worst_ratio <= 1.05 && lip && smooth;
  return {ok, "max | ||e|| - 1 | = " + fmt(worst_norm) + ", E|<e,r>| / (||r||/sqrt n) max " + fmt(worst_ratio) +
                  " (<= 1.05), smoothing lipschitz " + (lip ? "ok" : "violated") + ", smooth " +
                  (smooth ? "ok" : "violated")};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. The CLI writes byte-identical CSVs at 1 and 4 threads.
Outcome cli_determinism(const std::string& cli, const fs::path& work) {
  fs::create_directories(work);
  const fs::path config = work / "determinism.yaml";
  std::ofstream(config) << "name: determinism\nalphas: [0.3, 0.5]\nhorizon: 1000\nrepetitions: 16\n"
                           "base_seed: 7\nraw_traces: true\npolicies:\n  inf_clip:\n  skip_inf:\n"
                           "  robust_ucb:\n";
  std::vector<std::string> csv;
  for (int threads : {1, 4}) {
    const fs::path out = work / ("threads_" + std::to_string(threads));
    fs::create_directories(out);
    const std::string cmd = "\"" + cli + "\" simulate --config \"" + config.string() + "\" --out \"" +
                            out.string() + "\" --threads " + std::to_string(threads) + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + cmd};
    csv.push_back(read_file(out / "determinism.csv") + read_file(out / "determinism.raw.csv"));
  }
  const bool ok = !csv[0].empty() && csv[0] == csv[1];
  return {ok, std::to_string(csv[0].size()) + " bytes, " + (ok ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string cli;
  std::string work = "acceptance_work";
  std::vector<int> only;
  app.add_option("--cli", cli, "Path to the htmab_cli binary")->required();
  app.add_option("--work", work, "Scratch directory");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "OMD step matches the simplex oracle on 200 instances", 30, omd_vs_oracle},
      {2, "clipped estimator deviation, moment and bias bounds", 120, clip_lemma},
      {3, "importance weighting is unbiased for the clipped loss", 0, enumeration_identity},
      {4, "INF-clip average regret within the linear-bandit bound", 300, bandit_regret_bound},
      {5, "INF-clip beats Skip-INF at t = 8000 by 2 sigma", 900, clip_beats_skip},
      {6, "zeroth-order regret slope over T = 2^10 .. 2^14", 1200, zo_slope},
      {7, "bounded adversary excess regret", 0, adversary_excess},
      {8, "closed-form schedules match 50-digit arithmetic", 0, planners_vs_oracle},
      {9, "sphere sampling, inner-product and smoothing bounds", 0, sphere_and_smoothing},
      {10, "CLI output is identical at 1 and 4 threads", 0, [&] { return cli_determinism(cli, work); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      out.passed = false;
      out.detail += "; over the " + fmt(c.time_limit) + " s limit";
    }
    failures += !out.passed;
    std::printf("%s %2d  %s | %s | %.1f s\n", out.passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
