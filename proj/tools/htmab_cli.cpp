// htmab command line: simulate experiments, evaluate planners, run the
// verification suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "htmab/bench.hpp"
#include "htmab/config.hpp"
#include "htmab/error.hpp"
#include "htmab/planner.hpp"
#include "htmab/prox.hpp"
#include "htmab/verify.hpp"

namespace {

using json = nlohmann::ordered_json;

void print_json_or_lines(const json& out, bool as_json) {
  if (as_json) {
    std::cout << out.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : out.items()) {
    if (value.is_number_float()) {
      std::cout << key << " = " << htmab::format_number(value.get<double>()) << '\n';
    } else {
      std::cout << key << " = " << value.dump() << '\n';
    }
  }
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double q = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad q value: " + text);
  return q;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clipped mirror-descent bandits: simulation, planners and verification"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run an experiment described by a YAML config");
  std::string config_path;
  std::string out_dir;
  unsigned threads = 0;
  simulate->add_option("--config", config_path, "Experiment config (YAML)")->required();
  simulate->add_option("--out", out_dir, "Output directory (default: config 'output' or '.')");
  simulate->add_option("--threads", threads, "Worker threads (default: $HTMAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  // plan
  auto* plan = app.add_subcommand("plan", "Evaluate the closed-form parameter schedules");
  int theorem = 1;
  double alpha = 0.5, T = 1000, M = 1.0;
  std::size_t n = 2;
  std::string q_text = "2";
  double B = 1.0, delta = 0.0, tau = 0.1, gamma = htmab::ProxMap::kDefaultGamma;
  std::optional<double> R1, D_psi, eps, smooth_L;
  std::string domain = "simplex";
  bool plan_json = false;
  plan->add_option("--theorem", theorem, "1: linear bandit schedule, 2: zeroth-order schedule")
      ->check(CLI::IsMember({1, 2}))
      ->required();
  plan->add_option("--alpha", alpha, "Moment exponent in (0, 1)");
  plan->add_option("--T", T, "Horizon");
  plan->add_option("--n", n, "Number of arms / dimension");
  plan->add_option("--M", M, "Moment scale (1) or Lipschitz constant (2)");
  plan->add_option("--L", smooth_L, "Smoothness constant (2; replaces --M)");
  plan->add_option("--q", q_text, "Dual norm index in [2, inf] (2)");
  plan->add_option("--B", B, "Loss moment bound (2)");
  plan->add_option("--delta", delta, "Adversarial noise bound (2)");
  plan->add_option("--tau", tau, "Smoothing radius (2)");
  plan->add_option("--R1", R1, "Distance term R1 (2; default from the domain)");
  plan->add_option("--D", D_psi, "Diameter term D_psi (2; default from the domain)");
  plan->add_option("--domain", domain, "simplex (negentropy prox) or ball (Euclidean, radius 1)")
      ->check(CLI::IsMember({"simplex", "ball"}));
  plan->add_option("--gamma", gamma, "Negentropy shift for the simplex prox");
  plan->add_option("--eps", eps, "Accuracy target: adds tau_M / tau_L and the iteration count");
  plan->add_flag("--json", plan_json, "Print JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  std::string level = "quick";
  bool verify_json = false;
  verify->add_option("--level", level, "quick (1e4 samples) or full (1e6)")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--json", verify_json, "Print a JSON report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto cfg = htmab::load_experiment_config(config_path);
      const unsigned workers = threads > 0 ? threads : htmab::default_thread_count();
      const auto result = htmab::run_experiment(cfg, workers);
      const std::filesystem::path dir =
          !out_dir.empty() ? std::filesystem::path(out_dir) : cfg.output.value_or(".");
      for (const auto& path : htmab::write_experiment(result, dir)) std::cout << path.string() << '\n';
      return 0;
    }

    if (plan->parsed()) {
      json out;
      if (theorem == 1) {
        const auto p = htmab::theorem1_planner(T, alpha, n, M);
        out["lambda"] = p.lambda;
        out["mu"] = p.mu;
        out["bound"] = p.bound;
      } else {
        htmab::ZoConfig cfg;
        cfg.dim = n;
        cfg.q = parse_q(q_text);
        cfg.p = std::isinf(cfg.q) ? 1.0 : cfg.q / (cfg.q - 1.0);
        cfg.alpha = alpha;
        cfg.T = static_cast<std::uint64_t>(T);
        cfg.B = B;
        cfg.delta = delta;
        cfg.tau = tau;
        cfg.gamma = gamma;
        if (smooth_L) cfg.smooth_L = *smooth_L; else cfg.lipschitz_M = M;
        const auto prox = domain == "simplex"
                              ? htmab::ProxMap::shifted_negentropy(n, gamma)
                              : htmab::ProxMap::euclidean(htmab::Ball{std::vector<double>(n, 0.0), 1.0});
        const auto geometry = htmab::domain_geometry(prox, alpha);
        const auto p = htmab::plan_parameters(cfg, R1.value_or(geometry.R1), D_psi.value_or(geometry.D_psi), eps);
        out["a_q"] = p.a_q;
        out["sigma_q"] = p.sigma_q;
        out["mu_star"] = p.mu_star;
        out["lambda_star"] = p.lambda_star;
        out["tau_star"] = p.tau_star;
        out["R1"] = p.R1;
        out["D_psi"] = p.D_psi;
        if (p.iterations) out[smooth_L ? "T_L" : "T_M"] = *p.iterations;
        out["regret_bound"] = p.regret_bound;
      }
      print_json_or_lines(out, plan_json);
      return 0;
    }

    if (verify->parsed()) {
      htmab::VerifyOptions options;
      options.level = level == "full" ? htmab::VerifyLevel::Full : htmab::VerifyLevel::Quick;
      const auto report = htmab::verify_all(options);
      if (verify_json) {
        std::cout << report.to_json() << '\n';
      } else {
        for (const auto& e : report.entries) {
          std::printf("[%s] %-36s %7.2fs  %s\n", e.passed ? "PASS" : "FAIL", e.name.c_str(),
                      e.seconds, e.detail.c_str());
        }
        std::printf("%zu checks, %zu failed\n", report.entries.size(), report.failures());
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const htmab::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
