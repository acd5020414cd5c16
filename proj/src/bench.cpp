#include "htmab/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "htmab/envs.hpp"
#include "htmab/error.hpp"
#include "htmab/planner.hpp"
#include "htmab/policies.hpp"

namespace htmab {

std::vector<double> moving_average(std::span<const double> curve, std::size_t window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out(curve.size());
  for (std::size_t t = 0; t < curve.size(); ++t) {
    const std::size_t start = t + 1 >= window ? t + 1 - window : 0;
    double s = 0.0;
    for (std::size_t k = start; k <= t; ++k) s += curve[k];
    out[t] = s / static_cast<double>(t - start + 1);
  }
  return out;
}

std::vector<HeavyTailSpec> arms_for_means(double alpha, std::span<const double> means) {
  const double xi_mean = log_pareto_normalizer(alpha).mean;
  std::vector<HeavyTailSpec> arms;
  for (double m : means) arms.push_back(HeavyTailSpec::log_pareto(alpha, m / xi_mean));
  return arms;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("HTMAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

ResolvedPolicy resolve(const std::string& id, const PolicyOverrides& o, double alpha,
                       std::uint64_t T, const std::vector<HeavyTailSpec>& arms) {
  double M = 0.0;
  for (const auto& a : arms) M = std::max(M, a.moment_scale());
  ResolvedPolicy r;
  r.id = id;
  if (id == "robust_ucb") {
    r.c = o.c.value_or(4.0);
    r.M = o.M.value_or(M);
    return r;
  }
  r.q = o.q.value_or(0.5);
  if (!o.lambda || !o.mu) {
    if (alpha >= 1.0) {
      throw ConfigError("policies." + id, 0,
                        "alpha = 1 has no planner schedule; set lambda and mu explicitly");
    }
    const auto plan = theorem1_planner(static_cast<double>(T), alpha, arms.size(), M);
    r.lambda = o.lambda.value_or(plan.lambda);
    r.mu = o.mu.value_or(plan.mu);
    if (!o.lambda && !o.mu) r.regret_bound = plan.bound;
  } else {
    r.lambda = o.lambda;
    r.mu = o.mu;
  }
  return r;
}

std::unique_ptr<Policy> make_policy(const ResolvedPolicy& p, double alpha, std::size_t n,
                                    SeededRng rng) {
  if (p.id == "robust_ucb") return std::make_unique<RobustUcbPolicy>(n, RobustUcbConfig{alpha, *p.M, *p.c});
  const TsallisConfig cfg{*p.q, *p.mu};
  const auto feedback = p.id == "inf_clip" ? InfPolicy::Feedback::Clip : InfPolicy::Feedback::Skip;
  return std::make_unique<InfPolicy>(n, cfg, ClipLevel(*p.lambda), feedback, rng);
}

struct RunOutput {
  std::vector<double> prob_optimal;
  std::vector<double> cum_regret;
  double average_regret = 0.0;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  ExperimentResult result;
  result.config = cfg;
  const std::size_t R = cfg.repetitions;
  const std::size_t T = cfg.horizon;

  for (double alpha : cfg.alphas) {
    const ArmEnvironment env(arms_for_means(alpha, cfg.means));
    const std::size_t best = env.best_arm();
    for (const auto& [id, overrides] : cfg.policies) {
      const ResolvedPolicy params = resolve(id, overrides, alpha, cfg.horizon, [&] {
        std::vector<HeavyTailSpec> arms;
        for (std::size_t i = 0; i < env.num_arms(); ++i) arms.push_back(env.arm(i));
        return arms;
      }());

      std::vector<RunOutput> runs(R);
      parallel_for(R, threads, [&](std::size_t r) {
        const std::uint64_t seed = cfg.base_seed + r;
        SeededRng env_rng(seed, 0);
        auto policy = make_policy(params, alpha, env.num_arms(), SeededRng(seed, 1));
        auto trace = run_policy(*policy, env, cfg.horizon, best, env_rng);
        runs[r] = {std::move(trace.prob_optimal), std::move(trace.cum_pseudo_regret),
                   trace.average_regret()};
      });

      // Deterministic reduction in run order.
      AggregateCurve curve;
      curve.algo = id;
      curve.alpha = alpha;
      curve.seed_base = cfg.base_seed;
      curve.params = params;
      curve.mean_prob_optimal.assign(T, 0.0);
      curve.std_prob_optimal.assign(T, 0.0);
      curve.mean_cum_regret.assign(T, 0.0);
      const double rr = static_cast<double>(R);
      for (std::size_t t = 0; t < T; ++t) {
        double sp = 0.0, sr = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
          sp += runs[r].prob_optimal[t];
          sr += runs[r].cum_regret[t];
        }
        const double mean = sp / rr;
        double ss = 0.0;
        for (std::size_t r = 0; r < R; ++r) {
          const double d = runs[r].prob_optimal[t] - mean;
          ss += d * d;
        }
        curve.mean_prob_optimal[t] = mean;
        curve.std_prob_optimal[t] = R > 1 ? std::sqrt(ss / (rr - 1.0)) : 0.0;
        curve.mean_cum_regret[t] = sr / rr;
      }
      curve.filtered_mean = moving_average(curve.mean_prob_optimal, cfg.filter_window);
      curve.filtered_std = moving_average(curve.std_prob_optimal, cfg.filter_window);
      for (auto& run : runs) {
        curve.terminal_average_regret.push_back(run.average_regret);
        if (cfg.raw_traces) {
          curve.raw_prob_optimal.push_back(std::move(run.prob_optimal));
          curve.raw_cum_regret.push_back(std::move(run.cum_regret));
        }
      }
      result.curves.push_back(std::move(curve));
    }
  }
  return result;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_curves_csv(const ExperimentResult& result, std::ostream& out) {
  out << "algo,alpha,seed_base,t,mean_prob_optimal,std_prob_optimal,mean_cum_regret\n";
  for (const auto& c : result.curves) {
    const std::string prefix = c.algo + "," + format_number(c.alpha) + "," + std::to_string(c.seed_base) + ",";
    for (std::size_t t = 0; t < c.filtered_mean.size(); ++t) {
      out << prefix << (t + 1) << ',' << format_number(c.filtered_mean[t]) << ','
          << format_number(c.filtered_std[t]) << ',' << format_number(c.mean_cum_regret[t]) << '\n';
    }
  }
}

void write_raw_csv(const ExperimentResult& result, std::ostream& out) {
  out << "algo,alpha,run,seed,t,prob_optimal,cum_regret\n";
  for (const auto& c : result.curves) {
    for (std::size_t r = 0; r < c.raw_prob_optimal.size(); ++r) {
      const std::string prefix = c.algo + "," + format_number(c.alpha) + "," + std::to_string(r) +
                                 "," + std::to_string(c.seed_base + r) + ",";
      for (std::size_t t = 0; t < c.raw_prob_optimal[r].size(); ++t) {
        out << prefix << (t + 1) << ',' << format_number(c.raw_prob_optimal[r][t]) << ','
            << format_number(c.raw_cum_regret[r][t]) << '\n';
      }
    }
  }
}

void write_meta_json(const ExperimentResult& result, std::ostream& out) {
  using json = nlohmann::ordered_json;
  const auto& cfg = result.config;
  json meta;
  meta["name"] = cfg.name;
  meta["alphas"] = cfg.alphas;
  meta["horizon"] = cfg.horizon;
  meta["repetitions"] = cfg.repetitions;
  meta["base_seed"] = cfg.base_seed;
  meta["filter_window"] = cfg.filter_window;
  meta["means"] = cfg.means;
  meta["csv_columns_filtered"] = {"mean_prob_optimal", "std_prob_optimal"};
  json runs = json::array();
  for (const auto& c : result.curves) {
    json entry;
    entry["algo"] = c.algo;
    entry["alpha"] = c.alpha;
    const auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) entry[key] = *v;
    };
    put("lambda", c.params.lambda);
    put("mu", c.params.mu);
    put("q", c.params.q);
    put("c", c.params.c);
    put("M", c.params.M);
    put("planner_regret_bound", c.params.regret_bound);
    double s = 0.0;
    for (double v : c.terminal_average_regret) s += v;
    entry["mean_average_regret"] = s / static_cast<double>(c.terminal_average_regret.size());
    entry["final_mean_prob_optimal"] = c.mean_prob_optimal.back();
    entry["final_std_prob_optimal"] = c.std_prob_optimal.back();
    runs.push_back(std::move(entry));
  }
  meta["curves"] = std::move(runs);
  out << meta.dump(2) << '\n';
}

std::vector<std::filesystem::path> write_experiment(const ExperimentResult& result,
                                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const auto open = [&](const std::string& file) {
    written.push_back(dir / file);
    std::ofstream out(written.back(), std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + written.back().string());
    return out;
  };
  {
    auto out = open(result.config.name + ".csv");
    write_curves_csv(result, out);
  }
  {
    auto out = open(result.config.name + ".meta.json");
    write_meta_json(result, out);
  }
  if (result.config.raw_traces) {
    auto out = open(result.config.name + ".raw.csv");
    write_raw_csv(result, out);
  }
  return written;
}

}  // namespace htmab
