#include "htmab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "htmab/error.hpp"

namespace htmab {
namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <class T>
T scalar(const YAML::Node& node, const std::string& field, const char* expected) {
  if (!node.IsScalar()) throw ConfigError(field, line_of(node), std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, line_of(node), std::string("expected ") + expected + ", got '" +
                                                node.Scalar() + "'");
  }
}

double real(const YAML::Node& node, const std::string& field) {
  const double v = scalar<double>(node, field, "a number");
  if (!std::isfinite(v)) throw ConfigError(field, line_of(node), "value must be finite");
  return v;
}

std::uint64_t count(const YAML::Node& node, const std::string& field) {
  const std::string text = node.IsScalar() ? node.Scalar() : std::string();
  if (!text.empty() && text.front() == '-') {
    throw ConfigError(field, line_of(node), "expected a nonnegative integer");
  }
  return scalar<std::uint64_t>(node, field, "a nonnegative integer");
}

std::vector<double> real_list(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence()) throw ConfigError(field, line_of(node), "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(real(node[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void require_map(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw ConfigError(field, line_of(node), "expected a mapping");
}

void check_alpha(double alpha, const std::string& field, int line) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError(field, line, "alpha must lie in (0, 1]");
}

PolicyOverrides parse_overrides(const std::string& id, const YAML::Node& node) {
  PolicyOverrides o;
  if (node.IsNull()) return o;
  require_map(node, "policies." + id);
  const bool tsallis = id != "robust_ucb";
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string field = "policies." + id + "." + key;
    const int line = line_of(kv.first);
    const auto positive = [&](const YAML::Node& v) {
      const double x = real(v, field);
      if (!(x > 0.0)) throw ConfigError(field, line_of(v), "must be > 0");
      return x;
    };
    if (tsallis && key == "lambda") {
      o.lambda = positive(kv.second);
    } else if (tsallis && key == "mu") {
      o.mu = positive(kv.second);
    } else if (tsallis && key == "q") {
      const double q = real(kv.second, field);
      if (!(q > 0.0 && q < 1.0)) throw ConfigError(field, line_of(kv.second), "q must lie in (0, 1)");
      o.q = q;
    } else if (!tsallis && key == "c") {
      const double c = real(kv.second, field);
      if (!(c >= 0.0)) throw ConfigError(field, line_of(kv.second), "c must be >= 0");
      o.c = c;
    } else if (!tsallis && key == "M") {
      o.M = positive(kv.second);
    } else {
      throw ConfigError(field, line, "unknown key '" + key + "' for policy " + id);
    }
  }
  return o;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("name", 0, "must not be empty");
  if (alphas.empty()) throw ConfigError("alphas", 0, "at least one alpha is required");
  for (double a : alphas) check_alpha(a, "alphas", 0);
  if (horizon < 1) throw ConfigError("horizon", 0, "must be >= 1");
  if (repetitions < 1) throw ConfigError("repetitions", 0, "must be >= 1");
  if (filter_window < 1) throw ConfigError("filter_window", 0, "must be >= 1");
  if (means.empty()) throw ConfigError("means", 0, "at least one arm is required");
  for (double m : means) {
    if (!(m > 0.0)) throw ConfigError("means", 0, "arm mean losses must be > 0");
  }
  if (policies.empty()) throw ConfigError("policies", 0, "at least one policy is required");
  const auto& ids = known_policy_ids();
  for (const auto& [id, o] : policies) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      throw ConfigError("policies." + id, 0, "unknown policy id");
    }
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ConfigError("", root.IsDefined() ? line_of(root) : 0, "top level must be a mapping");

  ExperimentConfig cfg;
  bool have_alphas = false, have_policies = false;
  std::set<std::string> seen;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    const int line = line_of(kv.first);
    if (!seen.insert(key).second) throw ConfigError(key, line, "duplicate key");
    if (key == "name") {
      cfg.name = scalar<std::string>(v, key, "a string");
      if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError(key, line_of(v), "name must be a non-empty file stem");
      }
    } else if (key == "alphas") {
      cfg.alphas = real_list(v, key);
      if (cfg.alphas.empty()) throw ConfigError(key, line_of(v), "at least one alpha is required");
      for (std::size_t i = 0; i < cfg.alphas.size(); ++i) check_alpha(cfg.alphas[i], key, line_of(v[i]));
      have_alphas = true;
    } else if (key == "horizon") {
      cfg.horizon = count(v, key);
      if (cfg.horizon < 1) throw ConfigError(key, line_of(v), "must be >= 1");
    } else if (key == "repetitions") {
      cfg.repetitions = count(v, key);
      if (cfg.repetitions < 1) throw ConfigError(key, line_of(v), "must be >= 1");
    } else if (key == "base_seed") {
      cfg.base_seed = count(v, key);
    } else if (key == "filter_window") {
      cfg.filter_window = count(v, key);
      if (cfg.filter_window < 1) throw ConfigError(key, line_of(v), "must be >= 1");
    } else if (key == "means") {
      cfg.means = real_list(v, key);
      if (cfg.means.empty()) throw ConfigError(key, line_of(v), "at least one arm is required");
      for (std::size_t i = 0; i < cfg.means.size(); ++i) {
        if (!(cfg.means[i] > 0.0)) throw ConfigError(key, line_of(v[i]), "arm mean losses must be > 0");
      }
    } else if (key == "raw_traces") {
      cfg.raw_traces = scalar<bool>(v, key, "true or false");
    } else if (key == "output") {
      cfg.output = scalar<std::string>(v, key, "a path");
    } else if (key == "policies") {
      require_map(v, key);
      for (const auto& p : v) {
        const std::string id = p.first.as<std::string>();
        const auto& ids = known_policy_ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
          throw ConfigError("policies." + id, line_of(p.first),
                            "unknown policy (expected inf_clip, skip_inf or robust_ucb)");
        }
        cfg.policies.emplace_back(id, parse_overrides(id, p.second));
      }
      if (cfg.policies.empty()) throw ConfigError(key, line_of(v), "at least one policy is required");
      have_policies = true;
    } else {
      throw ConfigError(key, line, "unknown key '" + key + "'");
    }
  }
  if (!have_alphas) throw ConfigError("alphas", 0, "missing required key");
  if (!have_policies) throw ConfigError("policies", 0, "missing required key");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", 0, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

}  // namespace htmab
