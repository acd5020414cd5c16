#include "htmab/envs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "htmab/error.hpp"
#include "htmab/simplex.hpp"

namespace htmab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

std::size_t loss_dimension(const LossModel& loss) {
  return std::visit(overloaded{[](const LinearLoss& l) { return l.c.size(); },
                               [](const QuadraticLoss& l) { return l.center.size(); },
                               [](const NormLoss& l) { return l.center.size(); }},
                    loss);
}

}  // namespace

ArmEnvironment::ArmEnvironment(std::vector<HeavyTailSpec> arms) : arms_(std::move(arms)) {
  if (arms_.empty()) throw std::invalid_argument("environment needs at least one arm");
  means_.reserve(arms_.size());
  for (const auto& a : arms_) means_.push_back(a.mean());
}

std::size_t ArmEnvironment::best_arm() const {
  return static_cast<std::size_t>(std::min_element(means_.begin(), means_.end()) - means_.begin());
}

double ArmEnvironment::pull(std::size_t arm, SeededRng& rng) const {
  return arms_.at(arm).sample(rng);
}

void ArmEnvironment::draw_round(SeededRng& rng, std::vector<double>& losses) const {
  losses.resize(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) losses[i] = arms_[i].sample(rng);
}

double Adversary::value(std::span<const double> x, std::uint64_t t) const {
  switch (kind) {
    case AdversaryKind::Zero:
      return 0.0;
    case AdversaryKind::Constant:
      return delta;
    case AdversaryKind::SignOscillating: {
      const double s = std::sin(dot(direction, x) + static_cast<double>(t));
      return s > 0.0 ? delta : (s < 0.0 ? -delta : 0.0);
    }
  }
  return 0.0;
}

FunctionEnvironment::FunctionEnvironment(Domain domain, double tau, LossModel loss,
                                         NoiseModel noise, Adversary adversary)
    : domain_(std::move(domain)),
      tau_(tau),
      loss_(std::move(loss)),
      noise_(std::move(noise)),
      adversary_(std::move(adversary)) {
  validate(domain_);
  if (!(tau_ >= 0.0) || !std::isfinite(tau_)) throw std::invalid_argument("tau must be >= 0");
  if (loss_dimension(loss_) != dimension()) {
    throw std::invalid_argument("loss dimension does not match the domain");
  }
  if (auto* q = std::get_if<QuadraticLoss>(&loss_); q && !(q->curvature > 0.0)) {
    throw std::invalid_argument("quadratic loss needs curvature > 0");
  }
  if (noise_.kind != NoiseKind::None && !noise_.law) {
    throw std::invalid_argument("noisy environment needs a noise law");
  }
  if (noise_.kind == NoiseKind::Multiplicative && !(noise_.law->mean() > 0.0)) {
    throw std::invalid_argument("multiplicative noise needs a positive mean");
  }
  if (adversary_.kind != AdversaryKind::Zero && !(adversary_.delta >= 0.0)) {
    throw std::invalid_argument("adversary bound must be >= 0");
  }
  if (adversary_.kind == AdversaryKind::SignOscillating &&
      adversary_.direction.size() != dimension()) {
    throw std::invalid_argument("adversary direction has the wrong dimension");
  }
}

double FunctionEnvironment::expected_loss(std::span<const double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("query dimension mismatch");
  return std::visit(
      overloaded{[&](const LinearLoss& l) { return dot(l.c, x); },
                 [&](const QuadraticLoss& l) { return 0.5 * l.curvature * sq_distance(x, l.center); },
                 [&](const NormLoss& l) { return std::sqrt(sq_distance(x, l.center)); }},
      loss_);
}

double FunctionEnvironment::query(std::span<const double> x, std::uint64_t t,
                                  SeededRng& rng) const {
  const double dist = distance_to(domain_, x);
  if (dist > tau_ * (1.0 + 1e-12) + 1e-12) {
    throw OutOfDomain("query point is " + std::to_string(dist) + " away from S, tau = " +
                      std::to_string(tau_));
  }
  double value = expected_loss(x);
  switch (noise_.kind) {
    case NoiseKind::None:
      break;
    case NoiseKind::Multiplicative:
      value *= noise_.law->sample(rng) / noise_.law->mean();
      break;
    case NoiseKind::Additive:
      value += noise_.law->sample(rng) - noise_.law->mean();
      break;
  }
  return value + adversary_.value(x, t);
}

Regularity FunctionEnvironment::regularity() const {
  return std::holds_alternative<QuadraticLoss>(loss_) ? Regularity::Smooth : Regularity::Lipschitz;
}

double FunctionEnvironment::regularity_constant() const {
  return std::visit(overloaded{[](const LinearLoss& l) { return lp_norm(l.c, 2.0); },
                               [](const QuadraticLoss& l) { return l.curvature; },
                               [](const NormLoss&) { return 1.0; }},
                    loss_);
}

double FunctionEnvironment::alpha() const {
  return noise_.kind == NoiseKind::None ? 1.0 : noise_.law->alpha();
}

double FunctionEnvironment::moment_bound() const {
  const double sup_loss = std::visit(
      overloaded{[&](const LinearLoss& l) { return max_abs_linear(domain_, l.c, tau_); },
                 [&](const QuadraticLoss& l) {
                   const double r = max_distance_from(domain_, l.center, tau_);
                   return 0.5 * l.curvature * r * r;
                 },
                 [&](const NormLoss& l) { return max_distance_from(domain_, l.center, tau_); }},
      loss_);
  switch (noise_.kind) {
    case NoiseKind::None:
      return sup_loss;
    case NoiseKind::Multiplicative:
      // (E|xi / E xi|^(1+a))^(1/(1+a)) = M_xi / E xi.
      return sup_loss * noise_.law->moment_scale() / noise_.law->mean();
    case NoiseKind::Additive:
      // Minkowski: ||l + xi - E xi|| <= |l| + M_xi + |E xi|.
      return sup_loss + noise_.law->moment_scale() + std::abs(noise_.law->mean());
  }
  return sup_loss;
}

std::vector<double> FunctionEnvironment::minimizer() const {
  return std::visit(
      overloaded{
          [&](const LinearLoss& l) {
            return std::visit(
                overloaded{[&](const Ball& b) {
                             std::vector<double> out = b.center;
                             const double cn = lp_norm(l.c, 2.0);
                             if (cn > 0.0) {
                               for (std::size_t i = 0; i < out.size(); ++i) {
                                 out[i] -= b.radius * l.c[i] / cn;
                               }
                             }
                             return out;
                           },
                           [&](const Box& b) {
                             std::vector<double> out(l.c.size());
                             for (std::size_t i = 0; i < out.size(); ++i) {
                               out[i] = l.c[i] > 0.0 ? b.lower[i] : b.upper[i];
                             }
                             return out;
                           },
                           [&](const ProbabilitySimplex& s) {
                             std::vector<double> out(s.dim, 0.0);
                             out[std::min_element(l.c.begin(), l.c.end()) - l.c.begin()] = 1.0;
                             return out;
                           }},
                domain_);
          },
          [&](const QuadraticLoss& l) { return project_euclidean(domain_, l.center); },
          [&](const NormLoss& l) { return project_euclidean(domain_, l.center); }},
      loss_);
}

}  // namespace htmab
