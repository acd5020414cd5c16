#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "htmab/distributions.hpp"
#include "htmab/domain.hpp"
#include "htmab/rng.hpp"

namespace htmab {

// Stochastic n-armed environment; every pull is an independent loss draw.
class ArmEnvironment {
 public:
  explicit ArmEnvironment(std::vector<HeavyTailSpec> arms);

  std::size_t num_arms() const { return arms_.size(); }
  const HeavyTailSpec& arm(std::size_t i) const { return arms_.at(i); }
  const std::vector<double>& known_means() const { return means_; }
  std::size_t best_arm() const;

  double pull(std::size_t arm, SeededRng& rng) const;
  // One loss per arm for a single round, drawn in arm order. Drawing the
  // whole vector keeps the rng position independent of the chosen arm.
  void draw_round(SeededRng& rng, std::vector<double>& losses) const;

 private:
  std::vector<HeavyTailSpec> arms_;
  std::vector<double> means_;
};

// Loss families l(x) before noise.
struct LinearLoss {
  std::vector<double> c;  // l(x) = <c, x>
};
struct QuadraticLoss {
  std::vector<double> center;
  double curvature;  // l(x) = (L/2) ||x - center||^2
};
struct NormLoss {
  std::vector<double> center;  // l(x) = ||x - center||_2
};
using LossModel = std::variant<LinearLoss, QuadraticLoss, NormLoss>;

enum class NoiseKind {
  None,
  Multiplicative,  // l(x) * xi / E xi
  Additive,        // l(x) + (xi - E xi)
};

struct NoiseModel {
  NoiseKind kind = NoiseKind::None;
  std::optional<HeavyTailSpec> law;

  static NoiseModel none() { return {}; }
  static NoiseModel multiplicative(HeavyTailSpec law) { return {NoiseKind::Multiplicative, law}; }
  static NoiseModel additive(HeavyTailSpec law) { return {NoiseKind::Additive, law}; }
};

enum class AdversaryKind {
  Zero,
  Constant,         // delta(x) = Delta
  SignOscillating,  // delta_t(x) = Delta sign(sin(<w, x> + t))
};

struct Adversary {
  AdversaryKind kind = AdversaryKind::Zero;
  double delta = 0.0;
  std::vector<double> direction;  // w, only for SignOscillating

  static Adversary zero() { return {}; }
  static Adversary constant(double delta) { return {AdversaryKind::Constant, delta, {}}; }
  static Adversary sign_oscillating(double delta, std::vector<double> w) {
    return {AdversaryKind::SignOscillating, delta, std::move(w)};
  }

  double bound() const { return kind == AdversaryKind::Zero ? 0.0 : delta; }
  double value(std::span<const double> x, std::uint64_t t) const;
};

enum class Regularity { Lipschitz, Smooth };

// Noisy convex loss over a feasible set S, queried anywhere in
// S_tau = S + tau B2. Observations are l(x, xi) + delta_t(x).
class FunctionEnvironment {
 public:
  FunctionEnvironment(Domain domain, double tau, LossModel loss, NoiseModel noise = {},
                      Adversary adversary = {});

  const Domain& domain() const { return domain_; }
  double tau() const { return tau_; }
  std::size_t dimension() const { return htmab::dimension(domain_); }
  const LossModel& loss() const { return loss_; }
  const NoiseModel& noise() const { return noise_; }
  const Adversary& adversary() const { return adversary_; }

  // Throws OutOfDomain when x is farther than tau from S.
  double query(std::span<const double> x, std::uint64_t t, SeededRng& rng) const;
  // E_xi l(x, xi), without the adversarial term.
  double expected_loss(std::span<const double> x) const;

  Regularity regularity() const;
  // Lipschitz constant M or smoothness constant L of the expected loss.
  double regularity_constant() const;
  // Moment exponent of the noise (1 when noiseless).
  double alpha() const;
  // Certified B with sup_{x in S_tau} E|l(x, xi)|^(1+alpha) <= B^(1+alpha).
  double moment_bound() const;
  double delta_bound() const { return adversary_.bound(); }
  // argmin over S of the expected loss.
  std::vector<double> minimizer() const;

 private:
  Domain domain_;
  double tau_;
  LossModel loss_;
  NoiseModel noise_;
  Adversary adversary_;
};

}  // namespace htmab
