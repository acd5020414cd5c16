#pragma once

#include <span>

#include "htmab/simplex.hpp"

namespace htmab {

// Tsallis-entropy mirror map with index q in (0, 1) and stepsize mu > 0.
struct TsallisConfig {
  double q = 0.5;
  double mu = 1.0;

  void validate() const;
};

// psi_q(x) = (1 - sum x_i^q) / (1 - q).
double tsallis_potential(std::span<const double> x, double q);
inline double tsallis_potential(const SimplexPoint& x, double q) {
  return tsallis_potential(x.probs(), q);
}

// B(x, y) = psi(x) - psi(y) - <grad psi(y), x - y>, y strictly positive.
double bregman(std::span<const double> x, std::span<const double> y, double q);
inline double bregman(const SimplexPoint& x, const SimplexPoint& y, double q) {
  return bregman(x.probs(), y.probs(), q);
}

// The per-step objective
//   mu <x, g> - sum x_i^q / (1-q) + q/(1-q) sum x_{t,i}^(q-1) x_i
// which the OMD step minimizes over the simplex.
double step_objective(std::span<const double> x, const SimplexPoint& previous,
                      std::span<const double> g_hat, const TsallisConfig& cfg);

struct StepSolveDiagnostics {
  double nu = 0.0;  // simplex multiplier
  int iterations = 0;
  double residual = 0.0;  // sum_i x_i(nu) - 1 before flooring
};

struct OmdStepResult {
  SimplexPoint next;
  StepSolveDiagnostics diagnostics;
};

// Minimizes step_objective via the stationarity condition
//   x_i(nu) = [x_{t,i}^(q-1) + (1-q)/q (mu g_i + nu)]^(1/(q-1))
// with nu chosen so the entries sum to one. Throws RootBracketFailure if no
// sign change can be bracketed (finite inputs never trigger this).
OmdStepResult omd_step(const SimplexPoint& previous, std::span<const double> g_hat,
                       const TsallisConfig& cfg);

}  // namespace htmab
