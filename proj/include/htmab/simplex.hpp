#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace htmab {

// Probability vector over n arms. Entries are floored at kFloor so that
// x^(q-1) stays finite, and the total stays within 1e-9 of one.
class SimplexPoint {
 public:
  static constexpr double kFloor = 1e-15;

  // Accepts any nonnegative finite vector summing to 1 within 1e-6; the
  // result is floored and renormalized.
  explicit SimplexPoint(std::vector<double> probs);

  static SimplexPoint uniform(std::size_t n);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// Norms over plain vectors. p may be +infinity.
double lp_norm(std::span<const double> v, double p);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace htmab
