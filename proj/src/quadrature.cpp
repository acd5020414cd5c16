#include "htmab/quadrature.hpp"

#include <queue>
#include <string>
#include <vector>

#include "htmab/error.hpp"

namespace htmab::quad {
namespace {

struct Interval {
  double a;
  double b;
  Panel panel;
  bool operator<(const Interval& other) const { return panel.error < other.panel.error; }
};

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol, int max_panels) {
  std::priority_queue<Interval> work;
  const Panel first = gauss_kronrod15(f, a, b);
  work.push({a, b, first});
  double value = first.value;
  double error = first.error;
  int panels = 1;

  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (panels >= max_panels) {
      throw NonConvergence("adaptive quadrature on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "] stalled at error " + std::to_string(error));
    }
    const Interval worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod15(f, worst.a, mid);
    const Panel right = gauss_kronrod15(f, mid, worst.b);
    value += left.value + right.value - worst.panel.value;
    error += left.error + right.error - worst.panel.error;
    work.push({worst.a, mid, left});
    work.push({mid, worst.b, right});
    ++panels;
  }

  // Re-sum from the leaves so the running updates do not leak rounding.
  value = 0.0;
  error = 0.0;
  while (!work.empty()) {
    value += work.top().panel.value;
    error += work.top().panel.error;
    work.pop();
  }
  return {value, error, panels};
}

}  // namespace htmab::quad
