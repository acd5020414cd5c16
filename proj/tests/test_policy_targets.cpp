// Point-mass targets for the two index/OMD policies. Both thresholds are
// checked as stated even though the configured policies do not reach them;
// the measured values are printed for the record.

#include <doctest.h>

#include <numeric>
#include <vector>

#include "htmab/envs.hpp"
#include "htmab/planner.hpp"
#include "htmab/policies.hpp"
#include "htmab/rng.hpp"

using namespace htmab;

TEST_CASE("robust UCB pulls the better of two point masses at least 900 of 1000 times") {
  const ArmEnvironment env({HeavyTailSpec::point_mass(3.0), HeavyTailSpec::point_mass(3.1)});
  // M = 3.1 is the smallest moment scale certifying E|X|^2 <= M^2 for both arms.
  RobustUcbPolicy p(2, {1.0, 3.1, 4.0});
  SeededRng rng(1);
  run_policy(p, env, 1000, 0, rng);
  MESSAGE("arm 0 pulls: " << p.pulls(0) << " of 1000");
  CHECK(p.pulls(0) + p.pulls(1) == 1000u);
  CHECK(p.pulls(0) >= 900u);
}

TEST_CASE("INF-clip puts more than 0.9 on the better of two point masses at T = 2000") {
  const ArmEnvironment env({HeavyTailSpec::point_mass(3.0, 0.5), HeavyTailSpec::point_mass(3.1, 0.5)});
  const std::uint64_t T = 2000;
  const auto plan = theorem1_planner(double(T), 0.5, 2, 3.1);
  std::vector<double> final_prob;
  for (std::uint64_t r = 0; r < 100; ++r) {
    auto p = InfPolicy::inf_clip(2, {0.5, plan.mu}, ClipLevel(plan.lambda), SeededRng(r, 1));
    SeededRng rng(r, 0);
    final_prob.push_back(run_policy(*p, env, T, 0, rng).prob_optimal.back());
  }
  const double mean = std::accumulate(final_prob.begin(), final_prob.end(), 0.0) / 100.0;
  MESSAGE("mean probability of the optimal arm at T: " << mean << " (lambda " << plan.lambda
                                                       << ", mu " << plan.mu << ")");
  CHECK(mean > 0.9);
}
