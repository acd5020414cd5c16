#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace htmab {

struct Ball {
  std::vector<double> center;
  double radius;
};

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct ProbabilitySimplex {
  std::size_t dim;
};

// Compact convex feasible set S.
using Domain = std::variant<Ball, Box, ProbabilitySimplex>;

std::size_t dimension(const Domain& domain);
void validate(const Domain& domain);

std::vector<double> project_euclidean(const Domain& domain, std::span<const double> x);
double distance_to(const Domain& domain, std::span<const double> x);

// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_to_simplex(std::span<const double> x);

// sup over S_tau = S + tau B2 of |<c, x>|.
double max_abs_linear(const Domain& domain, std::span<const double> c, double tau);
// sup over S_tau of ||x - point||_2.
double max_distance_from(const Domain& domain, std::span<const double> point, double tau);
// sup over x, y in S of ||x - y||_2.
double euclidean_diameter(const Domain& domain);

}  // namespace htmab
