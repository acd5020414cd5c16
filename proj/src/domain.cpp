#include "htmab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "htmab/simplex.hpp"

namespace htmab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_size(std::span<const double> x, std::size_t n) {
  if (x.size() != n) throw std::invalid_argument("point dimension does not match the domain");
}

}  // namespace

std::size_t dimension(const Domain& domain) {
  return std::visit(overloaded{[](const Ball& b) { return b.center.size(); },
                               [](const Box& b) { return b.lower.size(); },
                               [](const ProbabilitySimplex& s) { return s.dim; }},
                    domain);
}

void validate(const Domain& domain) {
  std::visit(overloaded{[](const Ball& b) {
                          if (b.center.empty() || !(b.radius > 0.0)) {
                            throw std::invalid_argument("ball needs a center and radius > 0");
                          }
                        },
                        [](const Box& b) {
                          if (b.lower.empty() || b.lower.size() != b.upper.size()) {
                            throw std::invalid_argument("box bounds must have equal nonzero size");
                          }
                          for (std::size_t i = 0; i < b.lower.size(); ++i) {
                            if (!(b.lower[i] < b.upper[i])) {
                              throw std::invalid_argument("box needs lower < upper");
                            }
                          }
                        },
                        [](const ProbabilitySimplex& s) {
                          if (s.dim == 0) throw std::invalid_argument("simplex needs dim >= 1");
                        }},
             domain);
}

std::vector<double> project_to_simplex(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - theta, 0.0);
  return out;
}

std::vector<double> project_euclidean(const Domain& domain, std::span<const double> x) {
  require_size(x, dimension(domain));
  return std::visit(
      overloaded{[&](const Ball& b) {
                   std::vector<double> out(x.begin(), x.end());
                   double dist2 = 0.0;
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     dist2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                   }
                   const double dist = std::sqrt(dist2);
                   if (dist > b.radius) {
                     for (std::size_t i = 0; i < x.size(); ++i) {
                       out[i] = b.center[i] + (x[i] - b.center[i]) * (b.radius / dist);
                     }
                   }
                   return out;
                 },
                 [&](const Box& b) {
                   std::vector<double> out(x.size());
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     out[i] = std::clamp(x[i], b.lower[i], b.upper[i]);
                   }
                   return out;
                 },
                 [&](const ProbabilitySimplex&) { return project_to_simplex(x); }},
      domain);
}

double distance_to(const Domain& domain, std::span<const double> x) {
  const auto p = project_euclidean(domain, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - p[i]) * (x[i] - p[i]);
  return std::sqrt(s);
}

double max_abs_linear(const Domain& domain, std::span<const double> c, double tau) {
  require_size(c, dimension(domain));
  const double cn = lp_norm(c, 2.0);
  // Support function of S in directions c and -c.
  const auto [hi, lo] = std::visit(
      overloaded{[&](const Ball& b) {
                   const double mid = dot(c, b.center);
                   return std::pair{mid + b.radius * cn, mid - b.radius * cn};
                 },
                 [&](const Box& b) {
                   double up = 0.0, down = 0.0;
                   for (std::size_t i = 0; i < c.size(); ++i) {
                     up += std::max(c[i] * b.lower[i], c[i] * b.upper[i]);
                     down += std::min(c[i] * b.lower[i], c[i] * b.upper[i]);
                   }
                   return std::pair{up, down};
                 },
                 [&](const ProbabilitySimplex&) {
                   return std::pair{*std::max_element(c.begin(), c.end()),
                                    *std::min_element(c.begin(), c.end())};
                 }},
      domain);
  return std::max(std::abs(hi), std::abs(lo)) + tau * cn;
}

double max_distance_from(const Domain& domain, std::span<const double> point, double tau) {
  require_size(point, dimension(domain));
  const double far = std::visit(
      overloaded{[&](const Ball& b) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < point.size(); ++i) {
                     s += (b.center[i] - point[i]) * (b.center[i] - point[i]);
                   }
                   return std::sqrt(s) + b.radius;
                 },
                 [&](const Box& b) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < point.size(); ++i) {
                     const double a = b.lower[i] - point[i];
                     const double c = b.upper[i] - point[i];
                     s += std::max(a * a, c * c);
                   }
                   return std::sqrt(s);
                 },
                 [&](const ProbabilitySimplex& simplex) {
                   double best = 0.0;
                   for (std::size_t v = 0; v < simplex.dim; ++v) {
                     double s = 0.0;
                     for (std::size_t i = 0; i < simplex.dim; ++i) {
                       const double d = (i == v ? 1.0 : 0.0) - point[i];
                       s += d * d;
                     }
                     best = std::max(best, std::sqrt(s));
                   }
                   return best;
                 }},
      domain);
  return far + tau;
}

double euclidean_diameter(const Domain& domain) {
  return std::visit(overloaded{[](const Ball& b) { return 2.0 * b.radius; },
                               [](const Box& b) {
                                 double s = 0.0;
                                 for (std::size_t i = 0; i < b.lower.size(); ++i) {
                                   s += (b.upper[i] - b.lower[i]) * (b.upper[i] - b.lower[i]);
                                 }
                                 return std::sqrt(s);
                               },
                               [](const ProbabilitySimplex& s) {
                                 return s.dim > 1 ? std::sqrt(2.0) : 0.0;
                               }},
                    domain);
}

}  // namespace htmab
