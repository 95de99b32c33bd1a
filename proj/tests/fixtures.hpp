#pragma once

#include "netgame/netgame.hpp"

#include <cmath>
#include <vector>

namespace fixtures {

using namespace netgame;

// q=1, a=0.5, b=-1 on [0,1], 2-cycle, full participation.
inline GameSpec two_agent() {
  NetworkModel net(2, EdgeDistribution::constant(1.0), Vector::Ones(2));
  return GameSpec(StrategySet::box(1, 0.0, 1.0), CostModel::quadratic(1.0, 0.5, -1.0, 1), net);
}

inline GameSpec quadratic_game(std::size_t agents, std::size_t dim, double q, double a, double b,
                               EdgeDistribution edge, double pbar, double lo = 0.0, double hi = 1.0) {
  NetworkModel net(agents, edge, Vector::Constant(static_cast<Eigen::Index>(agents), pbar));
  return GameSpec(StrategySet::box(dim, lo, hi), CostModel::quadratic(q, a, b, dim), net);
}

inline GameSpec bernoulli_game(std::size_t agents = 50, double p = 0.3, double pbar = 0.7) {
  return quadratic_game(agents, 1, 1.0, 1.0, -1.0, EdgeDistribution::bernoulli(p), pbar);
}

inline GameSpec ball_game(std::size_t agents, std::size_t dim, double pbar) {
  NetworkModel net(agents, EdgeDistribution::uniform(0.2, 0.9), Vector::Constant(static_cast<Eigen::Index>(agents), pbar));
  Vector center = Vector::Constant(static_cast<Eigen::Index>(dim), 0.25);
  return GameSpec(StrategySet::ball(center, 1.5), CostModel::quadratic(2.0, -0.8, 0.7, dim), net);
}

// Plain cost difference J_i(s_i, z) - min_{x in S_i} J_i(x, z), the minimiser
// found by the closed-form projection.
inline double brute_gap(double q, double a, const Vector& b, const StrategySet& set, const Vector& s, const Vector& z) {
  auto cost = [&](const Vector& x) { return 0.5 * q * x.squaredNorm() + (a * z + b).dot(x); };
  const Vector br = set.project(-(a * z + b) / q);
  return cost(s) - cost(br);
}

// z_i = (1/N) sum_j W_ij s_j, written as loops.
inline std::vector<Vector> loop_aggregates(const StrategyProfile& s, const Matrix& w) {
  const std::size_t n = s.agents();
  std::vector<Vector> z(n, Vector::Zero(static_cast<Eigen::Index>(s.dim())));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      z[i] += w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * s.block(j) / static_cast<double>(n);
  return z;
}

}  // namespace fixtures
