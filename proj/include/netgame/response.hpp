#pragma once

#include "netgame/game.hpp"

#include <cmath>

namespace netgame {

struct BestResponse {
  Vector point;
  bool converged = true;
  std::size_t iterations = 0;
};

// argmin over S_i of J_i(., z_i).
//
// Quadratic costs have the closed form Pi_{S_i}[-(a z_i + b_i)/q]. Custom costs
// run projected gradient descent with backtracking until the projected
// gradient step is below `tolerance`.
inline BestResponse best_response(const GameSpec& game, std::size_t i, const Eigen::Ref<const Vector>& z,
                                  double tolerance = 1e-10, std::size_t max_iters = 100000) {
  if (i >= game.agents()) throw InvalidInput("agent index out of range");
  if (static_cast<std::size_t>(z.size()) != game.dim()) throw InvalidInput("aggregate dimension mismatch");
  if (!z.allFinite()) throw InvalidInput("aggregate must be finite");
  const auto& set = game.set(i);

  if (const auto* qc = game.cost().as_quadratic()) {
    Vector u = -(qc->a * z + qc->offset(i)) / qc->q;
    set.project_inplace(u);
    return {std::move(u), true, 0};
  }

  const auto& cost = game.cost();
  Vector x = set.project(Vector::Zero(z.size()));
  Vector grad(z.size());
  double step = 1.0;
  for (std::size_t it = 1; it <= max_iters; ++it) {
    cost.gradient_into(i, x, z, grad);
    if (!grad.allFinite()) throw EvaluationFault("non-finite gradient in best response", i);
    const double fx = cost.cost(i, x, z);
    step = std::min(1.0, step * 2.0);
    Vector candidate;
    while (true) {
      candidate = set.project(x - step * grad);
      const Vector d = candidate - x;
      // Armijo condition for the projected step.
      if (cost.cost(i, candidate, z) <= fx + grad.dot(d) + d.squaredNorm() / (2.0 * step) || step < 1e-16) break;
      step *= 0.5;
    }
    const double move = (candidate - x).norm();
    x = std::move(candidate);
    if (move / step <= tolerance || move <= tolerance * 1e-3) return {std::move(x), true, it};
  }
  return {std::move(x), false, max_iters};
}

namespace detail {

// J_i(x, z) - J_i(br, z) for the quadratic family, written as
// q/2 ||x - br||^2 + q (x - br)^T (br - u) with u the unconstrained minimiser.
// Both terms are nonnegative for x in S_i, so no cancellation occurs.
inline double quadratic_gap(const QuadraticCost& qc, const StrategySet& set, std::size_t i,
                            const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& z, Vector& u,
                            Vector& br) {
  u = -(qc.a * z + qc.offset(i)) / qc.q;
  br = u;
  set.project_inplace(br);
  return 0.5 * qc.q * (x - br).squaredNorm() + qc.q * (x - br).dot(br - u);
}

// Per-agent gap given the n x N aggregate matrix.
inline void cost_gaps_into(const GameSpec& game, const StrategyProfile& s, const Matrix& z, Vector& out, Vector& u,
                           Vector& br, double tolerance = 1e-10) {
  const auto n = static_cast<Eigen::Index>(game.agents());
  if (out.size() != n) out.resize(n);
  if (const auto* qc = game.cost().as_quadratic()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      out(i) = quadratic_gap(*qc, game.set(ii), ii, s.block(ii), z.col(i), u, br);
    }
    return;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const auto br_i = best_response(game, ii, z.col(i), tolerance);
    if (!br_i.converged) throw EvaluationFault("best response did not converge", ii);
    out(i) = game.cost().cost(ii, s.block(ii), z.col(i)) - game.cost().cost(ii, br_i.point, z.col(i));
  }
}

}  // namespace detail

// gap_i = J_i(s_i, z_i(s|W)) - min_{x in S_i} J_i(x, z_i(s|W)).
// s is an eps-Nash equilibrium of the game on W iff max_i gap_i <= eps.
inline Vector nash_gap(const GameSpec& game, const StrategyProfile& s, const Matrix& w, double tolerance = 1e-10) {
  game.check_profile(s);
  const Matrix z = local_aggregates(s, w);
  Vector out, u, br;
  detail::cost_gaps_into(game, s, z, out, u, br, tolerance);
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (out(i) < 0.0 && out(i) > -tolerance) out(i) = 0.0;
  return out;
}

}  // namespace netgame
