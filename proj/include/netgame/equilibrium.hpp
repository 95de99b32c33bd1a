#pragma once

#include "netgame/bounds.hpp"
#include "netgame/expected.hpp"
#include "netgame/game.hpp"
#include "netgame/response.hpp"

#include <cmath>
#include <optional>

namespace netgame {

struct EquilibriumResult {
  StrategyProfile profile;
  double residual = 0.0;  // ||s - Pi_S[s - tau F~(s)]||_2
  std::size_t iterations = 0;
  double step = 0.0;
  bool converged = false;
};

struct SolverOptions {
  double tolerance = 1e-10;
  std::size_t max_iters = 1000000;
  std::optional<StrategyProfile> initial;
};

// Solves VI(F~, S) by the fixed-point iteration s <- Pi_S[s - tau F~(s)] with
// tau = mu / L^2, a contraction for a mu-strongly monotone, L-Lipschitz
// operator. Returns the best iterate, flagged, if max_iters runs out.
inline EquilibriumResult solve_expected_vi(const GameSpec& game, const SolverOptions& options = {}) {
  if (!game.cost().affine_in_aggregate())
    throw InvalidInput("equilibrium solver needs the analytic expected operator");
  if (!(options.tolerance > 0.0)) throw InvalidInput("solver tolerance must be positive");
  const GameBounds bounds = derive_bounds(game);
  const double lipschitz = operator_lipschitz(game);
  const double tau = bounds.mu / (lipschitz * lipschitz);

  StrategyProfile s = options.initial ? game.project(*options.initial) : game.initial_profile();
  game.check_profile(s);
  const Matrix expected_w = game.network().expected_effective();

  EquilibriumResult best{s, std::numeric_limits<double>::infinity(), 0, tau, false};
  StrategyProfile next = s;
  for (std::size_t it = 0; it <= options.max_iters; ++it) {
    const Vector f = game_jacobian(game, s, expected_w);
    next.values() = s.values() - tau * f;
    next = game.project(next);
    const double residual = (s.values() - next.values()).norm();
    if (residual < best.residual) {
      best.profile = s;
      best.residual = residual;
      best.iterations = it;
    }
    if (residual <= options.tolerance) {
      best.converged = true;
      return best;
    }
    std::swap(s, next);
  }
  return best;
}

struct EpsilonBound {
  std::size_t agents = 0;
  std::size_t dim = 0;
  double delta = 0.0;
  double s_max = 0.0;
  double lipschitz_z = 0.0;
  double concentration = 0.0;  // sqrt(n s_max^2 log(4nN/delta) / (2N))
  double bar = 0.0;            // epsilon attained with probability >= 1 - delta
  double worst = 0.0;          // 4 L_z s_max, attained surely
};

// Aggregate concentration radius: with probability >= 1 - delta/(2N),
// ||z_i(s|GP) - z_i(s|Gbar Pbar)|| stays below this value.
inline double concentration_radius(std::size_t agents, std::size_t dim, double delta, double s_max) {
  const double n = static_cast<double>(dim);
  const double big_n = static_cast<double>(agents);
  return std::sqrt(n * s_max * s_max * std::log(4.0 * n * big_n / delta) / (2.0 * big_n));
}

inline EpsilonBound epsilon_bar(std::size_t agents, std::size_t dim, double delta, const GameBounds& bounds) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (agents < 1 || dim < 1) throw InvalidInput("epsilon bound needs N >= 1 and n >= 1");
  EpsilonBound e;
  e.agents = agents;
  e.dim = dim;
  e.delta = delta;
  e.s_max = bounds.s_max;
  e.lipschitz_z = bounds.lipschitz_z;
  const double big_n = static_cast<double>(agents);
  e.concentration = concentration_radius(agents, dim, delta, bounds.s_max);
  e.bar = 4.0 * bounds.lipschitz_z *
          (e.concentration * (2.0 - delta / (2.0 * big_n)) + delta * bounds.s_max / big_n);
  e.worst = 4.0 * bounds.lipschitz_z * bounds.s_max;
  return e;
}

}  // namespace netgame
