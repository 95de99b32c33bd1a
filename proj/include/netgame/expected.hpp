#pragma once

#include "netgame/game.hpp"
#include "netgame/rng.hpp"

#include <cmath>
#include <cstdint>
#include <variant>

namespace netgame {

struct AnalyticEstimator {};

struct MonteCarloEstimator {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};

using JacobianEstimator = std::variant<AnalyticEstimator, MonteCarloEstimator>;

struct ExpectedJacobian {
  Vector value;
  Vector standard_error;  // zero for the analytic estimator
};

// Expected operator F~(s) = E[F(s, G P)].
//
// The analytic route evaluates F on the expected network Gbar Pbar, which is
// exact whenever the gradient is affine in the aggregate. The Monte Carlo
// route averages F over independent network draws.
inline ExpectedJacobian expected_jacobian(const GameSpec& game, const StrategyProfile& s,
                                          const JacobianEstimator& estimator = AnalyticEstimator{}) {
  game.check_profile(s);
  if (std::holds_alternative<AnalyticEstimator>(estimator)) {
    if (!game.cost().affine_in_aggregate())
      throw InvalidInput(
          "analytic expected Jacobian needs a gradient affine in the aggregate; use the Monte Carlo estimator");
    Vector f = game_jacobian(game, s, game.network().expected_effective());
    return {f, Vector::Zero(f.size())};
  }

  const auto& mc = std::get<MonteCarloEstimator>(estimator);
  if (mc.samples < 2) throw InvalidInput("Monte Carlo expected Jacobian needs at least 2 samples");
  const auto len = s.values().size();
  Vector sum = Vector::Zero(len);
  Vector sum_sq = Vector::Zero(len);
  NetworkRealization r;
  for (std::size_t k = 0; k < mc.samples; ++k) {
    auto rng = stream(mc.seed, 0, k, StreamPurpose::monte_carlo);
    game.network().sample_into(rng, r);
    const Vector f = game_jacobian(game, s, r.effective());
    sum += f;
    sum_sq += f.cwiseAbs2();
  }
  const double m = static_cast<double>(mc.samples);
  Vector mean = sum / m;
  Vector var = ((sum_sq / m) - mean.cwiseAbs2()).cwiseMax(0.0) * (m / (m - 1.0));
  return {mean, (var / m).cwiseSqrt()};
}

}  // namespace netgame
