#pragma once

#include "netgame/expected.hpp"
#include "netgame/game.hpp"
#include "netgame/network.hpp"
#include "netgame/response.hpp"
#include "netgame/rng.hpp"
#include "netgame/schedule.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace netgame {

struct NoiseSample {
  Vector w;
  std::size_t iteration = 0;
};

namespace detail {

inline void check_realization(const GameSpec& game, const NetworkRealization& r) {
  const auto n = static_cast<Eigen::Index>(game.agents());
  if (r.links.rows() != n || r.links.cols() != n || r.participation.size() != n)
    throw InvalidInput("realization does not match the game's agent count");
}

struct StepWorkspace {
  Matrix s_eff;  // n x N, columns of absent agents zeroed
  Matrix z;      // n x N realized aggregates
  Matrix z_bar;  // n x N aggregates on the expected network
  Vector grad;
  Vector expected_grad;
};

// Aggregates on G diag(P) without forming the effective matrix.
inline void realized_aggregates(const StrategyProfile& s, const NetworkRealization& r, StepWorkspace& ws) {
  ws.s_eff = s.columns() * r.participation.asDiagonal();
  aggregates_into(ws.s_eff, r.links, ws.z);
}

// Present agents take a projected gradient step, absent agents hold.
inline void advance(const GameSpec& game, const StrategyProfile& s, const NetworkRealization& r, double tau,
                    StrategyProfile& out, StepWorkspace& ws) {
  const auto n = static_cast<Eigen::Index>(game.dim());
  if (ws.grad.size() != n) ws.grad.resize(n);
  for (std::size_t i = 0; i < game.agents(); ++i) {
    auto next = out.block(i);
    if (r.participation(static_cast<Eigen::Index>(i)) == 0.0) {
      next = s.block(i);
      continue;
    }
    game.cost().gradient_into(i, s.block(i), ws.z.col(static_cast<Eigen::Index>(i)), ws.grad);
    if (!ws.grad.allFinite()) throw EvaluationFault("non-finite gradient", i, r.iteration);
    next = s.block(i) - tau * ws.grad;
    game.set(i).project_inplace(next);
  }
}

// Stochastic-gradient form: s_i <- Pi[s_i - tau Pbar_i (F~_i + w_i)] with
// w_i = (P_i / Pbar_i) F_i - F~_i. Writes w into `noise`.
inline void advance_sgd(const GameSpec& game, const StrategyProfile& s, const NetworkRealization& r,
                        const Matrix& expected_w, double tau, StrategyProfile& out, Vector& noise,
                        StepWorkspace& ws) {
  const auto n = static_cast<Eigen::Index>(game.dim());
  if (ws.grad.size() != n) ws.grad.resize(n);
  if (ws.expected_grad.size() != n) ws.expected_grad.resize(n);
  if (noise.size() != s.values().size()) noise.resize(s.values().size());
  aggregates_into(s.columns(), expected_w, ws.z_bar);
  const Vector& pbar = game.network().participation();
  for (std::size_t i = 0; i < game.agents(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    game.cost().gradient_into(i, s.block(i), ws.z.col(ii), ws.grad);
    if (!ws.grad.allFinite()) throw EvaluationFault("non-finite gradient", i, r.iteration);
    game.cost().gradient_into(i, s.block(i), ws.z_bar.col(ii), ws.expected_grad);
    auto w_i = noise.segment(ii * n, n);
    w_i = (r.participation(ii) / pbar(ii)) * ws.grad - ws.expected_grad;
    auto next = out.block(i);
    next = s.block(i) - (tau * pbar(ii)) * (ws.expected_grad + w_i);
    game.set(i).project_inplace(next);
  }
}

}  // namespace detail

// One round of projected gradient play on the realized network.
inline StrategyProfile play_step(const GameSpec& game, const StrategyProfile& s, const NetworkRealization& r,
                                 double tau) {
  game.check_profile(s);
  detail::check_realization(game, r);
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidInput("step size must be finite and nonnegative");
  detail::StepWorkspace ws;
  detail::realized_aggregates(s, r, ws);
  StrategyProfile out(game.agents(), game.dim());
  detail::advance(game, s, r, tau, out, ws);
  return out;
}

// The same round written as projected SGD on the expected operator.
inline std::pair<StrategyProfile, NoiseSample> sgd_step(const GameSpec& game, const StrategyProfile& s,
                                                        const NetworkRealization& r, double tau) {
  game.check_profile(s);
  detail::check_realization(game, r);
  if (!game.cost().affine_in_aggregate())
    throw InvalidInput("sgd form needs the analytic expected operator (gradient affine in the aggregate)");
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidInput("step size must be finite and nonnegative");
  detail::StepWorkspace ws;
  detail::realized_aggregates(s, r, ws);
  StrategyProfile out(game.agents(), game.dim());
  NoiseSample noise{Vector(), r.iteration};
  detail::advance_sgd(game, s, r, game.network().expected_effective(), tau, out, noise.w, ws);
  return {std::move(out), std::move(noise)};
}

// sqrt((s - t)^T (diag(Pbar) kron I_n)^{-1} (s - t))
inline double weighted_distance(const StrategyProfile& s, const StrategyProfile& t, const Vector& pbar) {
  if (s.agents() != t.agents() || s.dim() != t.dim()) throw InvalidInput("profile shapes differ");
  if (static_cast<std::size_t>(pbar.size()) != s.agents()) throw InvalidInput("participation length mismatch");
  if ((pbar.array() <= 0.0).any()) throw InvalidInput("weighted distance needs Pbar_ii > 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.agents(); ++i)
    acc += (s.block(i) - t.block(i)).squaredNorm() / pbar(static_cast<Eigen::Index>(i));
  return std::sqrt(acc);
}

// One record per iteration k = 0..T describing s^k and the round-k network.
struct TraceRow {
  std::size_t k = 0;
  double distance = 0.0;           // ||s^k - sbar||_2
  double weighted_distance = 0.0;  // ||s^k - sbar||_{Delta^{-1}}
  double step = 0.0;               // tau^k
  std::size_t participants = 0;
  double max_regret = std::numeric_limits<double>::quiet_NaN();
  std::size_t worst_agent = 0;
  double noise_sq = std::numeric_limits<double>::quiet_NaN();  // ||w^k||^2, sgd form only
};

struct SimulationTrace {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::vector<TraceRow> rows;
  Matrix agent_regret;  // (T+1) x N when per-agent regret is recorded
  std::vector<std::pair<std::size_t, StrategyProfile>> profiles;
  StrategyProfile final_profile;
  bool has_regret = false;
  bool has_noise = false;

  std::size_t horizon() const { return rows.empty() ? 0 : rows.size() - 1; }
};

using TraceHook = std::function<void(std::size_t k, const StrategyProfile& s, const TraceRow& row)>;

struct RunOptions {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  std::optional<StrategyProfile> initial;  // default: projection of the origin
  bool regret = true;
  bool per_agent_regret = false;
  bool sgd_form = false;
  bool store_profiles = false;
  std::size_t profile_stride = 0;  // 0: ceil(T / 1000)
  TraceHook hook;
};

// Iterates the dynamics for k = 0..T-1 on networks drawn from the
// (seed, replication, k) stream. Row k records s^k together with the regret it
// incurs on the round-k network; the last row samples round T for its regret
// but takes no step.
inline SimulationTrace run(const GameSpec& game, const StepSchedule& schedule, std::size_t horizon,
                           const StrategyProfile& equilibrium, const RunOptions& options = {}) {
  game.check_profile(equilibrium);
  if (options.sgd_form && !game.cost().affine_in_aggregate())
    throw InvalidInput("sgd form needs the analytic expected operator");

  StrategyProfile s = options.initial ? *options.initial : game.initial_profile();
  game.check_profile(s);
  if (!game.feasible(s, 1e-12)) throw InvalidInput("initial profile lies outside the strategy sets");

  const std::size_t agents = game.agents();
  const Vector& pbar = game.network().participation();
  const std::size_t stride =
      options.profile_stride > 0 ? options.profile_stride : std::max<std::size_t>(1, (horizon + 999) / 1000);
  const Matrix expected_w = options.sgd_form ? game.network().expected_effective() : Matrix();

  SimulationTrace trace;
  trace.seed = options.seed;
  trace.replication = options.replication;
  trace.has_regret = options.regret;
  trace.has_noise = options.sgd_form;
  trace.rows.reserve(horizon + 1);
  if (options.regret && options.per_agent_regret)
    trace.agent_regret.resize(static_cast<Eigen::Index>(horizon + 1), static_cast<Eigen::Index>(agents));

  StrategyProfile next(agents, game.dim());
  NetworkRealization r;
  detail::StepWorkspace ws;
  Vector regret, u, br, noise;

  for (std::size_t k = 0; k <= horizon; ++k) {
    auto rng = stream(options.seed, options.replication, k, StreamPurpose::network);
    game.network().sample_into(rng, r);
    r.iteration = k;
    detail::realized_aggregates(s, r, ws);

    TraceRow row;
    row.k = k;
    row.distance = (s.values() - equilibrium.values()).norm();
    row.weighted_distance = weighted_distance(s, equilibrium, pbar);
    row.step = schedule(k);
    row.participants = r.participants();

    if (options.regret) {
      detail::cost_gaps_into(game, s, ws.z, regret, u, br);
      regret = regret.cwiseMax(0.0);
      Eigen::Index worst = 0;
      row.max_regret = regret.maxCoeff(&worst);
      row.worst_agent = static_cast<std::size_t>(worst);
      if (options.per_agent_regret) trace.agent_regret.row(static_cast<Eigen::Index>(k)) = regret.transpose();
    }

    if (k < horizon) {
      if (options.sgd_form) {
        detail::advance_sgd(game, s, r, expected_w, row.step, next, noise, ws);
        row.noise_sq = noise.squaredNorm();
      } else {
        detail::advance(game, s, r, row.step, next, ws);
      }
    }

    if (options.store_profiles && (k % stride == 0 || k == horizon)) trace.profiles.emplace_back(k, s);
    if (options.hook) options.hook(k, s, row);
    trace.rows.push_back(row);
    if (k < horizon) std::swap(s, next);
  }
  trace.final_profile = std::move(s);
  return trace;
}

}  // namespace netgame
