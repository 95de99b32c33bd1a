#pragma once

#include "netgame/dynamics.hpp"
#include "netgame/equilibrium.hpp"
#include "netgame/metrics.hpp"
#include "netgame/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Statistical property checks shared by the CLI `verify` command and the
// acceptance harness. Each returns raw measurements plus a verdict.

namespace netgame {

// Uniform draw from S_1 x ... x S_N.
inline StrategyProfile random_profile(const GameSpec& game, Xoshiro256& rng) {
  StrategyProfile s(game.agents(), game.dim());
  const auto n = static_cast<Eigen::Index>(game.dim());
  std::normal_distribution<double> normal;
  for (std::size_t i = 0; i < game.agents(); ++i) {
    auto blk = s.block(i);
    if (const auto* box = std::get_if<Box>(&game.set(i).kind())) {
      for (Eigen::Index c = 0; c < n; ++c) blk(c) = box->lower(c) + (box->upper(c) - box->lower(c)) * rng.uniform();
    } else {
      const auto& ball = std::get<Ball>(game.set(i).kind());
      Vector dir(n);
      for (Eigen::Index c = 0; c < n; ++c) dir(c) = normal(rng);
      const double norm = dir.norm();
      if (norm == 0.0) dir.setZero(); else dir /= norm;
      const double radius = ball.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
      blk = ball.center + radius * dir;
      game.set(i).project_inplace(blk);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Noise moments: E[w] = 0 and ||w||^2 <= M^2 N.

struct NoiseMomentReport {
  std::size_t profiles = 0;
  std::size_t draws = 0;
  std::size_t coordinates = 0;      // profiles * N * n
  std::size_t mean_violations = 0;  // |mean| > 4 SE
  std::size_t hard_violations = 0;  // ||w||^2 > M^2 N
  double max_score = 0.0;           // max |mean| / SE over coordinates with SE > 0
  double max_norm_ratio = 0.0;      // max ||w||^2 / (M^2 N)
  double norm_bound = 0.0;          // M^2 N

  bool ok() const { return mean_violations == 0 && hard_violations == 0; }
};

inline NoiseMomentReport noise_moment_check(const GameSpec& game, double noise_bound, std::size_t profiles,
                                            std::size_t draws, std::uint64_t seed, double se_multiple = 4.0) {
  if (!game.cost().affine_in_aggregate()) throw InvalidInput("noise check needs the analytic expected operator");
  if (draws < 2) throw InvalidInput("noise check needs at least 2 draws per profile");
  constexpr double kDeterministicTol = 1e-12;
  NoiseMomentReport rep;
  rep.profiles = profiles;
  rep.draws = draws;
  rep.norm_bound = noise_bound * noise_bound * static_cast<double>(game.agents());
  const Matrix expected_w = game.network().expected_effective();
  const auto len = static_cast<Eigen::Index>(game.agents() * game.dim());
  StrategyProfile scratch(game.agents(), game.dim());
  NetworkRealization r;
  detail::StepWorkspace ws;
  Vector noise, sum(len), sum_sq(len);
  for (std::size_t p = 0; p < profiles; ++p) {
    auto prng = stream(seed, p, 0, StreamPurpose::profiles);
    const StrategyProfile s = random_profile(game, prng);
    sum.setZero();
    sum_sq.setZero();
    for (std::size_t d = 0; d < draws; ++d) {
      auto rng = stream(seed, p, d, StreamPurpose::monte_carlo);
      game.network().sample_into(rng, r);
      r.iteration = d;
      detail::realized_aggregates(s, r, ws);
      detail::advance_sgd(game, s, r, expected_w, 0.0, scratch, noise, ws);
      const double sq = noise.squaredNorm();
      rep.max_norm_ratio = std::max(rep.max_norm_ratio, sq / rep.norm_bound);
      if (sq > rep.norm_bound * (1.0 + 1e-12)) ++rep.hard_violations;
      sum += noise;
      sum_sq += noise.cwiseAbs2();
    }
    const double m = static_cast<double>(draws);
    for (Eigen::Index c = 0; c < len; ++c) {
      const double mean = sum(c) / m;
      const double var = std::max(0.0, (sum_sq(c) / m - mean * mean) * m / (m - 1.0));
      const double se = std::sqrt(var / m);
      ++rep.coordinates;
      if (se > 0.0) {
        rep.max_score = std::max(rep.max_score, std::abs(mean) / se);
        if (std::abs(mean) > se_multiple * se) ++rep.mean_violations;
      } else if (std::abs(mean) > kDeterministicTol) {
        ++rep.mean_violations;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Aggregate concentration and eps-Nash frequency at a fixed profile.

struct ConcentrationReport {
  std::size_t draws = 0;
  double delta = 0.0;
  double radius = 0.0;             // concentration radius
  Vector agent_frequency;          // fraction of draws with ||z_i - zbar_i|| <= radius
  double min_frequency = 1.0;
  double required_frequency = 0.0; // 1 - delta / (2N)
  double max_deviation = 0.0;
  double eps_bar = 0.0;
  double eps_worst = 0.0;
  double nash_frequency = 0.0;     // fraction of draws with max_i gap_i <= eps_bar
  double required_nash = 0.0;      // 1 - delta
  std::size_t worst_case_violations = 0;  // draws with max gap > eps_worst
  double max_gap = 0.0;

  bool ok(double slack = 0.0) const {
    return min_frequency >= required_frequency - slack && nash_frequency >= required_nash - slack &&
           worst_case_violations == 0;
  }
};

inline ConcentrationReport concentration_check(const GameSpec& game, const StrategyProfile& s, const GameBounds& bounds,
                                               double delta, std::size_t draws, std::uint64_t seed) {
  game.check_profile(s);
  if (draws == 0) throw InvalidInput("concentration check needs at least one draw");
  const auto eps = epsilon_bar(game.agents(), game.dim(), delta, bounds);
  ConcentrationReport rep;
  rep.draws = draws;
  rep.delta = delta;
  rep.radius = eps.concentration;
  rep.required_frequency = 1.0 - delta / (2.0 * static_cast<double>(game.agents()));
  rep.eps_bar = eps.bar;
  rep.eps_worst = eps.worst;
  rep.required_nash = 1.0 - delta;

  const auto big_n = static_cast<Eigen::Index>(game.agents());
  Matrix z_bar;
  detail::aggregates_into(s.columns(), game.network().expected_effective(), z_bar);
  Vector hits = Vector::Zero(big_n);
  std::size_t nash_hits = 0;
  NetworkRealization r;
  detail::StepWorkspace ws;
  Vector gaps, u, br;
  for (std::size_t d = 0; d < draws; ++d) {
    auto rng = stream(seed, 0, d, StreamPurpose::monte_carlo);
    game.network().sample_into(rng, r);
    r.iteration = d;
    detail::realized_aggregates(s, r, ws);
    for (Eigen::Index i = 0; i < big_n; ++i) {
      const double dev = (ws.z.col(i) - z_bar.col(i)).norm();
      rep.max_deviation = std::max(rep.max_deviation, dev);
      if (dev <= rep.radius) hits(i) += 1.0;
    }
    detail::cost_gaps_into(game, s, ws.z, gaps, u, br);
    const double g = std::max(0.0, gaps.maxCoeff());
    rep.max_gap = std::max(rep.max_gap, g);
    if (g <= rep.eps_bar) ++nash_hits;
    if (g > rep.eps_worst) ++rep.worst_case_violations;
  }
  rep.agent_frequency = hits / static_cast<double>(draws);
  rep.min_frequency = rep.agent_frequency.minCoeff();
  rep.nash_frequency = static_cast<double>(nash_hits) / static_cast<double>(draws);
  return rep;
}

// ---------------------------------------------------------------------------
// Decay envelope: the tail of ||s^k - sbar|| stays under C k^-((1 - beta)/2)
// with C fitted on an earlier window.

struct DecayEnvelopeReport {
  double exponent = 0.0;  // (1 - beta) / 2
  double constant = 0.0;  // max over the fit window of d_k k^exponent
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max over the check window of sup_{j >= k} d_j / (C k^-exponent)

  bool ok() const { return violations == 0; }
};

inline DecayEnvelopeReport decay_envelope_check(const SimulationTrace& trace, double beta, std::size_t fit_lo,
                                                std::size_t fit_hi, std::size_t check_lo, std::size_t check_hi) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidInput("envelope beta must lie in [0, 1)");
  if (!(fit_lo >= 1 && fit_lo <= fit_hi && check_lo <= check_hi && check_hi < trace.rows.size()))
    throw InvalidInput("envelope windows must lie inside the trace");
  DecayEnvelopeReport rep;
  rep.exponent = (1.0 - beta) / 2.0;
  for (std::size_t k = fit_lo; k <= fit_hi; ++k)
    rep.constant = std::max(rep.constant, trace.rows[k].distance * std::pow(static_cast<double>(k), rep.exponent));
  double tail = 0.0;
  for (std::size_t k = check_hi + 1; k-- > check_lo;) {
    tail = std::max(tail, trace.rows[k].distance);
    const double env = rep.constant * std::pow(static_cast<double>(k), -rep.exponent);
    ++rep.checked;
    const double ratio = env > 0.0 ? tail / env : (tail > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    if (tail > env) ++rep.violations;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Expected time-averaged regret across replications.

class AveragedRegretMoments {
 public:
  // Adds (1/T) sum_{k=1}^T R_i(k) for every agent.
  void add(const SimulationTrace& trace) {
    const Matrix avg = time_averaged_regret(trace);
    if (avg.rows() == 0) throw InvalidInput("time-averaged regret needs T >= 1");
    const Vector last = avg.row(avg.rows() - 1).transpose();
    if (count_ == 0) {
      sum_ = Vector::Zero(last.size());
      sum_sq_ = Vector::Zero(last.size());
      horizon_ = static_cast<std::size_t>(avg.rows());
    } else if (horizon_ != static_cast<std::size_t>(avg.rows()) || sum_.size() != last.size()) {
      throw InvalidInput("replications must share one horizon and agent count");
    }
    sum_ += last;
    sum_sq_ += last.cwiseAbs2();
    ++count_;
  }

  std::size_t replications() const { return count_; }
  std::size_t horizon() const { return horizon_; }
  Vector mean() const { return sum_ / static_cast<double>(count_); }
  Vector standard_error() const {
    if (count_ < 2) return Vector::Zero(sum_.size());
    const double n = static_cast<double>(count_);
    const Vector m = mean();
    return ((sum_sq_ / n - m.cwiseAbs2()).cwiseMax(0.0) * (n / (n - 1.0)) / n).cwiseSqrt();
  }

 private:
  std::size_t count_ = 0;
  std::size_t horizon_ = 0;
  Vector sum_;
  Vector sum_sq_;
};

struct AveragedRegretReport {
  double bound = 0.0;
  Vector mean;
  Vector standard_error;
  std::size_t violations = 0;  // agents with mean > bound + 4 SE
  double worst_margin = std::numeric_limits<double>::infinity();

  bool ok() const { return violations == 0; }
};

inline AveragedRegretReport averaged_regret_check(const AveragedRegretMoments& moments, const GameBounds& bounds,
                                                  const ConstantsBundle& c, std::size_t agents, std::size_t dim,
                                                  double se_multiple = 4.0) {
  if (moments.replications() == 0) throw InvalidInput("averaged regret check needs replications");
  AveragedRegretReport rep;
  rep.bound = averaged_regret_bound(bounds, c, agents, dim, moments.horizon());
  rep.mean = moments.mean();
  rep.standard_error = moments.standard_error();
  for (Eigen::Index i = 0; i < rep.mean.size(); ++i) {
    const double margin = rep.bound + se_multiple * rep.standard_error(i) - rep.mean(i);
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0.0) ++rep.violations;
  }
  return rep;
}

}  // namespace netgame
