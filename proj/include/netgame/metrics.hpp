#pragma once

#include "netgame/bounds.hpp"
#include "netgame/dynamics.hpp"
#include "netgame/equilibrium.hpp"
#include "netgame/game.hpp"
#include "netgame/response.hpp"
#include "netgame/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace netgame {

// ---------------------------------------------------------------------------
// Regret

// R_i = J_i(s_i, z_i(s|G P)) - inf_{x in S_i} J_i(x, z_i(s|G P)).
inline Vector instantaneous_regret(const GameSpec& game, const StrategyProfile& s, const NetworkRealization& r,
                                   double tolerance = 1e-10) {
  game.check_profile(s);
  detail::check_realization(game, r);
  detail::StepWorkspace ws;
  detail::realized_aggregates(s, r, ws);
  Vector out, u, br;
  detail::cost_gaps_into(game, s, ws.z, out, u, br, tolerance);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) >= 0.0) continue;
    if (out(i) < -tolerance)
      throw EvaluationFault("regret " + std::to_string(out(i)) + " is negative; profile outside its set?",
                            static_cast<std::size_t>(i), r.iteration);
    out(i) = 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constants

struct ConstantsBundle {
  double noise_bound = 0.0;  // M = J2 (1/min Pbar + 1)
  double c1 = 0.0;           // max Pbar (J2^2 + M^2)
  double c2 = 0.0;           // 2 mu min Pbar
  double c3 = 0.0;           // 4 s_max^2 / min Pbar
  double c4 = 0.0;           // L_s + 2 L_z
  double scale = 0.0;        // B
  std::size_t k_start = 0;   // K: delta_k <= 1/(B C2) for all k >= K
  double d = std::numeric_limits<double>::quiet_NaN();
  bool d_defined = false;    // requires B C2 > 1
  double eps_worst = 0.0;    // 4 L_z s_max
  double regret_ceiling = 0.0;  // 2 J1
};

inline ConstantsBundle constants(const GameBounds& bounds, const NetworkModel& model, const StepSchedule& schedule) {
  if (!(bounds.mu > 0.0)) throw NotStronglyMonotone(bounds.mu);
  const double pmin = model.min_participation();
  const double pmax = model.max_participation();
  ConstantsBundle c;
  c.noise_bound = bounds.grad_bound * (1.0 / pmin + 1.0);
  c.c1 = pmax * (bounds.grad_bound * bounds.grad_bound + c.noise_bound * c.noise_bound);
  c.c2 = 2.0 * bounds.mu * pmin;
  c.c3 = 4.0 * bounds.s_max * bounds.s_max / pmin;
  c.c4 = bounds.lipschitz_s + 2.0 * bounds.lipschitz_z;
  c.scale = schedule.scale();
  c.eps_worst = 4.0 * bounds.lipschitz_z * bounds.s_max;
  c.regret_ceiling = 2.0 * bounds.cost_bound;

  const double bc2 = c.scale * c.c2;
  if (!(bc2 > 1.0)) return c;
  const double threshold = (1.0 / bc2) * (1.0 + 1e-12);
  constexpr std::size_t kSearchLimit = 10000000;
  for (std::size_t k = 1; k <= kSearchLimit; ++k) {
    if (schedule.delta(k) <= threshold) {
      c.k_start = k;
      break;
    }
  }
  if (c.k_start == 0) return c;
  c.d = std::max(c.c3 / schedule.delta(c.k_start), c.scale * c.scale * c.c1 / (bc2 - 1.0));
  c.d_defined = true;
  return c;
}

// C2 = 2 mu min Pbar, the contraction constant the alpha rule is tuned to.
inline double contraction_constant(const GameBounds& bounds, const NetworkModel& model) {
  return 2.0 * bounds.mu * model.min_participation();
}

// ---------------------------------------------------------------------------
// Deterministic regret inequality

struct RegretViolation {
  std::size_t k;
  std::size_t agent;
  double regret;
  double bound;
};

struct RegretBoundReport {
  std::size_t rows = 0;
  std::vector<double> margin;  // per row: bound - max_i R_i
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<RegretViolation> violations;          // R_i > C4 ||s^k - sbar|| + eps_worst
  std::vector<RegretViolation> ceiling_violations;  // R_i > 2 J1

  bool ok() const { return violations.empty() && ceiling_violations.empty(); }
};

// Checks R_i(k) <= C4 ||s^k - sbar||_2 + 4 L_z s_max on every row and agent,
// and R_i(k) <= 2 J1. With the worst-case epsilon branch the first inequality
// holds surely, so any violation is a defect.
inline RegretBoundReport regret_bound_check(const SimulationTrace& trace, const ConstantsBundle& c) {
  if (!trace.has_regret) throw InvalidInput("trace carries no regret");
  RegretBoundReport rep;
  rep.rows = trace.rows.size();
  rep.margin.reserve(trace.rows.size());
  const bool per_agent = trace.agent_regret.rows() == static_cast<Eigen::Index>(trace.rows.size());
  for (std::size_t idx = 0; idx < trace.rows.size(); ++idx) {
    const auto& row = trace.rows[idx];
    const double bound = c.c4 * row.distance + c.eps_worst;
    const double m = bound - row.max_regret;
    rep.margin.push_back(m);
    rep.min_margin = std::min(rep.min_margin, m);
    if (per_agent) {
      for (Eigen::Index i = 0; i < trace.agent_regret.cols(); ++i) {
        const double ri = trace.agent_regret(static_cast<Eigen::Index>(idx), i);
        if (ri > bound) rep.violations.push_back({row.k, static_cast<std::size_t>(i), ri, bound});
        if (ri > c.regret_ceiling)
          rep.ceiling_violations.push_back({row.k, static_cast<std::size_t>(i), ri, c.regret_ceiling});
      }
    } else {
      if (row.max_regret > bound) rep.violations.push_back({row.k, row.worst_agent, row.max_regret, bound});
      if (row.max_regret > c.regret_ceiling)
        rep.ceiling_violations.push_back({row.k, row.worst_agent, row.max_regret, c.regret_ceiling});
    }
  }
  return rep;
}

// Running means (1/T) sum_{k=1}^T R_i(k); row T-1 holds the prefix of length T.
inline Matrix time_averaged_regret(const SimulationTrace& trace) {
  const auto rows = trace.agent_regret.rows();
  if (!trace.has_regret || rows != static_cast<Eigen::Index>(trace.rows.size()))
    throw InvalidInput("time-averaged regret needs per-agent regret in the trace");
  if (rows < 2) return Matrix(0, trace.agent_regret.cols());
  Matrix out(rows - 1, trace.agent_regret.cols());
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(trace.agent_regret.cols());
  for (Eigen::Index k = 1; k < rows; ++k) {
    acc += trace.agent_regret.row(k);
    out.row(k - 1) = acc / static_cast<double>(k);
  }
  return out;
}

// Right-hand side (C4/T) sum_{k=1}^T ||s^k - sbar|| + (1/T) sum_{k=1}^T eps_k
// for each prefix length T, with eps_k supplied per round.
inline Vector averaged_regret_envelope(const SimulationTrace& trace, double c4, const std::vector<double>& eps) {
  if (eps.size() != trace.rows.size()) throw InvalidInput("need one epsilon per trace row");
  const std::size_t t_max = trace.rows.empty() ? 0 : trace.rows.size() - 1;
  Vector out(static_cast<Eigen::Index>(t_max));
  double dist = 0.0;
  double eps_sum = 0.0;
  for (std::size_t k = 1; k <= t_max; ++k) {
    dist += trace.rows[k].distance;
    eps_sum += eps[k];
    out(static_cast<Eigen::Index>(k - 1)) = (c4 * dist + eps_sum) / static_cast<double>(k);
  }
  return out;
}

// Bound on the expected time-averaged regret under the alpha rule with
// alpha = 1, evaluated with delta = 1/N.
inline double averaged_regret_bound(const GameBounds& bounds, const ConstantsBundle& c, std::size_t agents,
                                    std::size_t dim, std::size_t horizon) {
  if (!c.d_defined) throw InvalidInput("averaged regret bound needs D");
  const double big_n = static_cast<double>(agents);
  const double t = static_cast<double>(horizon);
  const double delta = 1.0 / big_n;
  // delta = 1/N leaves (0, 1) for N = 1; there the probabilistic branch is void.
  const double eps_term = agents > 1 ? epsilon_bar(agents, dim, delta, bounds).bar * (1.0 - delta) : 0.0;
  return c.regret_ceiling / t + 2.0 * c.c4 * std::sqrt(big_n * c.d / t) + eps_term + c.eps_worst / big_n;
}

// ---------------------------------------------------------------------------
// Rates

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;  // log of the prefactor
  std::size_t k_min = 0;
  std::size_t k_max = 0;
  std::size_t points = 0;
  double residual = 0.0;   // RMS of log-space residuals
};

// Least-squares fit of log(value) = intercept + exponent * log(k) over
// k in [k_min, k_max].
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& series, std::size_t k_min, std::size_t k_max) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [k, v] : series) {
    if (k < static_cast<double>(k_min) || k > static_cast<double>(k_max)) continue;
    if (!(v > 0.0) || !(k > 0.0)) throw InvalidInput("rate fit needs positive k and values in range");
    pts.emplace_back(std::log(k), std::log(v));
  }
  if (pts.size() < 10) throw InvalidInput("rate fit needs at least 10 points in range");
  const double m = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0) throw InvalidInput("rate fit needs distinct k values");
  RateFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.k_min = k_min;
  fit.k_max = k_max;
  fit.points = pts.size();
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double e = y - (fit.intercept + fit.exponent * x);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

// Per-iteration moments of ||s^k - sbar||_2 across replications.
class DeviationMoments {
 public:
  void add(const SimulationTrace& trace) {
    if (count_ == 0) {
      sum_.assign(trace.rows.size(), 0.0);
      sum_sq_.assign(trace.rows.size(), 0.0);
      weighted_sq_.assign(trace.rows.size(), 0.0);
    } else if (trace.rows.size() != sum_.size()) {
      throw InvalidInput("replications must share one horizon");
    }
    for (std::size_t k = 0; k < trace.rows.size(); ++k) {
      const double d = trace.rows[k].distance;
      sum_[k] += d;
      sum_sq_[k] += d * d;
      weighted_sq_[k] += trace.rows[k].weighted_distance * trace.rows[k].weighted_distance;
    }
    ++count_;
  }

  void merge(const DeviationMoments& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    if (other.sum_.size() != sum_.size()) throw InvalidInput("replications must share one horizon");
    for (std::size_t k = 0; k < sum_.size(); ++k) {
      sum_[k] += other.sum_[k];
      sum_sq_[k] += other.sum_sq_[k];
      weighted_sq_[k] += other.weighted_sq_[k];
    }
    count_ += other.count_;
  }

  std::size_t replications() const { return count_; }
  std::size_t length() const { return sum_.size(); }
  double mean(std::size_t k) const { return sum_[k] / static_cast<double>(count_); }
  double stddev(std::size_t k) const {
    if (count_ < 2) return 0.0;
    const double n = static_cast<double>(count_);
    const double m = mean(k);
    return std::sqrt(std::max(0.0, (sum_sq_[k] / n - m * m) * n / (n - 1.0)));
  }
  double standard_error(std::size_t k) const { return stddev(k) / std::sqrt(static_cast<double>(count_)); }
  // E ||s^k - sbar||^2_{Delta^{-1}}
  double weighted_mean_square(std::size_t k) const { return weighted_sq_[k] / static_cast<double>(count_); }

 private:
  std::size_t count_ = 0;
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
  std::vector<double> weighted_sq_;
};

struct MeanSquareReport {
  std::vector<bool> holds;     // index k; entries for k < 2 are vacuously true
  std::vector<double> bound;   // sqrt(N D delta_k) + 4 SE
  std::size_t violations = 0;
  std::size_t first_violation = 0;

  bool ok() const { return violations == 0; }
};

// Sample mean of ||s^k - sbar|| against sqrt(N D delta_k) plus 4 standard
// errors, for every k >= 2.
inline MeanSquareReport mean_square_bound_check(const DeviationMoments& moments, const ConstantsBundle& c,
                                                const StepSchedule& schedule, std::size_t agents) {
  if (moments.replications() < 30) throw InvalidInput("mean-square check needs at least 30 replications");
  if (!c.d_defined) throw InvalidInput("mean-square check needs D (B C2 > 1)");
  MeanSquareReport rep;
  rep.holds.assign(moments.length(), true);
  rep.bound.assign(moments.length(), std::numeric_limits<double>::infinity());
  const double nd = static_cast<double>(agents) * c.d;
  for (std::size_t k = 2; k < moments.length(); ++k) {
    rep.bound[k] = std::sqrt(nd * schedule.delta(k)) + 4.0 * moments.standard_error(k);
    if (moments.mean(k) > rep.bound[k]) {
      rep.holds[k] = false;
      if (rep.violations++ == 0) rep.first_violation = k;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Step-size inequalities used by the rate analysis

struct AppendixGrid {
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t k_max = 1000;
  std::size_t k0_max = 1000;
  std::size_t t_max = 10000;
};

struct InequalityTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min of rhs - lhs

  void record(double lhs, double rhs, double rel_tol) {
    ++checked;
    worst_margin = std::min(worst_margin, rhs - lhs);
    if (lhs > rhs + rel_tol * std::max(1.0, std::abs(rhs))) ++violations;
  }
};

struct AppendixReport {
  InequalityTally power_step;    // (k+1)^a <= k^a + 1
  InequalityTally series_sum;    // sum_{k0}^T k^-a <= T^(1-a)/(1-a), a < 1
  InequalityTally delta_decay;   // delta_k (1 - delta_k) <= delta_{k+1}

  bool ok() const {
    return power_step.violations == 0 && series_sum.violations == 0 && delta_decay.violations == 0;
  }
};

inline AppendixReport appendix_checks(const AppendixGrid& grid = {}) {
  constexpr double kRelTol = 1e-12;
  AppendixReport rep;
  for (double a : grid.alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw InvalidInput("appendix grid alphas must lie in (0, 1]");
    for (std::size_t k = 1; k <= grid.k_max; ++k) {
      const double kk = static_cast<double>(k);
      rep.power_step.record(std::pow(kk + 1.0, a), std::pow(kk, a) + 1.0, kRelTol);
      const double dk = std::pow(kk, -a);
      rep.delta_decay.record(dk * (1.0 - dk), std::pow(kk + 1.0, -a), kRelTol);
    }
    if (a >= 1.0) continue;
    // prefix[t] = sum_{k=1}^t k^-a
    std::vector<double> prefix(grid.t_max + 1, 0.0);
    std::vector<double> bound(grid.t_max + 1, 0.0);
    for (std::size_t t = 1; t <= grid.t_max; ++t) {
      prefix[t] = prefix[t - 1] + std::pow(static_cast<double>(t), -a);
      bound[t] = std::pow(static_cast<double>(t), 1.0 - a) / (1.0 - a);
    }
    for (std::size_t k0 = 1; k0 <= grid.k0_max && k0 < grid.t_max; ++k0)
      for (std::size_t t = k0 + 1; t <= grid.t_max; ++t)
        rep.series_sum.record(prefix[t] - prefix[k0 - 1], bound[t], kRelTol);
  }
  return rep;
}

}  // namespace netgame
