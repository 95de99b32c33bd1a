#pragma once

#include "netgame/network.hpp"
#include "netgame/strategy_set.hpp"
#include "netgame/types.hpp"

#include <cmath>
#include <functional>
#include <variant>
#include <vector>

namespace netgame {

// Constants bounding the game uniformly in N.
struct GameBounds {
  double s_max = 0.0;       // ||s_i|| <= s_max on every strategy set
  double cost_bound = 0.0;  // |J_i| <= cost_bound on admissible inputs
  double grad_bound = 0.0;  // ||grad_{s_i} J_i|| <= grad_bound
  double lipschitz_s = 0.0; // Lipschitz constant of J_i in s_i
  double lipschitz_z = 0.0; // Lipschitz constant of J_i in z_i
  double mu = 0.0;          // strong monotonicity modulus of the expected operator
};

// J_i(s_i, z_i) = q/2 ||s_i||^2 + (a z_i + b_i)^T s_i
struct QuadraticCost {
  double q = 1.0;
  double a = 0.0;
  Matrix b;  // n x 1 (shared) or n x N (column i belongs to agent i)

  auto offset(std::size_t i) const { return b.col(b.cols() == 1 ? 0 : static_cast<Eigen::Index>(i)); }

  // max_i ||b_i||_2
  double offset_norm() const { return b.colwise().norm().maxCoeff(); }
};

// User-supplied cost. Bounds are declared, never estimated.
struct CustomCost {
  std::function<double(std::size_t agent, const Vector& s, const Vector& z)> cost;
  std::function<Vector(std::size_t agent, const Vector& s, const Vector& z)> gradient;
  GameBounds bounds;
  // Set when the gradient is affine in z, which makes the expected operator
  // equal to the operator on the expected network.
  bool affine_in_aggregate = false;
  // Lipschitz constant of the expected operator (needed by the VI solver).
  double operator_lipschitz = 0.0;
};

class CostModel {
 public:
  static CostModel quadratic(double q, double a, Matrix b) {
    if (!(q > 0.0) || !std::isfinite(q)) throw InvalidInput("quadratic cost needs q > 0");
    if (!std::isfinite(a)) throw InvalidInput("quadratic cost needs finite a");
    if (b.size() == 0 || !b.allFinite()) throw InvalidInput("quadratic cost needs a finite offset b");
    return CostModel(QuadraticCost{q, a, std::move(b)});
  }

  // Shared scalar offset b * 1_n.
  static CostModel quadratic(double q, double a, double b, std::size_t dim) {
    return quadratic(q, a, Matrix::Constant(static_cast<Eigen::Index>(dim), 1, b));
  }

  static CostModel custom(CustomCost c) {
    if (!c.cost || !c.gradient) throw InvalidInput("custom cost needs both cost and gradient evaluators");
    return CostModel(std::move(c));
  }

  const QuadraticCost* as_quadratic() const { return std::get_if<QuadraticCost>(&kind_); }
  const CustomCost* as_custom() const { return std::get_if<CustomCost>(&kind_); }

  bool affine_in_aggregate() const {
    if (as_quadratic()) return true;
    return std::get<CustomCost>(kind_).affine_in_aggregate;
  }

  double cost(std::size_t i, const Eigen::Ref<const Vector>& s, const Eigen::Ref<const Vector>& z) const {
    if (const auto* qc = as_quadratic())
      return 0.5 * qc->q * s.squaredNorm() + (qc->a * z + qc->offset(i)).dot(s);
    return std::get<CustomCost>(kind_).cost(i, Vector(s), Vector(z));
  }

  void gradient_into(std::size_t i, const Eigen::Ref<const Vector>& s, const Eigen::Ref<const Vector>& z,
                     Eigen::Ref<Vector> out) const {
    if (const auto* qc = as_quadratic()) {
      out = qc->q * s + qc->a * z + qc->offset(i);
      return;
    }
    Vector g = std::get<CustomCost>(kind_).gradient(i, Vector(s), Vector(z));
    if (g.size() != out.size()) throw EvaluationFault("custom gradient returned wrong dimension", i);
    out = g;
  }

 private:
  template <typename K>
  explicit CostModel(K k) : kind_(std::move(k)) {}

  std::variant<QuadraticCost, CustomCost> kind_;
};

// Stacked profile s in R^{nN}; block i (length n) belongs to agent i.
class StrategyProfile {
 public:
  StrategyProfile() = default;

  StrategyProfile(std::size_t agents, std::size_t dim)
      : agents_(agents), dim_(dim), values_(Vector::Zero(static_cast<Eigen::Index>(agents * dim))) {}

  StrategyProfile(std::size_t agents, std::size_t dim, Vector values)
      : agents_(agents), dim_(dim), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != agents * dim)
      throw InvalidInput("profile length " + std::to_string(values_.size()) + " != N*n = " +
                         std::to_string(agents * dim));
  }

  std::size_t agents() const { return agents_; }
  std::size_t dim() const { return dim_; }

  auto block(std::size_t i) { return values_.segment(static_cast<Eigen::Index>(i * dim_), static_cast<Eigen::Index>(dim_)); }
  auto block(std::size_t i) const {
    return values_.segment(static_cast<Eigen::Index>(i * dim_), static_cast<Eigen::Index>(dim_));
  }

  Vector& values() { return values_; }
  const Vector& values() const { return values_; }

  // n x N view, column i = s_i.
  Eigen::Map<const Matrix> columns() const {
    return {values_.data(), static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(agents_)};
  }
  Eigen::Map<Matrix> columns() {
    return {values_.data(), static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(agents_)};
  }

  friend bool operator==(const StrategyProfile& x, const StrategyProfile& y) {
    return x.agents_ == y.agents_ && x.dim_ == y.dim_ && x.values_ == y.values_;
  }

 private:
  std::size_t agents_ = 0;
  std::size_t dim_ = 0;
  Vector values_;
};

class GameSpec {
 public:
  GameSpec(std::vector<StrategySet> sets, CostModel cost, NetworkModel network)
      : sets_(std::move(sets)), cost_(std::move(cost)), network_(std::move(network)) {
    if (sets_.empty()) throw InvalidInput("game needs at least one agent");
    if (sets_.size() != network_.agents())
      throw InvalidInput("game has " + std::to_string(sets_.size()) + " strategy sets but the network has " +
                         std::to_string(network_.agents()) + " agents");
    dim_ = sets_.front().dimension();
    for (const auto& s : sets_)
      if (s.dimension() != dim_) throw InvalidInput("all strategy sets must share one dimension");
    if (const auto* qc = cost_.as_quadratic()) {
      if (static_cast<std::size_t>(qc->b.rows()) != dim_)
        throw InvalidInput("quadratic offset b has dimension " + std::to_string(qc->b.rows()) +
                           ", strategies have " + std::to_string(dim_));
      if (qc->b.cols() != 1 && static_cast<std::size_t>(qc->b.cols()) != sets_.size())
        throw InvalidInput("per-agent offset b must have one column per agent");
    }
  }

  // Every agent shares `set`.
  GameSpec(const StrategySet& set, CostModel cost, const NetworkModel& network)
      : GameSpec(std::vector<StrategySet>(network.agents(), set), std::move(cost), network) {}

  std::size_t agents() const { return sets_.size(); }
  std::size_t dim() const { return dim_; }
  const StrategySet& set(std::size_t i) const { return sets_[i]; }
  const std::vector<StrategySet>& sets() const { return sets_; }
  const CostModel& cost() const { return cost_; }
  const NetworkModel& network() const { return network_; }

  StrategyProfile project(const StrategyProfile& s) const {
    StrategyProfile out = s;
    for (std::size_t i = 0; i < agents(); ++i) {
      auto blk = out.block(i);
      sets_[i].project_inplace(blk);
    }
    return out;
  }

  // Default starting point: projection of the origin.
  StrategyProfile initial_profile() const { return project(StrategyProfile(agents(), dim())); }

  bool feasible(const StrategyProfile& s, double tol = 0.0) const {
    for (std::size_t i = 0; i < agents(); ++i)
      if (!sets_[i].contains(s.block(i), tol)) return false;
    return true;
  }

  void check_profile(const StrategyProfile& s) const {
    if (s.agents() != agents() || s.dim() != dim())
      throw InvalidInput("profile shape (" + std::to_string(s.agents()) + " x " + std::to_string(s.dim()) +
                         ") does not match game (" + std::to_string(agents()) + " x " + std::to_string(dim()) + ")");
  }

 private:
  std::vector<StrategySet> sets_;
  CostModel cost_;
  NetworkModel network_;
  std::size_t dim_ = 0;
};

namespace detail {

inline void check_network_matrix(const Matrix& w, std::size_t agents) {
  const auto n = static_cast<Eigen::Index>(agents);
  if (w.rows() != n || w.cols() != n)
    throw InvalidInput("network matrix is " + std::to_string(w.rows()) + " x " + std::to_string(w.cols()) +
                       ", expected " + std::to_string(agents) + " x " + std::to_string(agents));
  for (Eigen::Index i = 0; i < n; ++i)
    if (w(i, i) != 0.0) throw InvalidInput("network matrix must have a zero diagonal");
  if ((w.array() < 0.0).any() || (w.array() > 1.0).any()) throw InvalidInput("network entries must lie in [0, 1]");
}

// Z = S W^T / N with S the n x N profile matrix.
inline void aggregates_into(const Eigen::Ref<const Matrix>& s_cols, const Matrix& w, Matrix& z) {
  z.noalias() = s_cols * w.transpose();
  z /= static_cast<double>(w.rows());
}

}  // namespace detail

// Local aggregates z_i = (1/N) sum_j W_ij s_j, returned as n x N columns.
inline Matrix local_aggregates(const StrategyProfile& s, const Matrix& w) {
  detail::check_network_matrix(w, s.agents());
  Matrix z;
  detail::aggregates_into(s.columns(), w, z);
  return z;
}

// Stacked own-strategy gradients F(s, W).
inline Vector game_jacobian(const GameSpec& game, const StrategyProfile& s, const Matrix& w) {
  game.check_profile(s);
  const Matrix z = local_aggregates(s, w);
  Vector f(s.values().size());
  const auto n = static_cast<Eigen::Index>(game.dim());
  for (std::size_t i = 0; i < game.agents(); ++i) {
    auto out = f.segment(static_cast<Eigen::Index>(i) * n, n);
    game.cost().gradient_into(i, s.block(i), z.col(static_cast<Eigen::Index>(i)), out);
    if (!out.allFinite()) throw EvaluationFault("non-finite gradient", i);
  }
  return f;
}

}  // namespace netgame
