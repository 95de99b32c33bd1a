#pragma once

#include "netgame/types.hpp"

#include <cmath>
#include <type_traits>
#include <variant>

namespace netgame {

struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius;
};

// Convex compact strategy set of an agent. Only boxes and Euclidean balls are
// supported, so the projection is exact and closed-form.
class StrategySet {
 public:
  static StrategySet box(Vector lower, Vector upper) {
    if (lower.size() == 0 || lower.size() != upper.size())
      throw InvalidInput("box bounds must be nonempty and of equal dimension");
    if (!lower.allFinite() || !upper.allFinite())
      throw InvalidInput("box bounds must be finite");
    if ((lower.array() > upper.array()).any())
      throw InvalidInput("box requires lower <= upper componentwise");
    return StrategySet(Box{std::move(lower), std::move(upper)});
  }

  // Scalar bounds replicated over `dim` coordinates.
  static StrategySet box(std::size_t dim, double lower, double upper) {
    return box(Vector::Constant(static_cast<Eigen::Index>(dim), lower),
               Vector::Constant(static_cast<Eigen::Index>(dim), upper));
  }

  static StrategySet ball(Vector center, double radius) {
    if (center.size() == 0) throw InvalidInput("ball center must be nonempty");
    if (!center.allFinite()) throw InvalidInput("ball center must be finite");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be positive and finite");
    return StrategySet(Ball{std::move(center), radius});
  }

  std::size_t dimension() const {
    return std::visit([](const auto& s) -> std::size_t {
      if constexpr (std::is_same_v<std::decay_t<decltype(s)>, Box>)
        return static_cast<std::size_t>(s.lower.size());
      else
        return static_cast<std::size_t>(s.center.size());
    }, kind_);
  }

  // Smallest r with ||x||_2 <= r for every x in the set.
  double radius_bound() const {
    if (const auto* b = std::get_if<Box>(&kind_))
      return b->lower.cwiseAbs().cwiseMax(b->upper.cwiseAbs()).norm();
    const auto& ball = std::get<Ball>(kind_);
    return ball.center.norm() + ball.radius;
  }

  void project_inplace(Eigen::Ref<Vector> y) const {
    check_dim(y.size());
    if (const auto* b = std::get_if<Box>(&kind_)) {
      y = y.cwiseMax(b->lower).cwiseMin(b->upper);
      return;
    }
    const auto& ball = std::get<Ball>(kind_);
    const double dist = (y - ball.center).norm();
    if (dist > ball.radius) y = ball.center + (y - ball.center) * (ball.radius / dist);
  }

  Vector project(const Eigen::Ref<const Vector>& y) const {
    Vector out = y;
    project_inplace(out);
    return out;
  }

  bool contains(const Eigen::Ref<const Vector>& x, double tol = 0.0) const {
    if (static_cast<std::size_t>(x.size()) != dimension()) return false;
    if (const auto* b = std::get_if<Box>(&kind_))
      return ((x.array() >= b->lower.array() - tol) && (x.array() <= b->upper.array() + tol)).all();
    const auto& ball = std::get<Ball>(kind_);
    return (x - ball.center).norm() <= ball.radius + tol;
  }

  const std::variant<Box, Ball>& kind() const { return kind_; }
  bool is_box() const { return std::holds_alternative<Box>(kind_); }

 private:
  explicit StrategySet(std::variant<Box, Ball> kind) : kind_(std::move(kind)) {}

  void check_dim(Eigen::Index n) const {
    if (static_cast<std::size_t>(n) != dimension())
      throw InvalidInput("projection dimension mismatch: got " + std::to_string(n) + ", set has " +
                         std::to_string(dimension()));
  }

  std::variant<Box, Ball> kind_;
};

}  // namespace netgame
