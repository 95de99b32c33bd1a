#pragma once

#include "netgame/types.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace netgame {

// Step-size sequence tau^k.
//
//   theta rule: tau^0 = 1,  tau^k = 1 / k^(1 - theta),  theta in (0, 1/2)
//   alpha rule: tau^0 = B,  tau^k = B / k^alpha,        B = 2^alpha / C2, alpha in (0, 1]
//   custom:     any positive sequence, with scale B for the rate constants
//
// Every schedule factors as tau^k = B * delta_k.
class StepSchedule {
 public:
  enum class Kind { theta_rule, alpha_rule, custom };

  static StepSchedule theta_rule(double theta) {
    if (!(theta > 0.0 && theta < 0.5))
      throw InvalidInput("theta rule requires theta in (0, 1/2), got " + std::to_string(theta));
    StepSchedule s(Kind::theta_rule);
    s.exponent_ = 1.0 - theta;
    s.theta_ = theta;
    s.scale_ = 1.0;
    return s;
  }

  static StepSchedule alpha_rule(double alpha, double c2) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw InvalidInput("alpha rule requires alpha in (0, 1], got " + std::to_string(alpha));
    if (!(c2 > 0.0) || !std::isfinite(c2)) throw InvalidInput("alpha rule requires C2 > 0");
    StepSchedule s(Kind::alpha_rule);
    s.exponent_ = alpha;
    s.c2_ = c2;
    s.scale_ = std::pow(2.0, alpha) / c2;
    return s;
  }

  static StepSchedule custom(std::function<double(std::size_t)> tau, double scale = 1.0) {
    if (!tau) throw InvalidInput("custom schedule needs an evaluator");
    if (!(scale > 0.0)) throw InvalidInput("custom schedule scale must be positive");
    StepSchedule s(Kind::custom);
    s.custom_ = std::move(tau);
    s.scale_ = scale;
    return s;
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }        // B
  double exponent() const { return exponent_; }  // decay exponent of delta_k
  double theta() const { return theta_; }
  double alpha() const { return exponent_; }
  double c2() const { return c2_; }

  double operator()(std::size_t k) const {
    double tau = 0.0;
    switch (kind_) {
      case Kind::theta_rule:
      case Kind::alpha_rule:
        tau = k == 0 ? scale_ : scale_ / std::pow(static_cast<double>(k), exponent_);
        break;
      case Kind::custom:
        tau = custom_(k);
        break;
    }
    if (!(tau > 0.0) || !std::isfinite(tau))
      throw InvalidInput("step size at k = " + std::to_string(k) + " is not positive and finite");
    return tau;
  }

  // delta_k = tau^k / B.
  double delta(std::size_t k) const { return (*this)(k) / scale_; }

  std::string describe() const {
    switch (kind_) {
      case Kind::theta_rule: return "theta_rule(theta=" + std::to_string(theta_) + ")";
      case Kind::alpha_rule: return "alpha_rule(alpha=" + std::to_string(exponent_) + ", C2=" + std::to_string(c2_) + ")";
      case Kind::custom: return "custom";
    }
    return {};
  }

 private:
  explicit StepSchedule(Kind k) : kind_(k) {}

  Kind kind_;
  double exponent_ = 0.0;
  double theta_ = 0.0;
  double c2_ = 0.0;
  double scale_ = 1.0;
  std::function<double(std::size_t)> custom_;
};

inline double step_size(const StepSchedule& schedule, std::size_t k) { return schedule(k); }

}  // namespace netgame
