#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace netgame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Rejected input: malformed arguments, dimension mismatches, parameters
// outside their admissible range.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A cost or gradient evaluation produced a non-finite value.
class EvaluationFault : public std::runtime_error {
 public:
  EvaluationFault(const std::string& what, std::size_t agent,
                  std::optional<std::size_t> iteration = std::nullopt)
      : std::runtime_error(what + " (agent " + std::to_string(agent) +
                           (iteration ? ", iteration " + std::to_string(*iteration) : std::string{}) + ")"),
        agent_(agent),
        iteration_(iteration) {}

  std::size_t agent() const noexcept { return agent_; }
  std::optional<std::size_t> iteration() const noexcept { return iteration_; }

 private:
  std::size_t agent_;
  std::optional<std::size_t> iteration_;
};

// The expected game is not strongly monotone; carries the offending modulus.
class NotStronglyMonotone : public std::domain_error {
 public:
  explicit NotStronglyMonotone(double eigenvalue)
      : std::domain_error("expected game not strongly monotone: smallest symmetric eigenvalue " +
                          std::to_string(eigenvalue)),
        eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace netgame
