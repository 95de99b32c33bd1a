#pragma once

#include "netgame/game.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace netgame {

namespace detail {

// Reduced N x N operator matrix q I + (a/N) Gbar Pbar. The full nN x nN
// operator is its Kronecker product with I_n, which has the same spectrum and
// singular values (each repeated n times).
inline Matrix expected_operator_matrix(const GameSpec& game) {
  const auto* qc = game.cost().as_quadratic();
  if (!qc) throw InvalidInput("operator matrix is only defined for the quadratic cost family");
  const auto n = static_cast<Eigen::Index>(game.agents());
  return qc->q * Matrix::Identity(n, n) +
         (qc->a / static_cast<double>(game.agents())) * game.network().expected_effective();
}

inline constexpr double kEigenResidualTolerance = 1e-10;

}  // namespace detail

// Smallest eigenvalue of the symmetric part of the expected operator.
inline double monotonicity_modulus(const GameSpec& game) {
  const Matrix a = detail::expected_operator_matrix(game);
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
  const double lambda = solver.eigenvalues()(0);
  const Vector v = solver.eigenvectors().col(0);
  const double residual = (sym * v - lambda * v).norm();
  if (residual > detail::kEigenResidualTolerance * std::max(1.0, sym.norm()))
    throw std::runtime_error("eigenvalue residual " + std::to_string(residual) + " exceeds tolerance");
  return lambda;
}

// Largest singular value of the expected operator, i.e. its Lipschitz constant.
inline double operator_lipschitz(const GameSpec& game) {
  if (const auto* cc = game.cost().as_custom()) {
    if (!(cc->operator_lipschitz > 0.0)) throw InvalidInput("custom cost must declare operator_lipschitz > 0");
    return cc->operator_lipschitz;
  }
  const Matrix a = detail::expected_operator_matrix(game);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.transpose() * a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues()(solver.eigenvalues().size() - 1)));
}

// Closed-form constants for the quadratic family; custom costs return their
// declared bounds. Throws NotStronglyMonotone when mu <= 0.
inline GameBounds derive_bounds(const GameSpec& game) {
  if (const auto* cc = game.cost().as_custom()) {
    if (!(cc->bounds.mu > 0.0)) throw NotStronglyMonotone(cc->bounds.mu);
    return cc->bounds;
  }
  const auto& qc = *game.cost().as_quadratic();
  GameBounds b;
  for (const auto& set : game.sets()) b.s_max = std::max(b.s_max, set.radius_bound());
  const double abs_a = std::abs(qc.a);
  const double b_norm = qc.offset_norm();
  b.grad_bound = qc.q * b.s_max + abs_a * b.s_max + b_norm;
  b.lipschitz_s = b.grad_bound;
  b.lipschitz_z = abs_a * b.s_max;
  b.cost_bound = 0.5 * qc.q * b.s_max * b.s_max + (abs_a * b.s_max + b_norm) * b.s_max;
  b.mu = monotonicity_modulus(game);
  if (!(b.mu > 0.0)) throw NotStronglyMonotone(b.mu);
  return b;
}

}  // namespace netgame
