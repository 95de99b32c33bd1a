#pragma once

#include "netgame/rng.hpp"
#include "netgame/types.hpp"

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace netgame {

struct BernoulliEdge {
  double p;
};

struct UniformEdge {
  double lo;
  double hi;
};

struct ConstantEdge {
  double v;
};

// Law of a single link weight. Support is always a subset of [0, 1].
class EdgeDistribution {
 public:
  using Kind = std::variant<BernoulliEdge, UniformEdge, ConstantEdge>;

  static EdgeDistribution bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("bernoulli edge probability must lie in [0, 1]");
    return EdgeDistribution(BernoulliEdge{p});
  }

  static EdgeDistribution uniform(double lo, double hi) {
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw InvalidInput("uniform edge support must satisfy 0 <= lo <= hi <= 1");
    return EdgeDistribution(UniformEdge{lo, hi});
  }

  static EdgeDistribution constant(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("constant edge weight must lie in [0, 1]");
    return EdgeDistribution(ConstantEdge{v});
  }

  double mean() const {
    return std::visit([](const auto& d) -> double {
      using T = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<T, BernoulliEdge>) return d.p;
      else if constexpr (std::is_same_v<T, UniformEdge>) return 0.5 * (d.lo + d.hi);
      else return d.v;
    }, kind_);
  }

  bool is_deterministic() const {
    if (std::holds_alternative<ConstantEdge>(kind_)) return true;
    if (const auto* b = std::get_if<BernoulliEdge>(&kind_)) return b->p == 0.0 || b->p == 1.0;
    const auto& u = std::get<UniformEdge>(kind_);
    return u.lo == u.hi;
  }

  double draw(Xoshiro256& rng) const {
    return std::visit([&rng](const auto& d) -> double {
      using T = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<T, BernoulliEdge>) return rng.uniform() < d.p ? 1.0 : 0.0;
      else if constexpr (std::is_same_v<T, UniformEdge>) return d.lo + (d.hi - d.lo) * rng.uniform();
      else return d.v;
    }, kind_);
  }

  const Kind& kind() const { return kind_; }

 private:
  explicit EdgeDistribution(Kind k) : kind_(k) {}
  Kind kind_;
};

// One draw (G^k, P^k) of the random network.
struct NetworkRealization {
  Matrix links;          // G, zero diagonal, entries in [0, 1]
  Vector participation;  // diagonal of P, entries exactly 0.0 or 1.0
  std::size_t iteration = 0;

  std::size_t agents() const { return static_cast<std::size_t>(links.rows()); }

  std::size_t participants() const { return static_cast<std::size_t>(participation.sum()); }

  // G diag(P): column j vanishes when agent j sits out.
  Matrix effective() const { return links * participation.asDiagonal(); }
};

// Random network with independent links and independent Bernoulli
// participation, either with one shared link law or one law per ordered pair.
class NetworkModel {
 public:
  NetworkModel(std::size_t agents, EdgeDistribution shared, Vector participation)
      : agents_(agents), edges_(1, shared), homogeneous_(true), participation_(std::move(participation)) {
    validate();
  }

  // `per_pair` is row-major N x N; diagonal entries are ignored.
  NetworkModel(std::size_t agents, std::vector<EdgeDistribution> per_pair, Vector participation)
      : agents_(agents), edges_(std::move(per_pair)), homogeneous_(false), participation_(std::move(participation)) {
    if (edges_.size() != agents_ * agents_)
      throw InvalidInput("per-pair edge laws must have N*N entries");
    validate();
  }

  // Shared link law restricted to the pairs where `mask` is nonzero; every
  // other off-diagonal pair is the constant 0 link.
  static NetworkModel masked(const Matrix& mask, EdgeDistribution shared, Vector participation) {
    const auto n = static_cast<std::size_t>(mask.rows());
    if (mask.rows() != mask.cols()) throw InvalidInput("adjacency mask must be square");
    std::vector<EdgeDistribution> laws(n * n, EdgeDistribution::constant(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && mask(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) laws[i * n + j] = shared;
    return NetworkModel(n, std::move(laws), std::move(participation));
  }

  std::size_t agents() const { return agents_; }
  const Vector& participation() const { return participation_; }
  double min_participation() const { return participation_.minCoeff(); }
  double max_participation() const { return participation_.maxCoeff(); }
  bool homogeneous() const { return homogeneous_; }

  const EdgeDistribution& edge(std::size_t i, std::size_t j) const {
    return homogeneous_ ? edges_.front() : edges_[i * agents_ + j];
  }

  // Gbar = E[G^k], zero diagonal.
  Matrix mean_links() const {
    const auto n = static_cast<Eigen::Index>(agents_);
    Matrix g = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) g(i, j) = edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).mean();
    return g;
  }

  // Gbar diag(Pbar).
  Matrix expected_effective() const { return mean_links() * participation_.asDiagonal(); }

  bool is_deterministic() const {
    if ((participation_.array() != 1.0).any()) return false;
    if (homogeneous_) return edges_.front().is_deterministic();
    for (std::size_t i = 0; i < agents_; ++i)
      for (std::size_t j = 0; j < agents_; ++j)
        if (i != j && !edge(i, j).is_deterministic()) return false;
    return true;
  }

  // Fills `out` in place (no allocation once sized) from the given stream.
  void sample_into(Xoshiro256& rng, NetworkRealization& out) const {
    const auto n = static_cast<Eigen::Index>(agents_);
    if (out.links.rows() != n || out.links.cols() != n) out.links.resize(n, n);
    if (out.participation.size() != n) out.participation.resize(n);
    out.links.setZero();

    const auto* shared = homogeneous_ ? std::get_if<BernoulliEdge>(&edges_.front().kind()) : nullptr;
    if (shared && agents_ > 1 && shared->p > 0.0 && shared->p < kSparseThreshold) {
      sample_sparse_bernoulli(rng, shared->p, out.links);
    } else if (shared) {
      // Each 64-bit draw feeds two links through 32-bit comparisons, so p is
      // resolved to 2^-32.
      const auto cut = static_cast<std::uint64_t>(std::llround(std::ldexp(shared->p, 32)));
      double* data = out.links.data();
      const Eigen::Index total = n * n;
      Eigen::Index idx = 0;
      Xoshiro256 local = rng;  // keeps the state in registers
      for (; idx + 1 < total; idx += 2) {
        const std::uint64_t x = local();
        data[idx] = static_cast<double>((x & 0xffffffffULL) < cut);
        data[idx + 1] = static_cast<double>((x >> 32) < cut);
      }
      if (idx < total) data[idx] = static_cast<double>((local() & 0xffffffffULL) < cut);
      rng = local;
      out.links.diagonal().setZero();
    } else {
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          if (i != j) out.links(i, j) = edge(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).draw(rng);
    }
    for (Eigen::Index i = 0; i < n; ++i) out.participation(i) = rng.uniform() < participation_(i) ? 1.0 : 0.0;
  }

  NetworkRealization sample(Xoshiro256& rng, std::size_t iteration = 0) const {
    NetworkRealization r;
    r.iteration = iteration;
    sample_into(rng, r);
    return r;
  }

 private:
  // Below this link probability, gap sampling beats one uniform per pair.
  static constexpr double kSparseThreshold = 0.05;

  void validate() const {
    if (agents_ == 0) throw InvalidInput("network needs at least one agent");
    if (static_cast<std::size_t>(participation_.size()) != agents_)
      throw InvalidInput("participation vector length " + std::to_string(participation_.size()) +
                         " does not match agent count " + std::to_string(agents_));
    for (Eigen::Index i = 0; i < participation_.size(); ++i) {
      const double p = participation_(i);
      if (!(p > 0.0 && p <= 1.0))
        throw InvalidInput("participation probability of agent " + std::to_string(i) + " is " + std::to_string(p) +
                           "; every agent needs Pbar_ii > 0 and Pbar_ii <= 1");
    }
  }

  // Geometric gap sampling over the N(N-1) off-diagonal positions in
  // row-major order; equal in law to independent Bernoulli(p) links.
  void sample_sparse_bernoulli(Xoshiro256& rng, double p, Matrix& g) const {
    const auto n = static_cast<std::uint64_t>(agents_);
    const std::uint64_t slots = n * (n - 1);
    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    while (true) {
      const double gap = std::floor(std::log(rng.uniform_open0()) / log_q);
      if (gap >= static_cast<double>(slots - pos)) break;
      pos += static_cast<std::uint64_t>(gap);
      const std::uint64_t row = pos / (n - 1);
      std::uint64_t col = pos % (n - 1);
      if (col >= row) ++col;
      g(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
      if (++pos >= slots) break;
    }
  }

  std::size_t agents_;
  std::vector<EdgeDistribution> edges_;
  bool homogeneous_;
  Vector participation_;
};

inline NetworkRealization sample(const NetworkModel& model, Xoshiro256& rng, std::size_t iteration = 0) {
  return model.sample(rng, iteration);
}

inline Matrix effective(const NetworkRealization& realization) { return realization.effective(); }

inline Matrix expected_effective(const NetworkModel& model) { return model.expected_effective(); }

}  // namespace netgame
