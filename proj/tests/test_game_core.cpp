#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

using namespace netgame;
using Catch::Approx;

namespace {

Matrix two_cycle() {
  Matrix w(2, 2);
  w << 0, 1, 1, 0;
  return w;
}

}  // namespace

TEST_CASE("local aggregates on small networks", "[game]") {
  SECTION("two agents on a 2-cycle") {
    StrategyProfile s(2, 1, Vector::Constant(2, 0.8));
    const Matrix z = local_aggregates(s, two_cycle());
    CHECK(z(0, 0) == Approx(0.4).epsilon(0));
    CHECK(z(0, 1) == Approx(0.4).epsilon(0));
  }
  SECTION("zero graph gives zero aggregates") {
    StrategyProfile s(4, 3, Vector::LinSpaced(12, -1.0, 2.0));
    CHECK(local_aggregates(s, Matrix::Zero(4, 4)).isZero(0.0));
  }
  SECTION("complete graph on three agents") {
    StrategyProfile s(3, 1, Vector::Ones(3));
    Matrix w = Matrix::Ones(3, 3);
    w.diagonal().setZero();
    const Matrix z = local_aggregates(s, w);
    for (int i = 0; i < 3; ++i) CHECK(z(0, i) == Approx(2.0 / 3.0).margin(1e-15));
  }
  SECTION("shape mismatch is rejected") {
    StrategyProfile s(3, 1);
    CHECK_THROWS_AS(local_aggregates(s, Matrix::Zero(2, 2)), InvalidInput);
    Matrix w = Matrix::Zero(3, 3);
    w(1, 1) = 1.0;
    CHECK_THROWS_AS(local_aggregates(s, w), InvalidInput);
  }
}

TEST_CASE("aggregates match the loop oracle and are linear in s", "[game]") {
  auto rng = stream(11, 0, 0, StreamPurpose::profiles);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 3, agents = 2 + trial % 7;
    Matrix w(static_cast<Eigen::Index>(agents), static_cast<Eigen::Index>(agents));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform();
    w.diagonal().setZero();
    StrategyProfile s1(agents, n), s2(agents, n);
    for (Eigen::Index i = 0; i < s1.values().size(); ++i) {
      s1.values()(i) = 2.0 * rng.uniform() - 1.0;
      s2.values()(i) = 2.0 * rng.uniform() - 1.0;
    }
    const double alpha = 3.0 * rng.uniform() - 1.5, beta = 3.0 * rng.uniform() - 1.5;
    StrategyProfile mix(agents, n, alpha * s1.values() + beta * s2.values());
    const Matrix z1 = local_aggregates(s1, w), z2 = local_aggregates(s2, w), zm = local_aggregates(mix, w);
    CHECK((zm - (alpha * z1 + beta * z2)).cwiseAbs().maxCoeff() < 1e-13);
    const auto oracle = fixtures::loop_aggregates(s1, w);
    for (std::size_t i = 0; i < agents; ++i)
      CHECK((z1.col(static_cast<Eigen::Index>(i)) - oracle[i]).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("game Jacobian of the quadratic family", "[game]") {
  const GameSpec game = fixtures::two_agent();
  SECTION("vanishes at the interior equilibrium") {
    StrategyProfile s(2, 1, Vector::Constant(2, 0.8));
    CHECK(game_jacobian(game, s, two_cycle()).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("a = 0 decouples agents") {
    NetworkModel net(3, EdgeDistribution::bernoulli(0.5), Vector::Ones(3));
    GameSpec g(StrategySet::box(2, -1.0, 1.0), CostModel::quadratic(2.0, 0.0, 0.3, 2), net);
    StrategyProfile s(3, 2, Vector::LinSpaced(6, -1.0, 1.0));
    Matrix w = Matrix::Ones(3, 3);
    w.diagonal().setZero();
    const Vector f1 = game_jacobian(g, s, w);
    const Vector f2 = game_jacobian(g, s, Matrix::Zero(3, 3));
    CHECK(f1 == f2);
    CHECK((f1 - (2.0 * s.values() + Vector::Constant(6, 0.3))).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("zero profile and zero offset") {
    NetworkModel net(2, EdgeDistribution::constant(1.0), Vector::Ones(2));
    GameSpec g(StrategySet::box(1, -1.0, 1.0), CostModel::quadratic(1.0, 0.5, 0.0, 1), net);
    CHECK(game_jacobian(g, StrategyProfile(2, 1), two_cycle()).isZero(0.0));
  }
  SECTION("non-finite custom gradient faults with the agent index") {
    CustomCost cc;
    cc.cost = [](std::size_t, const Vector& s, const Vector&) { return s.squaredNorm(); };
    cc.gradient = [](std::size_t i, const Vector& s, const Vector&) {
      Vector g = 2.0 * s;
      if (i == 1) g(0) = std::numeric_limits<double>::quiet_NaN();
      return g;
    };
    GameSpec g(StrategySet::box(1, 0.0, 1.0), CostModel::custom(cc),
               NetworkModel(3, EdgeDistribution::constant(1.0), Vector::Ones(3)));
    try {
      game_jacobian(g, StrategyProfile(3, 1), Matrix::Zero(3, 3));
      FAIL("expected a fault");
    } catch (const EvaluationFault& e) {
      CHECK(e.agent() == 1);
    }
  }
}

TEST_CASE("quadratic gradient agrees with finite differences of the cost", "[game]") {
  const GameSpec game = fixtures::ball_game(5, 3, 0.6);
  auto rng = stream(5, 0, 0, StreamPurpose::profiles);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const StrategyProfile s = random_profile(game, rng);
    Vector z(3);
    for (int c = 0; c < 3; ++c) z(c) = 2.0 * rng.uniform() - 1.0;
    const std::size_t i = static_cast<std::size_t>(trial % 5);
    Vector g(3);
    game.cost().gradient_into(i, s.block(i), z, g);
    for (int c = 0; c < 3; ++c) {
      Vector up = s.block(i), dn = s.block(i);
      up(c) += h;
      dn(c) -= h;
      const double fd = (game.cost().cost(i, up, z) - game.cost().cost(i, dn, z)) / (2.0 * h);
      CHECK(std::abs(fd - g(c)) < 1e-7);
    }
  }
}

TEST_CASE("expected Jacobian estimators", "[game]") {
  SECTION("full participation and constant links match the mean network") {
    const GameSpec game = fixtures::two_agent();
    StrategyProfile s(2, 1, Vector::Constant(2, 0.3));
    const auto analytic = expected_jacobian(game, s);
    CHECK(analytic.value == game_jacobian(game, s, two_cycle()));
    const auto mc = expected_jacobian(game, s, MonteCarloEstimator{100, 3});
    CHECK((mc.value - analytic.value).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(mc.standard_error.cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("Monte Carlo agrees with the analytic operator within 4 SE") {
    const GameSpec game = fixtures::bernoulli_game(20, 0.4, 0.6);
    auto rng = stream(9, 0, 0, StreamPurpose::profiles);
    const StrategyProfile s = random_profile(game, rng);
    const auto analytic = expected_jacobian(game, s);
    const auto mc = expected_jacobian(game, s, MonteCarloEstimator{10000, 17});
    for (Eigen::Index c = 0; c < s.values().size(); ++c)
      CHECK(std::abs(mc.value(c) - analytic.value(c)) <= 4.0 * mc.standard_error(c));
  }
  SECTION("analytic estimator refuses non-affine custom costs") {
    CustomCost cc;
    cc.cost = [](std::size_t, const Vector& s, const Vector& z) { return s.squaredNorm() * (1.0 + z.squaredNorm()); };
    cc.gradient = [](std::size_t, const Vector& s, const Vector& z) -> Vector { return 2.0 * s * (1.0 + z.squaredNorm()); };
    GameSpec g(StrategySet::box(1, 0.0, 1.0), CostModel::custom(cc),
               NetworkModel(2, EdgeDistribution::bernoulli(0.5), Vector::Ones(2)));
    CHECK_THROWS_AS(expected_jacobian(g, StrategyProfile(2, 1)), InvalidInput);
    CHECK_NOTHROW(expected_jacobian(g, StrategyProfile(2, 1), MonteCarloEstimator{50, 1}));
  }
}

TEST_CASE("analytic and Monte Carlo expected Jacobian agree on 100 random profiles", "[game]") {
  const GameSpec game = fixtures::quadratic_game(3, 1, 1.0, 0.9, -0.5, EdgeDistribution::uniform(0.1, 0.7), 0.8);
  std::size_t outside = 0, coords = 0;
  for (std::uint64_t p = 0; p < 100; ++p) {
    auto rng = stream(21, p, 0, StreamPurpose::profiles);
    const StrategyProfile s = random_profile(game, rng);
    const auto analytic = expected_jacobian(game, s);
    const auto mc = expected_jacobian(game, s, MonteCarloEstimator{2000, 1000 + p});
    for (Eigen::Index c = 0; c < s.values().size(); ++c, ++coords)
      if (std::abs(mc.value(c) - analytic.value(c)) > 4.0 * mc.standard_error(c)) ++outside;
  }
  CHECK(coords == 300);
  CHECK(outside == 0);
}

TEST_CASE("projection onto boxes and balls", "[game]") {
  const auto box = StrategySet::box(1, 0.0, 1.0);
  CHECK(box.project(Vector::Constant(1, 1.5))(0) == 1.0);
  CHECK(box.project(Vector::Constant(1, -0.5))(0) == 0.0);
  CHECK(box.project(Vector::Constant(1, 0.3))(0) == 0.3);

  const auto ball = StrategySet::ball(Vector::Zero(2), 1.0);
  Vector y(2);
  y << 3.0, 4.0;
  const Vector p = ball.project(y);
  CHECK(p(0) == Approx(0.6).margin(1e-15));
  CHECK(p(1) == Approx(0.8).margin(1e-15));
  Vector inside(2);
  inside << 0.1, -0.2;
  CHECK(ball.project(inside) == inside);

  CHECK_THROWS_AS(StrategySet::box(Vector::Ones(2), Vector::Zero(2)), InvalidInput);
  CHECK_THROWS_AS(StrategySet::ball(Vector::Zero(2), 0.0), InvalidInput);
  CHECK_THROWS_AS(StrategySet::box(Vector::Zero(2), Vector::Ones(3)), InvalidInput);
}

TEST_CASE("projection is idempotent and nonexpansive", "[game]") {
  Vector lo(3), hi(3), c(3);
  lo << -1.0, 0.0, 2.0;
  hi << 1.0, 0.5, 2.0;
  c << 0.5, -1.0, 2.0;
  const std::vector<StrategySet> sets{StrategySet::box(lo, hi), StrategySet::ball(c, 0.7)};
  auto rng = stream(3, 0, 0, StreamPurpose::profiles);
  std::normal_distribution<double> normal(0.0, 3.0);
  for (const auto& set : sets) {
    for (int trial = 0; trial < 2000; ++trial) {
      Vector x(3), y(3);
      for (int k = 0; k < 3; ++k) {
        x(k) = normal(rng);
        y(k) = normal(rng);
      }
      const Vector px = set.project(x), py = set.project(y);
      CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
      CHECK((set.project(px) - px).norm() <= 1e-15);
      CHECK(set.contains(px, 1e-12));
    }
  }
}

TEST_CASE("closed-form bounds of the quadratic family", "[game]") {
  SECTION("two-agent reference") {
    const auto b = derive_bounds(fixtures::two_agent());
    CHECK(b.s_max == 1.0);
    CHECK(b.mu == Approx(0.75).margin(1e-12));
    CHECK(b.grad_bound == Approx(1.0 + 0.5 + 1.0));
    CHECK(b.lipschitz_s == b.grad_bound);
    CHECK(b.lipschitz_z == Approx(0.5));
    CHECK(b.cost_bound == Approx(0.5 + 1.5));
  }
  SECTION("a = 0 gives mu = q") {
    const auto g = fixtures::quadratic_game(6, 2, 3.5, 0.0, 1.0, EdgeDistribution::bernoulli(0.4), 0.5);
    CHECK(derive_bounds(g).mu == Approx(3.5).margin(1e-12));
  }
  SECTION("ball radius bound") {
    const auto g = fixtures::ball_game(3, 2, 1.0);
    CHECK(derive_bounds(g).s_max == Approx(std::sqrt(2.0) * 0.25 + 1.5));
  }
  SECTION("weak coupling fails strong monotonicity") {
    const auto g = fixtures::quadratic_game(2, 1, 1.0, -3.0, 0.0, EdgeDistribution::constant(1.0), 1.0);
    try {
      derive_bounds(g);
      FAIL("expected NotStronglyMonotone");
    } catch (const NotStronglyMonotone& e) {
      CHECK(e.eigenvalue() == Approx(-0.5).margin(1e-12));
      CHECK(std::string(e.what()).find("not strongly monotone") != std::string::npos);
    }
  }
}

TEST_CASE("expected operator is mu-strongly monotone and gradients stay below J2", "[game]") {
  const std::vector<GameSpec> games{fixtures::bernoulli_game(30, 0.3, 0.7), fixtures::ball_game(8, 2, 0.5),
                                    fixtures::quadratic_game(10, 3, 1.0, -0.9, 0.4, EdgeDistribution::uniform(0.0, 1.0), 0.9, -2.0, 1.0)};
  for (const auto& game : games) {
    const auto bounds = derive_bounds(game);
    auto rng = stream(13, game.agents(), 0, StreamPurpose::profiles);
    NetworkRealization r;
    for (int trial = 0; trial < 200; ++trial) {
      const StrategyProfile s1 = random_profile(game, rng), s2 = random_profile(game, rng);
      const Vector f1 = expected_jacobian(game, s1).value, f2 = expected_jacobian(game, s2).value;
      const Vector d = s1.values() - s2.values();
      CHECK(d.dot(f1 - f2) >= bounds.mu * d.squaredNorm() - 1e-12);

      game.network().sample_into(rng, r);
      const Vector f = game_jacobian(game, s1, r.effective());
      for (std::size_t i = 0; i < game.agents(); ++i)
        CHECK(f.segment(static_cast<Eigen::Index>(i * game.dim()), static_cast<Eigen::Index>(game.dim())).norm() <=
              bounds.grad_bound + 1e-12);
    }
  }
}

TEST_CASE("game construction validates shapes", "[game]") {
  NetworkModel net(3, EdgeDistribution::bernoulli(0.5), Vector::Ones(3));
  CHECK_THROWS_AS(GameSpec(std::vector<StrategySet>(2, StrategySet::box(1, 0, 1)), CostModel::quadratic(1, 0, 0.0, 1), net),
                  InvalidInput);
  CHECK_THROWS_AS(GameSpec(StrategySet::box(2, 0, 1), CostModel::quadratic(1, 0, 0.0, 1), net), InvalidInput);
  CHECK_THROWS_AS(CostModel::quadratic(0.0, 1.0, 0.0, 1), InvalidInput);
  std::vector<StrategySet> mixed{StrategySet::box(1, 0, 1), StrategySet::box(2, 0, 1), StrategySet::box(1, 0, 1)};
  CHECK_THROWS_AS(GameSpec(mixed, CostModel::quadratic(1, 0, 0.0, 1), net), InvalidInput);
  const GameSpec ok(StrategySet::box(1, 0, 1), CostModel::quadratic(1, 0, 0.0, 1), net);
  CHECK_THROWS_AS(ok.check_profile(StrategyProfile(2, 1)), InvalidInput);
  CHECK(ok.initial_profile().values().isZero(0.0));
}
