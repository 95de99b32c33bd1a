#include "fixtures.hpp"

#include <catch_amalgamated.hpp>

using namespace netgame;
using Catch::Approx;

namespace {

StrategyProfile pair(double x, double y) {
  Vector v(2);
  v << x, y;
  return StrategyProfile(2, 1, v);
}

// Trace with the given per-agent regret rows (row k = round k).
SimulationTrace synthetic(const Matrix& regret) {
  SimulationTrace t;
  t.has_regret = true;
  t.agent_regret = regret;
  t.rows.resize(static_cast<std::size_t>(regret.rows()));
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    t.rows[k].k = k;
    t.rows[k].max_regret = regret.row(static_cast<Eigen::Index>(k)).maxCoeff();
  }
  return t;
}

GameBounds unit_bounds(double grad_bound) {
  GameBounds b;
  b.s_max = 1.0;
  b.grad_bound = grad_bound;
  b.lipschitz_s = grad_bound;
  b.lipschitz_z = 0.5;
  b.cost_bound = 1.0;
  b.mu = 1.0;
  return b;
}

}  // namespace

TEST_CASE("instantaneous regret examples", "[metrics]") {
  const auto game = fixtures::two_agent();
  NetworkRealization r;
  r.links = game.network().mean_links();
  r.participation = Vector::Ones(2);

  const Vector at_one = instantaneous_regret(game, pair(1.0, 1.0), r);
  CHECK(at_one(0) == Approx(0.03125).epsilon(1e-14));
  CHECK(at_one(1) == Approx(0.03125).epsilon(1e-14));
  CHECK(instantaneous_regret(game, pair(0.8, 0.8), r).cwiseAbs().maxCoeff() < 1e-15);

  // z_i ignores s_i, so switching agent i to its best response zeroes R_i.
  const auto game3 = fixtures::ball_game(4, 2, 0.5);
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto rng = stream(1, t, 0, StreamPurpose::profiles);
    auto s = random_profile(game3, rng);
    const auto r3 = game3.network().sample(rng, t);
    const Matrix z = local_aggregates(s, r3.effective());
    const std::size_t i = t % 4;
    s.block(i) = best_response(game3, i, z.col(static_cast<Eigen::Index>(i))).point;
    CHECK(instantaneous_regret(game3, s, r3)(static_cast<Eigen::Index>(i)) == Approx(0.0).margin(1e-14));
  }
}

TEST_CASE("regret is nonnegative and below twice the cost bound", "[metrics]") {
  const std::vector<GameSpec> games{fixtures::bernoulli_game(15), fixtures::ball_game(6, 3, 0.5),
                                    fixtures::quadratic_game(5, 2, 0.5, 0.3, 4.0, EdgeDistribution::uniform(0, 1), 0.3, -1.0, 2.0)};
  for (std::size_t gi = 0; gi < games.size(); ++gi) {
    const auto& game = games[gi];
    const double ceiling = 2.0 * derive_bounds(game).cost_bound;
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 500; ++t) {
      auto rng = stream(60 + gi, t, 0, StreamPurpose::profiles);
      const auto s = random_profile(game, rng);
      const auto r = game.network().sample(rng, t);
      const Vector reg = instantaneous_regret(game, s, r);
      CHECK((reg.array() >= 0.0).all());
      worst = std::max(worst, reg.maxCoeff());
    }
    CHECK(worst <= ceiling);
  }
}

TEST_CASE("regret bound holds along a 50-agent run", "[metrics]") {
  const auto game = fixtures::bernoulli_game(50);
  const auto bounds = derive_bounds(game);
  const auto schedule = StepSchedule::theta_rule(0.25);
  const auto c = constants(bounds, game.network(), schedule);
  const auto eq = solve_expected_vi(game).profile;
  RunOptions opt;
  opt.seed = 2;
  opt.per_agent_regret = true;
  const auto trace = run(game, schedule, 10000, eq, opt);
  const auto rep = regret_bound_check(trace, c);
  CHECK(rep.rows == 10001);
  CHECK(rep.violations.empty());
  CHECK(rep.ceiling_violations.empty());
  CHECK(rep.min_margin > 0.0);
  CHECK(rep.ok());

  SECTION("at the equilibrium on the mean network the left side is zero") {
    const Vector gap = nash_gap(game, eq, game.network().expected_effective());
    CHECK(gap.maxCoeff() <= c.eps_worst);
    CHECK(gap.maxCoeff() < 1e-15);
  }
}

TEST_CASE("single decoupled agent", "[metrics]") {
  NetworkModel net(1, EdgeDistribution::constant(0.0), Vector::Ones(1));
  GameSpec game(StrategySet::box(1, 0.0, 1.0), CostModel::quadratic(1.0, 0.0, -0.5, 1), net);
  const auto bounds = derive_bounds(game);
  const auto schedule = StepSchedule::theta_rule(0.25);
  const auto c = constants(bounds, net, schedule);
  CHECK(c.eps_worst == 0.0);
  const auto eq = solve_expected_vi(game).profile;
  CHECK(eq.values()(0) == Approx(0.5));
  RunOptions opt;
  opt.per_agent_regret = true;
  const auto trace = run(game, schedule, 1000, eq, opt);
  const auto rep = regret_bound_check(trace, c);
  CHECK(rep.ok());
  for (const auto& row : trace.rows) CHECK(row.max_regret <= c.c4 * row.distance * (1.0 + 1e-12));
}

TEST_CASE("regret check needs regret", "[metrics]") {
  SimulationTrace t;
  t.rows.resize(3);
  CHECK_THROWS_AS(regret_bound_check(t, ConstantsBundle{}), InvalidInput);
  CHECK_THROWS_AS(time_averaged_regret(t), InvalidInput);
}

TEST_CASE("time-averaged regret on synthetic sequences", "[metrics]") {
  const std::size_t horizon = 50;
  SECTION("constant regret") {
    const auto t = synthetic(Matrix::Constant(horizon + 1, 3, 0.7));
    const Matrix avg = time_averaged_regret(t);
    REQUIRE(avg.rows() == static_cast<Eigen::Index>(horizon));
    CHECK((avg.array() - 0.7).abs().maxCoeff() < 1e-15);
  }
  SECTION("a single spike") {
    const double spike = 2.0 * 1.25;
    Matrix reg = Matrix::Zero(horizon + 1, 2);
    reg(0, 0) = 99.0;  // round 0 is not part of the average
    reg(1, 0) = spike;
    const Matrix avg = time_averaged_regret(synthetic(reg));
    for (Eigen::Index t = 1; t <= static_cast<Eigen::Index>(horizon); ++t) {
      CHECK(avg(t - 1, 0) == Approx(spike / static_cast<double>(t)));
      CHECK(avg(t - 1, 1) == 0.0);
    }
  }
}

TEST_CASE("averaged regret stays under its decomposition", "[metrics]") {
  const auto game = fixtures::bernoulli_game(20);
  const auto bounds = derive_bounds(game);
  const auto schedule = StepSchedule::theta_rule(0.25);
  const auto c = constants(bounds, game.network(), schedule);
  const auto eq = solve_expected_vi(game).profile;
  RunOptions opt;
  opt.seed = 5;
  opt.per_agent_regret = true;
  const std::size_t horizon = 2000;
  const auto trace = run(game, schedule, horizon, eq, opt);

  // eps_k: the equilibrium's own gap on the round-k network, from the same stream.
  std::vector<double> eps(horizon + 1), worst(horizon + 1, c.eps_worst);
  for (std::size_t k = 0; k <= horizon; ++k) {
    auto rng = stream(opt.seed, opt.replication, k);
    const auto r = game.network().sample(rng, k);
    eps[k] = std::max(0.0, nash_gap(game, eq, r.effective()).maxCoeff());
  }
  const Matrix avg = time_averaged_regret(trace);
  const Vector tight = averaged_regret_envelope(trace, c.c4, eps);
  const Vector loose = averaged_regret_envelope(trace, c.c4, worst);
  REQUIRE(avg.rows() == tight.size());
  std::size_t violations = 0;
  for (Eigen::Index t = 0; t < avg.rows(); ++t) {
    if (avg.row(t).maxCoeff() > tight(t) * (1.0 + 1e-12)) ++violations;
    CHECK(tight(t) <= loose(t));
  }
  CHECK(violations == 0);
  // The running mean settles well below the worst-case branch.
  CHECK(avg.row(avg.rows() - 1).maxCoeff() < c.eps_worst);
  CHECK_THROWS_AS(averaged_regret_envelope(trace, c.c4, std::vector<double>(3)), InvalidInput);
}

TEST_CASE("rate fits on synthetic power laws", "[metrics]") {
  std::vector<std::pair<double, double>> half, point3;
  for (std::size_t k = 1; k <= 10000; ++k) {
    const double kk = static_cast<double>(k);
    half.emplace_back(kk, std::pow(kk, -0.5));
    point3.emplace_back(kk, 3.0 * std::pow(kk, -0.3));
  }
  const auto a = fit_rate(half, 100, 10000);
  CHECK(std::abs(a.exponent + 0.5) < 1e-8);
  CHECK(std::abs(a.intercept) < 1e-8);
  CHECK(a.points == 9901);
  CHECK(a.residual < 1e-10);
  const auto b = fit_rate(point3, 1, 10000);
  CHECK(std::abs(b.exponent + 0.3) < 1e-8);
  CHECK(b.intercept == Approx(std::log(3.0)).epsilon(1e-10));

  CHECK_THROWS_AS(fit_rate(half, 100, 108), InvalidInput);
  auto bad = half;
  bad[500].second = 0.0;
  CHECK_THROWS_AS(fit_rate(bad, 100, 10000), InvalidInput);
  CHECK_NOTHROW(fit_rate(bad, 1000, 10000));
}

TEST_CASE("constants examples", "[metrics]") {
  Vector p(2);
  p << 0.5, 1.0;
  NetworkModel half(2, EdgeDistribution::constant(1.0), p);
  const auto b = unit_bounds(2.0);
  const auto c = constants(b, half, StepSchedule::theta_rule(0.25));
  CHECK(c.noise_bound == Approx(6.0));
  CHECK(c.c1 == Approx(1.0 * (4.0 + 36.0)));
  CHECK(c.c2 == Approx(1.0));
  CHECK(c.c3 == Approx(8.0));
  CHECK(c.c4 == Approx(3.0));
  CHECK(c.eps_worst == Approx(2.0));
  CHECK(c.regret_ceiling == Approx(2.0));
  // B C2 = 1 for the theta rule here: D is undefined.
  CHECK_FALSE(c.d_defined);

  NetworkModel full(2, EdgeDistribution::constant(1.0), Vector::Ones(2));
  CHECK(constants(b, full, StepSchedule::theta_rule(0.25)).noise_bound == Approx(4.0));

  SECTION("alpha = 1") {
    const double c2 = contraction_constant(b, half);
    CHECK(c2 == Approx(1.0));
    const auto s = StepSchedule::alpha_rule(1.0, c2);
    const auto k = constants(b, half, s);
    CHECK(k.scale == Approx(2.0 / c2));
    CHECK(k.scale * k.c2 == Approx(2.0));
    REQUIRE(k.d_defined);
    CHECK(k.k_start == 2);
    CHECK(k.d == Approx(std::max(2.0 * k.c3, k.scale * k.scale * k.c1)));
  }
  SECTION("alpha = 1/2") {
    const auto s = StepSchedule::alpha_rule(0.5, 1.0);
    const auto k = constants(b, half, s);
    REQUIRE(k.d_defined);
    // delta_k = k^-1/2 <= 2^-1/2 first at k = 2.
    CHECK(k.k_start == 2);
    const double bc2 = std::sqrt(2.0);
    CHECK(k.d == Approx(std::max(k.c3 * std::sqrt(2.0), k.scale * k.scale * k.c1 / (bc2 - 1.0))));
  }
  SECTION("custom schedule with B C2 <= 1") {
    const auto s = StepSchedule::custom([](std::size_t k) { return 1.0 / (1.0 + static_cast<double>(k)); }, 0.5);
    const auto k = constants(b, half, s);
    CHECK_FALSE(k.d_defined);
    CHECK(std::isnan(k.d));
  }
  SECTION("non-monotone bounds are rejected") {
    auto bad = b;
    bad.mu = 0.0;
    CHECK_THROWS_AS(constants(bad, half, StepSchedule::theta_rule(0.25)), NotStronglyMonotone);
  }
}

TEST_CASE("mean-square envelope", "[metrics]") {
  SECTION("deterministic network") {
    const auto game = fixtures::two_agent();
    const auto bounds = derive_bounds(game);
    const auto schedule = StepSchedule::alpha_rule(1.0, contraction_constant(bounds, game.network()));
    const auto c = constants(bounds, game.network(), schedule);
    const auto eq = solve_expected_vi(game).profile;
    DeviationMoments m;
    for (std::size_t r = 0; r < 30; ++r) {
      RunOptions opt;
      opt.replication = r;
      opt.regret = false;
      m.add(run(game, schedule, 500, eq, opt));
    }
    const auto rep = mean_square_bound_check(m, c, schedule, 2);
    CHECK(rep.ok());
    CHECK(m.standard_error(10) == 0.0);
    CHECK(rep.bound[2] == Approx(std::sqrt(2.0 * c.d / 2.0)));
    for (std::size_t k = 2; k < m.length(); ++k) CHECK(m.mean(k) < 0.5 * rep.bound[k]);

    DeviationMoments few;
    few.add(run(game, schedule, 10, eq));
    CHECK_THROWS_AS(mean_square_bound_check(few, c, schedule, 2), InvalidInput);
  }
  SECTION("random network, 50 replications") {
    const auto game = fixtures::bernoulli_game(20);
    const auto bounds = derive_bounds(game);
    const auto schedule = StepSchedule::alpha_rule(1.0, contraction_constant(bounds, game.network()));
    const auto c = constants(bounds, game.network(), schedule);
    const auto eq = solve_expected_vi(game).profile;
    DeviationMoments a, b;
    for (std::size_t r = 0; r < 50; ++r) {
      RunOptions opt;
      opt.seed = 8;
      opt.replication = r;
      opt.regret = false;
      (r % 2 ? a : b).add(run(game, schedule, 2000, eq, opt));
    }
    a.merge(b);
    CHECK(a.replications() == 50);
    const auto rep = mean_square_bound_check(a, c, schedule, 20);
    CHECK(rep.violations == 0);
  }
}

TEST_CASE("step-size inequalities", "[metrics]") {
  CHECK(std::sqrt(5.0) <= std::sqrt(4.0) + 1.0);
  const double partial = std::pow(2.0, -0.5) + std::pow(3.0, -0.5) + 0.5;
  CHECK(partial == Approx(1.7845).margin(1e-4));
  CHECK(partial <= std::sqrt(4.0) / 0.5);

  AppendixGrid small;
  small.alphas = {0.5};
  small.k_max = 4;
  small.k0_max = 2;
  small.t_max = 4;
  const auto s = appendix_checks(small);
  CHECK(s.power_step.checked == 4);
  CHECK(s.series_sum.checked == 3 + 2);
  CHECK(s.ok());
  CHECK(s.power_step.worst_margin == Approx(2.0 - std::sqrt(2.0)));

  AppendixGrid one;
  one.alphas = {1.0};
  const auto e = appendix_checks(one);
  CHECK(e.power_step.worst_margin == Approx(0.0).margin(1e-12));
  CHECK(e.series_sum.checked == 0);

  const auto full = appendix_checks();
  CHECK(full.ok());
  CHECK(full.power_step.checked == 10000);
  CHECK(full.delta_decay.checked == 10000);
  CHECK(full.series_sum.checked == 9u * (1000u * 10000u - 500500u));

  AppendixGrid bad;
  bad.alphas = {1.5};
  CHECK_THROWS_AS(appendix_checks(bad), InvalidInput);
}
