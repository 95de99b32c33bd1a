#pragma once

#include "netgame/bounds.hpp"
#include "netgame/checks.hpp"
#include "netgame/config.hpp"
#include "netgame/dynamics.hpp"
#include "netgame/equilibrium.hpp"
#include "netgame/io.hpp"
#include "netgame/metrics.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <ostream>
#include <thread>
#include <vector>

namespace netgame {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitProperty = 4,
  kExitIo = 5,
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything derived from a config before any simulation runs.
struct Prepared {
  ExperimentConfig config;
  GameSpec game;
  GameBounds bounds;
  StepSchedule schedule;
  ConstantsBundle constants;
  EquilibriumResult equilibrium;
  std::string game_hash;
  std::string config_hash;
};

inline EquilibriumResult equilibrium_for(const ExperimentConfig& cfg, const GameSpec& game) {
  SolverOptions opts;
  opts.tolerance = cfg.equilibrium_tolerance;
  opts.max_iters = cfg.equilibrium_max_iters;
  if (cfg.equilibrium_file) {
    // An imported point is accepted when one solver step leaves it in place.
    opts.initial = read_equilibrium(*cfg.equilibrium_file, game_hash(cfg), cfg.agents, cfg.dim);
    opts.max_iters = 0;
    EquilibriumResult r = solve_expected_vi(game, opts);
    if (!r.converged)
      throw SolverError("imported equilibrium has fixed-point residual " + fmt(r.residual) + " above tolerance " +
                        fmt(cfg.equilibrium_tolerance));
    return r;
  }
  EquilibriumResult r = solve_expected_vi(game, opts);
  if (!r.converged)
    throw SolverError("equilibrium solver stopped after " + std::to_string(cfg.equilibrium_max_iters) +
                      " iterations with residual " + fmt(r.residual));
  return r;
}

inline Prepared prepare(const ExperimentConfig& cfg, bool solve = true) {
  GameSpec game = build_game(cfg);
  const GameBounds bounds = derive_bounds(game);
  StepSchedule schedule = build_schedule(cfg, bounds, game.network());
  const ConstantsBundle c = constants(bounds, game.network(), schedule);
  EquilibriumResult eq;
  if (solve) eq = equilibrium_for(cfg, game);
  return Prepared{cfg, std::move(game), bounds, std::move(schedule), c, std::move(eq), game_hash(cfg), config_hash(cfg)};
}

inline RunOptions run_options(const ExperimentConfig& cfg) {
  RunOptions o;
  o.seed = cfg.seed;
  o.regret = cfg.toggles.regret;
  o.per_agent_regret = cfg.toggles.per_agent_regret;
  o.sgd_form = cfg.toggles.store_noise;
  o.store_profiles = cfg.toggles.store_profiles;
  o.profile_stride = cfg.toggles.profile_stride;
  if (cfg.initial) o.initial = StrategyProfile(cfg.agents, cfg.dim, *cfg.initial);
  return o;
}

// Runs replications 0..R-1 on up to `workers` threads. Each replication is
// independent; `sink` sees the traces strictly in replication order, so any
// merge it performs is deterministic.
inline void run_replications(const GameSpec& game, const StepSchedule& schedule, const StrategyProfile& equilibrium,
                             std::size_t horizon, std::size_t replications, const RunOptions& base,
                             const std::function<void(std::size_t, SimulationTrace&&)>& sink,
                             std::size_t workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(replications, 1));
  for (std::size_t first = 0; first < replications; first += workers) {
    const std::size_t batch = std::min(workers, replications - first);
    std::vector<SimulationTrace> traces(batch);
    std::vector<std::exception_ptr> errors(batch);
    auto job = [&](std::size_t j) {
      try {
        RunOptions o = base;
        o.replication = first + j;
        traces[j] = run(game, schedule, horizon, equilibrium, o);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    };
    if (batch == 1) {
      job(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t j = 0; j < batch; ++j) pool.emplace_back(job, j);
      for (auto& t : pool) t.join();
    }
    for (std::size_t j = 0; j < batch; ++j) {
      if (errors[j]) std::rethrow_exception(errors[j]);
      sink(first + j, std::move(traces[j]));
    }
  }
}

inline std::string trace_name(std::size_t replication) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trace_r%04zu.csv", replication);
  return buf;
}

inline Json equilibrium_json(const EquilibriumResult& eq) {
  return {{"residual", eq.residual}, {"iterations", eq.iterations}, {"step", eq.step}, {"converged", eq.converged}};
}

inline Json header_json(const Prepared& p, const std::string& command) {
  return {{"command", command},
          {"timestamp", utc_timestamp()},
          {"config_hash", p.config_hash},
          {"game_hash", p.game_hash},
          {"seed", p.config.seed},
          {"agents", p.config.agents},
          {"dim", p.config.dim},
          {"schedule", p.schedule.describe()},
          {"bounds", to_json(p.bounds)},
          {"constants", to_json(p.constants)}};
}

// ---------------------------------------------------------------------------

inline int cmd_equilibrium(const ExperimentConfig& cfg, std::ostream& log) {
  const Prepared p = prepare(cfg);
  const std::filesystem::path dir = cfg.output;
  ensure_directory(dir);
  write_equilibrium(dir / "equilibrium.csv", p.equilibrium.profile, p.game_hash, p.equilibrium.residual);
  Json summary = header_json(p, "equilibrium");
  summary["equilibrium"] = equilibrium_json(p.equilibrium);
  summary["operator_lipschitz"] = operator_lipschitz(p.game);
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << "equilibrium: residual " << fmt(p.equilibrium.residual) << " after " << p.equilibrium.iterations
      << " iterations -> " << (dir / "equilibrium.csv").string() << "\n";
  return kExitOk;
}

inline int cmd_run(const ExperimentConfig& cfg, std::ostream& log) {
  const Prepared p = prepare(cfg);
  const std::filesystem::path dir = cfg.output;
  ensure_directory(dir);
  write_equilibrium(dir / "equilibrium.csv", p.equilibrium.profile, p.game_hash, p.equilibrium.residual);

  const RunOptions base = run_options(cfg);
  TraceMetadata meta{p.config_hash, cfg.seed, 0, p.equilibrium.residual, p.schedule.describe(), p.constants};
  Json reps = Json::array();
  DeviationMoments moments;
  bool regret_ok = true;
  double final_sum = 0.0;

  run_replications(p.game, p.schedule, p.equilibrium.profile, cfg.horizon, cfg.replications, base,
                   [&](std::size_t rep, SimulationTrace&& trace) {
                     meta.replication = rep;
                     const std::string text = trace_csv(trace, meta);
                     write_text(dir / trace_name(rep), text);
                     if (cfg.toggles.store_profiles) {
                       char buf[40];
                       std::snprintf(buf, sizeof buf, "profiles_r%04zu.csv", rep);
                       write_profiles(dir / buf, trace);
                     }
                     moments.add(trace);
                     Json r = {{"replication", rep},
                               {"file", trace_name(rep)},
                               {"trace_hash", hex64(fnv1a(text))},
                               {"initial_distance", trace.rows.front().distance},
                               {"final_distance", trace.rows.back().distance}};
                     final_sum += trace.rows.back().distance;
                     if (trace.has_regret) {
                       const auto rb = regret_bound_check(trace, p.constants);
                       regret_ok = regret_ok && rb.ok();
                       r["regret_bound_ok"] = rb.ok();
                       r["regret_bound_min_margin"] = rb.min_margin;
                       double avg = 0.0;
                       for (std::size_t k = 1; k < trace.rows.size(); ++k) avg += trace.rows[k].max_regret;
                       r["time_averaged_max_regret"] = trace.horizon() ? avg / static_cast<double>(trace.horizon()) : 0.0;
                     }
                     reps.push_back(r);
                   });

  Json summary = header_json(p, "run");
  summary["horizon"] = cfg.horizon;
  summary["replications"] = cfg.replications;
  summary["equilibrium"] = equilibrium_json(p.equilibrium);
  summary["runs"] = reps;
  const std::size_t t = cfg.horizon;
  summary["aggregate"] = {{"mean_final_distance", moments.mean(t)},
                          {"final_distance_standard_error", number_or_null(moments.standard_error(t))},
                          {"mean_initial_distance", moments.mean(0)},
                          {"regret_bound_ok", cfg.toggles.regret ? Json(regret_ok) : Json(nullptr)}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << "run: " << cfg.replications << " replication(s), T=" << t << ", mean final distance "
      << fmt(final_sum / static_cast<double>(cfg.replications)) << " -> " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyOutcome {
  Json report;
  bool passed = true;
};

inline constexpr double kFrequencySlack = 0.02;

// The full property battery on one config.
inline VerifyOutcome verify_battery(const Prepared& p, std::ostream& log) {
  const auto& cfg = p.config;
  VerifyOutcome out;
  out.report = Json::object();
  auto verdict = [&](const std::string& name, bool ok, const std::string& detail, Json data) {
    data["pass"] = ok;
    out.report[name] = std::move(data);
    out.passed = out.passed && ok;
    log << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "\n";
  };

  {
    const auto r = noise_moment_check(p.game, p.constants.noise_bound, cfg.verify.noise_profiles,
                                      cfg.verify.noise_draws, cfg.seed);
    verdict("noise_moments", r.ok(),
            "max |mean|/SE " + fmt(r.max_score) + ", max ||w||^2/(M^2 N) " + fmt(r.max_norm_ratio),
            {{"profiles", r.profiles}, {"draws", r.draws}, {"coordinates", r.coordinates},
             {"mean_violations", r.mean_violations}, {"hard_violations", r.hard_violations},
             {"max_score", r.max_score}, {"max_norm_ratio", r.max_norm_ratio}, {"norm_bound", r.norm_bound}});
  }

  const std::size_t horizon = cfg.verify.horizon.value_or(cfg.horizon);
  const std::size_t reps = cfg.verify.replications;
  RunOptions base = run_options(cfg);
  base.regret = true;
  base.per_agent_regret = true;
  base.store_profiles = false;
  base.sgd_form = false;

  // Mean-square and averaged-regret bounds are stated for the alpha rule; a
  // theta-rule config is checked against alpha_rule(1, C2) as well.
  const bool alpha_cfg = p.schedule.kind() == StepSchedule::Kind::alpha_rule;
  const StepSchedule ms_schedule = alpha_cfg ? p.schedule : StepSchedule::alpha_rule(1.0, p.constants.c2);
  const ConstantsBundle ms_constants = constants(p.bounds, p.game.network(), ms_schedule);

  std::size_t regret_rows = 0, regret_viol = 0, ceiling_viol = 0;
  double regret_margin = std::numeric_limits<double>::infinity();
  auto tally_regret = [&](const SimulationTrace& t, const ConstantsBundle& c) {
    const auto rb = regret_bound_check(t, c);
    regret_rows += rb.rows;
    regret_viol += rb.violations.size();
    ceiling_viol += rb.ceiling_violations.size();
    regret_margin = std::min(regret_margin, rb.min_margin);
  };

  if (!alpha_cfg)
    run_replications(p.game, p.schedule, p.equilibrium.profile, horizon, reps, base,
                     [&](std::size_t, SimulationTrace&& t) { tally_regret(t, p.constants); });

  DeviationMoments moments;
  AveragedRegretMoments avg_regret;
  run_replications(p.game, ms_schedule, p.equilibrium.profile, horizon, reps, base,
                   [&](std::size_t, SimulationTrace&& t) {
                     tally_regret(t, ms_constants);
                     moments.add(t);
                     avg_regret.add(t);
                   });

  verdict("regret_bound", regret_viol == 0 && ceiling_viol == 0,
          std::to_string(regret_rows) + " rows, min margin " + fmt(regret_margin),
          {{"rows", regret_rows}, {"violations", regret_viol}, {"ceiling_violations", ceiling_viol},
           {"min_margin", regret_margin}});

  if (ms_constants.d_defined) {
    const auto ms = mean_square_bound_check(moments, ms_constants, ms_schedule, cfg.agents);
    verdict("mean_square_envelope", ms.ok(),
            std::to_string(ms.violations) + " violations over k in [2, " + std::to_string(horizon) + "], " +
                ms_schedule.describe(),
            {{"schedule", ms_schedule.describe()}, {"replications", reps}, {"horizon", horizon},
             {"violations", ms.violations}, {"d", ms_constants.d},
             {"final_mean_distance", moments.mean(horizon)}, {"final_bound", ms.bound[horizon]}});
  } else {
    verdict("mean_square_envelope", false, "D undefined (B C2 <= 1)", {{"schedule", ms_schedule.describe()}});
  }

  if (ms_schedule.alpha() == 1.0 && ms_constants.d_defined) {
    const auto ar = averaged_regret_check(avg_regret, p.bounds, ms_constants, cfg.agents, cfg.dim);
    verdict("averaged_regret", ar.ok(), "bound " + fmt(ar.bound) + ", max mean " + fmt(ar.mean.maxCoeff()),
            {{"bound", ar.bound}, {"max_mean", ar.mean.maxCoeff()}, {"violations", ar.violations},
             {"worst_margin", ar.worst_margin}});
  }

  {
    const auto cr = concentration_check(p.game, p.equilibrium.profile, p.bounds, cfg.verify.delta, cfg.verify.draws,
                                        cfg.seed);
    const bool conc_ok = cr.min_frequency >= cr.required_frequency - kFrequencySlack;
    verdict("concentration", conc_ok,
            "min frequency " + fmt(cr.min_frequency) + " vs " + fmt(cr.required_frequency),
            {{"draws", cr.draws}, {"delta", cr.delta}, {"radius", cr.radius}, {"min_frequency", cr.min_frequency},
             {"required_frequency", cr.required_frequency}, {"slack", kFrequencySlack},
             {"max_deviation", cr.max_deviation}});
    const bool nash_ok = cr.nash_frequency >= cr.required_nash - kFrequencySlack && cr.worst_case_violations == 0;
    verdict("eps_nash", nash_ok,
            "frequency " + fmt(cr.nash_frequency) + " at eps_bar " + fmt(cr.eps_bar) + ", max gap " + fmt(cr.max_gap),
            {{"eps_bar", cr.eps_bar}, {"eps_worst", cr.eps_worst}, {"frequency", cr.nash_frequency},
             {"required_frequency", cr.required_nash}, {"slack", kFrequencySlack},
             {"worst_case_violations", cr.worst_case_violations}, {"max_gap", cr.max_gap}});
  }

  {
    const auto ap = appendix_checks();
    verdict("appendix_grid", ap.ok(),
            std::to_string(ap.power_step.checked + ap.series_sum.checked + ap.delta_decay.checked) + " inequalities",
            {{"power_step_violations", ap.power_step.violations},
             {"series_sum_violations", ap.series_sum.violations},
             {"delta_decay_violations", ap.delta_decay.violations},
             {"checked", ap.power_step.checked + ap.series_sum.checked + ap.delta_decay.checked}});
  }
  return out;
}

inline int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
  const Prepared p = prepare(cfg);
  const std::filesystem::path dir = cfg.output;
  ensure_directory(dir);
  const VerifyOutcome v = verify_battery(p, log);
  Json summary = header_json(p, "verify");
  summary["equilibrium"] = equilibrium_json(p.equilibrium);
  summary["checks"] = v.report;
  summary["passed"] = v.passed;
  write_text(dir / "verify.json", summary.dump(2) + "\n");
  log << (v.passed ? "verify: all checks passed\n" : "verify: property violation\n");
  return v.passed ? kExitOk : kExitProperty;
}

// ---------------------------------------------------------------------------

// Copy of `cfg` with the swept parameter set to `value`, revalidated.
inline ExperimentConfig sweep_point(const ExperimentConfig& cfg, double value, double& delta) {
  ExperimentConfig c = cfg;
  delta = cfg.sweep.delta;
  const auto& param = cfg.sweep.parameter;
  if (param == "agents") {
    if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError({"sweep.values: agents must be positive integers"});
    if (!cfg.participation_uniform || cfg.mask || cfg.initial || cfg.b.cols() != 1 || cfg.equilibrium_file)
      throw ConfigError({"sweep over agents needs scalar participation, a shared offset b, no mask, no initial "
                         "profile and no equilibrium_file"});
    c.agents = static_cast<std::size_t>(value);
    c.participation = Vector::Constant(static_cast<Eigen::Index>(c.agents), cfg.participation(0));
  } else if (param == "alpha") {
    c.schedule.kind = "alpha";
    c.schedule.alpha = value;
  } else if (param == "theta") {
    c.schedule.kind = "theta";
    c.schedule.theta = value;
  } else if (param == "delta") {
    delta = value;
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError({"sweep.values: delta must lie in (0, 1)"});
  } else if (param == "participation") {
    c.participation_uniform = true;
    c.participation = Vector::Constant(static_cast<Eigen::Index>(c.agents), value);
  }
  std::vector<std::string> errors;
  validate_model(c, errors);
  if (!errors.empty()) throw ConfigError(errors);
  return c;
}

inline int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log) {
  if (cfg.sweep.values.empty()) throw ConfigError({"sweep.values: required for the sweep command"});
  const std::filesystem::path dir = cfg.output;
  ensure_directory(dir);

  std::ostringstream csv;
  csv << "# netgame sweep parameter=" << cfg.sweep.parameter << " config_hash=" << config_hash(cfg) << "\n";
  csv << "value,agents,delta,mu,s_max,lipschitz_z,concentration,eps_bar,eps_worst,c2,d,k_start";
  if (cfg.sweep.simulate) csv << ",mean_final_distance,final_distance_se,mean_time_averaged_max_regret";
  csv << "\n";

  Json rows = Json::array();
  log << std::left << std::setw(12) << "value" << std::setw(8) << "N" << std::setw(10) << "delta" << std::setw(14)
      << "mu" << std::setw(14) << "eps_bar" << std::setw(14) << "eps_worst" << std::setw(14) << "D";
  if (cfg.sweep.simulate) log << std::setw(14) << "final_dist";
  log << "\n";

  for (double value : cfg.sweep.values) {
    double delta = 0.0;
    const ExperimentConfig c = sweep_point(cfg, value, delta);
    const Prepared p = prepare(c, cfg.sweep.simulate);
    const auto eps = epsilon_bar(c.agents, c.dim, delta, p.bounds);
    Json row = {{"value", value},           {"agents", c.agents},
                {"delta", delta},           {"mu", p.bounds.mu},
                {"s_max", p.bounds.s_max},  {"lipschitz_z", p.bounds.lipschitz_z},
                {"concentration", eps.concentration}, {"eps_bar", eps.bar},
                {"eps_worst", eps.worst},   {"c2", p.constants.c2},
                {"d", number_or_null(p.constants.d)}, {"k_start", p.constants.k_start}};
    csv << fmt(value) << ',' << c.agents << ',' << fmt(delta) << ',' << fmt(p.bounds.mu) << ',' << fmt(p.bounds.s_max)
        << ',' << fmt(p.bounds.lipschitz_z) << ',' << fmt(eps.concentration) << ',' << fmt(eps.bar) << ','
        << fmt(eps.worst) << ',' << fmt(p.constants.c2) << ',' << fmt(p.constants.d) << ',' << p.constants.k_start;
    log << std::left << std::setw(12) << fmt(value).substr(0, 11) << std::setw(8) << c.agents << std::setw(10)
        << delta << std::setw(14) << p.bounds.mu << std::setw(14) << eps.bar << std::setw(14) << eps.worst
        << std::setw(14) << p.constants.d;

    if (cfg.sweep.simulate) {
      RunOptions base = run_options(c);
      DeviationMoments moments;
      double regret_sum = 0.0;
      run_replications(p.game, p.schedule, p.equilibrium.profile, c.horizon, c.replications, base,
                       [&](std::size_t, SimulationTrace&& t) {
                         moments.add(t);
                         if (!t.has_regret || t.horizon() == 0) return;
                         double avg = 0.0;
                         for (std::size_t k = 1; k < t.rows.size(); ++k) avg += t.rows[k].max_regret;
                         regret_sum += avg / static_cast<double>(t.horizon());
                       });
      const double mean_final = moments.mean(c.horizon);
      const double regret_mean = regret_sum / static_cast<double>(c.replications);
      row["mean_final_distance"] = mean_final;
      row["final_distance_se"] = moments.standard_error(c.horizon);
      row["mean_time_averaged_max_regret"] = regret_mean;
      csv << ',' << fmt(mean_final) << ',' << fmt(moments.standard_error(c.horizon)) << ',' << fmt(regret_mean);
      log << std::setw(14) << mean_final;
    }
    csv << "\n";
    log << "\n";
    rows.push_back(row);
  }
  write_text(dir / "sweep.csv", csv.str());
  Json summary = {{"command", "sweep"},
                  {"timestamp", utc_timestamp()},
                  {"config_hash", config_hash(cfg)},
                  {"parameter", cfg.sweep.parameter},
                  {"rows", rows}};
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

// Maps exceptions from any command onto the documented exit codes.
inline int run_command(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NotStronglyMonotone& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EvaluationFault& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace netgame
