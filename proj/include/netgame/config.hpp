#pragma once

#include "netgame/bounds.hpp"
#include "netgame/game.hpp"
#include "netgame/metrics.hpp"
#include "netgame/network.hpp"
#include "netgame/schedule.hpp"
#include "netgame/strategy_set.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace netgame {

using Json = nlohmann::json;

// Every problem found in a config file, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = std::to_string(v.size()) + " config violation" + (v.size() == 1 ? "" : "s") + ":";
    for (const auto& s : v) out += "\n  " + s;
    return out;
  }

  std::vector<std::string> violations_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SetConfig {
  std::string kind = "box";  // box | ball
  Vector lower;
  Vector upper;
  Vector center;
  double radius = 1.0;
};

struct EdgeConfig {
  std::string kind = "bernoulli";  // bernoulli | uniform | constant
  double p = 0.5;
  double lo = 0.0;
  double hi = 1.0;
  double value = 1.0;
};

struct ScheduleConfig {
  std::string kind = "theta";  // theta | alpha
  double theta = 0.25;
  double alpha = 1.0;
  std::optional<double> c2;    // alpha rule; default: 2 mu min Pbar
};

struct Toggles {
  bool regret = true;
  bool per_agent_regret = false;
  bool store_noise = false;
  bool store_profiles = false;
  std::size_t profile_stride = 0;
};

struct VerifyConfig {
  double delta = 0.1;
  std::size_t draws = 10000;          // network draws for concentration and eps-Nash
  std::size_t noise_profiles = 20;
  std::size_t noise_draws = 10000;
  std::size_t replications = 30;      // mean-square and regret runs
  std::optional<std::size_t> horizon; // default: top-level horizon
  double beta = 0.6;                  // decay envelope exponent (1 - beta) / 2
};

struct SweepConfig {
  std::string parameter = "agents";  // agents | alpha | theta | delta | participation
  std::vector<double> values;
  double delta = 0.1;
  bool simulate = false;
};

struct ExperimentConfig {
  std::size_t agents = 0;
  std::size_t dim = 1;
  double q = 1.0;
  double a = 0.0;
  Matrix b;  // dim x 1 or dim x N
  SetConfig set;
  EdgeConfig edge;
  std::optional<Matrix> mask;
  Vector participation;
  bool participation_uniform = true;
  ScheduleConfig schedule;
  std::size_t horizon = 1000;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::string output = "netgame-out";
  Toggles toggles;
  double equilibrium_tolerance = 1e-10;
  std::size_t equilibrium_max_iters = 1000000;
  std::optional<Vector> initial;  // stacked s^0
  std::optional<std::string> equilibrium_file;
  VerifyConfig verify;
  SweepConfig sweep;
};

namespace detail {

class ConfigReader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  void allow(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!ok.count(it.key())) fail(join(path, it.key()), "unknown field");
  }

  const Json* object(const Json& parent, const std::string& path, const char* key, bool required) {
    const auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) fail(join(path, key), "required section missing");
      return nullptr;
    }
    if (!it->is_object()) {
      fail(join(path, key), "must be an object");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const Json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_number()) {
      fail(join(path, key), "must be a number");
      return std::nullopt;
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
      fail(join(path, key), "must be finite");
      return std::nullopt;
    }
    return v;
  }

  void number(const Json& obj, const std::string& path, const char* key, double& out) {
    if (auto v = number(obj, path, key)) out = *v;
  }

  template <typename T>
  void count(const Json& obj, const std::string& path, const char* key, T& out, std::uint64_t min = 0) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() && it->get<std::int64_t>() < 0)) {
      fail(join(path, key), "must be a nonnegative integer");
      return;
    }
    const auto v = it->get<std::uint64_t>();
    if (v < min) {
      fail(join(path, key), "must be at least " + std::to_string(min));
      return;
    }
    out = static_cast<T>(v);
  }

  void flag(const Json& obj, const std::string& path, const char* key, bool& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_boolean()) {
      fail(join(path, key), "must be true or false");
      return;
    }
    out = it->get<bool>();
  }

  void text(const Json& obj, const std::string& path, const char* key, std::string& out,
            std::initializer_list<const char*> choices = {}) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_string()) {
      fail(join(path, key), "must be a string");
      return;
    }
    const auto v = it->get<std::string>();
    if (choices.size() > 0) {
      bool found = false;
      std::string list;
      for (const char* c : choices) {
        found = found || v == c;
        list += (list.empty() ? "" : ", ") + std::string(c);
      }
      if (!found) {
        fail(join(path, key), "'" + v + "' is not one of {" + list + "}");
        return;
      }
    }
    out = v;
  }

  // Scalar (broadcast to `len`) or array of exactly `len` numbers.
  std::optional<Vector> vector(const Json& obj, const std::string& path, const char* key, std::size_t len) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    const auto n = static_cast<Eigen::Index>(len);
    if (it->is_number()) return Vector::Constant(n, it->get<double>());
    if (!it->is_array()) {
      fail(join(path, key), "must be a number or an array of numbers");
      return std::nullopt;
    }
    if (it->size() != len) {
      fail(join(path, key), "has " + std::to_string(it->size()) + " entries, expected " + std::to_string(len));
      return std::nullopt;
    }
    Vector v(n);
    for (std::size_t i = 0; i < len; ++i) {
      if (!(*it)[i].is_number()) {
        fail(join(path, key) + "[" + std::to_string(i) + "]", "must be a number");
        return std::nullopt;
      }
      v(static_cast<Eigen::Index>(i)) = (*it)[i].get<double>();
    }
    if (!v.allFinite()) {
      fail(join(path, key), "entries must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<Matrix> matrix(const Json& obj, const std::string& path, const char* key, std::size_t rows,
                               std::size_t cols) {
    const auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_array() || it->size() != rows) {
      fail(join(path, key), "must be an array of " + std::to_string(rows) + " rows");
      return std::nullopt;
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      const auto& row = (*it)[i];
      if (!row.is_array() || row.size() != cols) {
        fail(join(path, key) + "[" + std::to_string(i) + "]", "must hold " + std::to_string(cols) + " numbers");
        return std::nullopt;
      }
      for (std::size_t j = 0; j < cols; ++j) {
        if (!row[j].is_number()) {
          fail(join(path, key) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "must be a number");
          return std::nullopt;
        }
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
      }
    }
    return m;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

inline std::string parse_location(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline GameSpec build_game(const ExperimentConfig& c) {
  StrategySet set = c.set.kind == "ball" ? StrategySet::ball(c.set.center, c.set.radius)
                                         : StrategySet::box(c.set.lower, c.set.upper);
  EdgeDistribution edge = c.edge.kind == "uniform"    ? EdgeDistribution::uniform(c.edge.lo, c.edge.hi)
                          : c.edge.kind == "constant" ? EdgeDistribution::constant(c.edge.value)
                                                      : EdgeDistribution::bernoulli(c.edge.p);
  NetworkModel network = c.mask ? NetworkModel::masked(*c.mask, edge, c.participation)
                                : NetworkModel(c.agents, edge, c.participation);
  return GameSpec(set, CostModel::quadratic(c.q, c.a, c.b), network);
}

inline StepSchedule build_schedule(const ExperimentConfig& c, const GameBounds& bounds, const NetworkModel& network) {
  if (c.schedule.kind == "alpha")
    return StepSchedule::alpha_rule(c.schedule.alpha, c.schedule.c2 ? *c.schedule.c2 : contraction_constant(bounds, network));
  return StepSchedule::theta_rule(c.schedule.theta);
}

// Semantic checks that need the assembled game; appends to `errors`.
inline void validate_model(const ExperimentConfig& c, std::vector<std::string>& errors) {
  std::optional<GameSpec> game;
  try {
    game.emplace(build_game(c));
  } catch (const InvalidInput& e) {
    errors.push_back(std::string("game/network: ") + e.what());
    return;
  }
  try {
    const GameBounds bounds = derive_bounds(*game);
    build_schedule(c, bounds, game->network());
  } catch (const NotStronglyMonotone& e) {
    errors.push_back(std::string("game: expected game must be strongly monotone; ") + e.what());
  } catch (const InvalidInput& e) {
    errors.push_back(std::string("schedule: ") + e.what());
  }
  if (c.initial) {
    StrategyProfile s0(c.agents, c.dim, *c.initial);
    if (!game->feasible(s0, 1e-12)) errors.push_back("initial: profile lies outside the strategy sets");
  }
}

inline ExperimentConfig parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError({"parse error at " + detail::parse_location(text, e.byte) + ": " + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"config root must be an object"});

  detail::ConfigReader rd;
  ExperimentConfig c;
  rd.allow(root, "", {"game", "network", "schedule", "horizon", "replications", "seed", "output", "toggles",
                      "equilibrium_tolerance", "equilibrium_max_iters", "initial", "equilibrium_file", "verify",
                      "sweep"});

  bool shape_ok = false;
  if (const Json* g = rd.object(root, "", "game", true)) {
    rd.allow(*g, "game", {"agents", "dim", "cost", "set"});
    if (!g->contains("agents")) rd.fail("game.agents", "required field missing");
    rd.count(*g, "game", "agents", c.agents, 1);
    rd.count(*g, "game", "dim", c.dim, 1);
    shape_ok = c.agents >= 1 && c.dim >= 1;
    const auto n = static_cast<Eigen::Index>(c.dim);

    c.b = Matrix::Zero(n, 1);
    if (const Json* cost = rd.object(*g, "game", "cost", true)) {
      rd.allow(*cost, "game.cost", {"q", "a", "b"});
      rd.number(*cost, "game.cost", "q", c.q);
      rd.number(*cost, "game.cost", "a", c.a);
      if (!(c.q > 0.0)) rd.fail("game.cost.q", "quadratic cost needs q > 0");
      const auto bit = cost->find("b");
      if (bit != cost->end() && shape_ok) {
        if (bit->is_array() && !bit->empty() && (*bit)[0].is_array()) {
          if (auto m = rd.matrix(*cost, "game.cost", "b", c.agents, c.dim)) c.b = m->transpose();
        } else if (auto v = rd.vector(*cost, "game.cost", "b", c.dim)) {
          c.b = *v;
        }
      }
    }

    c.set.lower = Vector::Zero(n);
    c.set.upper = Vector::Ones(n);
    c.set.center = Vector::Zero(n);
    if (const Json* s = rd.object(*g, "game", "set", false)) {
      rd.allow(*s, "game.set", {"kind", "lower", "upper", "center", "radius"});
      rd.text(*s, "game.set", "kind", c.set.kind, {"box", "ball"});
      if (shape_ok) {
        if (auto v = rd.vector(*s, "game.set", "lower", c.dim)) c.set.lower = *v;
        if (auto v = rd.vector(*s, "game.set", "upper", c.dim)) c.set.upper = *v;
        if (auto v = rd.vector(*s, "game.set", "center", c.dim)) c.set.center = *v;
      }
      rd.number(*s, "game.set", "radius", c.set.radius);
      if (c.set.kind == "box" && (s->contains("center") || s->contains("radius")))
        rd.fail("game.set", "center/radius only apply to kind 'ball'");
      if (c.set.kind == "ball" && (s->contains("lower") || s->contains("upper")))
        rd.fail("game.set", "lower/upper only apply to kind 'box'");
    }
    if (c.set.kind == "box" && (c.set.lower.array() > c.set.upper.array()).any())
      rd.fail("game.set", "box requires lower <= upper componentwise");
    if (c.set.kind == "ball" && !(c.set.radius > 0.0)) rd.fail("game.set.radius", "ball radius must be positive");
  }

  if (shape_ok) c.participation = Vector::Ones(static_cast<Eigen::Index>(c.agents));
  if (const Json* nw = rd.object(root, "", "network", true)) {
    rd.allow(*nw, "network", {"edge", "participation", "mask"});
    if (const Json* e = rd.object(*nw, "network", "edge", true)) {
      rd.allow(*e, "network.edge", {"kind", "p", "lo", "hi", "value"});
      rd.text(*e, "network.edge", "kind", c.edge.kind, {"bernoulli", "uniform", "constant"});
      rd.number(*e, "network.edge", "p", c.edge.p);
      rd.number(*e, "network.edge", "lo", c.edge.lo);
      rd.number(*e, "network.edge", "hi", c.edge.hi);
      rd.number(*e, "network.edge", "value", c.edge.value);
      if (c.edge.kind == "bernoulli" && !(c.edge.p >= 0.0 && c.edge.p <= 1.0))
        rd.fail("network.edge.p", "link probability must lie in [0, 1]");
      if (c.edge.kind == "uniform" && !(c.edge.lo >= 0.0 && c.edge.hi <= 1.0 && c.edge.lo <= c.edge.hi))
        rd.fail("network.edge", "uniform support must satisfy 0 <= lo <= hi <= 1");
      if (c.edge.kind == "constant" && !(c.edge.value >= 0.0 && c.edge.value <= 1.0))
        rd.fail("network.edge.value", "link weight must lie in [0, 1]");
    }
    if (shape_ok) {
      const auto pit = nw->find("participation");
      c.participation_uniform = pit == nw->end() || pit->is_number();
      if (auto v = rd.vector(*nw, "network", "participation", c.agents)) {
        c.participation = *v;
        for (Eigen::Index i = 0; i < v->size(); ++i)
          if (!((*v)(i) > 0.0 && (*v)(i) <= 1.0))
            rd.fail("network.participation[" + std::to_string(i) + "]",
                    "is " + std::to_string((*v)(i)) + "; every agent needs Pbar_ii > 0 and Pbar_ii <= 1");
      }
      c.mask = rd.matrix(*nw, "network", "mask", c.agents, c.agents);
    }
  }

  if (const Json* s = rd.object(root, "", "schedule", false)) {
    rd.allow(*s, "schedule", {"kind", "theta", "alpha", "c2"});
    rd.text(*s, "schedule", "kind", c.schedule.kind, {"theta", "alpha"});
    rd.number(*s, "schedule", "theta", c.schedule.theta);
    rd.number(*s, "schedule", "alpha", c.schedule.alpha);
    c.schedule.c2 = rd.number(*s, "schedule", "c2");
    if (c.schedule.kind == "theta" && !(c.schedule.theta > 0.0 && c.schedule.theta < 0.5))
      rd.fail("schedule.theta", "theta rule requires theta in (0, 1/2), got " + std::to_string(c.schedule.theta));
    if (c.schedule.kind == "alpha" && !(c.schedule.alpha > 0.0 && c.schedule.alpha <= 1.0))
      rd.fail("schedule.alpha", "alpha rule requires alpha in (0, 1], got " + std::to_string(c.schedule.alpha));
    if (c.schedule.c2 && !(*c.schedule.c2 > 0.0)) rd.fail("schedule.c2", "must be positive");
  }

  rd.count(root, "", "horizon", c.horizon, 1);
  rd.count(root, "", "replications", c.replications, 1);
  rd.count(root, "", "seed", c.seed);
  rd.text(root, "", "output", c.output);
  rd.number(root, "", "equilibrium_tolerance", c.equilibrium_tolerance);
  if (!(c.equilibrium_tolerance > 0.0)) rd.fail("equilibrium_tolerance", "must be positive");
  rd.count(root, "", "equilibrium_max_iters", c.equilibrium_max_iters, 1);
  if (root.contains("equilibrium_file")) {
    std::string f;
    rd.text(root, "", "equilibrium_file", f);
    if (!f.empty()) c.equilibrium_file = f;
  }
  if (shape_ok) c.initial = rd.vector(root, "", "initial", c.agents * c.dim);

  if (const Json* t = rd.object(root, "", "toggles", false)) {
    rd.allow(*t, "toggles", {"regret", "per_agent_regret", "store_noise", "store_profiles", "profile_stride"});
    rd.flag(*t, "toggles", "regret", c.toggles.regret);
    rd.flag(*t, "toggles", "per_agent_regret", c.toggles.per_agent_regret);
    rd.flag(*t, "toggles", "store_noise", c.toggles.store_noise);
    rd.flag(*t, "toggles", "store_profiles", c.toggles.store_profiles);
    rd.count(*t, "toggles", "profile_stride", c.toggles.profile_stride);
    if (c.toggles.per_agent_regret && !c.toggles.regret)
      rd.fail("toggles.per_agent_regret", "needs toggles.regret = true");
  }

  if (const Json* v = rd.object(root, "", "verify", false)) {
    rd.allow(*v, "verify", {"delta", "draws", "noise_profiles", "noise_draws", "replications", "horizon", "beta"});
    rd.number(*v, "verify", "delta", c.verify.delta);
    rd.count(*v, "verify", "draws", c.verify.draws, 1);
    rd.count(*v, "verify", "noise_profiles", c.verify.noise_profiles, 1);
    rd.count(*v, "verify", "noise_draws", c.verify.noise_draws, 2);
    rd.count(*v, "verify", "replications", c.verify.replications, 30);
    std::size_t h = 0;
    rd.count(*v, "verify", "horizon", h, 1);
    if (h > 0) c.verify.horizon = h;
    rd.number(*v, "verify", "beta", c.verify.beta);
    if (!(c.verify.beta >= 0.0 && c.verify.beta < 1.0)) rd.fail("verify.beta", "must lie in [0, 1)");
  }
  if (!(c.verify.delta > 0.0 && c.verify.delta < 1.0)) rd.fail("verify.delta", "delta must lie in (0, 1)");

  if (const Json* s = rd.object(root, "", "sweep", false)) {
    rd.allow(*s, "sweep", {"parameter", "values", "delta", "simulate"});
    rd.text(*s, "sweep", "parameter", c.sweep.parameter, {"agents", "alpha", "theta", "delta", "participation"});
    rd.number(*s, "sweep", "delta", c.sweep.delta);
    rd.flag(*s, "sweep", "simulate", c.sweep.simulate);
    const auto it = s->find("values");
    if (it != s->end()) {
      if (!it->is_array() || it->empty()) {
        rd.fail("sweep.values", "must be a nonempty array of numbers");
      } else {
        for (std::size_t i = 0; i < it->size(); ++i) {
          if (!(*it)[i].is_number()) rd.fail("sweep.values[" + std::to_string(i) + "]", "must be a number");
          else c.sweep.values.push_back((*it)[i].get<double>());
        }
      }
    }
    if (!(c.sweep.delta > 0.0 && c.sweep.delta < 1.0)) rd.fail("sweep.delta", "delta must lie in (0, 1)");
  }

  if (rd.errors.empty()) validate_model(c, rd.errors);
  if (!rd.errors.empty()) throw ConfigError(rd.errors);
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path);
  return ss.str();
}

inline ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

namespace detail {

inline Json to_array(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_rows(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_array(m.row(i).transpose()));
  return a;
}

}  // namespace detail

// Normalised config with every default spelled out. Object keys come out
// sorted, so equal configs serialise to equal text.
inline Json to_json(const ExperimentConfig& c) {
  Json j;
  Json set = {{"kind", c.set.kind}};
  if (c.set.kind == "ball") {
    set["center"] = detail::to_array(c.set.center);
    set["radius"] = c.set.radius;
  } else {
    set["lower"] = detail::to_array(c.set.lower);
    set["upper"] = detail::to_array(c.set.upper);
  }
  Json b = c.b.cols() == 1 ? detail::to_array(c.b.col(0)) : detail::to_rows(c.b.transpose());
  j["game"] = {{"agents", c.agents}, {"dim", c.dim}, {"cost", {{"q", c.q}, {"a", c.a}, {"b", b}}}, {"set", set}};

  Json edge = {{"kind", c.edge.kind}};
  if (c.edge.kind == "bernoulli") edge["p"] = c.edge.p;
  if (c.edge.kind == "uniform") {
    edge["lo"] = c.edge.lo;
    edge["hi"] = c.edge.hi;
  }
  if (c.edge.kind == "constant") edge["value"] = c.edge.value;
  const Json participation = c.participation_uniform && c.participation.size() > 0
                                 ? Json(c.participation(0))
                                 : detail::to_array(c.participation);
  j["network"] = {{"edge", edge}, {"participation", participation}};
  if (c.mask) j["network"]["mask"] = detail::to_rows(*c.mask);

  Json sched = {{"kind", c.schedule.kind}};
  if (c.schedule.kind == "theta") sched["theta"] = c.schedule.theta;
  else sched["alpha"] = c.schedule.alpha;
  if (c.schedule.c2) sched["c2"] = *c.schedule.c2;
  j["schedule"] = sched;

  j["horizon"] = c.horizon;
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["equilibrium_tolerance"] = c.equilibrium_tolerance;
  j["equilibrium_max_iters"] = c.equilibrium_max_iters;
  if (c.initial) j["initial"] = detail::to_array(*c.initial);
  if (c.equilibrium_file) j["equilibrium_file"] = *c.equilibrium_file;
  j["toggles"] = {{"regret", c.toggles.regret},
                  {"per_agent_regret", c.toggles.per_agent_regret},
                  {"store_noise", c.toggles.store_noise},
                  {"store_profiles", c.toggles.store_profiles},
                  {"profile_stride", c.toggles.profile_stride}};
  j["verify"] = {{"delta", c.verify.delta},
                 {"draws", c.verify.draws},
                 {"noise_profiles", c.verify.noise_profiles},
                 {"noise_draws", c.verify.noise_draws},
                 {"replications", c.verify.replications},
                 {"beta", c.verify.beta}};
  if (c.verify.horizon) j["verify"]["horizon"] = *c.verify.horizon;
  j["sweep"] = {{"parameter", c.sweep.parameter}, {"delta", c.sweep.delta}, {"simulate", c.sweep.simulate}};
  if (!c.sweep.values.empty()) j["sweep"]["values"] = c.sweep.values;
  return j;
}

}  // namespace netgame
