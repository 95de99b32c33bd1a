#pragma once

#include "netgame/config.hpp"
#include "netgame/dynamics.hpp"
#include "netgame/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace netgame {

// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

// Shortest text that round-trips the double.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Identity of the game itself (cost, sets, network): what an exported
// equilibrium depends on.
inline std::string game_hash(const ExperimentConfig& c) {
  const Json j = to_json(c);
  return hex64(fnv1a(Json{{"game", j["game"]}, {"network", j["network"]}}.dump()));
}

// Identity of the whole experiment; the output directory is not part of it.
inline std::string config_hash(const ExperimentConfig& c) {
  Json j = to_json(c);
  j.erase("output");
  return hex64(fnv1a(j.dump()));
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Trace CSV
//
// Comment lines (leading '#') carry the metadata, then one header line, then
// one row per iteration k = 0..T:
//
//   k, distance, weighted_distance, step, participants,
//   max_regret, worst_agent, [regret_0 .. regret_{N-1}], [noise_sq]
//
// Regret columns are empty when regret is off. No timestamp is written, so a
// rerun reproduces the file byte for byte.

struct TraceMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  double equilibrium_residual = 0.0;
  std::string schedule;
  ConstantsBundle constants;
};

inline std::string trace_csv(const SimulationTrace& trace, const TraceMetadata& meta) {
  std::ostringstream out;
  const auto& c = meta.constants;
  out << "# netgame trace\n"
      << "# config_hash=" << meta.config_hash << "\n"
      << "# seed=" << meta.seed << "\n"
      << "# replication=" << meta.replication << "\n"
      << "# equilibrium_residual=" << fmt(meta.equilibrium_residual) << "\n"
      << "# schedule=" << meta.schedule << "\n"
      << "# constants noise_bound=" << fmt(c.noise_bound) << " c1=" << fmt(c.c1) << " c2=" << fmt(c.c2)
      << " c3=" << fmt(c.c3) << " c4=" << fmt(c.c4) << " scale=" << fmt(c.scale) << " k_start=" << c.k_start
      << " d=" << fmt(c.d) << " eps_worst=" << fmt(c.eps_worst) << " regret_ceiling=" << fmt(c.regret_ceiling)
      << "\n";
  const bool per_agent = trace.agent_regret.rows() == static_cast<Eigen::Index>(trace.rows.size());
  out << "k,distance,weighted_distance,step,participants,max_regret,worst_agent";
  if (per_agent)
    for (Eigen::Index i = 0; i < trace.agent_regret.cols(); ++i) out << ",regret_" << i;
  if (trace.has_noise) out << ",noise_sq";
  out << "\n";
  for (std::size_t idx = 0; idx < trace.rows.size(); ++idx) {
    const auto& r = trace.rows[idx];
    out << r.k << ',' << fmt(r.distance) << ',' << fmt(r.weighted_distance) << ',' << fmt(r.step) << ','
        << r.participants << ',';
    if (trace.has_regret) out << fmt(r.max_regret) << ',' << r.worst_agent;
    else out << ',';
    if (per_agent)
      for (Eigen::Index i = 0; i < trace.agent_regret.cols(); ++i)
        out << ',' << fmt(trace.agent_regret(static_cast<Eigen::Index>(idx), i));
    if (trace.has_noise) out << ',' << (r.k < trace.horizon() ? fmt(r.noise_sq) : std::string());
    out << '\n';
  }
  return out.str();
}

inline void write_trace(const std::filesystem::path& path, const SimulationTrace& trace, const TraceMetadata& meta) {
  write_text(path, trace_csv(trace, meta));
}

// Sampled profiles, one row per stored k.
inline void write_profiles(const std::filesystem::path& path, const SimulationTrace& trace) {
  std::ostringstream out;
  out << "k";
  if (!trace.profiles.empty())
    for (Eigen::Index c = 0; c < trace.profiles.front().second.values().size(); ++c) out << ",s_" << c;
  out << '\n';
  for (const auto& [k, s] : trace.profiles) {
    out << k;
    for (Eigen::Index c = 0; c < s.values().size(); ++c) out << ',' << fmt(s.values()(c));
    out << '\n';
  }
  write_text(path, out.str());
}

// ---------------------------------------------------------------------------
// Equilibrium export: header with the game hash, then one coordinate per line.

inline void write_equilibrium(const std::filesystem::path& path, const StrategyProfile& s, const std::string& hash,
                              double residual) {
  std::ostringstream out;
  out << "# game_hash=" << hash << "\n"
      << "# agents=" << s.agents() << " dim=" << s.dim() << " residual=" << fmt(residual) << "\n";
  for (Eigen::Index i = 0; i < s.values().size(); ++i) out << fmt(s.values()(i)) << '\n';
  write_text(path, out.str());
}

// Reads an exported equilibrium and checks it belongs to the game with `hash`.
inline StrategyProfile read_equilibrium(const std::filesystem::path& path, const std::string& hash,
                                        std::size_t agents, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line, found_hash;
  std::vector<double> values;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("game_hash=");
      if (pos != std::string::npos) found_hash = line.substr(pos + 10);
      continue;
    }
    try {
      std::size_t used = 0;
      values.push_back(std::stod(line, &used));
      if (line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": not a number: " + line);
    }
  }
  if (found_hash.empty()) throw IoError(path.string() + ": missing game_hash header");
  if (found_hash != hash)
    throw IoError(path.string() + ": game hash " + found_hash + " does not match this game (" + hash + ")");
  if (values.size() != agents * dim)
    throw IoError(path.string() + ": holds " + std::to_string(values.size()) + " coordinates, expected " +
                  std::to_string(agents * dim));
  return StrategyProfile(agents, dim, Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
}

// Dense dump of one realization: N rows of G, then a row with diag(P).
inline void write_realization(const std::filesystem::path& path, const NetworkRealization& r) {
  std::ostringstream out;
  out << "# realization iteration=" << r.iteration << " (rows 0..N-1: G, last row: diag(P))\n";
  for (Eigen::Index i = 0; i < r.links.rows(); ++i) {
    for (Eigen::Index j = 0; j < r.links.cols(); ++j) out << (j ? "," : "") << fmt(r.links(i, j));
    out << '\n';
  }
  for (Eigen::Index j = 0; j < r.participation.size(); ++j) out << (j ? "," : "") << fmt(r.participation(j));
  out << '\n';
  write_text(path, out.str());
}

inline Json to_json(const ConstantsBundle& c) {
  return {{"noise_bound", c.noise_bound}, {"c1", c.c1},       {"c2", c.c2},
          {"c3", c.c3},                   {"c4", c.c4},       {"scale", c.scale},
          {"k_start", c.k_start},         {"d", c.d_defined ? Json(c.d) : Json(nullptr)},
          {"eps_worst", c.eps_worst},     {"regret_ceiling", c.regret_ceiling}};
}

inline Json to_json(const GameBounds& b) {
  return {{"s_max", b.s_max},           {"cost_bound", b.cost_bound},   {"grad_bound", b.grad_bound},
          {"lipschitz_s", b.lipschitz_s}, {"lipschitz_z", b.lipschitz_z}, {"mu", b.mu}};
}

// Non-finite doubles become null so the summary stays valid JSON.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace netgame
