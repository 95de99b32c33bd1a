#include "netgame/experiment.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  CLI::App app{"Projected gradient play on random networks with random participation"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> replications;

  const std::map<std::string, std::string> commands{
      {"equilibrium", "solve the expected game and export its Nash equilibrium"},
      {"run", "simulate R replications and write traces plus a summary"},
      {"verify", "run the property battery; exit 4 on any failure"},
      {"sweep", "vary one parameter over a grid and tabulate the bounds"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--replications", replications, "replication count (overrides the config)")
        ->check(CLI::PositiveNumber);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : netgame::kExitConfig;
  }

  return netgame::run_command(
      [&]() -> int {
        netgame::ExperimentConfig cfg = netgame::load_config(config_path);
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.output = *out_dir;
        if (replications) cfg.replications = *replications;
        if (subs["equilibrium"]->parsed()) return netgame::cmd_equilibrium(cfg, std::cout);
        if (subs["run"]->parsed()) return netgame::cmd_run(cfg, std::cout);
        if (subs["verify"]->parsed()) return netgame::cmd_verify(cfg, std::cout);
        return netgame::cmd_sweep(cfg, std::cout);
      },
      std::cerr);
}
