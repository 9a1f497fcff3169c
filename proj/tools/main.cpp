#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "opprl/config.hpp"
#include "opprl/reproduce.hpp"

namespace {

using namespace opprl;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct RunFlags {
  std::string config_path;
  std::string environment;
  std::string agent;
  std::string seeds;
  std::string variation = "constant:value=1";
  std::string out = "results";
  int episodes = 1000;
  int jobs = 0;
};

int cmd_run(const RunFlags& flags, bool direct_flags_used) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) {
    if (direct_flags_used)
      throw ConfigError(
          "--config conflicts with the direct flags (--env, --agent, "
          "--episodes, --seeds, --variation, --out); use one or the other");
    config = load_config_file(flags.config_path);
  } else {
    if (flags.environment.empty()) throw ConfigError("missing --env");
    if (flags.agent.empty()) throw ConfigError("missing --agent");
    if (flags.seeds.empty()) throw ConfigError("missing --seeds");
    try {
      config.environment = parse_environment(flags.environment);
    } catch (const std::invalid_argument& error) {
      throw ConfigError(std::string("--env: ") + error.what());
    }
    try {
      config.agent = parse_agent(flags.agent);
    } catch (const std::invalid_argument& error) {
      throw ConfigError(std::string("--agent: ") + error.what());
    }
    if (flags.episodes < 1) throw ConfigError("--episodes must be >= 1");
    config.num_episodes = flags.episodes;
    config.seeds = parse_seed_list(flags.seeds);
    const VariationSettings settings = parse_variation_spec(flags.variation);
    config.variation = settings.process;
    config.thresholds = settings.thresholds;
    config.threshold_rho = settings.threshold_rho;
    config.output_dir = flags.out;
  }
  if (flags.jobs > 0) config.jobs = flags.jobs;

  try {
    validate(config);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }

  const double start = now_seconds();
  const auto curves = run_experiment(config);
  const AggregateCurve agg = curves.size() >= 2
                                 ? aggregate(curves)
                                 : single_curve_aggregate(curves.front());
  const std::string prefix = export_results(
      curves, agg, config, config.output_dir, now_seconds() - start);
  std::cout << "wrote " << config.output_dir << "/" << prefix
            << "_{per_episode.csv,aggregate.csv,summary.txt}\n";
  std::cout << "final mean cumulative regret: "
            << format_number(agg.mean.back()) << "\n";
  return 0;
}

struct GridFlags {
  std::string config_path;
  std::string grid_path;
  std::string out;
  int select_at = 0;
  int jobs = 0;
};

int cmd_grid(const GridFlags& flags) {
  ExperimentConfig base = load_config_file(flags.config_path);
  if (flags.jobs > 0) base.jobs = flags.jobs;
  const auto grid = load_grid_file(flags.grid_path);
  const int select_at =
      flags.select_at > 0 ? flags.select_at : base.num_episodes;
  if (select_at > base.num_episodes)
    throw ConfigError("--select-at exceeds the configured episode count");
  const std::string out_dir =
      flags.out.empty() ? base.output_dir : flags.out;

  GridResult result;
  try {
    result = grid_search(base, grid, select_at);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(error.what());
  }

  std::filesystem::create_directories(out_dir);
  write_grid_leaderboard(result, out_dir + "/grid_leaderboard.csv");

  std::string winner;
  for (const auto& [key, value] : result.best) {
    if (!winner.empty()) winner += ' ';
    winner += key + "=" + format_number(value);
  }
  {
    const std::string path = out_dir + "/grid_summary.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "grid search summary\n";
    out << "===================\n";
    out << "base config:\n" << config_to_json(base).dump(2) << "\n";
    out << "selection episode: " << select_at << "\n";
    out << "winner: " << winner << "\n";
    out << "winner metric: "
        << format_number(result.leaderboard.front().metric) << "\n";
    out << "grid points: " << result.leaderboard.size() << "\n";
    out.flush();
    if (!out) throw std::runtime_error("failed writing: " + path);
  }
  std::cout << "winner: " << winner << "\n";
  return 0;
}

int cmd_reproduce(const std::string& figure, const std::string& out,
                  int jobs) {
  ReproduceOptions options;
  try {
    options.figure = parse_figure(figure);
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string("--figure: ") + error.what());
  }
  options.out_dir = out;
  options.jobs = jobs;
  const auto rows = run_reproduce(options);
  for (const auto& row : rows) {
    std::cout << environment_name(row.environment) << " "
              << agent_name(row.baseline) << " vs "
              << agent_name(row.opportunistic) << ": "
              << format_number(row.baseline_final) << " -> "
              << format_number(row.opp_final) << " ("
              << format_number(row.reduction_pct) << "% reduction)\n";
  }
  std::cout << "results under " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Opportunistic episodic reinforcement learning benchmark: "
      "UCRL2/OppUCRL2 and PSRL/OppPSRL on tabular finite-horizon MDPs under "
      "an external variation factor."};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one experiment, export CSVs");
  run->add_option("--config", run_flags.config_path,
                  "JSON config file (exclusive with the direct flags)");
  auto* env_opt = run->add_option(
      "--env", run_flags.environment,
      "environment: river_swim | cliff_walking | frozen_lake");
  auto* agent_opt =
      run->add_option("--agent", run_flags.agent,
                      "agent: ucrl2 | opp_ucrl2 | psrl | opp_psrl");
  auto* episodes_opt = run->add_option("--episodes", run_flags.episodes,
                                       "episodes per run (default 1000)");
  auto* seeds_opt = run->add_option(
      "--seeds", run_flags.seeds, "seed list, e.g. \"1..20\" or \"1,2,5\"");
  auto* variation_opt = run->add_option(
      "--variation", run_flags.variation,
      "variation spec kind:key=val,... (default constant:value=1)");
  auto* out_opt = run->add_option("--out", run_flags.out,
                                  "output directory (default results)");
  run->add_option("--jobs", run_flags.jobs,
                  "parallel seed workers (default: available cores)");

  GridFlags grid_flags;
  auto* grid = app.add_subcommand(
      "grid", "Exhaustive hyperparameter search over a config");
  grid->add_option("--config", grid_flags.config_path, "JSON config file")
      ->required();
  grid->add_option("--grid", grid_flags.grid_path,
                   "JSON grid file: {\"agent.delta\": [..], ...}")
      ->required();
  grid->add_option("--select-at", grid_flags.select_at,
                   "selection episode (default: configured episodes)");
  grid->add_option("--out", grid_flags.out,
                   "output directory (default: config out)");
  grid->add_option("--jobs", grid_flags.jobs,
                   "parallel seed workers (default: available cores)");

  std::string figure;
  std::string reproduce_out = "reproduce";
  int reproduce_jobs = 0;
  auto* reproduce = app.add_subcommand(
      "reproduce",
      "Run a full 3-environment x 4-agent scenario with grid-searched "
      "hyperparameters and emit a comparison table");
  reproduce->add_option("--figure", figure, "scenario: binary | beta")
      ->required();
  reproduce->add_option("--out", reproduce_out,
                        "output directory (default reproduce)");
  reproduce->add_option("--jobs", reproduce_jobs,
                        "parallel seed workers (default: available cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    if (*run) {
      const bool direct =
          env_opt->count() || agent_opt->count() || episodes_opt->count() ||
          seeds_opt->count() || variation_opt->count() || out_opt->count();
      return cmd_run(run_flags, direct);
    }
    if (*grid) return cmd_grid(grid_flags);
    if (*reproduce)
      return cmd_reproduce(figure, reproduce_out, reproduce_jobs);
  } catch (const ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
