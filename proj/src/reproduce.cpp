#include "opprl/reproduce.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace opprl {

namespace {

constexpr std::int64_t kFirstSelectionSeed = 1001;
constexpr int kSelectionSeedCount = 5;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<std::int64_t> selection_seeds() {
  std::vector<std::int64_t> seeds(kSelectionSeedCount);
  std::iota(seeds.begin(), seeds.end(), kFirstSelectionSeed);
  return seeds;
}

std::vector<std::int64_t> evaluation_seeds(int count) {
  std::vector<std::int64_t> seeds(count);
  std::iota(seeds.begin(), seeds.end(), 1);
  return seeds;
}

// Runs one agent with the family's selected hyperparameters and exports the
// usual file triple. Returns the final mean cumulative regret.
double run_cell(ExperimentConfig config, AgentKind agent,
                const std::string& out_dir) {
  config.agent = agent;
  const double start = now_seconds();
  const auto curves = run_experiment(config);
  const AggregateCurve agg = curves.size() >= 2
                                 ? aggregate(curves)
                                 : single_curve_aggregate(curves.front());
  export_results(curves, agg, config, out_dir, now_seconds() - start);
  return agg.mean.back();
}

}  // namespace

ReproduceFigure parse_figure(const std::string& name) {
  if (name == "binary") return ReproduceFigure::binary;
  if (name == "beta") return ReproduceFigure::beta;
  throw std::invalid_argument("unknown figure: " + name);
}

std::string figure_name(ReproduceFigure figure) {
  return figure == ReproduceFigure::binary ? "binary" : "beta";
}

std::vector<ComparisonRow> run_reproduce(const ReproduceOptions& options) {
  namespace fs = std::filesystem;
  if (options.episodes < 1)
    throw std::invalid_argument("reproduce: episodes must be >= 1");
  if (options.eval_seed_count < 2)
    throw std::invalid_argument("reproduce: need at least 2 seeds");
  fs::create_directories(options.out_dir);

  const double started = now_seconds();
  const VariationProcess variation =
      options.figure == ReproduceFigure::binary
          ? VariationProcess::binary(0.0, 0.0, 0.5)
          : VariationProcess::beta(2.0, 2.0);

  const std::map<std::string, std::vector<double>> ofu_grid{
      {"agent.delta", {0.01, 0.05, 0.1, 0.5}},
      {"agent.scale", {0.1, 0.5, 1.0}}};
  const std::map<std::string, std::vector<double>> psrl_grid{
      {"agent.prior_value", {0.1, 1.0}}};

  const EnvironmentId environments[] = {EnvironmentId::river_swim,
                                        EnvironmentId::cliff_walking,
                                        EnvironmentId::frozen_lake};
  struct Family {
    std::string name;
    AgentKind baseline;
    AgentKind opportunistic;
    const std::map<std::string, std::vector<double>>* grid;
  };
  const Family families[] = {
      {"ucrl2", AgentKind::ucrl2, AgentKind::opp_ucrl2, &ofu_grid},
      {"psrl", AgentKind::psrl, AgentKind::opp_psrl, &psrl_grid}};

  std::vector<ComparisonRow> rows;
  for (const EnvironmentId environment : environments) {
    for (const Family& family : families) {
      ExperimentConfig base;
      base.environment = environment;
      base.agent = family.baseline;
      base.variation = variation;
      base.threshold_rho = 0.05;
      base.num_episodes = options.episodes;
      base.jobs = options.jobs;
      base.output_dir = options.out_dir;

      // Hyperparameters are selected on the baseline over held-out seeds and
      // shared with the opportunistic variant.
      base.seeds = selection_seeds();
      const GridResult grid =
          grid_search(base, *family.grid, options.episodes);
      write_grid_leaderboard(
          grid, (fs::path(options.out_dir) /
                 (environment_name(environment) + "_" + family.name +
                  "_grid.csv"))
                    .string());

      ExperimentConfig selected = apply_assignment(base, grid.best);
      selected.seeds = evaluation_seeds(options.eval_seed_count);

      ComparisonRow row;
      row.environment = environment;
      row.family = family.name;
      row.baseline = family.baseline;
      row.opportunistic = family.opportunistic;
      row.baseline_final =
          run_cell(selected, family.baseline, options.out_dir);
      row.opp_final =
          run_cell(selected, family.opportunistic, options.out_dir);
      row.reduction_pct =
          row.baseline_final > 0.0
              ? 100.0 * (row.baseline_final - row.opp_final) /
                    row.baseline_final
              : 0.0;
      rows.push_back(row);
    }
  }

  {
    const fs::path path = fs::path(options.out_dir) / "comparison.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open output file: " + path.string());
    out << "environment,family,baseline_agent,opp_agent,"
           "baseline_final_regret,opp_final_regret,reduction_pct\n";
    for (const auto& row : rows) {
      out << environment_name(row.environment) << ',' << row.family << ','
          << agent_name(row.baseline) << ',' << agent_name(row.opportunistic)
          << ',' << format_number(row.baseline_final) << ','
          << format_number(row.opp_final) << ','
          << format_number(row.reduction_pct) << '\n';
    }
    out.flush();
    if (!out)
      throw std::runtime_error("failed writing: " + path.string());
  }

  {
    const fs::path path =
        fs::path(options.out_dir) / "reproduce_summary.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open output file: " + path.string());
    out << "reproduce --figure " << figure_name(options.figure) << "\n";
    out << "episodes: " << options.episodes
        << ", seeds: 1.." << options.eval_seed_count << "\n\n";
    out << "final mean cumulative regret (baseline vs opportunistic)\n";
    for (const auto& row : rows) {
      out << environment_name(row.environment) << ' '
          << agent_name(row.baseline) << '=' <<
          format_number(row.baseline_final) << ' '
          << agent_name(row.opportunistic) << '='
          << format_number(row.opp_final)
          << " reduction=" << format_number(row.reduction_pct) << "%\n";
    }
    out << "\nwall_clock_seconds: " << format_number(now_seconds() - started)
        << "\n";
    out.flush();
    if (!out)
      throw std::runtime_error("failed writing: " + path.string());
  }

  return rows;
}

}  // namespace opprl
