#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opprl/agents.hpp"
#include "opprl/environments.hpp"
#include "opprl/variation.hpp"

namespace opprl {

/// Full description of one experiment: an environment, one of the four
/// agents, a variation process with its normalization thresholds, and the
/// episode/seed budget.
struct ExperimentConfig {
  EnvironmentId environment = EnvironmentId::river_swim;
  AgentKind agent = AgentKind::ucrl2;
  double delta = 0.05;
  double scale = 1.0;
  double prior_value = 1.0;
  double alpha_floor = 1e-3;
  VariationProcess variation = VariationProcess::constant(1.0);
  /// Explicit thresholds win; otherwise they are derived from the process
  /// (support points for binary / square wave, quantiles at threshold_rho
  /// for beta, [0, 1] for constant).
  std::optional<NormalizationThresholds> thresholds;
  double threshold_rho = 0.05;
  int num_episodes = 1000;
  std::vector<std::int64_t> seeds;
  std::string output_dir = "results";
  int jobs = 0;  ///< parallel seed workers; 0 = hardware concurrency
};

/// Throws std::invalid_argument on an invalid episode count or seed list.
void validate(const ExperimentConfig& config);

NormalizationThresholds resolve_thresholds(const ExperimentConfig& config);

/// Per-seed result: expected actual regret per episode and its prefix sum,
/// plus the variation factors that produced the weights.
struct RegretCurve {
  std::int64_t seed = 0;
  std::vector<double> per_episode_regret;
  std::vector<double> cumulative;
  std::vector<double> variation_trace;  ///< L_k
};

/// Mean cumulative regret across seeds with a 95% normal-approximation
/// confidence half-width (1.96 * sample std / sqrt(n)).
struct AggregateCurve {
  std::vector<double> mean;
  std::vector<double> ci_half_width;
  int num_seeds = 0;
};

/// Everything a test might want to see about one episode of a run.
struct EpisodeRecord {
  int episode = 0;            ///< k, 1-based
  double variation = 0.0;     ///< L_k
  double normalized = 0.0;    ///< normalized variation factor
  double value_gap = 0.0;     ///< V*(start) - V^pi(start)
  const Policy* policy = nullptr;
  const Trajectory* trajectory = nullptr;
};
using EpisodeObserver = std::function<void(const EpisodeRecord&)>;

/// Expected actual regret of one episode: L_k (V*_1(start) - V^pi_1(start)),
/// with the policy value computed exactly by backward induction.
double episode_regret(const FiniteHorizonMdp& truth, const Policy& policy,
                      double variation);
double episode_regret(const FiniteHorizonMdp& truth,
                      double optimal_start_value, const Policy& policy,
                      double variation);

/// One K-episode run. Three substreams are derived from the seed: variation,
/// environment transitions, agent sampling; the variation sequence is thus
/// shared by all agents run with the same seed.
RegretCurve run_single(const ExperimentConfig& config, std::int64_t seed,
                       const EpisodeObserver& observer = {});

/// One run per configured seed, optionally fanned out to parallel workers.
/// Results always come back in seed order.
std::vector<RegretCurve> run_experiment(const ExperimentConfig& config);

/// Mean and CI of the cumulative curves. Requires at least two curves.
AggregateCurve aggregate(const std::vector<RegretCurve>& curves);

/// Degenerate aggregate for a single curve (CI reported as undefined).
AggregateCurve single_curve_aggregate(const RegretCurve& curve);

/// Writes <prefix>_per_episode.csv, <prefix>_aggregate.csv and
/// <prefix>_summary.txt under out_dir, where prefix = environment_agent.
/// Numbers carry 12 significant digits; newlines are UNIX. Returns the
/// prefix. Throws std::runtime_error with the path on I/O failure.
std::string export_results(const std::vector<RegretCurve>& curves,
                           const AggregateCurve& aggregate,
                           const ExperimentConfig& config,
                           const std::string& out_dir,
                           double wall_clock_seconds);

struct GridResult {
  std::map<std::string, double> best;
  struct Row {
    std::map<std::string, double> assignment;
    double metric = 0.0;  ///< mean cumulative regret at selection_episodes
  };
  std::vector<Row> leaderboard;  ///< ascending by metric, ties in scan order
};

/// Overrides one agent hyperparameter addressed by config key
/// ("agent.delta", "agent.scale", "agent.prior_value", "agent.alpha_floor").
ExperimentConfig apply_assignment(
    ExperimentConfig config, const std::map<std::string, double>& assignment);

/// Exhaustive search over the Cartesian product of the grid, selecting the
/// assignment with the lowest mean cumulative regret at selection_episodes.
/// Assignments are scanned in lexicographic key order, value-list order
/// within a key.
GridResult grid_search(const ExperimentConfig& base,
                       const std::map<std::string, std::vector<double>>& grid,
                       int selection_episodes);

/// Writes the leaderboard as CSV: one column per parameter key (sorted),
/// then the selection metric, rows ascending by metric.
void write_grid_leaderboard(const GridResult& result,
                            const std::string& path);

/// Formats with 12 significant digits (the serialization contract shared by
/// every CSV writer here).
std::string format_number(double value);

}  // namespace opprl
