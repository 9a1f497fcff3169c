#pragma once

#include <string>
#include <vector>

#include "opprl/experiment.hpp"

namespace opprl {

enum class ReproduceFigure {
  binary,  ///< i.i.d. binary variation, eps0 = eps1 = 0, rho = 0.5
  beta,    ///< i.i.d. Beta(2,2) variation, quantile thresholds at rho = 0.05
};

ReproduceFigure parse_figure(const std::string& name);
std::string figure_name(ReproduceFigure figure);

struct ReproduceOptions {
  ReproduceFigure figure = ReproduceFigure::binary;
  std::string out_dir = "reproduce";
  int jobs = 0;
  int episodes = 1000;
  int eval_seed_count = 20;  ///< evaluation seeds are 1..eval_seed_count
};

/// Final-episode comparison of one opportunistic agent against its baseline
/// on one environment.
struct ComparisonRow {
  EnvironmentId environment = EnvironmentId::river_swim;
  std::string family;  ///< "ucrl2" or "psrl"
  AgentKind baseline = AgentKind::ucrl2;
  AgentKind opportunistic = AgentKind::opp_ucrl2;
  double baseline_final = 0.0;
  double opp_final = 0.0;
  double reduction_pct = 0.0;  ///< 100 (baseline - opp) / baseline
};

/// Runs the full 3-environments x 4-agents matrix for the chosen variation
/// scenario. Hyperparameters are grid-searched per environment on the
/// baseline of each family (over held-out selection seeds) and shared with
/// the opportunistic variant, mirroring the shared scaling factors of the
/// evaluation protocol. Writes per-run result files, the grid leaderboards,
/// comparison.csv and reproduce_summary.txt under out_dir; fully
/// deterministic for fixed options.
std::vector<ComparisonRow> run_reproduce(const ReproduceOptions& options);

}  // namespace opprl
