#include "opprl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>

#include "opprl/config.hpp"

namespace opprl {

void validate(const ExperimentConfig& config) {
  if (config.num_episodes < 1)
    throw std::invalid_argument("experiment: episodes must be >= 1");
  if (config.seeds.empty())
    throw std::invalid_argument("experiment: seed list must not be empty");
  std::set<std::int64_t> unique(config.seeds.begin(), config.seeds.end());
  if (unique.size() != config.seeds.size())
    throw std::invalid_argument("experiment: seeds must be distinct");
}

NormalizationThresholds resolve_thresholds(const ExperimentConfig& config) {
  if (config.thresholds) return *config.thresholds;
  switch (config.variation.kind) {
    case VariationKind::binary_iid:
      return quantile_thresholds(config.variation, config.threshold_rho);
    case VariationKind::periodic_square_wave:
      // Same support points as the binary process.
      return make_thresholds(config.variation.eps0,
                             1.0 - config.variation.eps1);
    case VariationKind::beta_iid:
      return quantile_thresholds(config.variation, config.threshold_rho);
    case VariationKind::constant:
      return make_thresholds(0.0, 1.0);
  }
  throw std::invalid_argument("experiment: unknown variation kind");
}

double episode_regret(const FiniteHorizonMdp& truth,
                      double optimal_start_value, const Policy& policy,
                      double variation) {
  const double policy_value =
      evaluate_policy(truth, policy).at(truth.start_state, 0);
  return variation * (optimal_start_value - policy_value);
}

double episode_regret(const FiniteHorizonMdp& truth, const Policy& policy,
                      double variation) {
  const double optimal_start_value =
      optimal_values(truth).first.at(truth.start_state, 0);
  return episode_regret(truth, optimal_start_value, policy, variation);
}

RegretCurve run_single(const ExperimentConfig& config, std::int64_t seed,
                       const EpisodeObserver& observer) {
  validate(config);
  const FiniteHorizonMdp truth = make_environment(config.environment);
  const double optimal_start_value =
      optimal_values(truth).first.at(truth.start_state, 0);
  const NormalizationThresholds thresholds = resolve_thresholds(config);

  RandomStream variation_rng(seed, StreamKind::variation);
  RandomStream transition_rng(seed, StreamKind::transitions);
  RandomStream agent_rng(seed, StreamKind::agent);

  const OfuConfig ofu{config.delta, config.scale, false};
  const PsrlConfig psrl{config.prior_value, config.alpha_floor, false};
  const auto agent =
      make_agent(config.agent, MdpShape::of(truth), ofu, psrl, &agent_rng);

  RegretCurve curve;
  curve.seed = seed;
  curve.per_episode_regret.reserve(config.num_episodes);
  curve.cumulative.reserve(config.num_episodes);
  curve.variation_trace.reserve(config.num_episodes);

  double running_total = 0.0;
  for (int k = 1; k <= config.num_episodes; ++k) {
    const double variation =
        sample_variation(config.variation, k, variation_rng);
    const double normalized = normalize(variation, thresholds);
    const Policy policy = agent->plan(k, normalized);
    const double policy_value =
        evaluate_policy(truth, policy).at(truth.start_state, 0);
    const double gap = optimal_start_value - policy_value;
    const double regret = variation * gap;

    running_total += regret;
    curve.per_episode_regret.push_back(regret);
    curve.cumulative.push_back(running_total);
    curve.variation_trace.push_back(variation);

    const Trajectory trajectory = run_episode(truth, policy, transition_rng);
    if (observer)
      observer({k, variation, normalized, gap, &policy, &trajectory});
    agent->observe(trajectory);
  }
  return curve;
}

std::vector<RegretCurve> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const int seed_count = static_cast<int>(config.seeds.size());
  int workers = config.jobs > 0
                    ? config.jobs
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, seed_count));

  std::vector<RegretCurve> curves(seed_count);
  if (workers == 1) {
    for (int i = 0; i < seed_count; ++i)
      curves[i] = run_single(config, config.seeds[i]);
    return curves;
  }

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(seed_count);
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= seed_count) return;
      try {
        curves[i] = run_single(config, config.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& thread : pool) thread.join();
  for (const auto& error : errors)
    if (error) std::rethrow_exception(error);
  return curves;
}

AggregateCurve aggregate(const std::vector<RegretCurve>& curves) {
  if (curves.size() < 2)
    throw std::invalid_argument("aggregate: need at least 2 curves");
  const std::size_t episodes = curves.front().cumulative.size();
  for (const auto& curve : curves)
    if (curve.cumulative.size() != episodes)
      throw std::invalid_argument("aggregate: curves differ in length");

  const double n = static_cast<double>(curves.size());
  AggregateCurve out;
  out.num_seeds = static_cast<int>(curves.size());
  out.mean.resize(episodes);
  out.ci_half_width.resize(episodes);
  for (std::size_t k = 0; k < episodes; ++k) {
    double mean = 0.0;
    for (const auto& curve : curves) mean += curve.cumulative[k];
    mean /= n;
    double variance = 0.0;
    for (const auto& curve : curves) {
      const double d = curve.cumulative[k] - mean;
      variance += d * d;
    }
    variance /= (n - 1.0);
    out.mean[k] = mean;
    out.ci_half_width[k] = 1.96 * std::sqrt(variance / n);
  }
  return out;
}

AggregateCurve single_curve_aggregate(const RegretCurve& curve) {
  AggregateCurve out;
  out.num_seeds = 1;
  out.mean = curve.cumulative;
  out.ci_half_width.assign(curve.cumulative.size(), 0.0);
  return out;
}

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out)
    throw std::runtime_error("failed writing output file: " + path.string());
}

}  // namespace

std::string export_results(const std::vector<RegretCurve>& curves,
                           const AggregateCurve& agg,
                           const ExperimentConfig& config,
                           const std::string& out_dir,
                           double wall_clock_seconds) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory: " + out_dir);

  const std::string algorithm = agent_name(config.agent);
  const std::string environment = environment_name(config.environment);
  const std::string prefix = environment + "_" + algorithm;

  {
    const fs::path path = dir / (prefix + "_per_episode.csv");
    auto out = open_output(path);
    out << "episode,seed,algorithm,environment,L_k,episode_regret,"
           "cum_regret\n";
    for (const auto& curve : curves) {
      for (std::size_t k = 0; k < curve.per_episode_regret.size(); ++k) {
        out << (k + 1) << ',' << curve.seed << ',' << algorithm << ','
            << environment << ',' << format_number(curve.variation_trace[k])
            << ',' << format_number(curve.per_episode_regret[k]) << ','
            << format_number(curve.cumulative[k]) << '\n';
      }
    }
    finish_output(out, path);
  }

  {
    const fs::path path = dir / (prefix + "_aggregate.csv");
    auto out = open_output(path);
    out << "episode,mean_cum_regret,ci_half_width\n";
    for (std::size_t k = 0; k < agg.mean.size(); ++k) {
      out << (k + 1) << ',' << format_number(agg.mean[k]) << ','
          << format_number(agg.ci_half_width[k]) << '\n';
    }
    finish_output(out, path);
  }

  {
    const fs::path path = dir / (prefix + "_summary.txt");
    auto out = open_output(path);
    out << "experiment summary\n";
    out << "==================\n";
    out << "config:\n" << config_to_json(config).dump(2) << "\n";
    const std::size_t last = agg.mean.size() - 1;
    out << "final mean cumulative regret: " << format_number(agg.mean[last]);
    if (agg.num_seeds >= 2) {
      out << " +/- " << format_number(agg.ci_half_width[last]) << " (95% CI, "
          << agg.num_seeds << " seeds)\n";
    } else {
      out << " (CI undefined: single seed)\n";
    }
    out << "wall_clock_seconds: " << format_number(wall_clock_seconds)
        << "\n";
    finish_output(out, path);
  }

  return prefix;
}

void write_grid_leaderboard(const GridResult& result,
                            const std::string& path) {
  auto out = open_output(path);
  bool first = true;
  for (const auto& [key, value] : result.best) {
    (void)value;
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << ",mean_cum_regret\n";
  for (const auto& row : result.leaderboard) {
    for (const auto& [key, value] : row.assignment)
      out << format_number(value) << ',';
    out << format_number(row.metric) << '\n';
  }
  finish_output(out, path);
}

ExperimentConfig apply_assignment(
    ExperimentConfig config,
    const std::map<std::string, double>& assignment) {
  for (const auto& [key, value] : assignment) {
    if (key == "agent.delta") config.delta = value;
    else if (key == "agent.scale") config.scale = value;
    else if (key == "agent.prior_value") config.prior_value = value;
    else if (key == "agent.alpha_floor") config.alpha_floor = value;
    else
      throw std::invalid_argument("grid: unknown parameter key: " + key);
  }
  return config;
}

GridResult grid_search(const ExperimentConfig& base,
                       const std::map<std::string, std::vector<double>>& grid,
                       int selection_episodes) {
  if (grid.empty()) throw std::invalid_argument("grid: grid must not be empty");
  for (const auto& [key, values] : grid)
    if (values.empty())
      throw std::invalid_argument("grid: empty value list for " + key);
  if (selection_episodes < 1 || selection_episodes > base.num_episodes)
    throw std::invalid_argument(
        "grid: selection episode must lie in [1, episodes]");

  std::vector<std::string> keys;
  for (const auto& [key, values] : grid) keys.push_back(key);

  GridResult result;
  std::vector<std::size_t> index(keys.size(), 0);
  for (;;) {
    std::map<std::string, double> assignment;
    for (std::size_t i = 0; i < keys.size(); ++i)
      assignment[keys[i]] = grid.at(keys[i])[index[i]];

    const auto curves = run_experiment(apply_assignment(base, assignment));
    double metric = 0.0;
    for (const auto& curve : curves)
      metric += curve.cumulative[selection_episodes - 1];
    metric /= static_cast<double>(curves.size());
    result.leaderboard.push_back({std::move(assignment), metric});

    // Odometer over value lists, last key fastest.
    std::size_t pos = keys.size();
    while (pos > 0) {
      --pos;
      if (++index[pos] < grid.at(keys[pos]).size()) break;
      index[pos] = 0;
      if (pos == 0) {
        std::stable_sort(result.leaderboard.begin(),
                         result.leaderboard.end(),
                         [](const GridResult::Row& a,
                            const GridResult::Row& b) {
                           return a.metric < b.metric;
                         });
        result.best = result.leaderboard.front().assignment;
        return result;
      }
    }
  }
}

}  // namespace opprl
