#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opprl/experiment.hpp"

namespace opprl {

/// Invalid or inconsistent configuration; the message names the offending
/// key or flag. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Variation process plus its normalization settings, as they appear
/// together in configs and in the --variation mini-grammar.
struct VariationSettings {
  VariationProcess process = VariationProcess::constant(1.0);
  std::optional<NormalizationThresholds> thresholds;
  double threshold_rho = 0.05;
};

/// Parses the one-line spec `kind:key=val,...`, e.g.
/// `binary:eps0=0,eps1=0,rho=0.5`, `beta:alpha=2,beta=2,threshold_rho=0.05`,
/// `square:eps0=0.2,eps1=0.3`, `constant:value=1`. Optional keys l_min and
/// l_max set explicit thresholds for any kind.
VariationSettings parse_variation_spec(const std::string& spec);

/// Parses seed lists: comma-separated integers and/or inclusive ranges,
/// e.g. "1..20" or "1,2,5..8".
std::vector<std::int64_t> parse_seed_list(const std::string& spec);

/// Loads an experiment config from a JSON file. Keys mirror the module
/// config surface: environment, episodes, seeds, out, jobs, and nested
/// agent.{kind,delta,scale,prior_value,alpha_floor} and
/// variation.{kind,eps0,eps1,rho,alpha,beta,threshold_rho,l_min,l_max}.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig config_from_json(const nlohmann::json& json);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Loads a grid file: a JSON object mapping parameter keys ("agent.delta",
/// "agent.scale", ...) to value arrays.
std::map<std::string, std::vector<double>> load_grid_file(
    const std::string& path);

}  // namespace opprl
