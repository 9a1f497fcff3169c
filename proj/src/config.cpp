#include "opprl/config.hpp"

#include <charconv>
#include <fstream>

namespace opprl {

namespace {

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + text + "' in " + where);
  }
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  std::int64_t value = 0;
  const auto [ptr, err] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (err != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("invalid integer '" + text + "' in " + where);
  return value;
}

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t end = text.find(separator, begin);
    if (end == std::string::npos) {
      parts.push_back(text.substr(begin));
      return parts;
    }
    parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
}

VariationSettings finish_variation(const std::string& kind,
                                   std::map<std::string, double> keys,
                                   const std::string& where) {
  auto take = [&](const std::string& name, double fallback) {
    const auto it = keys.find(name);
    if (it == keys.end()) return fallback;
    const double value = it->second;
    keys.erase(it);
    return value;
  };

  VariationSettings settings;
  std::optional<double> l_min, l_max;
  if (keys.count("l_min")) l_min = take("l_min", 0.0);
  if (keys.count("l_max")) l_max = take("l_max", 0.0);
  settings.threshold_rho = take("threshold_rho", 0.05);

  try {
    if (kind == "binary") {
      settings.process = VariationProcess::binary(
          take("eps0", 0.0), take("eps1", 0.0), take("rho", 0.5));
    } else if (kind == "square") {
      settings.process =
          VariationProcess::square_wave(take("eps0", 0.0), take("eps1", 0.0));
    } else if (kind == "beta") {
      settings.process =
          VariationProcess::beta(take("alpha", 2.0), take("beta", 2.0));
    } else if (kind == "constant") {
      settings.process = VariationProcess::constant(take("value", 1.0));
    } else {
      throw ConfigError("unknown variation.kind '" + kind + "' in " + where);
    }
  } catch (const std::invalid_argument& error) {
    throw ConfigError(std::string(error.what()) + " in " + where);
  }

  if (!keys.empty())
    throw ConfigError("unknown variation key '" + keys.begin()->first +
                      "' in " + where);
  if (l_min.has_value() != l_max.has_value())
    throw ConfigError("variation.l_min and variation.l_max must be set "
                      "together in " +
                      where);
  if (l_min) {
    if (!(*l_min < *l_max))
      throw ConfigError("variation.l_min must be < variation.l_max in " +
                        where);
    settings.thresholds = make_thresholds(*l_min, *l_max);
  }
  return settings;
}

}  // namespace

VariationSettings parse_variation_spec(const std::string& spec) {
  const std::string where = "--variation '" + spec + "'";
  const std::size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> keys;
  if (colon != std::string::npos && colon + 1 < spec.size()) {
    for (const auto& item : split(spec.substr(colon + 1), ',')) {
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw ConfigError("expected key=value, got '" + item + "' in " +
                          where);
      keys[item.substr(0, eq)] = parse_double(item.substr(eq + 1), where);
    }
  }
  return finish_variation(kind, std::move(keys), where);
}

std::vector<std::int64_t> parse_seed_list(const std::string& spec) {
  const std::string where = "--seeds '" + spec + "'";
  std::vector<std::int64_t> seeds;
  for (const auto& token : split(spec, ',')) {
    const std::size_t dots = token.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(parse_int(token, where));
      continue;
    }
    const std::int64_t first = parse_int(token.substr(0, dots), where);
    const std::int64_t last = parse_int(token.substr(dots + 2), where);
    if (last < first)
      throw ConfigError("descending range '" + token + "' in " + where);
    for (std::int64_t seed = first; seed <= last; ++seed)
      seeds.push_back(seed);
  }
  if (seeds.empty()) throw ConfigError("empty seed list in " + where);
  return seeds;
}

namespace {

using nlohmann::json;

double require_number(const json& value, const std::string& key) {
  if (!value.is_number())
    throw ConfigError("config key '" + key + "' must be a number");
  return value.get<double>();
}

}  // namespace

ExperimentConfig config_from_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig config;

  if (!root.contains("environment"))
    throw ConfigError("missing config key 'environment'");
  try {
    config.environment =
        parse_environment(root.at("environment").get<std::string>());
  } catch (const std::exception& error) {
    throw ConfigError(std::string("config key 'environment': ") +
                      error.what());
  }

  const json agent = root.value("agent", json::object());
  if (!agent.contains("kind"))
    throw ConfigError("missing config key 'agent.kind'");
  try {
    config.agent = parse_agent(agent.at("kind").get<std::string>());
  } catch (const std::exception& error) {
    throw ConfigError(std::string("config key 'agent.kind': ") +
                      error.what());
  }
  for (const auto& [key, value] : agent.items()) {
    if (key == "kind") continue;
    if (key == "delta") config.delta = require_number(value, "agent.delta");
    else if (key == "scale")
      config.scale = require_number(value, "agent.scale");
    else if (key == "prior_value")
      config.prior_value = require_number(value, "agent.prior_value");
    else if (key == "alpha_floor")
      config.alpha_floor = require_number(value, "agent.alpha_floor");
    else
      throw ConfigError("unknown config key 'agent." + key + "'");
  }

  if (root.contains("variation")) {
    const json& variation = root.at("variation");
    if (!variation.is_object() || !variation.contains("kind"))
      throw ConfigError("config key 'variation' must carry a kind");
    std::map<std::string, double> keys;
    for (const auto& [key, value] : variation.items()) {
      if (key == "kind") continue;
      keys[key] = require_number(value, "variation." + key);
    }
    VariationSettings settings = finish_variation(
        variation.at("kind").get<std::string>(), std::move(keys),
        "config key 'variation'");
    config.variation = settings.process;
    config.thresholds = settings.thresholds;
    config.threshold_rho = settings.threshold_rho;
  }

  if (root.contains("episodes")) {
    const double episodes = require_number(root.at("episodes"), "episodes");
    config.num_episodes = static_cast<int>(episodes);
    if (config.num_episodes < 1)
      throw ConfigError("config key 'episodes' must be >= 1");
  }

  if (!root.contains("seeds")) throw ConfigError("missing config key 'seeds'");
  const json& seeds = root.at("seeds");
  if (seeds.is_string()) {
    config.seeds = parse_seed_list(seeds.get<std::string>());
  } else if (seeds.is_array()) {
    for (const auto& seed : seeds) {
      if (!seed.is_number_integer())
        throw ConfigError("config key 'seeds' must hold integers");
      config.seeds.push_back(seed.get<std::int64_t>());
    }
    if (config.seeds.empty())
      throw ConfigError("config key 'seeds' must not be empty");
  } else {
    throw ConfigError("config key 'seeds' must be a list or range string");
  }

  if (root.contains("out"))
    config.output_dir = root.at("out").get<std::string>();
  if (root.contains("jobs"))
    config.jobs = static_cast<int>(require_number(root.at("jobs"), "jobs"));

  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (key != "environment" && key != "agent" && key != "variation" &&
        key != "episodes" && key != "seeds" && key != "out" && key != "jobs")
      throw ConfigError("unknown config key '" + key + "'");
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& error) {
    throw ConfigError("config file " + path + ": " + error.what());
  }
  return config_from_json(root);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  json agent{{"kind", agent_name(config.agent)},
             {"delta", config.delta},
             {"scale", config.scale},
             {"prior_value", config.prior_value},
             {"alpha_floor", config.alpha_floor}};

  json variation;
  switch (config.variation.kind) {
    case VariationKind::binary_iid:
      variation = {{"kind", "binary"},
                   {"eps0", config.variation.eps0},
                   {"eps1", config.variation.eps1},
                   {"rho", config.variation.rho}};
      break;
    case VariationKind::periodic_square_wave:
      variation = {{"kind", "square"},
                   {"eps0", config.variation.eps0},
                   {"eps1", config.variation.eps1}};
      break;
    case VariationKind::beta_iid:
      variation = {{"kind", "beta"},
                   {"alpha", config.variation.beta_alpha},
                   {"beta", config.variation.beta_beta},
                   {"threshold_rho", config.threshold_rho}};
      break;
    case VariationKind::constant:
      variation = {{"kind", "constant"}, {"value", config.variation.value}};
      break;
  }
  if (config.thresholds) {
    variation["l_min"] = config.thresholds->l_min;
    variation["l_max"] = config.thresholds->l_max;
  }

  return json{{"environment", environment_name(config.environment)},
              {"agent", agent},
              {"variation", variation},
              {"episodes", config.num_episodes},
              {"seeds", config.seeds},
              {"out", config.output_dir},
              {"jobs", config.jobs}};
}

std::map<std::string, std::vector<double>> load_grid_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& error) {
    throw ConfigError("grid file " + path + ": " + error.what());
  }
  if (!root.is_object() || root.empty())
    throw ConfigError("grid file must be a non-empty JSON object");
  std::map<std::string, std::vector<double>> grid;
  for (const auto& [key, values] : root.items()) {
    if (!values.is_array() || values.empty())
      throw ConfigError("grid key '" + key +
                        "' must map to a non-empty array");
    for (const auto& value : values) {
      if (!value.is_number())
        throw ConfigError("grid key '" + key + "' holds a non-number");
      grid[key].push_back(value.get<double>());
    }
  }
  return grid;
}

}  // namespace opprl
