#include "opprl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace opprl {

void TransitionCounts::record(const Trajectory& trajectory) {
  for (const auto& step : trajectory) {
    pair_counts[static_cast<std::size_t>(step.state) * num_actions +
                step.action] += 1;
    triple_counts[(static_cast<std::size_t>(step.state) * num_actions +
                   step.action) *
                      num_states +
                  step.next_state] += 1;
  }
}

DirichletPosterior::DirichletPosterior(int num_states_, int num_actions_,
                                       double prior)
    : num_states(num_states_),
      num_actions(num_actions_),
      concentration(static_cast<std::size_t>(num_states_) * num_actions_ *
                        num_states_,
                    prior),
      prior_value(prior) {
  if (!(prior > 0.0))
    throw std::invalid_argument("DirichletPosterior: prior must be > 0");
}

void DirichletPosterior::update(const Trajectory& trajectory) {
  for (const auto& step : trajectory) {
    concentration[(static_cast<std::size_t>(step.state) * num_actions +
                   step.action) *
                      num_states +
                  step.next_state] += 1.0;
  }
}

std::vector<double> empirical_transitions(const TransitionCounts& counts) {
  const int S = counts.num_states;
  const int A = counts.num_actions;
  std::vector<double> p_hat(static_cast<std::size_t>(S) * A * S);
  const double uniform = 1.0 / S;
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const std::size_t base = (static_cast<std::size_t>(s) * A + a) * S;
      const std::int64_t n = counts.pair(s, a);
      if (n == 0) {
        std::fill_n(p_hat.begin() + base, S, uniform);
      } else {
        for (int next = 0; next < S; ++next)
          p_hat[base + next] =
              static_cast<double>(counts.triple(s, a, next)) / n;
      }
    }
  }
  return p_hat;
}

double confidence_width(std::int64_t visit_count, int num_states,
                        int num_actions, std::int64_t episode_start_time,
                        double delta, double normalized_variation,
                        double scale) {
  // t_k = 0 in the first episode would make the log undefined; flooring at 1
  // keeps it positive since 2SA/delta >= 4.
  const double t = static_cast<double>(std::max<std::int64_t>(
      episode_start_time, 1));
  const double n =
      static_cast<double>(std::max<std::int64_t>(visit_count, 1));
  const double log_term =
      std::log(2.0 * num_states * num_actions * t / delta);
  return scale * std::sqrt(2.0 * num_states * (1.0 - normalized_variation) *
                           log_term / n);
}

void inner_max_probability(std::span<const double> p_hat_row, double width,
                           std::span<const int> descending_value_order,
                           std::span<double> out) {
  const int S = static_cast<int>(p_hat_row.size());
  const int best = descending_value_order[0];
  std::copy(p_hat_row.begin(), p_hat_row.end(), out.begin());
  out[best] = std::min(1.0, p_hat_row[best] + width / 2.0);
  double sum = 1.0 - p_hat_row[best] + out[best];
  for (int j = S - 1; j >= 1 && sum > 1.0; --j) {
    const int state = descending_value_order[j];
    const double reduced = std::max(0.0, 1.0 - (sum - out[state]));
    sum -= out[state] - reduced;
    out[state] = reduced;
  }
}

EviResult extended_value_iteration(const std::vector<double>& p_hat,
                                   const std::vector<double>& widths,
                                   const MdpShape& shape) {
  const int S = shape.num_states;
  const int A = shape.num_actions;
  const int H = shape.horizon;

  EviResult result;
  result.optimistic_transitions.assign(static_cast<std::size_t>(S) * A * S,
                                       0.0);
  result.policy = Policy(S, H);
  result.values = ValueTable(S, H);

  std::vector<int> order(S);
  for (int h = H - 1; h >= 0; --h) {
    const double* next = result.values.values.data() +
                         static_cast<std::size_t>(h + 1) * S;
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      return next[i] > next[j] || (next[i] == next[j] && i < j);
    });
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_action = 0;
      for (int a = 0; a < A; ++a) {
        const std::size_t base = (static_cast<std::size_t>(s) * A + a) * S;
        const std::span<double> row{
            result.optimistic_transitions.data() + base,
            static_cast<std::size_t>(S)};
        inner_max_probability({p_hat.data() + base,
                               static_cast<std::size_t>(S)},
                              widths[static_cast<std::size_t>(s) * A + a],
                              order, row);
        double expected = 0.0;
        for (int n = 0; n < S; ++n) expected += row[n] * next[n];
        const double q = shape.reward(s, a) + shape.discount * expected;
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      result.values.at(s, h) = best;
      result.policy.action(s, h) = best_action;
    }
  }
  // The rows left in optimistic_transitions are the ones from the final
  // (h = 0) pass; only the policy matters downstream.
  return result;
}

Policy opp_ucrl2_plan(const TransitionCounts& counts,
                      double normalized_variation, int episode_index,
                      const MdpShape& shape, const OfuConfig& config) {
  const int S = shape.num_states;
  const int A = shape.num_actions;
  const std::int64_t t_k =
      static_cast<std::int64_t>(shape.horizon) * (episode_index - 1);
  const double modulation = config.opportunistic ? normalized_variation : 0.0;

  const std::vector<double> p_hat = empirical_transitions(counts);
  std::vector<double> widths(static_cast<std::size_t>(S) * A);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      widths[static_cast<std::size_t>(s) * A + a] =
          confidence_width(counts.pair(s, a), S, A, t_k, config.delta,
                           modulation, config.scale);

  return extended_value_iteration(p_hat, widths, shape).policy;
}

void sample_dirichlet_row(std::span<const double> alpha, RandomStream& rng,
                          std::span<double> out) {
  const int S = static_cast<int>(alpha.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < S; ++i) {
    out[i] = rng.log_gamma(alpha[i]);
    max_log = std::max(max_log, out[i]);
  }
  double sum = 0.0;
  for (int i = 0; i < S; ++i) {
    out[i] = std::exp(out[i] - max_log);
    sum += out[i];
  }
  for (int i = 0; i < S; ++i) out[i] /= sum;
}

Policy opp_psrl_plan(const DirichletPosterior& posterior,
                     double normalized_variation, const PsrlConfig& config,
                     const MdpShape& shape, RandomStream& rng) {
  const int S = shape.num_states;
  const int A = shape.num_actions;

  std::vector<double> transitions(static_cast<std::size_t>(S) * A * S);
  std::vector<double> scaled(S);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      const auto alpha = posterior.row(s, a);
      for (int next = 0; next < S; ++next) {
        scaled[next] =
            config.opportunistic
                ? std::max(normalized_variation * alpha[next],
                           config.alpha_floor)
                : alpha[next];
      }
      const std::size_t base = (static_cast<std::size_t>(s) * A + a) * S;
      sample_dirichlet_row(scaled, rng,
                           {transitions.data() + base,
                            static_cast<std::size_t>(S)});
    }
  }

  FiniteHorizonMdp sampled;
  sampled.num_states = S;
  sampled.num_actions = A;
  sampled.horizon = shape.horizon;
  sampled.transitions = std::move(transitions);
  sampled.rewards = shape.rewards;
  sampled.discount = shape.discount;
  sampled.start_state = 0;
  return optimal_values(sampled).second;
}

AgentKind parse_agent(const std::string& name) {
  if (name == "ucrl2") return AgentKind::ucrl2;
  if (name == "opp_ucrl2") return AgentKind::opp_ucrl2;
  if (name == "psrl") return AgentKind::psrl;
  if (name == "opp_psrl") return AgentKind::opp_psrl;
  throw std::invalid_argument("unknown agent: " + name);
}

std::string agent_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::ucrl2: return "ucrl2";
    case AgentKind::opp_ucrl2: return "opp_ucrl2";
    case AgentKind::psrl: return "psrl";
    case AgentKind::opp_psrl: return "opp_psrl";
  }
  throw std::invalid_argument("unknown agent kind");
}

bool is_opportunistic(AgentKind kind) {
  return kind == AgentKind::opp_ucrl2 || kind == AgentKind::opp_psrl;
}

bool is_psrl_family(AgentKind kind) {
  return kind == AgentKind::psrl || kind == AgentKind::opp_psrl;
}

namespace {

class OfuAgent final : public EpisodicAgent {
public:
  OfuAgent(MdpShape shape, OfuConfig config)
      : shape_(std::move(shape)),
        config_(config),
        counts_(shape_.num_states, shape_.num_actions) {
    if (!(config_.delta > 0.0) || config_.delta > 1.0)
      throw std::invalid_argument("OfuAgent: delta must lie in (0, 1]");
    if (!(config_.scale > 0.0))
      throw std::invalid_argument("OfuAgent: scale must be > 0");
  }

  Policy plan(int episode_index, double normalized_variation) override {
    return opp_ucrl2_plan(counts_, normalized_variation, episode_index,
                          shape_, config_);
  }

  void observe(const Trajectory& trajectory) override {
    counts_.record(trajectory);
  }

private:
  MdpShape shape_;
  OfuConfig config_;
  TransitionCounts counts_;
};

class PsrlAgent final : public EpisodicAgent {
public:
  PsrlAgent(MdpShape shape, PsrlConfig config, RandomStream* rng)
      : shape_(std::move(shape)),
        config_(config),
        posterior_(shape_.num_states, shape_.num_actions, config.prior_value),
        rng_(rng) {
    if (rng_ == nullptr)
      throw std::invalid_argument("PsrlAgent: rng is required");
    if (!(config_.alpha_floor > 0.0))
      throw std::invalid_argument("PsrlAgent: alpha_floor must be > 0");
  }

  Policy plan(int, double normalized_variation) override {
    return opp_psrl_plan(posterior_, normalized_variation, config_, shape_,
                         *rng_);
  }

  void observe(const Trajectory& trajectory) override {
    posterior_.update(trajectory);
  }

private:
  MdpShape shape_;
  PsrlConfig config_;
  DirichletPosterior posterior_;
  RandomStream* rng_;
};

}  // namespace

std::unique_ptr<EpisodicAgent> make_agent(AgentKind kind,
                                          const MdpShape& shape,
                                          const OfuConfig& ofu,
                                          const PsrlConfig& psrl,
                                          RandomStream* agent_rng) {
  if (is_psrl_family(kind)) {
    PsrlConfig config = psrl;
    config.opportunistic = is_opportunistic(kind);
    return std::make_unique<PsrlAgent>(shape, config, agent_rng);
  }
  OfuConfig config = ofu;
  config.opportunistic = is_opportunistic(kind);
  return std::make_unique<OfuAgent>(shape, config);
}

}  // namespace opprl
