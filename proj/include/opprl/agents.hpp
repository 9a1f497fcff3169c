#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "opprl/mdp.hpp"
#include "opprl/rng.hpp"

namespace opprl {

/// What an agent knows about the environment: dimensions, the reward table
/// and the discount. The transition tensor is deliberately absent.
struct MdpShape {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> rewards;  ///< (s, a)
  double discount = 1.0;

  static MdpShape of(const FiniteHorizonMdp& mdp) {
    return {mdp.num_states, mdp.num_actions, mdp.horizon, mdp.rewards,
            mdp.discount};
  }
  double reward(int s, int a) const {
    return rewards[static_cast<std::size_t>(s) * num_actions + a];
  }
};

/// Visit counts N(s,a) and N(s,a,s'), the shared sufficient statistic of
/// both agent families. Invariant: N(s,a) = sum_s' N(s,a,s').
struct TransitionCounts {
  int num_states = 0;
  int num_actions = 0;
  std::vector<std::int64_t> pair_counts;    ///< (s, a)
  std::vector<std::int64_t> triple_counts;  ///< (s, a, s')

  TransitionCounts() = default;
  TransitionCounts(int num_states_, int num_actions_)
      : num_states(num_states_),
        num_actions(num_actions_),
        pair_counts(static_cast<std::size_t>(num_states_) * num_actions_, 0),
        triple_counts(static_cast<std::size_t>(num_states_) * num_actions_ *
                          num_states_,
                      0) {}

  std::int64_t pair(int s, int a) const {
    return pair_counts[static_cast<std::size_t>(s) * num_actions + a];
  }
  std::int64_t triple(int s, int a, int next) const {
    return triple_counts[(static_cast<std::size_t>(s) * num_actions + a) *
                             num_states +
                         next];
  }

  /// Increments both tables for every step of the trajectory.
  void record(const Trajectory& trajectory);
};

/// UCRL2 / OppUCRL2 parameters. The scale multiplies the confidence width
/// (the experimentally chosen scaling factor); opportunistic toggles the
/// variation-factor modulation.
struct OfuConfig {
  double delta = 0.05;
  double scale = 1.0;
  bool opportunistic = false;
};

/// Per-(s,a) Dirichlet posterior over transition rows, concentration
/// alpha(s,a,s') starting from a uniform prior.
struct DirichletPosterior {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> concentration;  ///< (s, a, s')
  double prior_value = 1.0;

  DirichletPosterior() = default;
  DirichletPosterior(int num_states_, int num_actions_, double prior);

  std::span<const double> row(int s, int a) const {
    return {concentration.data() +
                (static_cast<std::size_t>(s) * num_actions + a) * num_states,
            static_cast<std::size_t>(num_states)};
  }

  /// Conjugate update: alpha(s,a,s') += 1 per observed transition. Applies
  /// to the unscaled posterior; episode scaling is transient.
  void update(const Trajectory& trajectory);
};

/// PSRL / OppPSRL parameters. alpha_floor keeps the scaled concentration a
/// valid Dirichlet parameter when the normalized variation factor is 0.
struct PsrlConfig {
  double prior_value = 1.0;
  double alpha_floor = 1e-3;
  bool opportunistic = false;
};

/// Empirical transition tensor: N(s,a,s')/N(s,a), with unvisited (s,a) rows
/// set uniform.
std::vector<double> empirical_transitions(const TransitionCounts& counts);

/// Variation-modulated L1 confidence width
///   scale * sqrt(2 S (1 - L~) log(2 S A max(t_k,1) / delta) / max(1, n)).
/// At L~ = 1 the width is 0; at L~ = 0 it is the plain UCRL2 width.
double confidence_width(std::int64_t visit_count, int num_states,
                        int num_actions, std::int64_t episode_start_time,
                        double delta, double normalized_variation,
                        double scale);

/// Optimistic row within the L1 ball of radius width around p_hat: raises
/// the best-value state by width/2 (capped at 1), then strips mass from the
/// worst-value states until the row is a distribution again.
/// descending_value_order lists states from highest to lowest next-step
/// value; out receives the row.
void inner_max_probability(std::span<const double> p_hat_row, double width,
                           std::span<const int> descending_value_order,
                           std::span<double> out);

struct EviResult {
  std::vector<double> optimistic_transitions;  ///< rows built at step h = 0
  Policy policy;
  ValueTable values;
};

/// Finite-horizon extended value iteration: one backward pass where every
/// backup maximizes the expected next-step value over the L1-constrained
/// simplex. widths is the per-(s,a) ball radius table. Value ties in the
/// state ordering and action argmax break toward the lowest index.
EviResult extended_value_iteration(const std::vector<double>& p_hat,
                                   const std::vector<double>& widths,
                                   const MdpShape& shape);

/// One OppUCRL2 planning step (UCRL2 when config.opportunistic is false, in
/// which case the normalized variation is ignored): empirical model,
/// confidence widths at t_k = H (k - 1), extended value iteration.
Policy opp_ucrl2_plan(const TransitionCounts& counts,
                      double normalized_variation, int episode_index,
                      const MdpShape& shape, const OfuConfig& config);

/// Samples a probability row from Dirichlet(alpha) using one gamma draw per
/// component in ascending state order (carried in log space so that tiny
/// concentrations cannot underflow the normalization).
void sample_dirichlet_row(std::span<const double> alpha, RandomStream& rng,
                          std::span<double> out);

/// One OppPSRL planning step: scale the concentration to
/// max(L~ * alpha, alpha_floor) when opportunistic (leave it untouched
/// otherwise), sample an MDP from the scaled posterior, and act greedily on
/// its exact solution.
Policy opp_psrl_plan(const DirichletPosterior& posterior,
                     double normalized_variation, const PsrlConfig& config,
                     const MdpShape& shape, RandomStream& rng);

enum class AgentKind {
  ucrl2,
  opp_ucrl2,
  psrl,
  opp_psrl,
};

AgentKind parse_agent(const std::string& name);
std::string agent_name(AgentKind kind);
bool is_opportunistic(AgentKind kind);
bool is_psrl_family(AgentKind kind);

/// Uniform episodic contract: observe the normalized variation factor, emit
/// a policy, ingest the resulting trajectory.
class EpisodicAgent {
public:
  virtual ~EpisodicAgent() = default;
  virtual Policy plan(int episode_index, double normalized_variation) = 0;
  virtual void observe(const Trajectory& trajectory) = 0;
};

/// Builds one of the four agents. The rng is only used by the PSRL family
/// and must outlive the agent.
std::unique_ptr<EpisodicAgent> make_agent(AgentKind kind,
                                          const MdpShape& shape,
                                          const OfuConfig& ofu,
                                          const PsrlConfig& psrl,
                                          RandomStream* agent_rng);

}  // namespace opprl
