#pragma once

#include <span>
#include <utility>
#include <vector>

#include "opprl/rng.hpp"

namespace opprl {

/// Tabular episodic MDP with a fixed horizon H, known deterministic rewards
/// r(s, a) and an optional set of absorbing terminal states. Early episode
/// termination (goal reached, agent fell in a hole) is modeled by terminal
/// states that self-loop with zero reward, so every episode has exactly H
/// steps. Immutable after construction; build with build_mdp().
struct FiniteHorizonMdp {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> transitions;  ///< (s, a, s') row-major, each row a simplex
  std::vector<double> rewards;      ///< (s, a)
  double discount = 1.0;
  int start_state = 0;
  std::vector<int> terminal_states;  ///< sorted, absorbing, zero reward

  double transition(int s, int a, int next) const {
    return transitions[(static_cast<std::size_t>(s) * num_actions + a) *
                           num_states +
                       next];
  }
  std::span<const double> transition_row(int s, int a) const {
    return {transitions.data() +
                (static_cast<std::size_t>(s) * num_actions + a) * num_states,
            static_cast<std::size_t>(num_states)};
  }
  double reward(int s, int a) const {
    return rewards[static_cast<std::size_t>(s) * num_actions + a];
  }
  bool is_terminal(int s) const;
};

/// Deterministic nonstationary policy: an action per (state, step) for steps
/// 0..H-1.
struct Policy {
  int num_states = 0;
  int horizon = 0;
  std::vector<int> actions;  ///< (step, state) row-major

  Policy() = default;
  Policy(int num_states_, int horizon_)
      : num_states(num_states_),
        horizon(horizon_),
        actions(static_cast<std::size_t>(num_states_) * horizon_, 0) {}

  int action(int s, int h) const {
    return actions[static_cast<std::size_t>(h) * num_states + s];
  }
  int& action(int s, int h) {
    return actions[static_cast<std::size_t>(h) * num_states + s];
  }

  bool operator==(const Policy&) const = default;
};

/// State values per step for steps 0..H; the row at step H is identically 0.
struct ValueTable {
  int num_states = 0;
  int horizon = 0;
  std::vector<double> values;  ///< (step, state) row-major, (H+1) x S

  ValueTable() = default;
  ValueTable(int num_states_, int horizon_)
      : num_states(num_states_),
        horizon(horizon_),
        values(static_cast<std::size_t>(num_states_) * (horizon_ + 1), 0.0) {}

  double at(int s, int h) const {
    return values[static_cast<std::size_t>(h) * num_states + s];
  }
  double& at(int s, int h) {
    return values[static_cast<std::size_t>(h) * num_states + s];
  }

  bool operator==(const ValueTable&) const = default;
};

struct TrajectoryStep {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
};

/// One episode: exactly H chained steps starting from the start state.
using Trajectory = std::vector<TrajectoryStep>;

/// Validates raw tables and assembles a model. Transition rows must be
/// nonnegative and sum to 1 within 1e-9 (they are renormalized exactly);
/// terminal states must be absorbing with zero reward. Throws
/// std::invalid_argument naming the violated constraint.
FiniteHorizonMdp build_mdp(int num_states, int num_actions, int horizon,
                           std::vector<double> transitions,
                           std::vector<double> rewards, double discount,
                           int start_state, std::vector<int> terminal_states);

/// Exact optimal values and a greedy optimal policy by backward induction:
/// Q_h(s,a) = r(s,a) + discount * sum_s' P(s'|s,a) V_{h+1}(s'). Argmax ties
/// break toward the lowest action index.
std::pair<ValueTable, Policy> optimal_values(const FiniteHorizonMdp& mdp);

/// Exact V^pi by backward induction (no Monte Carlo), same discounting as
/// optimal_values.
ValueTable evaluate_policy(const FiniteHorizonMdp& mdp, const Policy& policy);

/// Samples one transition. The next state is drawn by inverse-CDF sampling
/// over P(.|s,a) in ascending state order; the reward is the table entry
/// r(s,a) independent of the sampled next state.
std::pair<int, double> step(const FiniteHorizonMdp& mdp, int state, int action,
                            RandomStream& rng);

/// Rolls the policy out for exactly H steps from the start state.
Trajectory run_episode(const FiniteHorizonMdp& mdp, const Policy& policy,
                       RandomStream& rng);

}  // namespace opprl
