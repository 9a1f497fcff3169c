#include "opprl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace opprl {

namespace {

constexpr double kRowSumTolerance = 1e-9;

std::string pair_label(int s, int a) {
  return "(s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
}

}  // namespace

bool FiniteHorizonMdp::is_terminal(int s) const {
  return std::binary_search(terminal_states.begin(), terminal_states.end(), s);
}

FiniteHorizonMdp build_mdp(int num_states, int num_actions, int horizon,
                           std::vector<double> transitions,
                           std::vector<double> rewards, double discount,
                           int start_state, std::vector<int> terminal_states) {
  if (num_states <= 0 || num_actions <= 0 || horizon <= 0)
    throw std::invalid_argument("build_mdp: S, A and H must be positive");
  const auto s_count = static_cast<std::size_t>(num_states);
  const auto a_count = static_cast<std::size_t>(num_actions);
  if (transitions.size() != s_count * a_count * s_count)
    throw std::invalid_argument(
        "build_mdp: dimension mismatch in transition tensor");
  if (rewards.size() != s_count * a_count)
    throw std::invalid_argument("build_mdp: dimension mismatch in rewards");
  if (!(discount > 0.0) || discount > 1.0)
    throw std::invalid_argument("build_mdp: discount must lie in (0, 1]");
  if (start_state < 0 || start_state >= num_states)
    throw std::invalid_argument("build_mdp: start_state out of range");

  std::sort(terminal_states.begin(), terminal_states.end());
  terminal_states.erase(
      std::unique(terminal_states.begin(), terminal_states.end()),
      terminal_states.end());
  for (int t : terminal_states)
    if (t < 0 || t >= num_states)
      throw std::invalid_argument("build_mdp: terminal state out of range");

  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      double* row = transitions.data() +
                    (static_cast<std::size_t>(s) * num_actions + a) * s_count;
      double sum = 0.0;
      for (int next = 0; next < num_states; ++next) {
        if (row[next] < 0.0)
          throw std::invalid_argument("build_mdp: negative probability at " +
                                      pair_label(s, a));
        sum += row[next];
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance)
        throw std::invalid_argument("build_mdp: row sum " +
                                    std::to_string(sum) + " at " +
                                    pair_label(s, a));
      for (int next = 0; next < num_states; ++next) row[next] /= sum;
    }
  }

  for (int t : terminal_states) {
    for (int a = 0; a < num_actions; ++a) {
      double* row = transitions.data() +
                    (static_cast<std::size_t>(t) * num_actions + a) * s_count;
      if (row[t] < 1.0 - kRowSumTolerance)
        throw std::invalid_argument(
            "build_mdp: non-absorbing terminal state " + std::to_string(t));
      if (rewards[static_cast<std::size_t>(t) * num_actions + a] != 0.0)
        throw std::invalid_argument(
            "build_mdp: nonzero-reward terminal state " + std::to_string(t));
      std::fill(row, row + num_states, 0.0);
      row[t] = 1.0;
    }
  }

  FiniteHorizonMdp mdp;
  mdp.num_states = num_states;
  mdp.num_actions = num_actions;
  mdp.horizon = horizon;
  mdp.transitions = std::move(transitions);
  mdp.rewards = std::move(rewards);
  mdp.discount = discount;
  mdp.start_state = start_state;
  mdp.terminal_states = std::move(terminal_states);
  return mdp;
}

std::pair<ValueTable, Policy> optimal_values(const FiniteHorizonMdp& mdp) {
  ValueTable values(mdp.num_states, mdp.horizon);
  Policy policy(mdp.num_states, mdp.horizon);
  for (int h = mdp.horizon - 1; h >= 0; --h) {
    const double* next = values.values.data() +
                         static_cast<std::size_t>(h + 1) * mdp.num_states;
    for (int s = 0; s < mdp.num_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_action = 0;
      for (int a = 0; a < mdp.num_actions; ++a) {
        const auto row = mdp.transition_row(s, a);
        double expected = 0.0;
        for (int n = 0; n < mdp.num_states; ++n) expected += row[n] * next[n];
        const double q = mdp.reward(s, a) + mdp.discount * expected;
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      values.at(s, h) = best;
      policy.action(s, h) = best_action;
    }
  }
  return {std::move(values), std::move(policy)};
}

ValueTable evaluate_policy(const FiniteHorizonMdp& mdp, const Policy& policy) {
  if (policy.num_states != mdp.num_states || policy.horizon != mdp.horizon)
    throw std::invalid_argument("evaluate_policy: policy shape mismatch");
  ValueTable values(mdp.num_states, mdp.horizon);
  for (int h = mdp.horizon - 1; h >= 0; --h) {
    const double* next = values.values.data() +
                         static_cast<std::size_t>(h + 1) * mdp.num_states;
    for (int s = 0; s < mdp.num_states; ++s) {
      const int a = policy.action(s, h);
      if (a < 0 || a >= mdp.num_actions)
        throw std::invalid_argument("evaluate_policy: action out of range");
      const auto row = mdp.transition_row(s, a);
      double expected = 0.0;
      for (int n = 0; n < mdp.num_states; ++n) expected += row[n] * next[n];
      values.at(s, h) = mdp.reward(s, a) + mdp.discount * expected;
    }
  }
  return values;
}

std::pair<int, double> step(const FiniteHorizonMdp& mdp, int state, int action,
                            RandomStream& rng) {
  const auto row = mdp.transition_row(state, action);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  int last_support = 0;
  for (int next = 0; next < mdp.num_states; ++next) {
    if (row[next] <= 0.0) continue;
    last_support = next;
    cumulative += row[next];
    if (u < cumulative) return {next, mdp.reward(state, action)};
  }
  // Float residue can leave u barely at/above the accumulated mass.
  return {last_support, mdp.reward(state, action)};
}

Trajectory run_episode(const FiniteHorizonMdp& mdp, const Policy& policy,
                       RandomStream& rng) {
  Trajectory trajectory;
  trajectory.reserve(mdp.horizon);
  int state = mdp.start_state;
  for (int h = 0; h < mdp.horizon; ++h) {
    const int action = policy.action(state, h);
    const auto [next_state, reward] = step(mdp, state, action, rng);
    trajectory.push_back({state, action, reward, next_state});
    state = next_state;
  }
  return trajectory;
}

}  // namespace opprl
