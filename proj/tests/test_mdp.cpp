#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "opprl/environments.hpp"
#include "opprl/mdp.hpp"
#include "oracles.hpp"

using namespace opprl;

namespace {

// Random valid MDP with the given shape; rows drawn from a Dirichlet-ish
// uniform-gap construction, rewards in [0, 1].
FiniteHorizonMdp random_mdp(int S, int A, int H, RandomStream& rng,
                            double discount = 1.0) {
  std::vector<double> transitions(static_cast<std::size_t>(S) * A * S);
  std::vector<double> rewards(static_cast<std::size_t>(S) * A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      double sum = 0.0;
      const std::size_t base = (static_cast<std::size_t>(s) * A + a) * S;
      for (int n = 0; n < S; ++n) {
        transitions[base + n] = -std::log(rng.uniform_open01());
        sum += transitions[base + n];
      }
      for (int n = 0; n < S; ++n) transitions[base + n] /= sum;
      rewards[static_cast<std::size_t>(s) * A + a] = rng.uniform01();
    }
  }
  return build_mdp(S, A, H, std::move(transitions), std::move(rewards),
                   discount, 0, {});
}

}  // namespace

TEST_CASE("build_mdp accepts the identity case") {
  const auto mdp = build_mdp(1, 1, 3, {1.0}, {0.5}, 1.0, 0, {});
  CHECK(mdp.num_states == 1);
  CHECK(mdp.transition(0, 0, 0) == 1.0);
}

TEST_CASE("build_mdp rejects a bad row sum") {
  CHECK_THROWS_WITH_AS(build_mdp(1, 1, 1, {0.9}, {0.0}, 1.0, 0, {}),
                       doctest::Contains("row sum"), std::invalid_argument);
}

TEST_CASE("build_mdp rejects invalid terminal states") {
  // Nonzero reward on a terminal state.
  CHECK_THROWS_WITH_AS(
      build_mdp(2, 1, 1, {0.0, 1.0, 0.0, 1.0}, {0.0, 0.5}, 1.0, 0, {1}),
      doctest::Contains("terminal"), std::invalid_argument);
  // Terminal state that is not absorbing.
  CHECK_THROWS_WITH_AS(
      build_mdp(2, 1, 1, {0.0, 1.0, 1.0, 0.0}, {0.0, 0.0}, 1.0, 0, {1}),
      doctest::Contains("non-absorbing"), std::invalid_argument);
}

TEST_CASE("build_mdp rejects dimension mismatches") {
  CHECK_THROWS_WITH_AS(build_mdp(2, 1, 1, {1.0, 0.0}, {0.0, 0.0}, 1.0, 0, {}),
                       doctest::Contains("dimension"), std::invalid_argument);
}

TEST_CASE("optimal_values sums constant rewards on the trivial chain") {
  const auto mdp = build_mdp(1, 1, 3, {1.0}, {0.5}, 1.0, 0, {});
  const auto [values, policy] = optimal_values(mdp);
  CHECK(values.at(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(values.at(0, 3) == 0.0);
}

TEST_CASE("optimal_values solves the two-state advance chain") {
  // Action 0 stays (reward 0), action 1 advances with reward 1 from state 0.
  const std::vector<double> transitions{
      1, 0,  // s0 stay
      0, 1,  // s0 advance
      0, 1,  // s1 stay
      0, 1,  // s1 "advance" self-loop
  };
  const auto mdp =
      build_mdp(2, 2, 2, transitions, {0, 1, 0, 0}, 1.0, 0, {});
  const auto [values, policy] = optimal_values(mdp);
  CHECK(values.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  const auto oracle_values = oracle::enumerate_optimal_values(mdp);
  for (int h = 0; h < mdp.horizon; ++h)
    for (int s = 0; s < mdp.num_states; ++s)
      CHECK(values.at(s, h) ==
            doctest::Approx(oracle_values[h * mdp.num_states + s])
                .epsilon(1e-9));
}

TEST_CASE("optimal_values matches exhaustive policy enumeration") {
  RandomStream rng(20240901ull);
  for (int trial = 0; trial < 25; ++trial) {
    const int S = 2 + static_cast<int>(rng.uniform01() * 2);  // 2..3
    const int A = 2;
    const int H = 1 + static_cast<int>(rng.uniform01() * 3);  // 1..3
    const auto mdp = random_mdp(S, A, H, rng);
    const auto [values, policy] = optimal_values(mdp);
    const auto oracle_values = oracle::enumerate_optimal_values(mdp);
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s)
        CHECK(values.at(s, h) ==
              doctest::Approx(oracle_values[h * S + s]).epsilon(1e-9));
  }
}

TEST_CASE("optimal_values agrees with an independent DP on River Swim") {
  const auto mdp = river_swim();
  const auto [values, policy] = optimal_values(mdp);
  CHECK(values.at(mdp.start_state, 0) ==
        doctest::Approx(oracle::optimal_start_value_dp(mdp)).epsilon(1e-9));
}

TEST_CASE("optimal_values is monotone in the step for nonnegative rewards") {
  RandomStream rng(7ull);
  const auto mdp = random_mdp(3, 2, 4, rng);
  const auto [values, policy] = optimal_values(mdp);
  for (int h = 0; h < mdp.horizon; ++h)
    for (int s = 0; s < mdp.num_states; ++s)
      CHECK(values.at(s, h) >= values.at(s, h + 1) - 1e-12);
}

TEST_CASE("evaluate_policy reproduces the optimal values exactly") {
  RandomStream rng(99ull);
  const auto mdp = random_mdp(3, 2, 3, rng, 0.9);
  const auto [values, policy] = optimal_values(mdp);
  const auto evaluated = evaluate_policy(mdp, policy);
  for (std::size_t i = 0; i < values.values.size(); ++i)
    CHECK(evaluated.values[i] ==
          doctest::Approx(values.values[i]).epsilon(1e-12));
}

TEST_CASE("evaluate_policy: always-LEFT on River Swim earns H * 0.005") {
  const auto mdp = river_swim();
  Policy left(mdp.num_states, mdp.horizon);  // action 0 everywhere = LEFT
  const auto values = evaluate_policy(mdp, left);
  CHECK(values.at(mdp.start_state, 0) ==
        doctest::Approx(15 * 0.005).epsilon(1e-12));
}

TEST_CASE("evaluate_policy on a zero-reward MDP is identically zero") {
  const std::vector<double> transitions{0.5, 0.5, 0.2, 0.8,
                                        1.0, 0.0, 0.3, 0.7};
  const auto mdp =
      build_mdp(2, 2, 3, transitions, {0, 0, 0, 0}, 1.0, 0, {});
  Policy policy(2, 3);
  policy.action(0, 1) = 1;
  const auto values = evaluate_policy(mdp, policy);
  for (const double v : values.values) CHECK(v == 0.0);
}

TEST_CASE("step is deterministic on a point-mass row") {
  const std::vector<double> transitions{0, 1, 0, 1, 0, 1, 0, 1};
  const auto mdp =
      build_mdp(2, 2, 1, transitions, {0.25, 0, 0, 0}, 1.0, 0, {});
  RandomStream rng(5ull);
  for (int i = 0; i < 32; ++i) {
    const auto [next, reward] = step(mdp, 0, 0, rng);
    CHECK(next == 1);
    CHECK(reward == 0.25);  // reward table entry, not next-state dependent
  }
}

TEST_CASE("step matches the row frequencies on a fair coin") {
  const std::vector<double> transitions{0.5, 0.5, 0.5, 0.5};
  const auto mdp = build_mdp(2, 1, 1, transitions, {0, 0}, 1.0, 0, {});
  RandomStream rng(1234ull);
  const int draws = 100000;
  int zeros = 0;
  for (int i = 0; i < draws; ++i)
    if (step(mdp, 0, 0, rng).first == 0) ++zeros;
  CHECK(std::abs(zeros / static_cast<double>(draws) - 0.5) < 0.01);
}

TEST_CASE("step sampling passes a chi-square goodness-of-fit test") {
  RandomStream mdp_rng(31415ull);
  const auto mdp = random_mdp(4, 1, 1, mdp_rng);
  RandomStream rng(8888ull);
  const int draws = 100000;
  std::vector<int> observed(4, 0);
  for (int i = 0; i < draws; ++i) ++observed[step(mdp, 0, 0, rng).first];
  double statistic = 0.0;
  for (int n = 0; n < 4; ++n) {
    const double expected = draws * mdp.transition(0, 0, n);
    statistic += (observed[n] - expected) * (observed[n] - expected) /
                 expected;
  }
  CHECK(oracle::chi_square_p_value(statistic, 3) > 1e-3);
}

TEST_CASE("run_episode produces H chained steps from the start state") {
  const auto mdp = river_swim();
  Policy right(mdp.num_states, mdp.horizon);
  for (auto& a : right.actions) a = 1;
  RandomStream rng(42, StreamKind::transitions);
  const auto trajectory = run_episode(mdp, right, rng);
  REQUIRE(trajectory.size() == 15);
  CHECK(trajectory.front().state == mdp.start_state);
  for (std::size_t i = 0; i + 1 < trajectory.size(); ++i)
    CHECK(trajectory[i].next_state == trajectory[i + 1].state);
}

TEST_CASE("run_episode with H=1 yields a single step") {
  const auto mdp = build_mdp(1, 1, 1, {1.0}, {0.0}, 1.0, 0, {});
  RandomStream rng(1ull);
  CHECK(run_episode(mdp, Policy(1, 1), rng).size() == 1);
}

TEST_CASE("run_episode is seed-independent on a deterministic MDP") {
  const auto mdp = cliff_walking();
  const auto policy = optimal_values(mdp).second;
  RandomStream rng_a(1, StreamKind::transitions);
  RandomStream rng_b(999, StreamKind::transitions);
  const auto traj_a = run_episode(mdp, policy, rng_a);
  const auto traj_b = run_episode(mdp, policy, rng_b);
  REQUIRE(traj_a.size() == traj_b.size());
  for (std::size_t i = 0; i < traj_a.size(); ++i) {
    CHECK(traj_a[i].state == traj_b[i].state);
    CHECK(traj_a[i].action == traj_b[i].action);
    CHECK(traj_a[i].next_state == traj_b[i].next_state);
  }
}

TEST_CASE("optimal Cliff Walking rollout collects exactly -13") {
  const auto mdp = cliff_walking();
  const auto policy = optimal_values(mdp).second;
  RandomStream rng(3, StreamKind::transitions);
  const auto trajectory = run_episode(mdp, policy, rng);
  double total = 0.0;
  for (const auto& step : trajectory) total += step.reward;
  CHECK(total == doctest::Approx(-13.0).epsilon(1e-12));
}

TEST_CASE("trajectory reward sum matches the reward table recomputation") {
  const auto mdp = river_swim();
  const auto policy = optimal_values(mdp).second;
  RandomStream rng(77, StreamKind::transitions);
  const auto trajectory = run_episode(mdp, policy, rng);
  double from_steps = 0.0, from_table = 0.0;
  for (const auto& step : trajectory) {
    from_steps += step.reward;
    from_table += mdp.reward(step.state, step.action);
  }
  CHECK(from_steps == doctest::Approx(from_table).epsilon(1e-12));
}
