#pragma once

#include <string>

#include "opprl/mdp.hpp"

namespace opprl {

enum class EnvironmentId {
  river_swim,
  cliff_walking,
  frozen_lake,
};

/// Parses one of "river_swim", "cliff_walking", "frozen_lake".
EnvironmentId parse_environment(const std::string& name);
std::string environment_name(EnvironmentId id);
FiniteHorizonMdp make_environment(EnvironmentId id);

/// Six-state chain, A = {LEFT, RIGHT}, H = 15, undiscounted. LEFT always
/// succeeds and pays 0.005 at the leftmost state; RIGHT fights the current
/// (interior: 0.35 right / 0.60 stay / 0.05 left) and pays 1.0 at the
/// rightmost state.
FiniteHorizonMdp river_swim();

/// 4x12 grid, A = {UP, DOWN, RIGHT, LEFT}, H = 50, undiscounted,
/// deterministic moves with off-grid clamping. Every move costs -1 except
/// stepping into the cliff (bottom row between start and goal), which costs
/// -100 and teleports back to the start. The goal cell is terminal.
FiniteHorizonMdp cliff_walking();

/// Standard 4x4 lake, A = {UP, DOWN, RIGHT, LEFT}, H = 20, discount 0.95,
/// deterministic moves. Entering the goal pays +1, entering a hole pays -1;
/// both are terminal.
FiniteHorizonMdp frozen_lake();

}  // namespace opprl
