#include "opprl/environments.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace opprl {

namespace {

// Shared action encoding for both grid environments.
enum GridAction { kUp = 0, kDown = 1, kRight = 2, kLeft = 3 };

struct GridShape {
  int rows;
  int cols;

  int cell(int row, int col) const { return row * cols + col; }

  int move(int from, int action) const {
    int row = from / cols;
    int col = from % cols;
    switch (action) {
      case kUp: row = std::max(row - 1, 0); break;
      case kDown: row = std::min(row + 1, rows - 1); break;
      case kRight: col = std::min(col + 1, cols - 1); break;
      case kLeft: col = std::max(col - 1, 0); break;
      default: throw std::invalid_argument("unknown grid action");
    }
    return cell(row, col);
  }
};

}  // namespace

EnvironmentId parse_environment(const std::string& name) {
  if (name == "river_swim") return EnvironmentId::river_swim;
  if (name == "cliff_walking") return EnvironmentId::cliff_walking;
  if (name == "frozen_lake") return EnvironmentId::frozen_lake;
  throw std::invalid_argument("unknown environment: " + name);
}

std::string environment_name(EnvironmentId id) {
  switch (id) {
    case EnvironmentId::river_swim: return "river_swim";
    case EnvironmentId::cliff_walking: return "cliff_walking";
    case EnvironmentId::frozen_lake: return "frozen_lake";
  }
  throw std::invalid_argument("unknown environment id");
}

FiniteHorizonMdp make_environment(EnvironmentId id) {
  switch (id) {
    case EnvironmentId::river_swim: return river_swim();
    case EnvironmentId::cliff_walking: return cliff_walking();
    case EnvironmentId::frozen_lake: return frozen_lake();
  }
  throw std::invalid_argument("unknown environment id");
}

FiniteHorizonMdp river_swim() {
  constexpr int kStates = 6;
  constexpr int kActions = 2;
  constexpr int kHorizon = 15;
  constexpr int kLeftAction = 0;
  constexpr int kRightAction = 1;
  // Chain parameters: RIGHT succeeds with 0.35 in the interior, holds
  // position with 0.60, and slips back with the remainder. One edit away for
  // variants.
  constexpr double kRightSuccess = 0.35;
  constexpr double kRightStay = 0.60;
  constexpr double kRightSlip = 0.05;
  constexpr double kLeftReward = 0.005;
  constexpr double kRightReward = 1.0;

  std::vector<double> transitions(kStates * kActions * kStates, 0.0);
  std::vector<double> rewards(kStates * kActions, 0.0);
  auto at = [&](int s, int a, int next) -> double& {
    return transitions[(static_cast<std::size_t>(s) * kActions + a) * kStates +
                       next];
  };

  for (int s = 0; s < kStates; ++s) {
    at(s, kLeftAction, std::max(s - 1, 0)) = 1.0;
    if (s == 0) {
      at(s, kRightAction, 1) = 1.0 - kRightStay;
      at(s, kRightAction, 0) = kRightStay;
    } else if (s == kStates - 1) {
      at(s, kRightAction, s) = kRightStay;
      at(s, kRightAction, s - 1) = 1.0 - kRightStay;
    } else {
      at(s, kRightAction, s + 1) = kRightSuccess;
      at(s, kRightAction, s) = kRightStay;
      at(s, kRightAction, s - 1) = kRightSlip;
    }
  }
  rewards[0 * kActions + kLeftAction] = kLeftReward;
  rewards[(kStates - 1) * kActions + kRightAction] = kRightReward;

  return build_mdp(kStates, kActions, kHorizon, std::move(transitions),
                   std::move(rewards), 1.0, 0, {});
}

FiniteHorizonMdp cliff_walking() {
  constexpr GridShape kGrid{4, 12};
  constexpr int kStates = 48;
  constexpr int kActions = 4;
  constexpr int kHorizon = 50;
  const int start = kGrid.cell(3, 0);
  const int goal = kGrid.cell(3, 11);
  auto is_cliff = [&](int cell) {
    return cell / kGrid.cols == 3 && cell % kGrid.cols >= 1 &&
           cell % kGrid.cols <= 10;
  };

  std::vector<double> transitions(kStates * kActions * kStates, 0.0);
  std::vector<double> rewards(kStates * kActions, 0.0);
  for (int s = 0; s < kStates; ++s) {
    for (int a = 0; a < kActions; ++a) {
      const std::size_t pair = static_cast<std::size_t>(s) * kActions + a;
      if (s == goal) {
        transitions[pair * kStates + s] = 1.0;
        continue;
      }
      // Agents can never occupy a cliff cell (entering one teleports back to
      // the start), but the rows still need to be valid distributions.
      const int landing = kGrid.move(s, a);
      if (is_cliff(landing)) {
        transitions[pair * kStates + start] = 1.0;
        rewards[pair] = -100.0;
      } else {
        transitions[pair * kStates + landing] = 1.0;
        rewards[pair] = -1.0;
      }
    }
  }

  return build_mdp(kStates, kActions, kHorizon, std::move(transitions),
                   std::move(rewards), 1.0, start, {goal});
}

FiniteHorizonMdp frozen_lake() {
  constexpr GridShape kGrid{4, 4};
  constexpr int kStates = 16;
  constexpr int kActions = 4;
  constexpr int kHorizon = 20;
  constexpr double kDiscount = 0.95;
  // Row-major layout: S F F F / F H F H / F F F H / H F F G.
  const std::vector<int> holes = {5, 7, 11, 12};
  const int goal = 15;
  const int start = 0;
  auto is_hole = [&](int cell) {
    return std::find(holes.begin(), holes.end(), cell) != holes.end();
  };

  std::vector<double> transitions(kStates * kActions * kStates, 0.0);
  std::vector<double> rewards(kStates * kActions, 0.0);
  for (int s = 0; s < kStates; ++s) {
    for (int a = 0; a < kActions; ++a) {
      const std::size_t pair = static_cast<std::size_t>(s) * kActions + a;
      if (s == goal || is_hole(s)) {
        transitions[pair * kStates + s] = 1.0;
        continue;
      }
      const int landing = kGrid.move(s, a);
      transitions[pair * kStates + landing] = 1.0;
      if (landing == goal) rewards[pair] = 1.0;
      else if (is_hole(landing)) rewards[pair] = -1.0;
    }
  }

  std::vector<int> terminal = holes;
  terminal.push_back(goal);
  return build_mdp(kStates, kActions, kHorizon, std::move(transitions),
                   std::move(rewards), kDiscount, start, std::move(terminal));
}

}  // namespace opprl
