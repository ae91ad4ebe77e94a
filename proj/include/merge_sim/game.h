// Copyright 2026 The merge_sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MERGE_SIM_GAME_H_
#define MERGE_SIM_GAME_H_

#include <array>
#include <string_view>

#include "merge_sim/driver_control.h"

namespace merge_sim {

// L: go left (merge in, change lane, or vacate to the left lane).
// S: go straight (stay in the current lane).
enum class Action { kLeft = 0, kStraight = 1 };

std::string_view ActionName(Action a);

struct ActionPair {
  Action leader = Action::kStraight;
  Action follower = Action::kStraight;

  bool operator==(const ActionPair&) const = default;
};

// Leader (U1) and follower (U2) utilities indexed [leader][follower] by
// Action. Utilities are lengths in meters.
struct PayoffBimatrix {
  std::array<std::array<double, 2>, 2> leader{};
  std::array<std::array<double, 2>, 2> follower{};

  double& U1(Action l, Action f) {
    return leader[static_cast<int>(l)][static_cast<int>(f)];
  }
  double& U2(Action l, Action f) {
    return follower[static_cast<int>(l)][static_cast<int>(f)];
  }
  double U1(Action l, Action f) const {
    return leader[static_cast<int>(l)][static_cast<int>(f)];
  }
  double U2(Action l, Action f) const {
    return follower[static_cast<int>(l)][static_cast<int>(f)];
  }
};

// U_pos = min(d_r, alpha(q) d_v).
double HeadwayUtility(double d_r, const DriverProfile& profile);

// U_neg,L = D_suf + v_r T(q) - d_r, with v_r the closing speed of the
// target-lane follower (positive when it approaches).
double MergeCostLeft(double d_r, double v_r, const DriverProfile& profile);

// U_neg,S = D_suf + v T(q) - d_e for the merging vehicle, 0 otherwise.
double MergeCostStay(double d_e, double speed, const DriverProfile& profile,
                     bool is_merging);

inline double Combine(double u_pos, double u_neg) { return u_pos - u_neg; }

struct StackelbergSolution {
  ActionPair actions;
  double leader_value = 0.0;  // secure value of the chosen leader action
  // Secure (worst case over follower best responses) value of each leader
  // action, indexed by Action.
  std::array<double, 2> secure_value{};
};

// Pure-strategy Stackelberg solution. The follower's best-response set is
// every maximizer of U2 given the leader action; the leader maximizes the
// minimum U1 over that set. Ties prefer S for the leader and, within the
// best-response set, the response giving the leader the lower payoff, then
// S.
StackelbergSolution SolveStackelberg(const PayoffBimatrix& bimatrix);

}  // namespace merge_sim

#endif  // MERGE_SIM_GAME_H_
