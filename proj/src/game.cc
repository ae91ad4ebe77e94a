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

#include "merge_sim/game.h"

#include <algorithm>
#include <limits>

namespace merge_sim {

std::string_view ActionName(Action a) { return a == Action::kLeft ? "L" : "S"; }

double HeadwayUtility(double d_r, const DriverProfile& profile) {
  return std::min(d_r, profile.HeadwayCap());
}

double MergeCostLeft(double d_r, double v_r, const DriverProfile& profile) {
  return profile.sufficient_distance + v_r * profile.prediction_time - d_r;
}

double MergeCostStay(double d_e, double speed, const DriverProfile& profile,
                     bool is_merging) {
  if (!is_merging) return 0.0;
  return profile.sufficient_distance + speed * profile.prediction_time - d_e;
}

StackelbergSolution SolveStackelberg(const PayoffBimatrix& m) {
  constexpr std::array<Action, 2> kSafetyOrder{Action::kStraight,
                                               Action::kLeft};
  StackelbergSolution sol;
  bool have = false;
  for (Action l : kSafetyOrder) {
    const double best_u2 =
        std::max(m.U2(l, Action::kLeft), m.U2(l, Action::kStraight));
    // Worst case for the leader over the follower's best-response set.
    double secure = std::numeric_limits<double>::infinity();
    Action response = Action::kStraight;
    for (Action f : kSafetyOrder) {
      if (m.U2(l, f) < best_u2) continue;
      if (m.U1(l, f) < secure) {
        secure = m.U1(l, f);
        response = f;
      }
    }
    sol.secure_value[static_cast<int>(l)] = secure;
    if (!have || secure > sol.leader_value) {
      sol.actions = {l, response};
      sol.leader_value = secure;
      have = true;
    }
  }
  return sol;
}

}  // namespace merge_sim
