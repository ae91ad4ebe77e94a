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

#ifndef MERGE_SIM_MERGE_PLANNER_H_
#define MERGE_SIM_MERGE_PLANNER_H_

#include <optional>
#include <string_view>

#include "merge_sim/driver_control.h"
#include "merge_sim/game.h"
#include "merge_sim/perception.h"
#include "merge_sim/road.h"

namespace merge_sim {

enum class Maneuver { kStay, kMergeNow, kLaneChange };
enum class AccelDirective { kHold, kAccelerate, kDecelerate };

std::string_view ManeuverName(Maneuver m);
std::string_view DirectiveName(AccelDirective d);

struct Decision {
  Maneuver maneuver = Maneuver::kStay;
  AccelDirective accel = AccelDirective::kHold;
  std::optional<int> competing_vehicle;
  int target_lane = 0;
  bool forced_stop = false;

  bool operator==(const Decision&) const = default;
};

// Headway credited to a merge-lane vehicle that stays in its lane.
enum class StayHeadway {
  kLeader,   // gap to the merge-lane leader (d_v when absent)
  kLaneEnd,  // that gap, limited by the distance to the lane end
  kNone,     // the ending lane offers no headway
};

struct PlannerConfig {
  double epoch = 0.1;            // s
  double latch_tolerance = 0.2;  // m
  double hysteresis = 2.5;       // m of headway utility
  // Magnitude of hypothetical and commanded accelerate/decelerate
  // directives, as a fraction of the driver's limit g_l(q).
  double directive_accel_fraction = 1.0;
  // Look-ahead of the acceleration game; <= 0 selects T(q).
  double accel_game_horizon = 3.0;  // s
  double guard_decel_g = 0.3;
  // A safe slot is taken regardless of the game once stopping before the
  // hard end of the merge lane would need this deceleration.
  double mandatory_merge_decel_g = 0.45;
  // Speed band of accelerate/decelerate directives: accelerating stops at
  // the cruise speed plus this margin, decelerating at min_directive_speed.
  double accel_speed_margin = 5.0;   // m/s
  double min_directive_speed = 5.0;  // m/s
  // Aggressiveness assumed for scripted vehicles when modelling their
  // responses.
  double assumed_q = 0.5;
  StayHeadway stay_headway = StayHeadway::kNone;
  // Whether a scripted competitor is modelled as able to vacate its lane.
  // Scripted vehicles never change lanes, so by default they cannot.
  bool scripted_can_vacate = false;
};

// Predicted (x_lat, y_long, speed) of every vehicle at a horizon.
struct PredictedSnapshot {
  double horizon = 0.0;
  Snapshot vehicles;
};

// Ego moves at constant +/- accel until its speed reaches v_max (when
// accelerating) or v_min (when decelerating), then cruises; everyone else
// keeps its current speed and lane.
PredictedSnapshot PredictStates(const Snapshot& snapshot, int ego_id,
                                AccelDirective directive, double accel,
                                double horizon, double v_min = 0.0,
                                double v_max = 1e9);

// Everything a decision needs besides the snapshot.
struct PlannerContext {
  const LaneGeometry* geometry = nullptr;
  const ProfileEndpoints* endpoints = nullptr;
  const VehicleParams* vehicle = nullptr;
  const PlannerConfig* config = nullptr;
  PerceptionNoise* noise = nullptr;  // optional, applied to the ego's view
};

struct MergeGameResult {
  PayoffBimatrix bimatrix;
  StackelbergSolution solution;
  std::optional<int> competing_vehicle;  // P2
  bool region_open = false;              // ego inside the merge entrance
  bool safe = false;                     // post-merge collision check passed
  bool merge = false;  // leader plays L and the merge is admissible
};

struct MergeGameOptions {
  // Only admit a merge inside the entrance [start, start + length].
  bool require_region = true;
  // Overrides the distance to the end of the merge lane. Hypothetical games
  // ask whether the slot would be taken when staying is no longer possible,
  // so they evaluate the stay branch at the lane end.
  std::optional<double> lane_end_distance;
  // Look-ahead of the slot check; defaults to T(q). Hypothetical games check
  // only the predicted instant.
  std::optional<double> safety_horizon;
};

// Merging game of a merge-lane vehicle (leader, P1) against the nearest
// follower in the adjacent mainline lane (P2), on the given snapshot.
MergeGameResult MergingGame(int ego_id, const Snapshot& snapshot,
                            const DriverProfile& profile,
                            const PlannerContext& ctx,
                            const MergeGameOptions& options = {});

// True when the ego, moved to the center of `lane`, overlaps no perceived
// rectangle of that lane's vehicles at any sampled time in [0, horizon]
// under constant speeds.
bool SlotClear(int ego_id, int lane, const Snapshot& snapshot,
               const LaneGeometry& geometry, double magnification,
               double horizon);

struct AccelGameResult {
  AccelDirective directive = AccelDirective::kHold;
  std::optional<int> competing_vehicle;  // P2' of the chosen directive
  std::optional<MergeGameResult> accelerate;
  std::optional<MergeGameResult> decelerate;
};

// Two hypothetical merging games on predicted snapshots, one per directive.
AccelGameResult AccelerationGame(int ego_id, const Snapshot& snapshot,
                                 const DriverProfile& profile,
                                 const PlannerContext& ctx);

struct LaneChangeOption {
  int lane = 0;
  PayoffBimatrix bimatrix;
  StackelbergSolution solution;
  double headway_gain = 0.0;
  bool safe = false;
  bool change = false;
};

// Simplified discretionary lane-change model for a mainline decision
// vehicle: one Stackelberg game per adjacent mainline lane against that
// lane's follower. Returns the chosen lane (the current lane to stay).
int DiscretionaryLaneChange(int ego_id, const Snapshot& snapshot,
                            const DriverProfile& profile,
                            const PlannerContext& ctx,
                            std::vector<LaneChangeOption>* options = nullptr);

// Per-vehicle memory carried between epochs.
struct LatchState {
  std::optional<int> target_lane;  // set while a lane change is in progress
  Maneuver maneuver = Maneuver::kStay;
  std::optional<int> competing_vehicle;
  bool merged = false;
};

// One decision epoch for a decision vehicle. Updates the latch.
Decision Decide(int ego_id, const Snapshot& snapshot,
                const DriverProfile& profile, const PlannerContext& ctx,
                LatchState& latch);

// Profile used to model another vehicle's responses.
DriverProfile ProfileOf(const VehicleView& v, const PlannerContext& ctx);

ObserverModel ObserverFor(const DriverProfile& profile);

}  // namespace merge_sim

#endif  // MERGE_SIM_MERGE_PLANNER_H_
