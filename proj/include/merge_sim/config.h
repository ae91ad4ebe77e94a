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

#ifndef MERGE_SIM_CONFIG_H_
#define MERGE_SIM_CONFIG_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "merge_sim/driver_control.h"
#include "merge_sim/dynamics.h"
#include "merge_sim/merge_planner.h"

namespace merge_sim {

// Car-following layer that turns a directive and the vicinity into an
// acceleration command.
struct FollowingConfig {
  BlendWeights weights;
  double standstill_gap = 2.0;  // m
  // Desired time gap to a leader as a fraction of T(q).
  double time_gap_scale = 0.5;
  // Share the space between leader and follower instead of insisting on the
  // full desired gap when a follower is close behind.
  bool slot_centering = true;
};

struct SimConfig {
  VehicleParams vehicle;
  ProfileEndpoints profile;
  ControllerGains gains;
  FollowingConfig following;
  PlannerConfig planner;
  double dt = 0.01;           // s
  double t_max = 40.0;        // s
  double settle_time = 2.0;   // s of quiescence before a run may stop early
  double settle_accel = 0.1;  // m/s^2, |a| below which a vehicle is quiet
  std::uint64_t seed = 0;
  bool noise = false;
  double noise_sigma0 = 1.0;  // m

  // Throws std::invalid_argument naming the offending field.
  void Validate() const;
};

nlohmann::json ToJson(const SimConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
SimConfig ConfigFromJson(const nlohmann::json& j);

}  // namespace merge_sim

#endif  // MERGE_SIM_CONFIG_H_
