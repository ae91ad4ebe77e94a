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

#ifndef MERGE_SIM_SIMULATION_H_
#define MERGE_SIM_SIMULATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "merge_sim/config.h"
#include "merge_sim/merge_planner.h"
#include "merge_sim/road.h"

namespace merge_sim {

enum class VehicleKind { kScripted, kDecision };

struct ScenarioVehicle {
  int id = 0;
  double x0_m = 0.0;
  double y0_m = 0.0;
  double v0_kmh = 0.0;
  VehicleKind kind = VehicleKind::kScripted;
  double q = 0.5;
  // Cruise speed of a decision vehicle; defaults to v0.
  std::optional<double> v_des_kmh;

  double V0() const { return v0_kmh / 3.6; }
  double DesiredSpeed() const { return v_des_kmh.value_or(v0_kmh) / 3.6; }
};

struct Scenario {
  std::string name;
  LaneGeometry geometry;
  std::vector<ScenarioVehicle> vehicles;

  // Throws std::invalid_argument naming the offending vehicle field.
  void Validate() const;
  const ScenarioVehicle* Find(int id) const;
};

// Id of the merging vehicle in the built-in scenarios.
inline constexpr int kMergingVehicleId = 6;

// "scenario1" or "scenario2"; throws std::invalid_argument otherwise.
Scenario BuiltinScenario(const std::string& name);
// Parses and validates a scenario definition.
Scenario ScenarioFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Scenario& scenario);

// Sets q of a decision vehicle, promoting a scripted one. Throws
// std::invalid_argument for an unknown id or q outside [0, 1].
void SetAggressiveness(Scenario& scenario, int id, double q);

enum LogFlag : unsigned {
  kFlagForcedStop = 1u << 0,
  kFlagCollision = 1u << 1,
};

struct LogRow {
  double t = 0.0;
  int id = 0;
  double x_lat = 0.0;
  double y_long = 0.0;
  double v = 0.0;
  double theta = 0.0;
  int lane = 0;
  Maneuver maneuver = Maneuver::kStay;
  AccelDirective accel = AccelDirective::kHold;
  std::optional<int> competing_id;
  double i_col = 0.0;  // largest collision index against any other vehicle
  unsigned flags = 0;

  bool operator==(const LogRow&) const = default;
};

// Rows in time order; within a step, in scenario vehicle order.
struct TrajectoryLog {
  double dt = 0.0;
  std::vector<LogRow> rows;

  // Rows of one vehicle in time order. Empty for an unknown id.
  std::vector<LogRow> Series(int id) const;
  std::vector<int> Ids() const;
};

struct RunResult {
  TrajectoryLog log;
  double end_time = 0.0;
  bool collision = false;
  std::optional<std::pair<int, int>> collision_ids;
  double collision_time = 0.0;
  bool forced_stop = false;
  bool settled = false;  // stopped early because every decision vehicle settled
};

// Fixed-step simulation of a scenario. Throws std::invalid_argument on an
// invalid scenario or config.
RunResult Run(const Scenario& scenario, const SimConfig& config);

}  // namespace merge_sim

#endif  // MERGE_SIM_SIMULATION_H_
