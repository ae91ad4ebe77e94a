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

#ifndef MERGE_SIM_METRICS_H_
#define MERGE_SIM_METRICS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "merge_sim/config.h"
#include "merge_sim/road.h"
#include "merge_sim/simulation.h"

namespace merge_sim {

// Trapezoidal integral of max(v0 - v(t), 0). Throws std::invalid_argument
// when the vehicle is not in the log.
double LongitudinalDisturbance(const TrajectoryLog& log, int id, double v0);

struct LateralSummary {
  double displacement = 0.0;  // m
  int lane_changes = 0;       // completed lane changes
};

// Lateral movement due to lane changes. A change is complete when the
// vehicle settles within `tolerance` of a different lane center and
// contributes the distance between the two centers. An excursion that
// returns to its own lane contributes twice its peak offset; an unfinished
// change at the end of the log contributes its current offset. Throws
// std::invalid_argument when the vehicle is not in the log.
LateralSummary LateralDisturbance(const TrajectoryLog& log, int id,
                                  const LaneGeometry& geometry,
                                  double tolerance = 0.2);

// First time the vehicle is outside the merge lane, if ever.
std::optional<double> MergeCompletionTime(const TrajectoryLog& log, int id,
                                          const LaneGeometry& geometry);

// Neighbors in the vehicle's new lane at the moment it leaves the merge lane.
struct MergeSlot {
  double t = 0.0;
  int lane = 0;
  std::optional<int> leader;
  std::optional<int> follower;
};
std::optional<MergeSlot> MergePosition(const TrajectoryLog& log, int id,
                                       const LaneGeometry& geometry);

// Smallest bumper-to-bumper gap between two vehicles in the same lane over
// the whole log; nullopt when no two vehicles ever share a lane.
std::optional<double> MinimumGap(const TrajectoryLog& log,
                                 const LaneGeometry& geometry,
                                 double vehicle_length);

struct DisturbanceReport {
  double q_merge = 0.0;
  double q_mainline = 0.0;
  std::uint64_t seed = 0;
  double d_long = 0.0;  // m
  double d_lat = 0.0;   // m
  int lane_changes = 0;
  bool collision = false;
  bool forced_stop = false;
};

struct DisturbanceGrid {
  std::vector<double> q_merge;
  std::vector<double> q_mainline;
  // Row-major with q_merge as the outer index.
  std::vector<DisturbanceReport> cells;

  const DisturbanceReport& At(std::size_t i_merge,
                              std::size_t i_mainline) const {
    return cells.at(i_merge * q_mainline.size() + i_mainline);
  }
};

struct SweepSpec {
  int merging_id = kMergingVehicleId;
  int mainline_id = 4;  // promoted to a decision vehicle in every cell
};

// World of one sweep cell: the base scenario with the two aggressiveness
// levels applied.
Scenario SweepCellScenario(const Scenario& base, const SweepSpec& spec,
                           double q_merge, double q_mainline);

DisturbanceReport MeasureCell(const Scenario& base, const SweepSpec& spec,
                              double q_merge, double q_mainline,
                              const SimConfig& config);

// Runs every cell of the grid with up to `jobs` worker threads. The result
// does not depend on `jobs`. Throws std::invalid_argument on empty grids or
// q outside [0, 1].
DisturbanceGrid AggressivenessSweep(const Scenario& base,
                                    const std::vector<double>& q_merge,
                                    const std::vector<double>& q_mainline,
                                    const SimConfig& config,
                                    const SweepSpec& spec = {}, int jobs = 1);

}  // namespace merge_sim

#endif  // MERGE_SIM_METRICS_H_
