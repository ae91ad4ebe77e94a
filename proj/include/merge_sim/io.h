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

#ifndef MERGE_SIM_IO_H_
#define MERGE_SIM_IO_H_

#include <string>
#include <string_view>

#include "merge_sim/metrics.h"
#include "merge_sim/road.h"
#include "merge_sim/simulation.h"

namespace merge_sim {

inline constexpr std::string_view kTrajectoryHeader =
    "t,id,x_lat,y_long,v,theta,lane,maneuver,accel_directive,competing_id,"
    "i_col,flags";
inline constexpr std::string_view kGridHeader =
    "q_merge,q_mainline,d_long_m,d_lat_m,lane_changes,collision,forced_stop,"
    "seed";

std::string TrajectoryCsv(const TrajectoryLog& log);
// Throws std::invalid_argument with the 1-based line number of the first
// malformed line.
TrajectoryLog ParseTrajectoryCsv(std::string_view text);

std::string GridCsv(const DisturbanceGrid& grid);

// Lateral-vs-longitudinal plot: lane boundaries, the merge-lane extent and
// one polyline per vehicle.
std::string TrajectorySvg(const TrajectoryLog& log,
                          const LaneGeometry& geometry);

// Writes to a temporary file next to `path`, then renames it into place.
// Throws std::runtime_error on I/O failure.
void WriteFileAtomic(const std::string& path, std::string_view content);
std::string ReadFile(const std::string& path);

}  // namespace merge_sim

#endif  // MERGE_SIM_IO_H_
