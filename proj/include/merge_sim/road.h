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

#ifndef MERGE_SIM_ROAD_H_
#define MERGE_SIM_ROAD_H_

#include <vector>

namespace merge_sim {

struct MergeLaneSpan {
  double start = 50.0;             // m, longitudinal position of the entrance
  double entrance_length = 100.0;  // m
  double extension = 20.0;         // m, completion buffer past the entrance

  double EntranceEnd() const { return start + entrance_length; }
  double HardEnd() const { return EntranceEnd() + extension; }
};

// Straight road. Lanes are numbered from 1 in order of increasing lateral
// position; the last lane is the merge lane. "Left" means a smaller lane id.
struct LaneGeometry {
  std::vector<double> lane_centers{0.0, 3.3, 6.6, 9.9};
  double lane_width = 3.3;
  MergeLaneSpan merge;

  int LaneCount() const { return static_cast<int>(lane_centers.size()); }
  int MergeLane() const { return LaneCount(); }
  bool IsMainline(int lane) const { return lane >= 1 && lane < MergeLane(); }
  bool IsValidLane(int lane) const { return lane >= 1 && lane <= LaneCount(); }
  double Center(int lane) const { return lane_centers.at(lane - 1); }

  // Throws std::invalid_argument on non-increasing centers or bad spans.
  void Validate() const;
};

// Nearest lane center; exact midpoints go to the lower lane id.
int LaneOf(double x_lat, const LaneGeometry& geometry);

// Lanes whose strips [center - w/2, center + w/2] overlap the open interval
// (x_min, x_max).
std::vector<int> LanesSpanned(double x_min, double x_max,
                              const LaneGeometry& geometry);

// Remaining entrance length ahead of a merge-lane vehicle, floored at zero.
// Throws std::domain_error if x_lat is not in the merge lane.
double DistanceToMergeEnd(double x_lat, double y_long,
                          const LaneGeometry& geometry);

}  // namespace merge_sim

#endif  // MERGE_SIM_ROAD_H_
