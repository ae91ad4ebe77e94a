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

#include "merge_sim/road.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace merge_sim {

void LaneGeometry::Validate() const {
  if (lane_centers.size() < 2) {
    throw std::invalid_argument(
        "geometry.lane_centers needs a mainline lane and a merge lane");
  }
  for (size_t i = 1; i < lane_centers.size(); ++i) {
    if (!(lane_centers[i] > lane_centers[i - 1])) {
      throw std::invalid_argument(
          "geometry.lane_centers must be strictly increasing");
    }
  }
  if (!(lane_width > 0)) {
    throw std::invalid_argument("geometry.lane_width must be > 0");
  }
  if (!(merge.entrance_length > 0)) {
    throw std::invalid_argument("geometry.merge.entrance_length must be > 0");
  }
  if (!(merge.extension >= 0)) {
    throw std::invalid_argument("geometry.merge.extension must be >= 0");
  }
}

int LaneOf(double x_lat, const LaneGeometry& geometry) {
  int best = 1;
  double best_dist = std::abs(x_lat - geometry.lane_centers[0]);
  for (int lane = 2; lane <= geometry.LaneCount(); ++lane) {
    const double d = std::abs(x_lat - geometry.Center(lane));
    // Ties (within rounding of the lane centers) keep the lower lane id.
    if (d < best_dist - 1e-9) {
      best = lane;
      best_dist = d;
    }
  }
  return best;
}

std::vector<int> LanesSpanned(double x_min, double x_max,
                              const LaneGeometry& geometry) {
  std::vector<int> lanes;
  const double half = geometry.lane_width / 2.0;
  for (int lane = 1; lane <= geometry.LaneCount(); ++lane) {
    const double c = geometry.Center(lane);
    if (x_max > c - half && x_min < c + half) lanes.push_back(lane);
  }
  return lanes;
}

double DistanceToMergeEnd(double x_lat, double y_long,
                          const LaneGeometry& geometry) {
  if (LaneOf(x_lat, geometry) != geometry.MergeLane()) {
    throw std::domain_error(
        "distance to merge end requested off the merge lane");
  }
  return std::max(geometry.merge.EntranceEnd() - y_long, 0.0);
}

}  // namespace merge_sim
