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

#ifndef MERGE_SIM_PERCEPTION_H_
#define MERGE_SIM_PERCEPTION_H_

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "merge_sim/road.h"

namespace merge_sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double Dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Vehicle body rectangle in the road frame. `heading` follows the road
// convention of VehicleState (0 = long axis along +y).
struct OrientedRect {
  Vec2 center;
  double heading = 0.0;
  double half_width = 0.9;
  double half_length = 2.25;

  // Counter-clockwise corners starting at the rear-right corner.
  std::array<Vec2, 4> Corners() const;
};

// Rectangle grown about its center by the observer's magnification
// 1 + 0.3 q (see ProfileEndpoints::magnification).
OrientedRect PerceivedBounds(const OrientedRect& rect, double observer_q);
OrientedRect Magnified(const OrientedRect& rect, double magnification);

// Gap between b and the slab spanned by a's edge `axis_index` (0: first
// edge, 1: adjacent edge), measured from a's reference corner. Zero when the
// projections of b's corners overlap the edge's extent.
double ProjectionGap(const OrientedRect& a, const OrientedRect& b,
                     int axis_index);

// exp(-sqrt((d_v^2 + d_u^2) / 2)) for the two aggregate gaps.
double CollisionIndexFromGaps(double d_v, double d_u);

// CollisionIndexFromGaps where D_v aggregates b's gaps on a's axes and D_u
// aggregates a's gaps on b's axes. Symmetric in its arguments; 1 iff the
// closed rectangles intersect.
double CollisionIndex(const OrientedRect& a, const OrientedRect& b);

// Separating-axis intersection test on closed rectangles.
bool Intersects(const OrientedRect& a, const OrientedRect& b);

// One vehicle of a world snapshot as seen by the decision layer.
struct VehicleView {
  int id = 0;
  double x_lat = 0.0;
  double y_long = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  double length = 4.5;
  double width = 1.8;
  bool decision = false;       // game-driven rather than scripted
  double q = 0.5;              // aggressiveness of decision vehicles
  double desired_speed = 0.0;  // m/s, cruise speed of decision vehicles

  OrientedRect Rect() const {
    return {{x_lat, y_long}, heading, width / 2.0, length / 2.0};
  }
};

using Snapshot = std::vector<VehicleView>;

const VehicleView* FindVehicle(const Snapshot& snapshot, int id);

struct Neighbor {
  int id = 0;
  double gap = 0.0;        // m, bumper to bumper, >= 0
  double rel_speed = 0.0;  // m/s, neighbor speed minus ego speed
};

struct LaneNeighbors {
  int lane = 0;  // 0 when the lane does not exist
  std::optional<Neighbor> leader;
  std::optional<Neighbor> follower;
};

struct Vicinity {
  int ego_lane = 0;
  LaneNeighbors left;
  LaneNeighbors own;
  LaneNeighbors right;

  const LaneNeighbors* ForLane(int lane) const;
};

// Additive zero-mean Gaussian error on perceived gaps with standard deviation
// sigma0 * (1 - 0.5 q). The generator is owned by the caller.
struct PerceptionNoise {
  double sigma0 = 0.0;
  std::mt19937_64* rng = nullptr;
};

struct ObserverModel {
  double magnification = 1.0;
  double visibility_distance = 100.0;
  double q = 0.5;
};

// Nearest vehicle ahead (or behind) of longitudinal position `y` in `lane`
// among vehicles whose perceived rectangles reach into the lane. `y` and
// `length` describe the reference body; vehicles whose center lies farther
// than the visibility distance are ignored.
std::optional<Neighbor> NearestInLane(const Snapshot& snapshot, int lane,
                                      double y, double length, double speed,
                                      bool ahead,
                                      const std::vector<int>& exclude,
                                      const LaneGeometry& geometry,
                                      const ObserverModel& observer);

// Nearest leader and follower in the ego lane and both adjacent lanes.
// Throws std::out_of_range when ego_id is not in the snapshot.
Vicinity ClassifyVicinity(int ego_id, const Snapshot& snapshot,
                          const LaneGeometry& geometry,
                          const ObserverModel& observer,
                          PerceptionNoise* noise = nullptr);

}  // namespace merge_sim

#endif  // MERGE_SIM_PERCEPTION_H_
