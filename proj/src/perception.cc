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

#include "merge_sim/perception.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace merge_sim {

std::array<Vec2, 4> OrientedRect::Corners() const {
  const Vec2 forward{-std::sin(heading), std::cos(heading)};
  const Vec2 right{std::cos(heading), std::sin(heading)};
  const Vec2 f = half_length * forward;
  const Vec2 r = half_width * right;
  return {center - f + r, center + f + r, center + f - r, center - f - r};
}

OrientedRect Magnified(const OrientedRect& rect, double magnification) {
  OrientedRect out = rect;
  out.half_width *= magnification;
  out.half_length *= magnification;
  return out;
}

OrientedRect PerceivedBounds(const OrientedRect& rect, double observer_q) {
  if (!(observer_q >= 0.0 && observer_q <= 1.0)) {
    throw std::invalid_argument("observer q must lie in [0, 1]");
  }
  return Magnified(rect, 1.0 + 0.3 * observer_q);
}

double ProjectionGap(const OrientedRect& a, const OrientedRect& b,
                     int axis_index) {
  const auto ca = a.Corners();
  const Vec2 origin = ca[0];
  const Vec2 edge = (axis_index == 0 ? ca[1] : ca[3]) - origin;
  const double edge_len = std::sqrt(Dot(edge, edge));

  bool all_below = true;
  bool all_above = true;
  double min_below = std::numeric_limits<double>::infinity();
  double min_above = std::numeric_limits<double>::infinity();
  for (const Vec2& corner : b.Corners()) {
    const double p = Dot(edge, corner - origin) / edge_len;
    all_below = all_below && p < 0.0;
    all_above = all_above && p > edge_len;
    min_below = std::min(min_below, std::abs(p));
    min_above = std::min(min_above, std::abs(p) - edge_len);
  }
  if (all_below) return min_below;
  if (all_above) return min_above;
  return 0.0;
}

double CollisionIndexFromGaps(double d_v, double d_u) {
  return std::exp(-std::sqrt((d_v * d_v + d_u * d_u) / 2.0));
}

double CollisionIndex(const OrientedRect& a, const OrientedRect& b) {
  return CollisionIndexFromGaps(
      std::hypot(ProjectionGap(a, b, 0), ProjectionGap(a, b, 1)),
      std::hypot(ProjectionGap(b, a, 0), ProjectionGap(b, a, 1)));
}

bool Intersects(const OrientedRect& a, const OrientedRect& b) {
  const auto ca = a.Corners();
  const auto cb = b.Corners();
  const std::array<Vec2, 4> axes{ca[1] - ca[0], ca[3] - ca[0], cb[1] - cb[0],
                                 cb[3] - cb[0]};
  for (const Vec2& axis : axes) {
    double amin = std::numeric_limits<double>::infinity(), amax = -amin;
    double bmin = amin, bmax = -amin;
    for (const Vec2& c : ca) {
      amin = std::min(amin, Dot(axis, c));
      amax = std::max(amax, Dot(axis, c));
    }
    for (const Vec2& c : cb) {
      bmin = std::min(bmin, Dot(axis, c));
      bmax = std::max(bmax, Dot(axis, c));
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

const VehicleView* FindVehicle(const Snapshot& snapshot, int id) {
  for (const VehicleView& v : snapshot) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

const LaneNeighbors* Vicinity::ForLane(int lane) const {
  if (lane == 0) return nullptr;
  if (left.lane == lane) return &left;
  if (own.lane == lane) return &own;
  if (right.lane == lane) return &right;
  return nullptr;
}

std::optional<Neighbor> NearestInLane(const Snapshot& snapshot, int lane,
                                      double y, double length, double speed,
                                      bool ahead,
                                      const std::vector<int>& exclude,
                                      const LaneGeometry& geometry,
                                      const ObserverModel& observer) {
  if (!geometry.IsValidLane(lane)) return std::nullopt;
  std::optional<Neighbor> best;
  double best_dy = std::numeric_limits<double>::infinity();
  for (const VehicleView& v : snapshot) {
    if (std::find(exclude.begin(), exclude.end(), v.id) != exclude.end()) {
      continue;
    }
    const double dy = v.y_long - y;
    if ((ahead && !(dy > 0.0)) || (!ahead && dy > 0.0)) continue;
    if (std::abs(dy) > observer.visibility_distance) continue;

    const OrientedRect seen = Magnified(v.Rect(), observer.magnification);
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    for (const Vec2& c : seen.Corners()) {
      x_min = std::min(x_min, c.x);
      x_max = std::max(x_max, c.x);
    }
    const auto lanes = LanesSpanned(x_min, x_max, geometry);
    if (std::find(lanes.begin(), lanes.end(), lane) == lanes.end()) continue;

    if (std::abs(dy) < best_dy) {
      best_dy = std::abs(dy);
      const double gap =
          std::max(std::abs(dy) - (length / 2.0 + seen.half_length), 0.0);
      best = Neighbor{v.id, gap, v.speed - speed};
    }
  }
  return best;
}

namespace {

void Perturb(std::optional<Neighbor>& n, PerceptionNoise* noise, double q) {
  if (!n || noise == nullptr || noise->rng == nullptr || noise->sigma0 <= 0) {
    return;
  }
  std::normal_distribution<double> dist(0.0, noise->sigma0 * (1.0 - 0.5 * q));
  n->gap = std::max(n->gap + dist(*noise->rng), 0.0);
}

LaneNeighbors Slot(int lane, const VehicleView& ego, const Snapshot& snapshot,
                   const LaneGeometry& geometry, const ObserverModel& observer,
                   PerceptionNoise* noise) {
  LaneNeighbors slot;
  if (!geometry.IsValidLane(lane)) return slot;
  slot.lane = lane;
  const std::vector<int> exclude{ego.id};
  slot.leader = NearestInLane(snapshot, lane, ego.y_long, ego.length, ego.speed,
                              true, exclude, geometry, observer);
  slot.follower = NearestInLane(snapshot, lane, ego.y_long, ego.length,
                                ego.speed, false, exclude, geometry, observer);
  Perturb(slot.leader, noise, observer.q);
  Perturb(slot.follower, noise, observer.q);
  return slot;
}

}  // namespace

Vicinity ClassifyVicinity(int ego_id, const Snapshot& snapshot,
                          const LaneGeometry& geometry,
                          const ObserverModel& observer,
                          PerceptionNoise* noise) {
  const VehicleView* ego = FindVehicle(snapshot, ego_id);
  if (ego == nullptr) throw std::out_of_range("ego vehicle not in snapshot");
  Vicinity vic;
  vic.ego_lane = LaneOf(ego->x_lat, geometry);
  vic.left = Slot(vic.ego_lane - 1, *ego, snapshot, geometry, observer, noise);
  vic.own = Slot(vic.ego_lane, *ego, snapshot, geometry, observer, noise);
  vic.right = Slot(vic.ego_lane + 1, *ego, snapshot, geometry, observer, noise);
  return vic;
}

}  // namespace merge_sim
