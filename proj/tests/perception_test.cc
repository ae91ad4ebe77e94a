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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.h"

namespace merge_sim {
namespace {

OrientedRect RandomRect(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-6.0, 6.0);
  std::uniform_real_distribution<double> ang(-3.2, 3.2);
  std::uniform_real_distribution<double> half(0.3, 3.0);
  return {{pos(rng), pos(rng)}, ang(rng), half(rng), half(rng)};
}

std::array<Vec2, 4> Polygon(const OrientedRect& r) {
  return oracle::RectPolygon(r.center.x, r.center.y, r.heading, r.half_width,
                             r.half_length);
}

// Separation of the projections of a and b on a unit axis.
double IntervalGap(const OrientedRect& a, const OrientedRect& b, Vec2 axis) {
  double amin = INFINITY, amax = -INFINITY, bmin = INFINITY, bmax = -INFINITY;
  for (const Vec2& c : Polygon(a)) {
    amin = std::min(amin, Dot(axis, c));
    amax = std::max(amax, Dot(axis, c));
  }
  for (const Vec2& c : Polygon(b)) {
    bmin = std::min(bmin, Dot(axis, c));
    bmax = std::max(bmax, Dot(axis, c));
  }
  return std::max({0.0, bmin - amax, amin - bmax});
}

TEST(CollisionIndexTest, OneIffPolygonsIntersect) {
  std::mt19937_64 rng(2024);
  int hits = 0;
  for (int i = 0; i < 10000; ++i) {
    const OrientedRect a = RandomRect(rng);
    const OrientedRect b = RandomRect(rng);
    const bool expected = oracle::PolygonsIntersect(Polygon(a), Polygon(b));
    hits += expected;
    EXPECT_EQ(Intersects(a, b), expected) << "pair " << i;
    EXPECT_EQ(CollisionIndex(a, b) == 1.0, expected) << "pair " << i;
  }
  EXPECT_GT(hits, 1000);
  EXPECT_LT(hits, 9000);
}

TEST(CollisionIndexTest, SpotValue) {
  // Unit squares offset by 3.5 m on both axes: every projection gap is
  // 2.5 m, so both aggregate gaps equal sqrt(12.5).
  const OrientedRect a{{0, 0}, 0, 0.5, 0.5};
  const OrientedRect b{{3.5, 3.5}, 0, 0.5, 0.5};
  EXPECT_NEAR(CollisionIndex(a, b), 0.0292, 1e-4);
  EXPECT_NEAR(CollisionIndexFromGaps(3, 4), 0.0292, 1e-4);
  EXPECT_EQ(CollisionIndexFromGaps(3, 4), CollisionIndexFromGaps(4, 3));
  EXPECT_EQ(CollisionIndexFromGaps(0, 0), 1.0);
}

TEST(CollisionIndexTest, SymmetricAndBounded) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const OrientedRect a = RandomRect(rng);
    const OrientedRect b = RandomRect(rng);
    const double ab = CollisionIndex(a, b);
    EXPECT_DOUBLE_EQ(ab, CollisionIndex(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(CollisionIndexTest, RigidMotionInvariance) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    OrientedRect a = RandomRect(rng);
    OrientedRect b = RandomRect(rng);
    const double before = CollisionIndex(a, b);
    const Vec2 shift{u(rng), u(rng)};
    const double phi = u(rng) / 3.0;
    const Vec2 pivot{u(rng), u(rng)};
    for (OrientedRect* r : {&a, &b}) {
      const Vec2 d = r->center - pivot;
      // Headings turn toward -x, so a heading increase rotates
      // counter-clockwise in the (x, y) plane.
      r->center = pivot + Vec2{d.x * std::cos(phi) - d.y * std::sin(phi),
                               d.x * std::sin(phi) + d.y * std::cos(phi)};
      r->center = r->center + shift;
      r->heading += phi;
    }
    EXPECT_NEAR(CollisionIndex(a, b), before, 1e-9);
  }
}

TEST(CollisionIndexTest, MonotoneInSeparationAndVanishing) {
  const OrientedRect a{{0, 0}, 0, 0.9, 2.25};
  double prev = 1.0;
  for (double y = 0; y < 200; y += 0.5) {
    const double i_col = CollisionIndex(a, {{0, y}, 0, 0.9, 2.25});
    EXPECT_LE(i_col, prev);
    prev = i_col;
  }
  EXPECT_LT(prev, 1e-80);
}

TEST(ProjectionGapTest, AxisAlignedSquares) {
  const OrientedRect a{{0, 0}, 0, 0.5, 0.5};
  const OrientedRect b{{3, 0}, 0, 0.5, 0.5};
  // Axis 0 runs along the long (y) axis, axis 1 along x.
  EXPECT_DOUBLE_EQ(ProjectionGap(a, b, 1), 2.0);
  EXPECT_DOUBLE_EQ(ProjectionGap(a, b, 0), 0.0);
  const OrientedRect c{{0.3, 0.2}, 0.4, 1, 1};
  EXPECT_EQ(ProjectionGap(a, c, 0), 0.0);
  EXPECT_EQ(ProjectionGap(a, c, 1), 0.0);
}

TEST(ProjectionGapTest, MatchesCornerProjectionOracle) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 5000; ++i) {
    const OrientedRect a = RandomRect(rng);
    const OrientedRect b = RandomRect(rng);
    const Vec2 along{-std::sin(a.heading), std::cos(a.heading)};
    const Vec2 across{std::cos(a.heading), std::sin(a.heading)};
    EXPECT_NEAR(ProjectionGap(a, b, 0), IntervalGap(a, b, along), 1e-9);
    EXPECT_NEAR(ProjectionGap(a, b, 1), IntervalGap(a, b, across), 1e-9);
  }
}

TEST(PerceivedBoundsTest, ScalesAboutCenter) {
  const OrientedRect r{{1, 2}, 0.3, 0.9, 2.25};
  const OrientedRect same = PerceivedBounds(r, 0.0);
  EXPECT_EQ(same.half_width, r.half_width);
  EXPECT_EQ(same.half_length, r.half_length);
  const OrientedRect big = PerceivedBounds(r, 1.0);
  EXPECT_DOUBLE_EQ(big.half_width, 0.9 * 1.3);
  EXPECT_DOUBLE_EQ(big.half_length, 2.25 * 1.3);
  EXPECT_EQ(big.center.x, 1.0);
  EXPECT_EQ(big.center.y, 2.0);
  const OrientedRect mid = PerceivedBounds(r, 0.5);
  EXPECT_DOUBLE_EQ(mid.half_length, 2.25 * 1.15);
  for (double q = 0; q <= 1.0; q += 0.05) {
    EXPECT_GE(PerceivedBounds(r, q).half_width, r.half_width);
  }
  EXPECT_THROW(PerceivedBounds(r, 1.5), std::invalid_argument);
}

Snapshot ScenarioOneStart() {
  auto v = [](int id, double x, double y) {
    VehicleView view;
    view.id = id;
    view.x_lat = x;
    view.y_long = y;
    view.speed = 80 / 3.6;
    return view;
  };
  Snapshot s{v(1, 0, 30),  v(2, 3.3, 30),  v(3, 6.6, 30),
             v(4, 6.6, 5), v(5, 6.6, -10), v(6, 9.9, 10)};
  s.back().speed = 70 / 3.6;
  return s;
}

TEST(ClassifyVicinityTest, ScenarioOneStartMerger) {
  const LaneGeometry geom;
  const ObserverModel obs{1.0, 100.0, 0.0};
  const Vicinity vic = ClassifyVicinity(6, ScenarioOneStart(), geom, obs);
  EXPECT_EQ(vic.ego_lane, 4);
  ASSERT_TRUE(vic.left.leader);
  EXPECT_EQ(vic.left.leader->id, 3);
  EXPECT_DOUBLE_EQ(vic.left.leader->gap, 20.0 - 4.5);
  EXPECT_NEAR(vic.left.leader->rel_speed, 10 / 3.6, 1e-12);
  ASSERT_TRUE(vic.left.follower);
  EXPECT_EQ(vic.left.follower->id, 4);
  EXPECT_DOUBLE_EQ(vic.left.follower->gap, 0.5);
  EXPECT_FALSE(vic.own.leader);
  EXPECT_FALSE(vic.own.follower);
  EXPECT_EQ(vic.right.lane, 0);
  EXPECT_EQ(vic.ForLane(3), &vic.left);
  EXPECT_EQ(vic.ForLane(0), nullptr);
}

TEST(ClassifyVicinityTest, AloneAndNearestWins) {
  const LaneGeometry geom;
  const ObserverModel obs;
  Snapshot alone{ScenarioOneStart().back()};
  const Vicinity empty = ClassifyVicinity(6, alone, geom, obs);
  EXPECT_FALSE(empty.left.leader || empty.left.follower || empty.own.leader ||
               empty.own.follower);

  Snapshot two = ScenarioOneStart();
  two.push_back(two[2]);
  two.back().id = 7;
  two.back().y_long = 60;
  const Vicinity vic = ClassifyVicinity(6, two, geom, obs);
  EXPECT_EQ(vic.left.leader->id, 3);
  EXPECT_THROW(ClassifyVicinity(42, two, geom, obs), std::out_of_range);
}

TEST(ClassifyVicinityTest, VisibilityLimitAndMagnifiedGap) {
  const LaneGeometry geom;
  Snapshot s = ScenarioOneStart();
  s[2].y_long = 10 + 101;
  const Vicinity far = ClassifyVicinity(6, s, geom, ObserverModel{1.0, 100.0});
  EXPECT_FALSE(far.left.leader);
  const Vicinity near =
      ClassifyVicinity(6, ScenarioOneStart(), geom, ObserverModel{1.3, 100.0, 1.0});
  EXPECT_DOUBLE_EQ(near.left.leader->gap, 20.0 - 2.25 - 2.25 * 1.3);
}

TEST(ClassifyVicinityTest, NoiseIsSeededAndNonNegative) {
  const LaneGeometry geom;
  const ObserverModel obs;
  std::mt19937_64 a(99), b(99);
  PerceptionNoise na{1.0, &a}, nb{1.0, &b};
  for (int i = 0; i < 50; ++i) {
    const Vicinity va = ClassifyVicinity(6, ScenarioOneStart(), geom, obs, &na);
    const Vicinity vb = ClassifyVicinity(6, ScenarioOneStart(), geom, obs, &nb);
    EXPECT_EQ(va.left.leader->gap, vb.left.leader->gap);
    EXPECT_GE(va.left.follower->gap, 0.0);
  }
}

}  // namespace
}  // namespace merge_sim
