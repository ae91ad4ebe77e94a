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

#include "merge_sim/merge_planner.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

namespace merge_sim {
namespace {

constexpr double kMainSpeed = 80 / 3.6;

struct Fixture {
  LaneGeometry geometry;
  ProfileEndpoints endpoints;
  VehicleParams vehicle;
  PlannerConfig config;
  PlannerContext Context() {
    return {&geometry, &endpoints, &vehicle, &config, nullptr};
  }
  DriverProfile Profile(double q) {
    return ProfileFromQ(q, endpoints, vehicle);
  }
};

VehicleView View(int id, double x, double y, double speed) {
  VehicleView v;
  v.id = id;
  v.x_lat = x;
  v.y_long = y;
  v.speed = speed;
  return v;
}

VehicleView Merger(double y, double speed, double q) {
  VehicleView v = View(6, 9.9, y, speed);
  v.decision = true;
  v.q = q;
  v.desired_speed = kMainSpeed;
  return v;
}

Snapshot ScenarioOneStart(double q) {
  return {View(1, 0, 30, kMainSpeed),    View(2, 3.3, 30, kMainSpeed),
          View(3, 6.6, 30, kMainSpeed),  View(4, 6.6, 5, kMainSpeed),
          View(5, 6.6, -10, kMainSpeed), Merger(10, 70 / 3.6, q)};
}

const VehicleView& Get(const Snapshot& s, int id) {
  const VehicleView* v = FindVehicle(s, id);
  EXPECT_NE(v, nullptr);
  return *v;
}

TEST(PredictStatesTest, Kinematics) {
  Snapshot s{View(1, 6.6, 0, 22.2), View(2, 9.9, 0, 19.4)};
  const PredictedSnapshot zero =
      PredictStates(s, 2, AccelDirective::kAccelerate, 1.5, 0.0);
  EXPECT_EQ(zero.vehicles[0].y_long, 0.0);
  EXPECT_EQ(zero.vehicles[1].speed, 19.4);

  const PredictedSnapshot p =
      PredictStates(s, 2, AccelDirective::kAccelerate, 1.5, 2.0);
  EXPECT_NEAR(p.vehicles[0].y_long, 44.4, 1e-12);
  EXPECT_NEAR(p.vehicles[1].y_long, 41.8, 1e-12);
  EXPECT_NEAR(p.vehicles[1].speed, 22.4, 1e-12);
  EXPECT_EQ(p.vehicles[0].x_lat, 6.6);
  EXPECT_THROW(PredictStates(s, 2, AccelDirective::kHold, 1, -1),
               std::invalid_argument);
}

TEST(PredictStatesTest, SpeedBandAndFloor) {
  Snapshot s{View(2, 9.9, 0, 10.0)};
  const PredictedSnapshot capped =
      PredictStates(s, 2, AccelDirective::kAccelerate, 2.0, 4.0, 0.0, 12.0);
  EXPECT_DOUBLE_EQ(capped.vehicles[0].speed, 12.0);
  // 1 s ramp from 10 to 12 m/s, then 3 s at 12 m/s.
  EXPECT_DOUBLE_EQ(capped.vehicles[0].y_long, 11.0 + 36.0);
  const PredictedSnapshot stopped =
      PredictStates(s, 2, AccelDirective::kDecelerate, 5.0, 10.0);
  EXPECT_DOUBLE_EQ(stopped.vehicles[0].speed, 0.0);
  EXPECT_DOUBLE_EQ(stopped.vehicles[0].y_long, 10.0);
}

TEST(MergingGameTest, EmptyAdjacentLaneMerges) {
  Fixture f;
  Snapshot s{Merger(80, 20, 0.5)};
  const MergeGameResult r = MergingGame(6, s, f.Profile(0.5), f.Context());
  EXPECT_FALSE(r.competing_vehicle);
  EXPECT_TRUE(r.region_open);
  EXPECT_TRUE(r.safe);
  EXPECT_EQ(r.solution.actions.leader, Action::kLeft);
  EXPECT_TRUE(r.merge);
}

TEST(MergingGameTest, EntranceNotYetOpen) {
  Fixture f;
  const MergeGameResult r =
      MergingGame(6, ScenarioOneStart(0.5), f.Profile(0.5), f.Context());
  EXPECT_FALSE(r.region_open);
  EXPECT_FALSE(r.merge);
  ASSERT_TRUE(r.competing_vehicle);
  EXPECT_EQ(*r.competing_vehicle, 4);
}

TEST(MergingGameTest, BimatrixEntries) {
  Fixture f;
  const DriverProfile p = f.Profile(0.5);
  Snapshot s{Merger(100, 20, 0.5), View(3, 6.6, 130, 20), View(4, 6.6, 70, 22)};
  const MergeGameResult r = MergingGame(6, s, p, f.Context());
  const double lead_gap = 30 - 2.25 - 2.25 * p.magnification;
  const double follow_gap = 30 - 2.25 - 2.25 * p.magnification;
  const double u_left =
      HeadwayUtility(lead_gap, p) - MergeCostLeft(follow_gap, 2.0, p);
  EXPECT_NEAR(r.bimatrix.U1(Action::kLeft, Action::kStraight), u_left, 1e-9);
  const double u_stay = -MergeCostStay(50, 20, p, true);
  EXPECT_NEAR(r.bimatrix.U1(Action::kStraight, Action::kStraight), u_stay,
              1e-9);
  EXPECT_EQ(r.solution.actions.leader,
            u_left > u_stay ? Action::kLeft : Action::kStraight);
}

TEST(SlotClearTest, DetectsOverlapWithinHorizon) {
  const LaneGeometry g;
  Snapshot s{Merger(100, 20, 0.5), View(4, 6.6, 85, 30)};
  EXPECT_TRUE(SlotClear(6, 3, s, g, 1.0, 0.0));
  EXPECT_FALSE(SlotClear(6, 3, s, g, 1.0, 2.0));
  Snapshot beside{Merger(100, 20, 0.5), View(4, 6.6, 102, 20)};
  EXPECT_FALSE(SlotClear(6, 3, beside, g, 1.0, 0.0));
}

TEST(AccelerationGameTest, AggressiveMergerAcceleratesPastVehicleFour) {
  Fixture f;
  const Snapshot s = ScenarioOneStart(0.9);
  const AccelGameResult r = AccelerationGame(6, s, f.Profile(0.9), f.Context());
  ASSERT_EQ(r.directive, AccelDirective::kAccelerate);
  ASSERT_TRUE(r.accelerate);
  ASSERT_TRUE(r.competing_vehicle);
  // The re-designated competitor trails the ego in the predicted snapshot.
  const Snapshot predicted =
      PredictStates(s, 6, AccelDirective::kAccelerate,
                    f.Profile(0.9).accel_limit, f.config.accel_game_horizon,
                    f.config.min_directive_speed,
                    kMainSpeed + f.config.accel_speed_margin)
          .vehicles;
  EXPECT_LT(Get(predicted, *r.competing_vehicle).y_long,
            Get(predicted, 6).y_long);
}

TEST(AccelerationGameTest, NeitherFeasibleHolds) {
  Fixture f;
  // A wall of traffic alongside: no predicted slot either way.
  Snapshot s{Merger(60, 20, 0.5)};
  for (int i = 0; i < 30; ++i) {
    s.push_back(View(10 + i, 6.6, -100 + 8.0 * i, 20));
  }
  const AccelGameResult r = AccelerationGame(6, s, f.Profile(0.5), f.Context());
  EXPECT_EQ(r.directive, AccelDirective::kHold);
  EXPECT_FALSE(r.competing_vehicle);
}

TEST(AccelerationGameTest, DecelerateRedesignatesAheadOfTheSlot) {
  Fixture f;
  f.config.accel_game_horizon = 6.0;
  Snapshot s{Merger(60, 20, 0.1), View(5, 6.6, 55, kMainSpeed),
             View(3, 6.6, 90, kMainSpeed)};
  const AccelGameResult r = AccelerationGame(6, s, f.Profile(0.1), f.Context());
  ASSERT_EQ(r.directive, AccelDirective::kDecelerate);
  ASSERT_TRUE(r.decelerate);
  const Snapshot predicted = PredictStates(s, 6, AccelDirective::kDecelerate,
                                           f.Profile(0.1).accel_limit, 6.0,
                                           f.config.min_directive_speed, 1e9)
                                 .vehicles;
  // Vehicle 5, the competitor before the directive, ends up ahead.
  EXPECT_GT(Get(predicted, 5).y_long, Get(predicted, 6).y_long);
}

TEST(DecideTest, LatchHoldsUntilCentered) {
  Fixture f;
  LatchState latch;
  latch.target_lane = 3;
  latch.maneuver = Maneuver::kMergeNow;
  latch.competing_vehicle = 4;
  Snapshot s{Merger(120, 20, 0.5)};
  s[0].x_lat = 7.0;
  Decision d = Decide(6, s, f.Profile(0.5), f.Context(), latch);
  EXPECT_EQ(d.maneuver, Maneuver::kMergeNow);
  EXPECT_EQ(d.target_lane, 3);
  EXPECT_EQ(d.competing_vehicle, std::optional<int>(4));

  s[0].x_lat = 6.7;
  d = Decide(6, s, f.Profile(0.5), f.Context(), latch);
  EXPECT_EQ(d.maneuver, Maneuver::kStay);
  EXPECT_TRUE(latch.merged);
  EXPECT_FALSE(latch.target_lane);
}

TEST(DecideTest, GuardForcesDecelerationNearLaneEnd) {
  Fixture f;
  Snapshot s{Merger(130, 20, 0.5)};
  for (int i = 0; i < 30; ++i) {
    s.push_back(View(10 + i, 6.6, 10 + 8.0 * i, 20));
  }
  LatchState latch;
  const Decision d = Decide(6, s, f.Profile(0.5), f.Context(), latch);
  EXPECT_EQ(d.maneuver, Maneuver::kStay);
  EXPECT_EQ(d.accel, AccelDirective::kDecelerate);
  EXPECT_TRUE(d.forced_stop);
}

TEST(DecideTest, MandatoryMergeIntoSafeSlotNearLaneEnd) {
  Fixture f;
  // Fast and close to the end: a clear slot is taken even though the
  // merging game alone would keep driving in the merge lane.
  Snapshot s{Merger(140, 26, 0.9), View(3, 6.6, 175, 22.2),
             View(4, 6.6, 110, 22.2)};
  LatchState latch;
  const Decision d = Decide(6, s, f.Profile(0.9), f.Context(), latch);
  EXPECT_EQ(d.maneuver, Maneuver::kMergeNow);
  EXPECT_EQ(d.target_lane, 3);
}

TEST(DecideTest, PureFunctionOfInputs) {
  Fixture f;
  for (double q : {0.1, 0.5, 0.9}) {
    LatchState a, b;
    const Snapshot s = ScenarioOneStart(q);
    EXPECT_EQ(Decide(6, s, f.Profile(q), f.Context(), a),
              Decide(6, s, f.Profile(q), f.Context(), b));
  }
}

TEST(DecideTest, MergeNowNeverEmittedIntoPredictedCollision) {
  Fixture f;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> y(-40, 200);
  std::uniform_real_distribution<double> v(15, 30);
  std::uniform_real_distribution<double> unit(0, 1);
  int merges = 0;
  for (int i = 0; i < 3000; ++i) {
    const double q = unit(rng);
    Snapshot s{Merger(50 + 100 * unit(rng), v(rng), q)};
    for (int k = 0; k < 3; ++k) s.push_back(View(10 + k, 6.6, y(rng), v(rng)));
    LatchState latch;
    const DriverProfile p = f.Profile(q);
    const Decision d = Decide(6, s, p, f.Context(), latch);
    if (d.maneuver != Maneuver::kMergeNow) continue;
    ++merges;
    const VehicleView& ego = s[0];
    for (size_t k = 1; k < s.size(); ++k) {
      for (double t = 0; t <= p.prediction_time; t += 0.05) {
        OrientedRect self = ego.Rect();
        self.center = {6.6, ego.y_long + ego.speed * t};
        OrientedRect other = s[k].Rect();
        other.center.y += s[k].speed * t;
        ASSERT_LT(CollisionIndex(self, other), 1.0) << "case " << i;
      }
    }
  }
  EXPECT_GT(merges, 100);
}

TEST(DiscretionaryLaneChangeTest, AmpleHeadwayStays) {
  Fixture f;
  VehicleView ego = View(6, 6.6, 100, 22);
  ego.decision = true;
  Snapshot s{ego, View(2, 3.3, 180, 22)};
  std::vector<LaneChangeOption> options;
  EXPECT_EQ(
      DiscretionaryLaneChange(6, s, f.Profile(0.5), f.Context(), &options), 3);
  EXPECT_EQ(options.size(), 1u);
}

TEST(DiscretionaryLaneChangeTest, TightLeaderMovesLeft) {
  Fixture f;
  VehicleView ego = View(6, 6.6, 100, 22);
  ego.decision = true;
  Snapshot s{ego, View(5, 6.6, 110, 22), View(2, 3.3, 160, 22)};
  EXPECT_EQ(DiscretionaryLaneChange(6, s, f.Profile(0.1), f.Context()), 2);
}

TEST(DiscretionaryLaneChangeTest, CloseFastFollowerBlocksChange) {
  Fixture f;
  VehicleView ego = View(6, 6.6, 100, 22);
  ego.decision = true;
  Snapshot s{ego, View(5, 6.6, 110, 22), View(1, 3.3, 115, 22),
             View(2, 3.3, 80, 32)};
  const DriverProfile p = f.Profile(0.5);
  std::vector<LaneChangeOption> options;
  EXPECT_EQ(DiscretionaryLaneChange(6, s, p, f.Context(), &options), 3);
  ASSERT_EQ(options.size(), 1u);
  const LaneChangeOption& o = options[0];
  EXPECT_TRUE(o.safe);
  EXPECT_EQ(o.solution.actions.leader, Action::kStraight);
  // Direct evaluation: the cost against the fast follower outweighs the
  // headway gained, whatever the follower does.
  const double seen = 2.25 + 2.25 * p.magnification;
  const double u_left =
      HeadwayUtility(15 - seen, p) - MergeCostLeft(20 - seen, 10, p);
  const double u_stay = HeadwayUtility(10 - seen, p);
  EXPECT_NEAR(o.bimatrix.U1(Action::kLeft, Action::kStraight), u_left, 1e-9);
  EXPECT_NEAR(o.bimatrix.U1(Action::kStraight, Action::kStraight), u_stay,
              1e-9);
  EXPECT_LT(u_left, u_stay);
  EXPECT_FALSE(o.change);
}

TEST(NamesTest, ManeuverAndDirective) {
  EXPECT_EQ(ManeuverName(Maneuver::kMergeNow), "merge_now");
  EXPECT_EQ(ManeuverName(Maneuver::kLaneChange), "lane_change");
  EXPECT_EQ(DirectiveName(AccelDirective::kDecelerate), "decelerate");
}

}  // namespace
}  // namespace merge_sim
