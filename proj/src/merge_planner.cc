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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace merge_sim {
namespace {

// Follower payoff for an action that is geometrically unavailable.
constexpr double kUnavailable = -1.0e6;
constexpr double kSlotSampleStep = 0.25;  // s

const VehicleView& Require(const Snapshot& snapshot, int id) {
  const VehicleView* v = FindVehicle(snapshot, id);
  if (v == nullptr) throw std::out_of_range("vehicle not in snapshot");
  return *v;
}

struct GapAndSpeed {
  double gap;
  double rel_speed;
};

GapAndSpeed OrAbsent(const std::optional<Neighbor>& n, double d_v) {
  if (!n) return {d_v, 0.0};
  return {n->gap, n->rel_speed};
}

double LeaderGap(const std::optional<Neighbor>& n, double d_v) {
  return n ? n->gap : d_v;
}

// Utility of moving into `lane` for `v`: headway there minus the cost
// against that lane's follower. kUnavailable when the lane is not mainline.
double MoveUtility(const VehicleView& v, int lane, const Snapshot& snapshot,
                   const PlannerContext& ctx) {
  if (!ctx.geometry->IsMainline(lane)) return kUnavailable;
  if (!v.decision && !ctx.config->scripted_can_vacate) return kUnavailable;
  const DriverProfile p = ProfileOf(v, ctx);
  const ObserverModel obs = ObserverFor(p);
  const std::vector<int> exclude{v.id};
  const auto lead = NearestInLane(snapshot, lane, v.y_long, v.length, v.speed,
                                  true, exclude, *ctx.geometry, obs);
  const auto follow = NearestInLane(snapshot, lane, v.y_long, v.length, v.speed,
                                    false, exclude, *ctx.geometry, obs);
  const GapAndSpeed f = OrAbsent(follow, p.visibility_distance);
  return Combine(HeadwayUtility(LeaderGap(lead, p.visibility_distance), p),
                 MergeCostLeft(f.gap, f.rel_speed, p));
}

double OwnLaneHeadwayUtility(const VehicleView& v, const Snapshot& snapshot,
                             const PlannerContext& ctx) {
  const DriverProfile p = ProfileOf(v, ctx);
  const ObserverModel obs = ObserverFor(p);
  const int lane = LaneOf(v.x_lat, *ctx.geometry);
  const auto lead = NearestInLane(snapshot, lane, v.y_long, v.length, v.speed,
                                  true, {v.id}, *ctx.geometry, obs);
  return HeadwayUtility(LeaderGap(lead, p.visibility_distance), p);
}

// An accelerating ego closes up on the vehicle currently ahead of it in the
// target lane but does not pass it: keep the predicted ego at least D_suf
// behind that vehicle's predicted rear bumper, at no more than its speed.
void ClampBehindLeader(const Snapshot& now, Snapshot& predicted, int ego_id,
                       int lane, const LaneGeometry& geometry, double min_gap) {
  const VehicleView& ego_now = Require(now, ego_id);
  const VehicleView* leader_now = nullptr;
  for (const VehicleView& v : now) {
    if (v.id == ego_id || LaneOf(v.x_lat, geometry) != lane) continue;
    if (v.y_long <= ego_now.y_long) continue;
    if (leader_now == nullptr || v.y_long < leader_now->y_long) leader_now = &v;
  }
  if (leader_now == nullptr) return;
  const VehicleView& leader = Require(predicted, leader_now->id);
  VehicleView* ego = nullptr;
  for (VehicleView& v : predicted) {
    if (v.id == ego_id) ego = &v;
  }
  const double limit =
      leader.y_long - 0.5 * (leader.length + ego->length) - min_gap;
  if (ego->y_long > limit) {
    ego->y_long = std::max(limit, ego_now.y_long);
    ego->speed = std::min(ego->speed, leader.speed);
  }
}

}  // namespace

std::string_view ManeuverName(Maneuver m) {
  switch (m) {
    case Maneuver::kStay:
      return "stay";
    case Maneuver::kMergeNow:
      return "merge_now";
    case Maneuver::kLaneChange:
      return "lane_change";
  }
  return "stay";
}

std::string_view DirectiveName(AccelDirective d) {
  switch (d) {
    case AccelDirective::kHold:
      return "hold";
    case AccelDirective::kAccelerate:
      return "accelerate";
    case AccelDirective::kDecelerate:
      return "decelerate";
  }
  return "hold";
}

DriverProfile ProfileOf(const VehicleView& v, const PlannerContext& ctx) {
  return ProfileFromQ(v.decision ? v.q : ctx.config->assumed_q, *ctx.endpoints,
                      *ctx.vehicle);
}

ObserverModel ObserverFor(const DriverProfile& profile) {
  return {profile.magnification, profile.visibility_distance, profile.q};
}

PredictedSnapshot PredictStates(const Snapshot& snapshot, int ego_id,
                                AccelDirective directive, double accel,
                                double horizon, double v_min, double v_max) {
  if (!(horizon >= 0)) throw std::invalid_argument("horizon must be >= 0");
  PredictedSnapshot out{horizon, snapshot};
  for (VehicleView& v : out.vehicles) {
    double a = 0.0;
    double bound = v.speed;
    if (v.id == ego_id) {
      if (directive == AccelDirective::kAccelerate) {
        a = std::abs(accel);
        bound = std::max(v_max, v.speed);
      }
      if (directive == AccelDirective::kDecelerate) {
        a = -std::abs(accel);
        bound = std::min(std::max(v_min, 0.0), v.speed);
      }
    }
    // Constant acceleration until the bound is reached, then cruise.
    const double t_ramp =
        a == 0.0 ? 0.0 : std::min(horizon, (bound - v.speed) / a);
    const double v_end = v.speed + a * t_ramp;
    v.y_long += v.speed * t_ramp + 0.5 * a * t_ramp * t_ramp +
                v_end * (horizon - t_ramp);
    v.speed = v_end;
  }
  return out;
}

bool SlotClear(int ego_id, int lane, const Snapshot& snapshot,
               const LaneGeometry& geometry, double magnification,
               double horizon) {
  const VehicleView& ego = Require(snapshot, ego_id);
  std::vector<const VehicleView*> occupants;
  for (const VehicleView& v : snapshot) {
    if (v.id == ego_id) continue;
    double x_min = 1e300, x_max = -1e300;
    for (const Vec2& c : Magnified(v.Rect(), magnification).Corners()) {
      x_min = std::min(x_min, c.x);
      x_max = std::max(x_max, c.x);
    }
    const auto lanes = LanesSpanned(x_min, x_max, geometry);
    if (std::find(lanes.begin(), lanes.end(), lane) != lanes.end()) {
      occupants.push_back(&v);
    }
  }
  const int samples = static_cast<int>(std::ceil(horizon / kSlotSampleStep));
  for (int k = 0; k <= samples; ++k) {
    const double t = std::min(k * kSlotSampleStep, horizon);
    OrientedRect self = ego.Rect();
    self.center = {geometry.Center(lane), ego.y_long + ego.speed * t};
    self.heading = 0.0;
    for (const VehicleView* v : occupants) {
      OrientedRect other = Magnified(v->Rect(), magnification);
      other.center.y += v->speed * t;
      if (Intersects(self, other)) return false;
    }
  }
  return true;
}

MergeGameResult MergingGame(int ego_id, const Snapshot& snapshot,
                            const DriverProfile& profile,
                            const PlannerContext& ctx,
                            const MergeGameOptions& options) {
  const LaneGeometry& geom = *ctx.geometry;
  const VehicleView& ego = Require(snapshot, ego_id);
  const ObserverModel obs = ObserverFor(profile);
  const double d_v = profile.visibility_distance;

  MergeGameResult result;
  const int lane = LaneOf(ego.x_lat, geom);
  const int target = lane - 1;
  result.region_open = lane == geom.MergeLane() &&
                       ego.y_long >= geom.merge.start &&
                       ego.y_long <= geom.merge.EntranceEnd();

  const Vicinity vic = ClassifyVicinity(ego_id, snapshot, geom, obs, ctx.noise);
  const double g_lead = LeaderGap(vic.left.leader, d_v);
  const GapAndSpeed p2 = OrAbsent(vic.left.follower, d_v);

  // The vehicle behind P2, which P1 faces if P2 vacates the lane.
  GapAndSpeed behind_p2{d_v, 0.0};
  if (vic.left.follower) {
    result.competing_vehicle = vic.left.follower->id;
    behind_p2 = OrAbsent(
        NearestInLane(snapshot, target, ego.y_long, ego.length, ego.speed,
                      false, {ego.id, vic.left.follower->id}, geom, obs),
        d_v);
  }

  const double d_e = options.lane_end_distance.value_or(
      std::max(geom.merge.EntranceEnd() - ego.y_long, 0.0));
  double stay_headway = 0.0;
  switch (ctx.config->stay_headway) {
    case StayHeadway::kLeader:
      stay_headway = LeaderGap(vic.own.leader, d_v);
      break;
    case StayHeadway::kLaneEnd:
      stay_headway = std::min(LeaderGap(vic.own.leader, d_v), d_e);
      break;
    case StayHeadway::kNone:
      break;
  }

  PayoffBimatrix& m = result.bimatrix;
  const double u_pos_left = HeadwayUtility(g_lead, profile);
  m.U1(Action::kLeft, Action::kStraight) =
      Combine(u_pos_left, MergeCostLeft(p2.gap, p2.rel_speed, profile));
  m.U1(Action::kLeft, Action::kLeft) = Combine(
      u_pos_left, MergeCostLeft(behind_p2.gap, behind_p2.rel_speed, profile));
  const double u_stay =
      Combine(HeadwayUtility(stay_headway, profile),
              MergeCostStay(d_e, ego.speed, profile, /*is_merging=*/true));
  m.U1(Action::kStraight, Action::kLeft) = u_stay;
  m.U1(Action::kStraight, Action::kStraight) = u_stay;

  if (vic.left.follower) {
    const VehicleView& p2v = Require(snapshot, vic.left.follower->id);
    const DriverProfile p2p = ProfileOf(p2v, ctx);
    // P2 keeps its lane: headway to P1 if P1 cuts in, else to its leader.
    m.U2(Action::kLeft, Action::kStraight) =
        HeadwayUtility(vic.left.follower->gap, p2p);
    m.U2(Action::kStraight, Action::kStraight) =
        OwnLaneHeadwayUtility(p2v, snapshot, ctx);
    // P2 vacates to its own left lane.
    const double vacate =
        MoveUtility(p2v, LaneOf(p2v.x_lat, geom) - 1, snapshot, ctx);
    m.U2(Action::kLeft, Action::kLeft) = vacate;
    m.U2(Action::kStraight, Action::kLeft) = vacate;
  }

  result.solution = SolveStackelberg(m);
  result.safe =
      geom.IsValidLane(target) &&
      SlotClear(ego_id, target, snapshot, geom, profile.magnification,
                options.safety_horizon.value_or(profile.prediction_time));
  result.merge = result.solution.actions.leader == Action::kLeft &&
                 result.safe && (!options.require_region || result.region_open);
  return result;
}

AccelGameResult AccelerationGame(int ego_id, const Snapshot& snapshot,
                                 const DriverProfile& profile,
                                 const PlannerContext& ctx) {
  const PlannerConfig& cfg = *ctx.config;
  const double horizon = cfg.accel_game_horizon > 0 ? cfg.accel_game_horizon
                                                    : profile.prediction_time;
  const double accel = cfg.directive_accel_fraction * profile.accel_limit;
  const VehicleView& ego = Require(snapshot, ego_id);
  const double v_max =
      ego.desired_speed > 0 ? ego.desired_speed + cfg.accel_speed_margin : 1e9;
  MergeGameOptions hypothetical;
  hypothetical.require_region = false;
  hypothetical.lane_end_distance = 0.0;
  hypothetical.safety_horizon = 0.0;

  AccelGameResult out;
  // A slot that is already admissible only waits for the entrance to open.
  if (ego.y_long < ctx.geometry->merge.start) {
    const MergeGameResult now =
        MergingGame(ego_id, snapshot, profile, ctx, hypothetical);
    if (now.merge) {
      out.competing_vehicle = now.competing_vehicle;
      return out;
    }
  }
  Snapshot ahead = PredictStates(snapshot, ego_id, AccelDirective::kAccelerate,
                                 accel, horizon, cfg.min_directive_speed, v_max)
                       .vehicles;
  ClampBehindLeader(snapshot, ahead, ego_id,
                    LaneOf(ego.x_lat, *ctx.geometry) - 1, *ctx.geometry,
                    profile.sufficient_distance);
  out.accelerate = MergingGame(ego_id, ahead, profile, ctx, hypothetical);
  out.decelerate =
      MergingGame(ego_id,
                  PredictStates(snapshot, ego_id, AccelDirective::kDecelerate,
                                accel, horizon, cfg.min_directive_speed, v_max)
                      .vehicles,
                  profile, ctx, hypothetical);

  const bool acc_ok = out.accelerate->merge;
  const bool dec_ok = out.decelerate->merge;
  if (dec_ok && (!acc_ok || out.decelerate->solution.leader_value >=
                                out.accelerate->solution.leader_value)) {
    out.directive = AccelDirective::kDecelerate;
    out.competing_vehicle = out.decelerate->competing_vehicle;
  } else if (acc_ok) {
    out.directive = AccelDirective::kAccelerate;
    out.competing_vehicle = out.accelerate->competing_vehicle;
  }
  return out;
}

int DiscretionaryLaneChange(int ego_id, const Snapshot& snapshot,
                            const DriverProfile& profile,
                            const PlannerContext& ctx,
                            std::vector<LaneChangeOption>* options) {
  const LaneGeometry& geom = *ctx.geometry;
  const VehicleView& ego = Require(snapshot, ego_id);
  const ObserverModel obs = ObserverFor(profile);
  const double d_v = profile.visibility_distance;
  const int lane = LaneOf(ego.x_lat, geom);
  const Vicinity vic = ClassifyVicinity(ego_id, snapshot, geom, obs, ctx.noise);
  const double u_pos_own =
      HeadwayUtility(LeaderGap(vic.own.leader, d_v), profile);

  int best_lane = lane;
  double best_gain = 0.0;
  for (int cand : {lane - 1, lane + 1}) {
    if (!geom.IsMainline(cand)) continue;
    const LaneNeighbors* slot = vic.ForLane(cand);
    LaneChangeOption opt;
    opt.lane = cand;
    const double u_pos_target =
        HeadwayUtility(LeaderGap(slot->leader, d_v), profile);
    const GapAndSpeed f = OrAbsent(slot->follower, d_v);
    GapAndSpeed behind_f{d_v, 0.0};
    if (slot->follower) {
      behind_f = OrAbsent(
          NearestInLane(snapshot, cand, ego.y_long, ego.length, ego.speed,
                        false, {ego.id, slot->follower->id}, geom, obs),
          d_v);
    }
    PayoffBimatrix& m = opt.bimatrix;
    m.U1(Action::kLeft, Action::kStraight) =
        Combine(u_pos_target, MergeCostLeft(f.gap, f.rel_speed, profile));
    m.U1(Action::kLeft, Action::kLeft) = Combine(
        u_pos_target, MergeCostLeft(behind_f.gap, behind_f.rel_speed, profile));
    const double u_stay =
        Combine(u_pos_own, MergeCostStay(0.0, ego.speed, profile, false));
    m.U1(Action::kStraight, Action::kLeft) = u_stay;
    m.U1(Action::kStraight, Action::kStraight) = u_stay;
    if (slot->follower) {
      const VehicleView& fv = Require(snapshot, slot->follower->id);
      const DriverProfile fp = ProfileOf(fv, ctx);
      m.U2(Action::kLeft, Action::kStraight) =
          HeadwayUtility(slot->follower->gap, fp);
      m.U2(Action::kStraight, Action::kStraight) =
          OwnLaneHeadwayUtility(fv, snapshot, ctx);
      // The follower escapes away from the ego's side.
      const double vacate =
          MoveUtility(fv, cand + (cand - lane), snapshot, ctx);
      m.U2(Action::kLeft, Action::kLeft) = vacate;
      m.U2(Action::kStraight, Action::kLeft) = vacate;
    }
    opt.solution = SolveStackelberg(m);
    opt.headway_gain = u_pos_target - u_pos_own;
    opt.safe = SlotClear(ego_id, cand, snapshot, geom, profile.magnification,
                         profile.prediction_time);
    opt.change = opt.solution.actions.leader == Action::kLeft && opt.safe &&
                 opt.headway_gain > ctx.config->hysteresis;
    if (opt.change && opt.headway_gain > best_gain) {
      best_gain = opt.headway_gain;
      best_lane = cand;
    }
    if (options != nullptr) options->push_back(opt);
  }
  return best_lane;
}

Decision Decide(int ego_id, const Snapshot& snapshot,
                const DriverProfile& profile, const PlannerContext& ctx,
                LatchState& latch) {
  const LaneGeometry& geom = *ctx.geometry;
  const PlannerConfig& cfg = *ctx.config;
  const VehicleView& ego = Require(snapshot, ego_id);
  const int lane = LaneOf(ego.x_lat, geom);

  Decision d;
  d.target_lane = lane;

  if (latch.target_lane) {
    const double e_lat = geom.Center(*latch.target_lane) - ego.x_lat;
    if (std::abs(e_lat) >= cfg.latch_tolerance) {
      d.maneuver = latch.maneuver;
      d.target_lane = *latch.target_lane;
      d.competing_vehicle = latch.competing_vehicle;
      return d;
    }
    if (latch.maneuver == Maneuver::kMergeNow) latch.merged = true;
    latch.target_lane.reset();
    latch.maneuver = Maneuver::kStay;
  }

  if (lane == geom.MergeLane()) {
    const MergeGameResult mg = MergingGame(ego_id, snapshot, profile, ctx);
    const double room = geom.merge.HardEnd() - ego.y_long - 0.5 * ego.length;
    const bool mandatory =
        mg.region_open && mg.safe &&
        (room <= 0 || ego.speed * ego.speed / (2.0 * room) >=
                          cfg.mandatory_merge_decel_g * kGravity);
    if (mg.merge || mandatory) {
      latch.target_lane = lane - 1;
      latch.maneuver = Maneuver::kMergeNow;
      latch.competing_vehicle = mg.competing_vehicle;
      d.maneuver = Maneuver::kMergeNow;
      d.target_lane = lane - 1;
      d.competing_vehicle = mg.competing_vehicle;
      return d;
    }
    const AccelGameResult ag = AccelerationGame(ego_id, snapshot, profile, ctx);
    d.accel = ag.directive;
    if (ag.directive != AccelDirective::kHold) {
      latch.competing_vehicle = ag.competing_vehicle;
    }
    d.competing_vehicle = latch.competing_vehicle;

    const double d_e = std::max(geom.merge.EntranceEnd() - ego.y_long, 0.0);
    const double stopping =
        ego.speed * ego.speed / (2.0 * cfg.guard_decel_g * kGravity) +
        profile.sufficient_distance;
    if (ag.directive == AccelDirective::kHold && d_e < stopping) {
      d.accel = AccelDirective::kDecelerate;
      d.forced_stop = true;
    }
    return d;
  }

  const int target = DiscretionaryLaneChange(ego_id, snapshot, profile, ctx);
  if (target != lane) {
    const ObserverModel obs = ObserverFor(profile);
    const auto follower =
        NearestInLane(snapshot, target, ego.y_long, ego.length, ego.speed,
                      false, {ego.id}, geom, obs);
    latch.target_lane = target;
    latch.maneuver = Maneuver::kLaneChange;
    latch.competing_vehicle =
        follower ? std::optional<int>(follower->id) : std::nullopt;
    d.maneuver = Maneuver::kLaneChange;
    d.target_lane = target;
    d.competing_vehicle = latch.competing_vehicle;
  }
  return d;
}

}  // namespace merge_sim
