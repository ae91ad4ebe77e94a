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

#include "merge_sim/simulation.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "merge_sim/driver_control.h"
#include "merge_sim/dynamics.h"
#include "merge_sim/perception.h"

namespace merge_sim {
namespace {

using nlohmann::json;

constexpr double kOnCenterTolerance = 1e-6;  // m
// Share of the physical braking limit at which the lane end takes over.
constexpr double kLaneEndBrakeFraction = 0.95;

ScenarioVehicle Scripted(int id, double x, double y, double v_kmh) {
  ScenarioVehicle v;
  v.id = id;
  v.x0_m = x;
  v.y0_m = y;
  v.v0_kmh = v_kmh;
  return v;
}

ScenarioVehicle Merger(double y, double q) {
  ScenarioVehicle v = Scripted(kMergingVehicleId, 9.9, y, 70.0);
  v.kind = VehicleKind::kDecision;
  v.q = q;
  v.v_des_kmh = 80.0;
  return v;
}

std::string KindName(VehicleKind k) {
  return k == VehicleKind::kDecision ? "decision" : "scripted";
}

struct Agent {
  ScenarioVehicle spec;
  VehicleState state;
  DriverProfile profile;
  LatchState latch;
  Decision decision;
  double a = 0.0;  // last commanded acceleration
  bool decides() const { return spec.kind == VehicleKind::kDecision; }
};

Snapshot MakeSnapshot(const std::vector<Agent>& agents,
                      const VehicleParams& params) {
  Snapshot s;
  s.reserve(agents.size());
  for (const Agent& ag : agents) {
    VehicleView v;
    v.id = ag.spec.id;
    v.x_lat = ag.state.x_lat;
    v.y_long = ag.state.y_long;
    v.heading = ag.state.theta;
    v.speed = ag.state.v_long;
    v.length = params.length;
    v.width = params.width;
    v.decision = ag.decides();
    v.q = ag.spec.q;
    if (ag.decides()) v.desired_speed = ag.spec.DesiredSpeed();
    s.push_back(v);
  }
  return s;
}

class Controller {
 public:
  Controller(const SimConfig& config, const LaneGeometry& geometry)
      : config_(config), geometry_(geometry) {}

  Controls Command(const Agent& ag, const Snapshot& snapshot) const {
    if (!ag.decides()) return {};
    return {Longitudinal(ag, snapshot), Steering(ag)};
  }

 private:
  double Steering(const Agent& ag) const {
    const int lane = ag.latch.target_lane ? *ag.latch.target_lane
                                          : LaneOf(ag.state.x_lat, geometry_);
    const double e_lat = geometry_.Center(lane) - ag.state.x_lat;
    const double e_lat_dot = -PoseDerivative(ag.state).dx;
    return SteeringCommand(ag.profile, config_.gains, e_lat, e_lat_dot,
                           config_.vehicle, ag.state.v_long);
  }

  double Follow(const Agent& ag, const Neighbor& leader,
                const std::optional<Neighbor>& follower, double e_v,
                double e_v_dot) const {
    const FollowingConfig& f = config_.following;
    double desired = f.standstill_gap + ag.state.v_long * f.time_gap_scale *
                                            ag.profile.prediction_time;
    if (f.slot_centering && follower) {
      desired = std::min(desired, 0.5 * (leader.gap + follower->gap));
    }
    const BlendedError b = BlendErrors(e_v, e_v_dot, leader.gap - desired,
                                       leader.rel_speed, f.weights);
    return LongitudinalAccel(ag.profile, config_.gains, b.e, b.e_dot);
  }

  double Longitudinal(const Agent& ag, const Snapshot& snapshot) const {
    const FollowingConfig& f = config_.following;
    const double v = ag.state.v_long;
    if (ag.decision.forced_stop) {
      return -std::min(config_.planner.guard_decel_g * kGravity,
                       config_.gains.g_pl);
    }
    const double e_v = ag.spec.DesiredSpeed() - v;
    const double e_v_dot = -ag.a;
    const double a_free =
        LongitudinalAccel(ag.profile, config_.gains, e_v, e_v_dot);

    const int lane = LaneOf(ag.state.x_lat, geometry_);
    std::vector<int> lanes{lane};
    if (ag.latch.target_lane && *ag.latch.target_lane != lane) {
      lanes.push_back(*ag.latch.target_lane);
    } else if (lane == geometry_.MergeLane() &&
               ag.decision.accel == AccelDirective::kAccelerate) {
      lanes.push_back(lane - 1);
    }
    const ObserverModel observer{1.0, ag.profile.visibility_distance,
                                 ag.profile.q};
    const std::vector<int> exclude{ag.spec.id};
    const double length = config_.vehicle.length;

    const double a_dir =
        config_.planner.directive_accel_fraction * ag.profile.accel_limit;
    double a = a_free;
    if (ag.decision.accel == AccelDirective::kAccelerate) {
      a = v < ag.spec.DesiredSpeed() + config_.planner.accel_speed_margin
              ? a_dir
              : 0.0;
    } else if (ag.decision.accel == AccelDirective::kDecelerate) {
      a = v > config_.planner.min_directive_speed ? -a_dir : 0.0;
    }
    // The merge lane is a dead end: never plan to pass its hard end.
    if (lane == geometry_.MergeLane() && !ag.latch.target_lane) {
      const double room = geometry_.merge.HardEnd() - ag.state.y_long -
                          0.5 * length - config_.following.standstill_gap;
      const double needed =
          room > 0 ? v * v / (2.0 * room) : config_.gains.g_pl;
      if (needed >= kLaneEndBrakeFraction * config_.gains.g_pl) {
        a = std::min(a, -std::min(needed, config_.gains.g_pl));
      }
    }
    for (int l : lanes) {
      const auto leader = NearestInLane(snapshot, l, ag.state.y_long, length, v,
                                        true, exclude, geometry_, observer);
      if (!leader) continue;
      const auto follower =
          NearestInLane(snapshot, l, ag.state.y_long, length, v, false, exclude,
                        geometry_, observer);
      const double a_follow = Follow(ag, *leader, follower, e_v, e_v_dot);
      if (ag.decision.accel == AccelDirective::kHold) {
        a = std::min(a, a_follow);
      } else {
        const double desired =
            f.standstill_gap +
            v * f.time_gap_scale * ag.profile.prediction_time;
        if (leader->gap < desired) a = std::min(a, a_follow);
      }
    }
    return a;
  }

  const SimConfig& config_;
  const LaneGeometry& geometry_;
};

bool Settled(const Agent& ag, const LaneGeometry& geometry,
             const SimConfig& config) {
  const int lane = LaneOf(ag.state.x_lat, geometry);
  return geometry.IsMainline(lane) && !ag.latch.target_lane &&
         std::abs(geometry.Center(lane) - ag.state.x_lat) <
             config.planner.latch_tolerance &&
         ag.decision.maneuver == Maneuver::kStay &&
         std::abs(ag.a) < config.settle_accel;
}

}  // namespace

void Scenario::Validate() const {
  geometry.Validate();
  std::set<int> ids;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const ScenarioVehicle& v = vehicles[i];
    const std::string where = "vehicles[" + std::to_string(i) + "]";
    if (!ids.insert(v.id).second) {
      throw std::invalid_argument(where + ".id: duplicate id " +
                                  std::to_string(v.id));
    }
    if (!(v.v0_kmh > 0) || !std::isfinite(v.v0_kmh)) {
      throw std::invalid_argument(where + ".v0_kmh: must be > 0");
    }
    if (v.v_des_kmh && !(*v.v_des_kmh > 0)) {
      throw std::invalid_argument(where + ".v_des_kmh: must be > 0");
    }
    if (!std::isfinite(v.y0_m)) {
      throw std::invalid_argument(where + ".y0_m: must be finite");
    }
    const int lane = std::isfinite(v.x0_m) ? LaneOf(v.x0_m, geometry) : 0;
    if (lane == 0 ||
        std::abs(geometry.Center(lane) - v.x0_m) > kOnCenterTolerance) {
      throw std::invalid_argument(where + ".x0_m: not on a lane center");
    }
    if (!(v.q >= 0.0 && v.q <= 1.0)) {
      throw std::invalid_argument(where + ".q: must lie in [0, 1]");
    }
  }
}

const ScenarioVehicle* Scenario::Find(int id) const {
  for (const ScenarioVehicle& v : vehicles) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

Scenario BuiltinScenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "scenario1") {
    s.vehicles = {Scripted(1, 0.0, 30.0, 80.0),  Scripted(2, 3.3, 30.0, 80.0),
                  Scripted(3, 6.6, 30.0, 80.0),  Scripted(4, 6.6, 5.0, 80.0),
                  Scripted(5, 6.6, -10.0, 80.0), Merger(10.0, 0.5)};
  } else if (name == "scenario2") {
    s.vehicles = {Scripted(1, 0.0, 10.0, 80.0),  Scripted(2, 3.3, 10.0, 80.0),
                  Scripted(3, 6.6, 10.0, 80.0),  Scripted(4, 6.6, 5.0, 80.0),
                  Scripted(5, 6.6, -10.0, 80.0), Merger(0.0, 0.5)};
  } else {
    throw std::invalid_argument("unknown built-in scenario: " + name);
  }
  return s;
}

Scenario ScenarioFromJson(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be an object");
  Scenario s;
  try {
    s.name = j.value("name", std::string("custom"));
    if (j.contains("geometry")) {
      const json& g = j.at("geometry");
      s.geometry.lane_centers =
          g.value("lane_centers", s.geometry.lane_centers);
      s.geometry.lane_width = g.value("lane_width", s.geometry.lane_width);
      if (g.contains("merge")) {
        const json& m = g.at("merge");
        s.geometry.merge.start = m.value("start", s.geometry.merge.start);
        s.geometry.merge.entrance_length =
            m.value("entrance_length", s.geometry.merge.entrance_length);
        s.geometry.merge.extension =
            m.value("extension", s.geometry.merge.extension);
      }
    }
    const json& vs = j.at("vehicles");
    if (!vs.is_array()) {
      throw std::invalid_argument("vehicles: must be an array");
    }
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const json& e = vs[i];
      const std::string where = "vehicles[" + std::to_string(i) + "]";
      for (const char* key : {"id", "x0_m", "y0_m", "v0_kmh"}) {
        if (!e.contains(key)) {
          throw std::invalid_argument(where + "." + key + ": missing");
        }
      }
      ScenarioVehicle v;
      v.id = e.at("id").get<int>();
      v.x0_m = e.at("x0_m").get<double>();
      v.y0_m = e.at("y0_m").get<double>();
      v.v0_kmh = e.at("v0_kmh").get<double>();
      const std::string kind = e.value("kind", std::string("scripted"));
      if (kind == "decision") {
        v.kind = VehicleKind::kDecision;
      } else if (kind != "scripted") {
        throw std::invalid_argument(where + ".kind: must be scripted|decision");
      }
      v.q = e.value("q", 0.5);
      if (e.contains("v_des_kmh"))
        v.v_des_kmh = e.at("v_des_kmh").get<double>();
      s.vehicles.push_back(v);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
  s.Validate();
  return s;
}

json ToJson(const Scenario& s) {
  json vehicles = json::array();
  for (const ScenarioVehicle& v : s.vehicles) {
    json e = {
        {"id", v.id},         {"x0_m", v.x0_m},           {"y0_m", v.y0_m},
        {"v0_kmh", v.v0_kmh}, {"kind", KindName(v.kind)}, {"q", v.q}};
    if (v.v_des_kmh) e["v_des_kmh"] = *v.v_des_kmh;
    vehicles.push_back(e);
  }
  const LaneGeometry& g = s.geometry;
  return {{"name", s.name},
          {"geometry",
           {{"lane_centers", g.lane_centers},
            {"lane_width", g.lane_width},
            {"merge",
             {{"start", g.merge.start},
              {"entrance_length", g.merge.entrance_length},
              {"extension", g.merge.extension}}}}},
          {"vehicles", vehicles}};
}

void SetAggressiveness(Scenario& scenario, int id, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("q for vehicle " + std::to_string(id) +
                                " must lie in [0, 1]");
  }
  for (ScenarioVehicle& v : scenario.vehicles) {
    if (v.id == id) {
      v.kind = VehicleKind::kDecision;
      v.q = q;
      return;
    }
  }
  throw std::invalid_argument("no vehicle with id " + std::to_string(id));
}

std::vector<LogRow> TrajectoryLog::Series(int id) const {
  std::vector<LogRow> out;
  for (const LogRow& r : rows) {
    if (r.id == id) out.push_back(r);
  }
  return out;
}

std::vector<int> TrajectoryLog::Ids() const {
  std::vector<int> ids;
  for (const LogRow& r : rows) {
    if (std::find(ids.begin(), ids.end(), r.id) == ids.end()) {
      ids.push_back(r.id);
    }
  }
  return ids;
}

RunResult Run(const Scenario& scenario, const SimConfig& config) {
  scenario.Validate();
  config.Validate();
  const LaneGeometry& geom = scenario.geometry;

  std::vector<Agent> agents;
  for (const ScenarioVehicle& v : scenario.vehicles) {
    Agent ag;
    ag.spec = v;
    ag.state.x_lat = v.x0_m;
    ag.state.y_long = v.y0_m;
    ag.state.v_long = v.V0();
    ag.profile = ProfileFromQ(v.q, config.profile, config.vehicle);
    ag.decision.target_lane = LaneOf(v.x0_m, geom);
    agents.push_back(ag);
  }

  std::mt19937_64 rng(config.seed);
  PerceptionNoise noise{config.noise_sigma0, &rng};
  const PlannerContext ctx{&geom, &config.profile, &config.vehicle,
                           &config.planner, config.noise ? &noise : nullptr};
  const Controller controller(config, geom);

  RunResult result;
  result.log.dt = config.dt;
  if (agents.empty()) return result;

  const long long steps = std::llround(config.t_max / config.dt);
  const long long epoch_steps = std::llround(config.planner.epoch / config.dt);
  const long long settle_steps = std::llround(config.settle_time / config.dt);
  const bool any_decision = std::any_of(
      agents.begin(), agents.end(), [](const Agent& a) { return a.decides(); });
  long long quiet_steps = 0;

  for (long long k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    const Snapshot snapshot = MakeSnapshot(agents, config.vehicle);

    if (k % epoch_steps == 0) {
      for (Agent& ag : agents) {
        if (!ag.decides()) continue;
        ag.decision = Decide(ag.spec.id, snapshot, ag.profile, ctx, ag.latch);
        if (ag.decision.forced_stop) result.forced_stop = true;
      }
    }

    std::vector<double> i_col(agents.size(), 0.0);
    std::vector<bool> hit(agents.size(), false);
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (std::size_t j = i + 1; j < agents.size(); ++j) {
        const OrientedRect a = snapshot[i].Rect();
        const OrientedRect b = snapshot[j].Rect();
        const double c = CollisionIndex(a, b);
        i_col[i] = std::max(i_col[i], c);
        i_col[j] = std::max(i_col[j], c);
        if (Intersects(a, b)) {
          hit[i] = hit[j] = true;
          if (!result.collision) {
            result.collision = true;
            result.collision_ids = {agents[i].spec.id, agents[j].spec.id};
            result.collision_time = t;
          }
        }
      }
    }

    for (std::size_t i = 0; i < agents.size(); ++i) {
      const Agent& ag = agents[i];
      LogRow row;
      row.t = t;
      row.id = ag.spec.id;
      row.x_lat = ag.state.x_lat;
      row.y_long = ag.state.y_long;
      row.v = ag.state.Speed();
      row.theta = ag.state.theta;
      row.lane = LaneOf(ag.state.x_lat, geom);
      if (ag.decides()) {
        row.maneuver = ag.decision.maneuver;
        row.accel = ag.decision.accel;
        row.competing_id = ag.decision.competing_vehicle;
        if (ag.decision.forced_stop) row.flags |= kFlagForcedStop;
      }
      row.i_col = i_col[i];
      if (hit[i]) row.flags |= kFlagCollision;
      result.log.rows.push_back(row);
    }
    result.end_time = t;
    if (result.collision || k >= steps) break;

    if (any_decision) {
      const bool quiet =
          std::all_of(agents.begin(), agents.end(), [&](const Agent& a) {
            return !a.decides() || Settled(a, geom, config);
          });
      quiet_steps = quiet ? quiet_steps + 1 : 0;
      if (quiet_steps > settle_steps) {
        result.settled = true;
        break;
      }
    }

    std::vector<Controls> controls(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      controls[i] = controller.Command(agents[i], snapshot);
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
      agents[i].a = controls[i].a;
      agents[i].state =
          Step(agents[i].state, config.vehicle, controls[i], config.dt);
    }
  }
  return result;
}

}  // namespace merge_sim
