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

#include "merge_sim/config.h"

#include <cmath>
#include <set>
#include <stdexcept>

namespace merge_sim {
namespace {

using nlohmann::json;

// Reads optional members of one JSON object into existing fields and
// rejects keys that were never asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw std::invalid_argument(path_ + " must be an object");
    }
  }

  template <typename T>
  void Get(const char* key, T& out) {
    known_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument(path_ + "." + key + " has the wrong type");
    }
  }

  const json* Child(const char* key) {
    known_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  std::string Path(const char* key) const { return path_ + "." + key; }

  void Finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!known_.count(key)) {
        throw std::invalid_argument("unknown config key " + path_ + "." + key);
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

json MapJson(const LinearMap& m) {
  return {{"q0", m.at_cautious}, {"q1", m.at_aggressive}};
}

void ReadMap(Reader& parent, const char* key, LinearMap& m) {
  const json* c = parent.Child(key);
  if (c == nullptr) return;
  Reader r(*c, parent.Path(key));
  r.Get("q0", m.at_cautious);
  r.Get("q1", m.at_aggressive);
  r.Finish();
}

std::string StayHeadwayName(StayHeadway s) {
  switch (s) {
    case StayHeadway::kLeader:
      return "leader";
    case StayHeadway::kLaneEnd:
      return "lane_end";
    case StayHeadway::kNone:
      return "none";
  }
  return "none";
}

StayHeadway ParseStayHeadway(const std::string& s) {
  if (s == "leader") return StayHeadway::kLeader;
  if (s == "lane_end") return StayHeadway::kLaneEnd;
  if (s == "none") return StayHeadway::kNone;
  throw std::invalid_argument(
      "planner.stay_headway must be leader|lane_end|none");
}

void Require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void SimConfig::Validate() const {
  vehicle.Validate();
  Require(dt > 0 && std::isfinite(dt), "dt must be > 0");
  Require(t_max > 0, "t_max must be > 0");
  const double ratio = planner.epoch / dt;
  Require(planner.epoch > 0 && std::abs(ratio - std::round(ratio)) < 1e-6 &&
              std::round(ratio) >= 1,
          "planner.epoch must be a positive multiple of dt");
  Require(settle_time >= 0, "settle_time must be >= 0");
  Require(
      gains.k_pg >= 0 && gains.k_dg >= 0 && gains.k_pl >= 0 && gains.k_dl >= 0,
      "controller gains must be >= 0");
  Require(gains.g_pl >= 0.3 * kGravity, "gains.g_pl must be >= 0.3 g");
  Require(gains.delta_pl > 0, "gains.delta_pl must be > 0");
  Require(profile.visibility_distance > 0,
          "profile.visibility_distance must be > 0");
  Require(profile.sufficient_distance_multiplier >= 0,
          "profile.sufficient_distance_multiplier must be >= 0");
  Require(profile.magnification.at_cautious >= 1.0 &&
              profile.magnification.at_aggressive <= 1.3 &&
              profile.magnification.at_aggressive >=
                  profile.magnification.at_cautious,
          "profile.magnification must map into [1, 1.3]");
  Require(profile.accel_limit_g.at_cautious >= 0.1 &&
              profile.accel_limit_g.at_aggressive <= 0.3 &&
              profile.accel_limit_g.at_aggressive >=
                  profile.accel_limit_g.at_cautious,
          "profile.accel_limit_g must be non-decreasing within [0.1, 0.3]");
  Require(profile.prediction_time.at_aggressive <=
              profile.prediction_time.at_cautious,
          "profile.prediction_time must be non-increasing in q");
  Require(planner.latch_tolerance > 0, "planner.latch_tolerance must be > 0");
  Require(planner.hysteresis >= 0, "planner.hysteresis must be >= 0");
  Require(planner.assumed_q >= 0 && planner.assumed_q <= 1,
          "planner.assumed_q must lie in [0, 1]");
  Require(noise_sigma0 >= 0, "noise_sigma0 must be >= 0");
}

json ToJson(const SimConfig& c) {
  return {
      {"dt", c.dt},
      {"t_max", c.t_max},
      {"settle_time", c.settle_time},
      {"settle_accel", c.settle_accel},
      {"seed", c.seed},
      {"noise", c.noise},
      {"noise_sigma0", c.noise_sigma0},
      {"vehicle",
       {{"m", c.vehicle.m},
        {"i_z", c.vehicle.i_z},
        {"l_f", c.vehicle.l_f},
        {"l_r", c.vehicle.l_r},
        {"c_af", c.vehicle.c_af},
        {"c_ar", c.vehicle.c_ar},
        {"k_us", c.vehicle.k_us},
        {"width", c.vehicle.width},
        {"length", c.vehicle.length}}},
      {"profile",
       {{"alpha", MapJson(c.profile.alpha)},
        {"prediction_time", MapJson(c.profile.prediction_time)},
        {"accel_limit_g", MapJson(c.profile.accel_limit_g)},
        {"lateral_accel_limit_g", MapJson(c.profile.lateral_accel_limit_g)},
        {"magnification", MapJson(c.profile.magnification)},
        {"visibility_distance", c.profile.visibility_distance},
        {"sufficient_distance_multiplier",
         c.profile.sufficient_distance_multiplier},
        {"brake_factor", c.profile.brake_factor}}},
      {"gains",
       {{"k_pg", c.gains.k_pg},
        {"k_dg", c.gains.k_dg},
        {"k_pl", c.gains.k_pl},
        {"k_dl", c.gains.k_dl},
        {"g_pl", c.gains.g_pl},
        {"delta_pl", c.gains.delta_pl}}},
      {"following",
       {{"weight_velocity", c.following.weights.velocity},
        {"weight_headway", c.following.weights.headway},
        {"standstill_gap", c.following.standstill_gap},
        {"time_gap_scale", c.following.time_gap_scale},
        {"slot_centering", c.following.slot_centering}}},
      {"planner",
       {{"epoch", c.planner.epoch},
        {"latch_tolerance", c.planner.latch_tolerance},
        {"hysteresis", c.planner.hysteresis},
        {"directive_accel_fraction", c.planner.directive_accel_fraction},
        {"accel_game_horizon", c.planner.accel_game_horizon},
        {"guard_decel_g", c.planner.guard_decel_g},
        {"mandatory_merge_decel_g", c.planner.mandatory_merge_decel_g},
        {"accel_speed_margin", c.planner.accel_speed_margin},
        {"min_directive_speed", c.planner.min_directive_speed},
        {"assumed_q", c.planner.assumed_q},
        {"stay_headway", StayHeadwayName(c.planner.stay_headway)},
        {"scripted_can_vacate", c.planner.scripted_can_vacate}}},
  };
}

SimConfig ConfigFromJson(const json& j) {
  SimConfig c;
  Reader top(j, "config");
  top.Get("dt", c.dt);
  top.Get("t_max", c.t_max);
  top.Get("settle_time", c.settle_time);
  top.Get("settle_accel", c.settle_accel);
  top.Get("seed", c.seed);
  top.Get("noise", c.noise);
  top.Get("noise_sigma0", c.noise_sigma0);
  if (const json* v = top.Child("vehicle")) {
    Reader r(*v, "config.vehicle");
    r.Get("m", c.vehicle.m);
    r.Get("i_z", c.vehicle.i_z);
    r.Get("l_f", c.vehicle.l_f);
    r.Get("l_r", c.vehicle.l_r);
    r.Get("c_af", c.vehicle.c_af);
    r.Get("c_ar", c.vehicle.c_ar);
    r.Get("k_us", c.vehicle.k_us);
    r.Get("width", c.vehicle.width);
    r.Get("length", c.vehicle.length);
    r.Finish();
  }
  if (const json* p = top.Child("profile")) {
    Reader r(*p, "config.profile");
    ReadMap(r, "alpha", c.profile.alpha);
    ReadMap(r, "prediction_time", c.profile.prediction_time);
    ReadMap(r, "accel_limit_g", c.profile.accel_limit_g);
    ReadMap(r, "lateral_accel_limit_g", c.profile.lateral_accel_limit_g);
    ReadMap(r, "magnification", c.profile.magnification);
    r.Get("visibility_distance", c.profile.visibility_distance);
    r.Get("sufficient_distance_multiplier",
          c.profile.sufficient_distance_multiplier);
    r.Get("brake_factor", c.profile.brake_factor);
    r.Finish();
  }
  if (const json* g = top.Child("gains")) {
    Reader r(*g, "config.gains");
    r.Get("k_pg", c.gains.k_pg);
    r.Get("k_dg", c.gains.k_dg);
    r.Get("k_pl", c.gains.k_pl);
    r.Get("k_dl", c.gains.k_dl);
    r.Get("g_pl", c.gains.g_pl);
    r.Get("delta_pl", c.gains.delta_pl);
    r.Finish();
  }
  if (const json* f = top.Child("following")) {
    Reader r(*f, "config.following");
    r.Get("weight_velocity", c.following.weights.velocity);
    r.Get("weight_headway", c.following.weights.headway);
    r.Get("standstill_gap", c.following.standstill_gap);
    r.Get("time_gap_scale", c.following.time_gap_scale);
    r.Get("slot_centering", c.following.slot_centering);
    r.Finish();
  }
  if (const json* p = top.Child("planner")) {
    Reader r(*p, "config.planner");
    r.Get("epoch", c.planner.epoch);
    r.Get("latch_tolerance", c.planner.latch_tolerance);
    r.Get("hysteresis", c.planner.hysteresis);
    r.Get("directive_accel_fraction", c.planner.directive_accel_fraction);
    r.Get("accel_game_horizon", c.planner.accel_game_horizon);
    r.Get("guard_decel_g", c.planner.guard_decel_g);
    r.Get("mandatory_merge_decel_g", c.planner.mandatory_merge_decel_g);
    r.Get("accel_speed_margin", c.planner.accel_speed_margin);
    r.Get("min_directive_speed", c.planner.min_directive_speed);
    r.Get("assumed_q", c.planner.assumed_q);
    r.Get("scripted_can_vacate", c.planner.scripted_can_vacate);
    std::string stay = StayHeadwayName(c.planner.stay_headway);
    r.Get("stay_headway", stay);
    c.planner.stay_headway = ParseStayHeadway(stay);
    r.Finish();
  }
  top.Finish();
  return c;
}

}  // namespace merge_sim
