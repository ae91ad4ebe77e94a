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

#ifndef MERGE_SIM_DRIVER_CONTROL_H_
#define MERGE_SIM_DRIVER_CONTROL_H_

#include <optional>

#include "merge_sim/dynamics.h"

namespace merge_sim {

// A pair of values at q = 0 and q = 1; intermediate q interpolates linearly.
struct LinearMap {
  double at_cautious = 0.0;
  double at_aggressive = 0.0;

  double operator()(double q) const {
    return at_cautious + (at_aggressive - at_cautious) * q;
  }
};

// Configurable shape of the aggressiveness maps.
struct ProfileEndpoints {
  LinearMap alpha{1.0, 0.3};
  LinearMap prediction_time{2.2, 0.6};  // s
  LinearMap accel_limit_g{0.1, 0.3};
  LinearMap lateral_accel_limit_g{0.1, 0.4};
  LinearMap magnification{1.0, 1.3};
  double visibility_distance = 100.0;           // m
  double sufficient_distance_multiplier = 2.0;  // x vehicle diagonal
  double brake_factor = 1.0;
};

struct DriverProfile {
  double q = 0.5;
  double alpha = 0.0;
  double prediction_time = 0.0;      // T(q), s
  double accel_limit = 0.0;          // g_l, m/s^2
  double lateral_accel_limit = 0.0;  // a_yl, m/s^2
  double magnification = 1.0;
  double visibility_distance = 0.0;  // d_v, m
  double sufficient_distance = 0.0;  // D_suf, m
  double brake_factor = 1.0;

  // alpha(q) * d_v, the saturation point of the headway utility.
  double HeadwayCap() const { return alpha * visibility_distance; }
};

// Throws std::invalid_argument when q is outside [0, 1].
DriverProfile ProfileFromQ(double q, const ProfileEndpoints& endpoints,
                           const VehicleParams& vehicle);

struct ControllerGains {
  double k_pg = 0.4;
  double k_dg = 0.1;
  double k_pl = 0.08;
  double k_dl = 0.08;
  double g_pl = 0.5 * kGravity;                   // m/s^2
  double delta_pl = 30.0 * 0.017453292519943295;  // rad
};

// Saturated PD acceleration. The upper bound is min(g_l, g_pl); braking is
// bounded by min(g_l * brake_factor, g_pl).
double LongitudinalAccel(const DriverProfile& profile,
                         const ControllerGains& gains, double e, double e_dot);

// Error fed to LongitudinalAccel when a leader is in range: the weighted mean
// of the velocity and headway channels. Without a headway channel the
// velocity error passes through unchanged.
struct BlendWeights {
  double velocity = 0.5;
  double headway = 0.5;
};
struct BlendedError {
  double e = 0.0;
  double e_dot = 0.0;
};
BlendedError BlendErrors(double e_v, double e_v_dot, std::optional<double> e_d,
                         std::optional<double> e_d_dot,
                         const BlendWeights& weights);

// Steering angle limit in rad from the lateral acceleration gain
// a_y / delta = v^2 / (57.3 L g + K_us v^2) (gain in g/deg), capped at
// gains.delta_pl. At v <= 0 the physical limit is returned.
double SteeringLimit(double lateral_accel_limit, double v,
                     const VehicleParams& params, double delta_pl);

// Saturated PD steering. Positive e_lat means the reference lies at larger x.
double SteeringCommand(const DriverProfile& profile,
                       const ControllerGains& gains, double e_lat,
                       double e_lat_dot, const VehicleParams& params, double v);

}  // namespace merge_sim

#endif  // MERGE_SIM_DRIVER_CONTROL_H_
