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

#include "merge_sim/driver_control.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace merge_sim {

DriverProfile ProfileFromQ(double q, const ProfileEndpoints& ep,
                           const VehicleParams& vehicle) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("aggressiveness q must lie in [0, 1]");
  }
  DriverProfile p;
  p.q = q;
  p.alpha = ep.alpha(q);
  p.prediction_time = ep.prediction_time(q);
  p.accel_limit = ep.accel_limit_g(q) * kGravity;
  p.lateral_accel_limit = ep.lateral_accel_limit_g(q) * kGravity;
  p.magnification = ep.magnification(q);
  p.visibility_distance = ep.visibility_distance;
  p.sufficient_distance =
      ep.sufficient_distance_multiplier * vehicle.Diagonal();
  p.brake_factor = ep.brake_factor;
  return p;
}

double LongitudinalAccel(const DriverProfile& profile,
                         const ControllerGains& gains, double e, double e_dot) {
  const double pd = gains.k_pg * e + gains.k_dg * e_dot;
  const double upper = std::min(profile.accel_limit, gains.g_pl);
  const double lower =
      -std::min(profile.accel_limit * profile.brake_factor, gains.g_pl);
  return std::clamp(pd, lower, upper);
}

BlendedError BlendErrors(double e_v, double e_v_dot, std::optional<double> e_d,
                         std::optional<double> e_d_dot, const BlendWeights& w) {
  if (!e_d) return {e_v, e_v_dot};
  const double total = w.velocity + w.headway;
  return {(w.velocity * e_v + w.headway * *e_d) / total,
          (w.velocity * e_v_dot + w.headway * e_d_dot.value_or(0.0)) / total};
}

double SteeringLimit(double lateral_accel_limit, double v,
                     const VehicleParams& params, double delta_pl) {
  if (!(v > 0)) return delta_pl;
  const double v2 = v * v;
  const double gain_g_per_deg =
      v2 / (57.3 * params.Wheelbase() * kGravity + params.k_us * v2);
  const double limit_deg = (lateral_accel_limit / kGravity) / gain_g_per_deg;
  return std::min(limit_deg * std::numbers::pi / 180.0, delta_pl);
}

double SteeringCommand(const DriverProfile& profile,
                       const ControllerGains& gains, double e_lat,
                       double e_lat_dot, const VehicleParams& params,
                       double v) {
  const double limit = SteeringLimit(profile.lateral_accel_limit,
                                     std::max(v, 0.0), params, gains.delta_pl);
  const double pd = gains.k_pl * e_lat + gains.k_dl * e_lat_dot;
  return std::clamp(pd, -limit, limit);
}

}  // namespace merge_sim
