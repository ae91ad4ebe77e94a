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

#ifndef MERGE_SIM_DYNAMICS_H_
#define MERGE_SIM_DYNAMICS_H_

// Planar two-wheel (bicycle) vehicle model.
//
// Frame: x is lateral (increasing to the right, toward the merge lane), y is
// longitudinal (direction of travel). The stored heading `theta` is measured
// from the road axis, so theta = 0 is straight ahead and a positive heading
// points left (toward decreasing x). The Cartesian pose rate below uses the
// conventional heading measured from the +x axis; the two differ by pi/2.

namespace merge_sim {

inline constexpr double kGravity = 9.81;
inline constexpr double kLowSpeedLimit =
    0.1;  // m/s, lateral model frozen below

struct VehicleState {
  double x_lat = 0.0;   // m
  double y_long = 0.0;  // m
  double theta = 0.0;   // rad, relative to the road axis
  double v_long = 0.0;  // m/s
  double v_lat = 0.0;   // m/s
  double r = 0.0;       // rad/s

  bool IsFinite() const;
  // Magnitude of the planar velocity.
  double Speed() const;
};

struct VehicleParams {
  double m = 1500.0;    // kg
  double i_z = 2500.0;  // kg m^2
  double l_f = 1.2;     // m
  double l_r = 1.6;     // m
  // Cornering stiffnesses enter the lateral matrix exactly as written; the
  // negative sign makes that matrix Hurwitz.
  double c_af = -60000.0;  // N/rad
  double c_ar = -60000.0;  // N/rad
  double k_us = 2.0;       // deg/g
  double width = 1.8;      // m
  double length = 4.5;     // m

  double Wheelbase() const { return l_f + l_r; }
  double Diagonal() const;
  // Throws std::invalid_argument when a positivity constraint is violated.
  void Validate() const;
};

struct Controls {
  double a = 0.0;      // m/s^2
  double delta = 0.0;  // rad
};

struct LateralRate {
  double dv_lat = 0.0;
  double dr = 0.0;
};

struct PoseRate {
  double dx = 0.0;
  double dy = 0.0;
  double dtheta = 0.0;
};

// State matrix of the lateral model at the given longitudinal speed,
// row-major {a11, a12, a21, a22}.
struct LateralMatrix {
  double a11, a12, a21, a22;
};
LateralMatrix LateralStateMatrix(const VehicleParams& params, double v_long);

// d/dt [v_lat, r] = A(v_long) [v_lat, r] + B delta. Returns zeros when
// v_long <= kLowSpeedLimit, where the model divides by a vanishing speed.
LateralRate LateralDerivative(const VehicleState& state,
                              const VehicleParams& params, double delta);

// (v cos(heading), v sin(heading), yaw_rate) with heading measured from +x.
PoseRate PlanarPoseRate(double speed, double heading, double yaw_rate);

// Pose rate of a vehicle in the road frame (dx lateral, dy longitudinal).
PoseRate PoseDerivative(const VehicleState& state);

// One classical Runge-Kutta step with controls held constant over dt.
// dt == 0 returns the input; v_long is floored at zero. Throws
// std::invalid_argument for negative dt or non-finite controls.
VehicleState Step(const VehicleState& state, const VehicleParams& params,
                  const Controls& controls, double dt);

}  // namespace merge_sim

#endif  // MERGE_SIM_DYNAMICS_H_
