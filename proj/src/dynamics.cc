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

#include "merge_sim/dynamics.h"

#include <array>
#include <cmath>
#include <stdexcept>

namespace merge_sim {

bool VehicleState::IsFinite() const {
  return std::isfinite(x_lat) && std::isfinite(y_long) &&
         std::isfinite(theta) && std::isfinite(v_long) &&
         std::isfinite(v_lat) && std::isfinite(r);
}

double VehicleState::Speed() const { return std::hypot(v_long, v_lat); }

double VehicleParams::Diagonal() const { return std::hypot(width, length); }

void VehicleParams::Validate() const {
  if (!(m > 0)) throw std::invalid_argument("vehicle.m must be > 0");
  if (!(i_z > 0)) throw std::invalid_argument("vehicle.i_z must be > 0");
  if (!(l_f > 0)) throw std::invalid_argument("vehicle.l_f must be > 0");
  if (!(l_r > 0)) throw std::invalid_argument("vehicle.l_r must be > 0");
  if (!(width > 0)) throw std::invalid_argument("vehicle.width must be > 0");
  if (!(length > 0)) throw std::invalid_argument("vehicle.length must be > 0");
  if (!std::isfinite(c_af) || !std::isfinite(c_ar) || !std::isfinite(k_us)) {
    throw std::invalid_argument("vehicle stiffness/understeer must be finite");
  }
}

LateralMatrix LateralStateMatrix(const VehicleParams& p, double v_long) {
  const double mv = p.m * v_long;
  const double iv = p.i_z * v_long;
  return {(p.c_af + p.c_ar) / mv,
          (-p.l_f * p.c_af + p.l_r * p.c_ar) / mv - v_long,
          (p.l_f * p.c_af - p.l_r * p.c_ar) / iv,
          (-p.l_f * p.l_f * p.c_af + p.l_r * p.l_r * p.c_ar) / iv};
}

LateralRate LateralDerivative(const VehicleState& s, const VehicleParams& p,
                              double delta) {
  if (!(s.v_long > kLowSpeedLimit)) return {};
  const LateralMatrix a = LateralStateMatrix(p, s.v_long);
  return {a.a11 * s.v_lat + a.a12 * s.r + p.c_af / p.m * delta,
          a.a21 * s.v_lat + a.a22 * s.r + p.l_f * p.c_af / p.i_z * delta};
}

PoseRate PlanarPoseRate(double speed, double heading, double yaw_rate) {
  return {speed * std::cos(heading), speed * std::sin(heading), yaw_rate};
}

PoseRate PoseDerivative(const VehicleState& s) {
  // PlanarPoseRate(v, theta + pi/2, r) written out so that theta = 0 gives
  // an exactly zero lateral rate.
  const double v = s.Speed();
  return {-v * std::sin(s.theta), v * std::cos(s.theta), s.r};
}

namespace {

using Vec = std::array<double, 6>;

Vec Pack(const VehicleState& s) {
  return {s.x_lat, s.y_long, s.theta, s.v_long, s.v_lat, s.r};
}

VehicleState Unpack(const Vec& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

Vec Derivative(const Vec& v, const VehicleParams& p, const Controls& c) {
  const VehicleState s = Unpack(v);
  const PoseRate pose = PoseDerivative(s);
  const LateralRate lat = LateralDerivative(s, p, c.delta);
  return {pose.dx, pose.dy, pose.dtheta, c.a, lat.dv_lat, lat.dr};
}

Vec Axpy(const Vec& x, double h, const Vec& k) {
  Vec out;
  for (size_t i = 0; i < out.size(); ++i) out[i] = x[i] + h * k[i];
  return out;
}

}  // namespace

VehicleState Step(const VehicleState& state, const VehicleParams& params,
                  const Controls& controls, double dt) {
  if (!(dt >= 0)) throw std::invalid_argument("dt must be >= 0");
  if (!std::isfinite(controls.a) || !std::isfinite(controls.delta)) {
    throw std::invalid_argument("controls must be finite");
  }
  if (dt == 0) return state;

  // Braking never reverses the vehicle: shorten the commanded deceleration so
  // that the step ends exactly at rest.
  Controls c = controls;
  if (c.a < 0 && state.v_long + c.a * dt < 0) c.a = -state.v_long / dt;

  const Vec y0 = Pack(state);
  const Vec k1 = Derivative(y0, params, c);
  const Vec k2 = Derivative(Axpy(y0, dt / 2, k1), params, c);
  const Vec k3 = Derivative(Axpy(y0, dt / 2, k2), params, c);
  const Vec k4 = Derivative(Axpy(y0, dt, k3), params, c);
  Vec y1;
  for (size_t i = 0; i < y1.size(); ++i) {
    y1[i] = y0[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  VehicleState out = Unpack(y1);
  if (out.v_long < 0) out.v_long = 0;
  return out;
}

}  // namespace merge_sim
