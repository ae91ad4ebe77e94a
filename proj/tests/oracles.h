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

#ifndef MERGE_SIM_TESTS_ORACLES_H_
#define MERGE_SIM_TESTS_ORACLES_H_

// Reference implementations written independently of the library, used as
// test oracles.

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "merge_sim/dynamics.h"
#include "merge_sim/game.h"
#include "merge_sim/perception.h"

namespace merge_sim::oracle {

// Element-by-element evaluation of the lateral bicycle model.
inline std::pair<double, double> LateralRates(double m, double i_z, double l_f,
                                              double l_r, double c_f,
                                              double c_r, double v_long,
                                              double v_lat, double r,
                                              double delta) {
  const double a11 = (c_f + c_r) / (m * v_long);
  const double a12 = (-l_f * c_f + l_r * c_r) / (m * v_long) - v_long;
  const double a21 = (l_f * c_f - l_r * c_r) / (i_z * v_long);
  const double a22 = (-l_f * l_f * c_f + l_r * l_r * c_r) / (i_z * v_long);
  const double b1 = c_f / m;
  const double b2 = l_f * c_f / i_z;
  return {a11 * v_lat + a12 * r + b1 * delta,
          a21 * v_lat + a22 * r + b2 * delta};
}

// Corners of a rectangle whose long axis makes angle `heading` with +y,
// positive heading turning toward -x.
inline std::array<Vec2, 4> RectPolygon(double cx, double cy, double heading,
                                       double half_width, double half_length) {
  const double fx = -std::sin(heading) * half_length;
  const double fy = std::cos(heading) * half_length;
  const double rx = std::cos(heading) * half_width;
  const double ry = std::sin(heading) * half_width;
  return {Vec2{cx + fx + rx, cy + fy + ry}, Vec2{cx + fx - rx, cy + fy - ry},
          Vec2{cx - fx - rx, cy - fy - ry}, Vec2{cx - fx + rx, cy - fy + ry}};
}

inline double Cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool OnSegment(Vec2 p, Vec2 a, Vec2 b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool SegmentsIntersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const double d1 = Cross(q1, q2, p1);
  const double d2 = Cross(q1, q2, p2);
  const double d3 = Cross(p1, p2, q1);
  const double d4 = Cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && OnSegment(p1, q1, q2)) return true;
  if (d2 == 0 && OnSegment(p2, q1, q2)) return true;
  if (d3 == 0 && OnSegment(q1, p1, p2)) return true;
  if (d4 == 0 && OnSegment(q2, p1, p2)) return true;
  return false;
}

// Point inside or on a convex polygon given in either winding order.
inline bool InConvexPolygon(Vec2 p, const std::array<Vec2, 4>& poly) {
  bool pos = false, neg = false;
  for (int i = 0; i < 4; ++i) {
    const double c = Cross(poly[i], poly[(i + 1) % 4], p);
    pos = pos || c > 0;
    neg = neg || c < 0;
  }
  return !(pos && neg);
}

// Closed polygon intersection by edge crossings and containment.
inline bool PolygonsIntersect(const std::array<Vec2, 4>& a,
                              const std::array<Vec2, 4>& b) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (SegmentsIntersect(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4])) {
        return true;
      }
    }
  }
  return InConvexPolygon(a[0], b) || InConvexPolygon(b[0], a);
}

struct BruteForceStackelberg {
  Action leader = Action::kStraight;
  Action follower = Action::kStraight;
  double value = 0.0;
};

// Enumerates the four outcomes. For each leader action the follower may
// play any maximizer of U2; the leader is credited with the worst of those.
// Ties prefer S for the leader, and the follower response giving the leader
// less, then S.
inline BruteForceStackelberg SolveByEnumeration(const PayoffBimatrix& m) {
  const Action acts[2] = {Action::kLeft, Action::kStraight};
  BruteForceStackelberg best;
  best.value = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (Action l : acts) {
    const double u2_left = m.U2(l, Action::kLeft);
    const double u2_straight = m.U2(l, Action::kStraight);
    std::vector<Action> responses;
    if (u2_left >= u2_straight) responses.push_back(Action::kLeft);
    if (u2_straight >= u2_left) responses.push_back(Action::kStraight);
    Action worst = responses.front();
    for (Action f : responses) {
      const double u = m.U1(l, f), w = m.U1(l, worst);
      if (u < w || (u == w && f == Action::kStraight)) worst = f;
    }
    const double value = m.U1(l, worst);
    const bool better = !have || value > best.value ||
                        (value == best.value && l == Action::kStraight);
    if (better) {
      best = {l, worst, value};
      have = true;
    }
  }
  return best;
}

}  // namespace merge_sim::oracle

#endif  // MERGE_SIM_TESTS_ORACLES_H_
