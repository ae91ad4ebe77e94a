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

#include "merge_sim/metrics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace merge_sim {
namespace {

std::vector<LogRow> RequireSeries(const TrajectoryLog& log, int id) {
  std::vector<LogRow> series = log.Series(id);
  if (series.empty()) {
    throw std::invalid_argument("vehicle " + std::to_string(id) +
                                " is not in the log");
  }
  return series;
}

void CheckAxis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) {
    throw std::invalid_argument(std::string(name) + " grid is empty");
  }
  for (double q : axis) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw std::invalid_argument(std::string(name) +
                                  " grid value outside [0, 1]");
    }
  }
}

}  // namespace

double LongitudinalDisturbance(const TrajectoryLog& log, int id, double v0) {
  const std::vector<LogRow> s = RequireSeries(log, id);
  double total = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double d0 = std::max(v0 - s[i - 1].v, 0.0);
    const double d1 = std::max(v0 - s[i].v, 0.0);
    total += 0.5 * (d0 + d1) * (s[i].t - s[i - 1].t);
  }
  return total;
}

LateralSummary LateralDisturbance(const TrajectoryLog& log, int id,
                                  const LaneGeometry& geometry,
                                  double tolerance) {
  const std::vector<LogRow> s = RequireSeries(log, id);
  LateralSummary out;
  double settled = geometry.Center(LaneOf(s.front().x_lat, geometry));
  double peak = 0.0;
  for (const LogRow& r : s) {
    const double center = geometry.Center(LaneOf(r.x_lat, geometry));
    if (std::abs(r.x_lat - center) < tolerance) {
      if (center != settled) {
        out.displacement += std::abs(center - settled);
        ++out.lane_changes;
        settled = center;
      } else if (peak >= tolerance) {
        out.displacement += 2.0 * peak;
      }
      peak = 0.0;
    } else {
      peak = std::max(peak, std::abs(r.x_lat - settled));
    }
  }
  if (peak > 0.0) out.displacement += std::abs(s.back().x_lat - settled);
  return out;
}

std::optional<double> MergeCompletionTime(const TrajectoryLog& log, int id,
                                          const LaneGeometry& geometry) {
  for (const LogRow& r : RequireSeries(log, id)) {
    if (LaneOf(r.x_lat, geometry) != geometry.MergeLane()) return r.t;
  }
  return std::nullopt;
}

std::optional<MergeSlot> MergePosition(const TrajectoryLog& log, int id,
                                       const LaneGeometry& geometry) {
  const std::optional<double> t = MergeCompletionTime(log, id, geometry);
  if (!t) return std::nullopt;
  const LogRow* ego = nullptr;
  std::vector<const LogRow*> others;
  for (const LogRow& r : log.rows) {
    if (r.t != *t) continue;
    if (r.id == id) {
      ego = &r;
    } else {
      others.push_back(&r);
    }
  }
  MergeSlot slot;
  slot.t = *t;
  slot.lane = LaneOf(ego->x_lat, geometry);
  double lead_dy = 0.0, follow_dy = 0.0;
  for (const LogRow* r : others) {
    if (LaneOf(r->x_lat, geometry) != slot.lane) continue;
    const double dy = r->y_long - ego->y_long;
    if (dy >= 0 && (!slot.leader || dy < lead_dy)) {
      slot.leader = r->id;
      lead_dy = dy;
    } else if (dy < 0 && (!slot.follower || -dy < follow_dy)) {
      slot.follower = r->id;
      follow_dy = -dy;
    }
  }
  return slot;
}

std::optional<double> MinimumGap(const TrajectoryLog& log,
                                 const LaneGeometry& geometry,
                                 double vehicle_length) {
  std::optional<double> best;
  std::size_t i = 0;
  while (i < log.rows.size()) {
    std::size_t j = i;
    while (j < log.rows.size() && log.rows[j].t == log.rows[i].t) ++j;
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = a + 1; b < j; ++b) {
        if (LaneOf(log.rows[a].x_lat, geometry) !=
            LaneOf(log.rows[b].x_lat, geometry)) {
          continue;
        }
        const double gap =
            std::abs(log.rows[a].y_long - log.rows[b].y_long) - vehicle_length;
        if (!best || gap < *best) best = gap;
      }
    }
    i = j;
  }
  return best;
}

Scenario SweepCellScenario(const Scenario& base, const SweepSpec& spec,
                           double q_merge, double q_mainline) {
  Scenario s = base;
  SetAggressiveness(s, spec.merging_id, q_merge);
  SetAggressiveness(s, spec.mainline_id, q_mainline);
  return s;
}

DisturbanceReport MeasureCell(const Scenario& base, const SweepSpec& spec,
                              double q_merge, double q_mainline,
                              const SimConfig& config) {
  const Scenario s = SweepCellScenario(base, spec, q_merge, q_mainline);
  const RunResult run = Run(s, config);
  DisturbanceReport r;
  r.q_merge = q_merge;
  r.q_mainline = q_mainline;
  r.seed = config.seed;
  r.d_long = LongitudinalDisturbance(run.log, spec.mainline_id,
                                     s.Find(spec.mainline_id)->V0());
  const LateralSummary lat =
      LateralDisturbance(run.log, spec.mainline_id, s.geometry);
  r.d_lat = lat.displacement;
  r.lane_changes = lat.lane_changes;
  r.collision = run.collision;
  r.forced_stop = run.forced_stop;
  return r;
}

DisturbanceGrid AggressivenessSweep(const Scenario& base,
                                    const std::vector<double>& q_merge,
                                    const std::vector<double>& q_mainline,
                                    const SimConfig& config,
                                    const SweepSpec& spec, int jobs) {
  CheckAxis(q_merge, "q_merge");
  CheckAxis(q_mainline, "q_mainline");
  config.Validate();
  SweepCellScenario(base, spec, q_merge.front(), q_mainline.front()).Validate();

  DisturbanceGrid grid{q_merge, q_mainline, {}};
  const std::size_t n = q_merge.size() * q_mainline.size();
  grid.cells.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      grid.cells[i] = MeasureCell(base, spec, q_merge[i / q_mainline.size()],
                                  q_mainline[i % q_mainline.size()], config);
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return grid;
}

}  // namespace merge_sim
