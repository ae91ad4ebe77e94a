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

#include "merge_sim/io.h"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace merge_sim {
namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string FlagText(unsigned flags) {
  std::string out;
  if (flags & kFlagForcedStop) out += "forced_stop";
  if (flags & kFlagCollision) out += out.empty() ? "collision" : "|collision";
  return out;
}

std::vector<std::string_view> Split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double ParseDouble(std::string_view s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  }
  return v;
}

int ParseInt(std::string_view s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  return v;
}

Maneuver ParseManeuver(std::string_view s) {
  for (Maneuver m :
       {Maneuver::kStay, Maneuver::kMergeNow, Maneuver::kLaneChange}) {
    if (ManeuverName(m) == s) return m;
  }
  throw std::invalid_argument("bad maneuver '" + std::string(s) + "'");
}

AccelDirective ParseDirective(std::string_view s) {
  for (AccelDirective d : {AccelDirective::kHold, AccelDirective::kAccelerate,
                           AccelDirective::kDecelerate}) {
    if (DirectiveName(d) == s) return d;
  }
  throw std::invalid_argument("bad accel_directive '" + std::string(s) + "'");
}

unsigned ParseFlags(std::string_view s) {
  unsigned flags = 0;
  if (s.empty()) return flags;
  for (std::string_view f : Split(s, '|')) {
    if (f == "forced_stop") {
      flags |= kFlagForcedStop;
    } else if (f == "collision") {
      flags |= kFlagCollision;
    } else {
      throw std::invalid_argument("bad flag '" + std::string(f) + "'");
    }
  }
  return flags;
}

}  // namespace

std::string TrajectoryCsv(const TrajectoryLog& log) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const LogRow& r : log.rows) {
    out += Num(r.t) + ',' + std::to_string(r.id) + ',' + Num(r.x_lat) + ',' +
           Num(r.y_long) + ',' + Num(r.v) + ',' + Num(r.theta) + ',' +
           std::to_string(r.lane) + ',' +
           std::string(ManeuverName(r.maneuver)) + ',' +
           std::string(DirectiveName(r.accel)) + ',' +
           (r.competing_id ? std::to_string(*r.competing_id) : "") + ',' +
           Num(r.i_col) + ',' + FlagText(r.flags) + '\n';
  }
  return out;
}

TrajectoryLog ParseTrajectoryCsv(std::string_view text) {
  TrajectoryLog log;
  int line_no = 0;
  std::size_t start = 0;
  bool header_seen = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    try {
      if (!header_seen) {
        if (line != kTrajectoryHeader) {
          throw std::invalid_argument("unexpected header");
        }
        header_seen = true;
        continue;
      }
      if (line.empty()) continue;
      const auto f = Split(line, ',');
      if (f.size() != 12) {
        throw std::invalid_argument("expected 12 fields, got " +
                                    std::to_string(f.size()));
      }
      LogRow r;
      r.t = ParseDouble(f[0]);
      r.id = ParseInt(f[1]);
      r.x_lat = ParseDouble(f[2]);
      r.y_long = ParseDouble(f[3]);
      r.v = ParseDouble(f[4]);
      r.theta = ParseDouble(f[5]);
      r.lane = ParseInt(f[6]);
      r.maneuver = ParseManeuver(f[7]);
      r.accel = ParseDirective(f[8]);
      if (!f[9].empty()) r.competing_id = ParseInt(f[9]);
      r.i_col = ParseDouble(f[10]);
      r.flags = ParseFlags(f[11]);
      log.rows.push_back(r);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " +
                                  e.what());
    }
  }
  if (!header_seen) throw std::invalid_argument("line 1: missing header");
  for (std::size_t i = 1; i < log.rows.size() && log.dt == 0.0; ++i) {
    if (log.rows[i].t > log.rows[0].t) log.dt = log.rows[i].t - log.rows[0].t;
  }
  return log;
}

std::string GridCsv(const DisturbanceGrid& grid) {
  std::string out(kGridHeader);
  out += '\n';
  for (const DisturbanceReport& r : grid.cells) {
    out += Num(r.q_merge) + ',' + Num(r.q_mainline) + ',' + Num(r.d_long) +
           ',' + Num(r.d_lat) + ',' + std::to_string(r.lane_changes) + ',' +
           (r.collision ? "1" : "0") + ',' + (r.forced_stop ? "1" : "0") + ',' +
           std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string TrajectorySvg(const TrajectoryLog& log,
                          const LaneGeometry& geometry) {
  constexpr double kWidth = 1000.0;
  constexpr double kMargin = 20.0;
  constexpr double kPxPerMeterLat = 12.0;
  constexpr int kStride = 10;

  double y_min = std::min(0.0, geometry.merge.start);
  double y_max = geometry.merge.HardEnd();
  for (const LogRow& r : log.rows) {
    y_min = std::min(y_min, r.y_long);
    y_max = std::max(y_max, r.y_long);
  }
  const double x_min = geometry.lane_centers.front() - geometry.lane_width / 2;
  const double x_max = geometry.lane_centers.back() + geometry.lane_width / 2;
  const double sx = (kWidth - 2 * kMargin) / (y_max - y_min);
  const double height = 2 * kMargin + (x_max - x_min) * kPxPerMeterLat;
  auto px = [&](double y) { return kMargin + (y - y_min) * sx; };
  auto py = [&](double x) { return kMargin + (x - x_min) * kPxPerMeterLat; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Fixed(kWidth)
      << "\" height=\"" << Fixed(height) << "\">\n";
  const double merge_center = geometry.Center(geometry.MergeLane());
  svg << "<rect class=\"merge-lane\" x=\"" << Fixed(px(geometry.merge.start))
      << "\" y=\"" << Fixed(py(merge_center - geometry.lane_width / 2))
      << "\" width=\""
      << Fixed(px(geometry.merge.HardEnd()) - px(geometry.merge.start))
      << "\" height=\"" << Fixed(geometry.lane_width * kPxPerMeterLat)
      << "\" fill=\"#eeeeee\"/>\n";
  std::vector<double> bounds;
  for (double c : geometry.lane_centers) {
    bounds.push_back(c - geometry.lane_width / 2);
  }
  bounds.push_back(x_max);
  for (double b : bounds) {
    svg << "<line class=\"lane\" x1=\"" << Fixed(px(y_min)) << "\" y1=\""
        << Fixed(py(b)) << "\" x2=\"" << Fixed(px(y_max)) << "\" y2=\""
        << Fixed(py(b)) << "\" stroke=\"#999999\"/>\n";
  }

  std::map<int, std::vector<const LogRow*>> by_id;
  for (const LogRow& r : log.rows) by_id[r.id].push_back(&r);
  for (const auto& [id, rows] : by_id) {
    svg << "<polyline class=\"vehicle\" data-id=\"" << id
        << "\" fill=\"none\" stroke=\"#" << (id % 2 ? "1f77b4" : "d62728")
        << "\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i % kStride != 0 && i + 1 != rows.size()) continue;
      if (i != 0) svg << ' ';
      svg << Fixed(px(rows[i]->y_long)) << ',' << Fixed(py(rows[i]->x_lat));
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void WriteFileAtomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + path + ": " +
                             ec.message());
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace merge_sim
