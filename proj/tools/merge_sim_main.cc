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

// Command-line front end: run, sweep, plot, dump-config.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "merge_sim/config.h"
#include "merge_sim/io.h"
#include "merge_sim/metrics.h"
#include "merge_sim/simulation.h"

namespace {

using merge_sim::Scenario;
using merge_sim::SimConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCollision = 3;
constexpr int kExitForcedStop = 4;

struct CommonOptions {
  std::string scenario = "scenario1";
  std::string config_path;
  std::vector<std::string> q_overrides;
  std::optional<double> dt;
  std::optional<double> epoch;
  std::optional<double> t_max;
  std::optional<std::uint64_t> seed;
  bool noise = false;
  std::string out_dir = ".";
};

void AddCommon(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--scenario", o.scenario,
                  "Built-in name (scenario1, scenario2) or JSON file");
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--q", o.q_overrides,
                  "Aggressiveness override id=value ('merging' names the "
                  "merge-lane vehicle)");
  cmd->add_option("--dt", o.dt, "Integration step (s)");
  cmd->add_option("--epoch", o.epoch, "Decision epoch (s)");
  cmd->add_option("--t-max", o.t_max, "Simulated time limit (s)");
  cmd->add_option("--seed", o.seed, "RNG seed (default: $MERGE_SIM_SEED)");
  cmd->add_flag("--noise", o.noise, "Enable perception noise");
  cmd->add_option("--out", o.out_dir, "Output directory");
}

Scenario LoadScenario(const std::string& name) {
  if (name == "scenario1" || name == "scenario2") {
    return merge_sim::BuiltinScenario(name);
  }
  json j;
  try {
    j = json::parse(merge_sim::ReadFile(name));
  } catch (const json::exception& e) {
    throw std::invalid_argument(name + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(e.what());
  }
  return merge_sim::ScenarioFromJson(j);
}

int MergingId(const Scenario& s) {
  std::optional<int> found;
  for (const auto& v : s.vehicles) {
    if (merge_sim::LaneOf(v.x0_m, s.geometry) == s.geometry.MergeLane()) {
      if (found) throw std::invalid_argument("'merging' is ambiguous");
      found = v.id;
    }
  }
  if (!found) throw std::invalid_argument("no vehicle in the merge lane");
  return *found;
}

void ApplyOverrides(Scenario& s, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const std::size_t eq = o.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("--q expects id=value, got '" + o + "'");
    }
    const std::string key = o.substr(0, eq);
    double q = 0.0;
    int id = 0;
    try {
      std::size_t used = 0;
      q = std::stod(o.substr(eq + 1), &used);
      if (used != o.size() - eq - 1) throw std::invalid_argument("");
      if (key == "merging") {
        id = MergingId(s);
      } else {
        id = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument("");
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("--q expects id=value, got '" + o + "'");
    }
    merge_sim::SetAggressiveness(s, id, q);
  }
}

SimConfig BuildConfig(const CommonOptions& o) {
  SimConfig c;
  if (!o.config_path.empty()) {
    try {
      c = merge_sim::ConfigFromJson(
          json::parse(merge_sim::ReadFile(o.config_path)));
    } catch (const json::exception& e) {
      throw std::invalid_argument(o.config_path + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw std::invalid_argument(e.what());
    }
  }
  if (o.dt) c.dt = *o.dt;
  if (o.epoch) c.planner.epoch = *o.epoch;
  if (o.t_max) c.t_max = *o.t_max;
  if (o.noise) c.noise = true;
  if (o.seed) {
    c.seed = *o.seed;
  } else if (const char* env = std::getenv("MERGE_SIM_SEED")) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("");
    } catch (const std::logic_error&) {
      throw std::invalid_argument("MERGE_SIM_SEED must be an integer");
    }
  }
  c.Validate();
  return c;
}

std::string OutPath(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

json Summary(const Scenario& s, const SimConfig& c,
             const merge_sim::RunResult& r) {
  json vehicles = json::array();
  for (const auto& v : s.vehicles) {
    const auto series = r.log.Series(v.id);
    const auto lat = merge_sim::LateralDisturbance(r.log, v.id, s.geometry);
    json e = {
        {"id", v.id},
        {"kind",
         v.kind == merge_sim::VehicleKind::kDecision ? "decision" : "scripted"},
        {"final_lane", series.back().lane},
        {"d_long_m", merge_sim::LongitudinalDisturbance(r.log, v.id, v.V0())},
        {"d_lat_m", lat.displacement},
        {"lane_changes", lat.lane_changes}};
    if (v.kind == merge_sim::VehicleKind::kDecision) e["q"] = v.q;
    if (const auto slot = merge_sim::MergePosition(r.log, v.id, s.geometry)) {
      e["merge_time_s"] = slot->t;
      e["merged_behind"] = slot->leader ? json(*slot->leader) : json(nullptr);
      e["merged_ahead_of"] =
          slot->follower ? json(*slot->follower) : json(nullptr);
    }
    vehicles.push_back(e);
  }
  const auto min_gap =
      merge_sim::MinimumGap(r.log, s.geometry, c.vehicle.length);
  json out = {{"scenario", s.name},
              {"seed", c.seed},
              {"end_time_s", r.end_time},
              {"settled", r.settled},
              {"collision", r.collision},
              {"forced_stop", r.forced_stop},
              {"min_gap_m", min_gap ? json(*min_gap) : json(nullptr)},
              {"vehicles", vehicles}};
  if (r.collision_ids) {
    out["collision_ids"] = {r.collision_ids->first, r.collision_ids->second};
    out["collision_time_s"] = r.collision_time;
  }
  return out;
}

std::vector<double> ParseGrid(const std::string& spec) {
  const std::size_t a = spec.find(':');
  const std::size_t b = spec.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos ||
      spec.find(':', b + 1) != std::string::npos) {
    throw std::invalid_argument("--grid expects start:stop:step");
  }
  double start = 0, stop = 0, step = 0;
  try {
    start = std::stod(spec.substr(0, a));
    stop = std::stod(spec.substr(a + 1, b - a - 1));
    step = std::stod(spec.substr(b + 1));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("--grid expects start:stop:step");
  }
  if (!(0.0 <= start && start <= stop && stop <= 1.0)) {
    throw std::invalid_argument("--grid requires 0 <= start <= stop <= 1");
  }
  if (!(step > 0.0)) throw std::invalid_argument("--grid step must be > 0");
  std::vector<double> values;
  for (int i = 0;; ++i) {
    const double v = std::round((start + i * step) * 1e9) / 1e9;
    if (v > stop + 1e-9) break;
    values.push_back(v);
  }
  return values;
}

int ExitFor(bool collision, bool forced_stop) {
  if (collision) return kExitCollision;
  if (forced_stop) return kExitForcedStop;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game-theoretic highway merging microsimulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  bool dump_config = false;
  CLI::App* run = app.add_subcommand("run", "Simulate one scenario");
  AddCommon(run, run_opts);
  run->add_flag("--dump-config", dump_config,
                "Print the effective config as JSON and exit");

  CommonOptions sweep_opts;
  std::string grid_spec = "0:1:0.5";
  int jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "Aggressiveness grid sweep");
  AddCommon(sweep, sweep_opts);
  sweep->add_option("--grid", grid_spec,
                    "q grid start:stop:step for both axes");
  sweep->add_option("--jobs", jobs, "Worker threads")
      ->check(CLI::PositiveNumber);

  std::string plot_input;
  std::string plot_output;
  std::string plot_scenario = "scenario1";
  CLI::App* plot = app.add_subcommand("plot", "Render a trajectory as SVG");
  plot->add_option("input", plot_input, "Trajectory CSV")->required();
  plot->add_option("--out", plot_output, "SVG path (default: input.svg)");
  plot->add_option("--scenario", plot_scenario,
                   "Scenario whose road geometry is drawn");

  CommonOptions dump_opts;
  CLI::App* dump =
      app.add_subcommand("dump-config", "Print the effective config");
  AddCommon(dump, dump_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      Scenario s = LoadScenario(run_opts.scenario);
      ApplyOverrides(s, run_opts.q_overrides);
      const SimConfig c = BuildConfig(run_opts);
      if (dump_config) {
        std::cout << merge_sim::ToJson(c).dump(2) << "\n";
        return kExitOk;
      }
      const merge_sim::RunResult r = merge_sim::Run(s, c);
      const json summary = Summary(s, c, r);
      merge_sim::WriteFileAtomic(OutPath(run_opts.out_dir, "trajectory.csv"),
                                 merge_sim::TrajectoryCsv(r.log));
      merge_sim::WriteFileAtomic(OutPath(run_opts.out_dir, "summary.json"),
                                 summary.dump(2) + "\n");
      std::cout << summary.dump(2) << "\n";
      return ExitFor(r.collision, r.forced_stop);
    }
    if (*sweep) {
      const std::vector<double> grid = ParseGrid(grid_spec);
      Scenario base = LoadScenario(sweep_opts.scenario);
      ApplyOverrides(base, sweep_opts.q_overrides);
      const SimConfig c = BuildConfig(sweep_opts);
      const merge_sim::DisturbanceGrid g =
          merge_sim::AggressivenessSweep(base, grid, grid, c, {}, jobs);
      merge_sim::WriteFileAtomic(OutPath(sweep_opts.out_dir, "grid.csv"),
                                 merge_sim::GridCsv(g));
      bool collision = false, forced = false;
      for (const auto& cell : g.cells) {
        collision |= cell.collision;
        forced |= cell.forced_stop;
      }
      std::cout << "wrote " << g.cells.size() << " cells to "
                << OutPath(sweep_opts.out_dir, "grid.csv") << "\n";
      return ExitFor(collision, forced);
    }
    if (*plot) {
      const merge_sim::TrajectoryLog log =
          merge_sim::ParseTrajectoryCsv(merge_sim::ReadFile(plot_input));
      const Scenario s = LoadScenario(plot_scenario);
      if (plot_output.empty()) plot_output = plot_input + ".svg";
      merge_sim::WriteFileAtomic(plot_output,
                                 merge_sim::TrajectorySvg(log, s.geometry));
      return kExitOk;
    }
    if (*dump) {
      std::cout << merge_sim::ToJson(BuildConfig(dump_opts)).dump(2) << "\n";
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
