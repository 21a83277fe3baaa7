// Copyright 2026 The CoUAV Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// couav: command-line front end for instance generation, planning,
// validation, simulation, benchmarking, energy models and rendering.

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "couav/energy.hpp"
#include "couav/error.hpp"
#include "couav/io.hpp"
#include "couav/model.hpp"
#include "couav/planner.hpp"
#include "couav/simulator.hpp"
#include "couav/svg.hpp"

namespace {

using namespace couav;

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kUsage = 2;

struct GenArgs {
  double width = 400, height = 400;
  int n = 30;
  FleetConfig fleet{4, 10.0, 1.0, 4.0, 250000.0};
  std::uint64_t seed = 0;
  std::string out;
};

struct PlanArgs {
  std::string instance, algo = "psa", out, energy;
  std::optional<double> spacing;
  double eps_cov = kDefaultCoverageEps;
  double separation = PlannerOptions{}.separation;
};

struct ValidateArgs {
  std::string instance, plan;
  double eps_cov = kDefaultCoverageEps;
};

struct SimulateArgs {
  std::string instance, plan, config, energy, out = "mission";
  std::optional<std::uint64_t> seed;
};

struct BenchArgs {
  std::string sweep = "n";
  std::vector<double> values;
  int reps = 50;
  int n = 30, m = 4;
  double w = 10, width = 400, height = 400;
  std::uint64_t seed = 0;
  std::string out = "bench";
};

struct EnergyArgs {
  std::string csv, model, out;
  double ridge = kDefaultRidge;
  std::optional<double> bandwidth;
  std::optional<double> t, d;
};

struct RenderArgs {
  std::string instance, plan, trace, out = "scene.svg";
};

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

Instance generate(double width, double height, int n, const FleetConfig& fleet,
                  std::uint64_t seed) {
  if (!(width > 0) || !(height > 0) || n < 1) throw CLI::ValidationError("bad dimensions");
  Instance inst;
  inst.area = {width, height};
  inst.fleet = fleet;
  inst.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height);
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng);
    inst.targets.emplace_back(x, uy(rng));
  }
  inst.validate();
  return inst;
}

std::string report_table(const PlanReport& r) {
  std::string out = "uav,L_j\n";
  for (std::size_t j = 0; j < r.per_uav_distance.size(); ++j) {
    out += fmt::format("{},{}\n", j, fixed6(r.per_uav_distance[j]));
  }
  out += fmt::format("L_fleet,{}\nLB,{}\nL_adjust,{}\nL_trans,{}\nK,{}\n", fixed6(r.fleet_cost),
                     fixed6(r.lower_bound), fixed6(r.adjust), fixed6(r.transfer), r.rounds);
  return out;
}

int cmd_gen(const GenArgs& a) {
  const Instance inst = generate(a.width, a.height, a.n, a.fleet, a.seed);
  emit(a.out, instance_to_json(inst).dump(2) + "\n");
  return kOk;
}

int cmd_plan(const PlanArgs& a) {
  const Instance inst = instance_from_json(read_json(a.instance));
  PlannerOptions options;
  options.spacing = a.spacing;
  options.eps_cov = a.eps_cov;
  options.separation = a.separation;
  PlanFile file;
  file.algorithm = a.algo;
  file.options = options;
  const Plan plan = a.algo == "psa" ? psa_plan(inst, options) : greedy_plan(inst, options);
  file.waypoints = plan.waypoints;
  file.report = plan.report;
  if (!a.out.empty()) write_file(a.out, plan_to_json(file).dump(2) + "\n");
  std::cout << report_table(plan.report);
  if (a.energy.empty()) return kOk;
  const EnergyModels models = energy_models_from_json(read_json(a.energy));
  bool feasible = true;
  std::cout << "uav,time_s,predicted_j,budget_j,feasible\n";
  for (const FeasibilityEntry& e : check_feasibility(plan.report, inst.fleet, models)) {
    std::cout << fmt::format("{},{},{},{},{}\n", e.uav, fixed6(e.time), fixed6(e.predicted),
                             fixed6(e.budget), e.feasible ? "yes" : "no");
    feasible = feasible && e.feasible;
  }
  return feasible ? kOk : kDomain;
}

int cmd_validate(const ValidateArgs& a) {
  const Instance inst = instance_from_json(read_json(a.instance));
  const PlanFile plan = plan_from_json(read_json(a.plan));
  const ValidationReport rep = validate_waypoints(inst, plan.waypoints, a.eps_cov);
  std::cout << fmt::format("slots,{}\nL_fleet,{}\n", rep.slots, fixed6(rep.cost.fleet));
  for (const SlotViolation& v : rep.speed) {
    std::cout << fmt::format("speed,uav {},slot {},{}\n", v.uav, v.slot, fixed6(v.distance));
  }
  for (const SlotViolation& v : rep.connectivity) {
    std::cout << fmt::format("connectivity,uav {},slot {},{}\n", v.uav, v.slot,
                             fixed6(v.distance));
  }
  for (std::size_t i : rep.uncovered) {
    std::cout << fmt::format("coverage,target {},{},{}\n", i, fixed6(inst.targets[i].x()),
                             fixed6(inst.targets[i].y()));
  }
  std::cout << (rep.clean() ? "clean\n" : "violations\n");
  return rep.clean() ? kOk : kDomain;
}

int cmd_simulate(const SimulateArgs& a) {
  const Instance inst = instance_from_json(read_json(a.instance));
  const PlanFile plan = plan_from_json(read_json(a.plan));
  SimConfig config = a.config.empty() ? SimConfig{} : sim_config_from_json(read_json(a.config));
  if (a.seed) config.seed = *a.seed;
  std::optional<EnergyModels> models;
  if (!a.energy.empty()) models = energy_models_from_json(read_json(a.energy));
  const MissionTrace trace = run_mission(inst, plan.waypoints, models, config, plan.options);
  write_file(a.out + ".trace.ndjson", trace.to_ndjson());
  write_file(a.out + ".summary.json", trace.summary_json().dump(2) + "\n");
  write_file(a.out + ".svg", render_scene(inst, plan.waypoints, trace.paths));
  std::cout << "uav,t,d,energy,violations\n";
  for (std::size_t j = 0; j < trace.summary.size(); ++j) {
    const UavSummary& s = trace.summary[j];
    std::cout << fmt::format("{},{},{},{},{}\n", j, fixed6(s.t), fixed6(s.d), fixed6(s.energy),
                             s.violations);
  }
  std::cout << fmt::format("completed,{}\nuncovered,{}\nfleet_distance,{}\nplan_L_fleet,{}\n",
                           trace.completed ? "yes" : "no", trace.uncovered.size(),
                           fixed6(trace.fleet_distance), fixed6(plan.report.fleet_cost));
  const bool clean =
      trace.completed && trace.uncovered.empty() && trace.connectivity_violations == 0;
  return clean ? kOk : kDomain;
}

int cmd_bench(const BenchArgs& a) {
  if (a.values.empty() || a.reps < 1 || (a.sweep != "n" && a.sweep != "m")) {
    throw CLI::ValidationError("bench needs --sweep n|m, values and reps >= 1");
  }
  std::string csv = "sweep,value,psa_mean,psa_std,greedy_mean,greedy_std,lb_mean,lb_std\n";
  std::vector<ChartSeries> series{{"PSA", {}}, {"Greedy", {}}, {"LB", {}}};
  for (double value : a.values) {
    const int n = a.sweep == "n" ? static_cast<int>(value) : a.n;
    const int m = a.sweep == "m" ? static_cast<int>(value) : a.m;
    std::array<std::vector<double>, 3> samples;
    for (int r = 0; r < a.reps; ++r) {
      const Instance inst =
          generate(a.width, a.height, n, FleetConfig{m, a.w, 1.0, 4.0, 0.0}, a.seed + r);
      const Plan psa = psa_plan(inst);
      samples[0].push_back(psa.report.fleet_cost);
      samples[1].push_back(greedy_plan(inst).report.fleet_cost);
      samples[2].push_back(psa.report.lower_bound);
    }
    csv += fmt::format("{},{:g}", a.sweep, value);
    for (std::size_t s = 0; s < samples.size(); ++s) {
      double mean = 0;
      for (double v : samples[s]) mean += v;
      mean /= samples[s].size();
      double var = 0;
      for (double v : samples[s]) var += (v - mean) * (v - mean);
      const double sd = samples[s].size() > 1 ? std::sqrt(var / (samples[s].size() - 1)) : 0.0;
      csv += fmt::format(",{},{}", fixed6(mean), fixed6(sd));
      series[s].values.push_back(mean);
    }
    csv += '\n';
  }
  write_file(a.out + ".csv", csv);
  const std::string label = a.sweep == "n" ? "Number of target points" : "Number of drones";
  write_file(a.out + ".svg", render_chart("Flight distance (m)", label, a.values, series));
  std::cout << csv;
  return kOk;
}

int cmd_energy_fit(const EnergyArgs& a) {
  const TrainingData data = parse_training_csv(read_file(a.csv));
  EnergyModels models;
  if (!data.calibration.empty()) models.calibration = fit_calibration(data.calibration);
  if (data.consumption.empty()) throw InputError("training csv: no rows with energy_j");
  ConsumptionOptions options;
  options.ridge = a.ridge;
  options.bandwidth = a.bandwidth;
  models.consumption = fit_consumption(data.consumption, options);
  emit(a.out, energy_models_to_json(models).dump(2) + "\n");
  return kOk;
}

int cmd_energy_predict(const EnergyArgs& a) {
  const EnergyModels models = energy_models_from_json(read_json(a.model));
  std::string out = "t_sim_s,d_sim_m,predicted_j\n";
  auto row = [&](double t, double d) {
    out += fmt::format("{},{},{}\n", fixed6(t), fixed6(d),
                       fixed6(predict_energy(models.calibration, models.consumption, t, d)));
  };
  if (!a.csv.empty()) {
    for (const auto& [t, d] : parse_prediction_csv(read_file(a.csv))) row(t, d);
  } else if (a.t && a.d) {
    row(*a.t, *a.d);
  } else {
    throw CLI::ValidationError("energy predict needs --csv or both --t and --d");
  }
  emit(a.out, out);
  return kOk;
}

std::vector<std::vector<Point2d>> flown_paths(const std::string& trace_path) {
  std::vector<std::vector<Point2d>> paths;
  std::istringstream in(read_file(trace_path));
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(fmt::format("trace line {}: {}", line_no, e.what()));
    }
    if (rec.value("kind", "") != "state") continue;
    const auto& pos = rec.at("pos");
    if (paths.empty()) paths.resize(pos.size());
    for (std::size_t j = 0; j < pos.size() && j < paths.size(); ++j) {
      paths[j].emplace_back(pos[j][0].get<double>(), pos[j][1].get<double>());
    }
  }
  return paths;
}

int cmd_render(const RenderArgs& a) {
  const Instance inst = instance_from_json(read_json(a.instance));
  Waypoints planned;
  std::vector<RingRegion> rings;
  if (!a.plan.empty()) {
    const PlanFile plan = plan_from_json(read_json(a.plan));
    planned = plan.waypoints;
    if (plan.algorithm == "psa") rings = decompose_rings(inst.targets, inst.fleet, plan.options);
  }
  const auto flown = a.trace.empty() ? std::vector<std::vector<Point2d>>{} : flown_paths(a.trace);
  write_file(a.out, render_scene(inst, planned, flown, rings));
  return kOk;
}

void add_fleet(CLI::App* app, FleetConfig& fleet) {
  app->add_option("-m,--uavs", fleet.m, "fleet size")->check(CLI::PositiveNumber);
  app->add_option("-w,--range", fleet.w, "transmission range (m)")->check(CLI::PositiveNumber);
  app->add_option("--d-max", fleet.d_max, "distance per time slot (m)")
      ->check(CLI::PositiveNumber);
  app->add_option("--speed", fleet.cruise_speed, "cruise speed (m/s)")
      ->check(CLI::PositiveNumber);
  app->add_option("--battery", fleet.battery_capacity, "battery capacity per UAV (J)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative multi-UAV coverage planning, validation and simulation"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a random instance");
  g->add_option("--width", gen.width, "area width (m)");
  g->add_option("--height", gen.height, "area height (m)");
  g->add_option("-n,--targets", gen.n, "number of targets");
  add_fleet(g, gen.fleet);
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen.out, "output file (stdout when omitted)");

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "plan coverage paths");
  p->add_option("instance", plan.instance, "instance JSON")->required();
  p->add_option("--algo", plan.algo, "psa or greedy")->check(CLI::IsMember({"psa", "greedy"}));
  p->add_option("--spacing", plan.spacing, "lane spacing (m), at most the range");
  p->add_option("--eps-cov", plan.eps_cov, "coverage tolerance used while planning (m)");
  p->add_option("--separation", plan.separation, "kept separation, fraction of the spacing");
  p->add_option("--energy", plan.energy, "energy model JSON for a feasibility check");
  p->add_option("--out", plan.out, "plan JSON output");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "check a plan against the constraints");
  v->add_option("instance", val.instance, "instance JSON")->required();
  v->add_option("plan", val.plan, "plan JSON")->required();
  v->add_option("--eps-cov", val.eps_cov, "coverage tolerance (m)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "fly a plan in the simulator");
  s->add_option("instance", sim.instance, "instance JSON")->required();
  s->add_option("plan", sim.plan, "plan JSON")->required();
  s->add_option("--config", sim.config, "simulation config JSON");
  s->add_option("--energy", sim.energy, "energy model JSON");
  s->add_option("--seed", sim.seed, "overrides the config seed");
  s->add_option("--out", sim.out, "output prefix for .trace.ndjson, .summary.json, .svg");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "mean plan costs over random instances");
  b->add_option("--sweep", bench.sweep, "n or m")->check(CLI::IsMember({"n", "m"}));
  b->add_option("--values", bench.values, "sweep values")->delimiter(',')->required();
  b->add_option("--reps", bench.reps, "instances per value");
  b->add_option("-n,--targets", bench.n, "targets when sweeping m");
  b->add_option("-m,--uavs", bench.m, "fleet size when sweeping n");
  b->add_option("-w,--range", bench.w, "transmission range (m)");
  b->add_option("--width", bench.width, "area width (m)");
  b->add_option("--height", bench.height, "area height (m)");
  b->add_option("--seed", bench.seed, "seed of the first instance");
  b->add_option("--out", bench.out, "output prefix for .csv and .svg");

  EnergyArgs fit, predict;
  auto* e = app.add_subcommand("energy", "fit or apply energy models");
  e->require_subcommand(1);
  auto* ef = e->add_subcommand("fit", "fit models from a training CSV");
  ef->add_option("csv", fit.csv, "training CSV")->required();
  ef->add_option("--ridge", fit.ridge, "ridge strength");
  ef->add_option("--bandwidth", fit.bandwidth, "kernel bandwidth (standardised units)");
  ef->add_option("--out", fit.out, "model JSON output (stdout when omitted)");
  auto* ep = e->add_subcommand("predict", "predict energy for simulated time and distance");
  ep->add_option("model", predict.model, "model JSON")->required();
  ep->add_option("--csv", predict.csv, "CSV with t_sim_s and d_sim_m columns");
  ep->add_option("--t", predict.t, "simulated flight time (s)");
  ep->add_option("--d", predict.d, "simulated flight distance (m)");
  ep->add_option("--out", predict.out, "output CSV (stdout when omitted)");

  RenderArgs render;
  auto* r = app.add_subcommand("render", "draw an instance, plan and trace as SVG");
  r->add_option("instance", render.instance, "instance JSON")->required();
  r->add_option("--plan", render.plan, "plan JSON");
  r->add_option("--trace", render.trace, "trace NDJSON");
  r->add_option("--out", render.out, "SVG output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*p) return cmd_plan(plan);
    if (*v) return cmd_validate(val);
    if (*s) return cmd_simulate(sim);
    if (*b) return cmd_bench(bench);
    if (*ef) return cmd_energy_fit(fit);
    if (*ep) return cmd_energy_predict(predict);
    if (*r) return cmd_render(render);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kDomain;
  }
  return kUsage;
}
