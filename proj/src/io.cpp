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

#include "couav/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>

#include "couav/error.hpp"

namespace couav {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& ctx, const std::string& key, const std::string& msg) {
  throw InputError(fmt::format("{} field '{}': {}", ctx, key, msg));
}

const json& field(const json& j, const std::string& key, const std::string& ctx) {
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(ctx, key, "missing");
  return *it;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& ctx) {
  if (!j.is_object()) throw InputError(ctx + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) bad(ctx, k, "unknown field");
  }
}

double number(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number()) bad(ctx, key, "expected a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number_integer()) bad(ctx, key, "expected an integer");
  return v.get<int>();
}

Point2d point(const json& v, const std::string& ctx, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad(ctx, key, "expected [x, y]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ojson point_json(const Point2d& p) { return ojson::array({p.x(), p.y()}); }

std::vector<double> numbers(const json& v, const std::string& ctx, const std::string& key) {
  if (!v.is_array()) bad(ctx, key, "expected an array of numbers");
  std::vector<double> out;
  for (const json& x : v) {
    if (!x.is_number()) bad(ctx, key, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

template <typename F>
auto parse_as(const char* what, F&& f) {
  try {
    return f();
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(fmt::format("{}: {}", what, e.what()));
  } catch (const json::exception& e) {
    throw InputError(fmt::format("{}: {}", what, e.what()));
  }
}

}  // namespace

ojson instance_to_json(const Instance& instance) {
  ojson targets = ojson::array();
  for (const Point2d& p : instance.targets) targets.push_back(point_json(p));
  const FleetConfig& f = instance.fleet;
  return {{"area", {{"width", instance.area.width}, {"height", instance.area.height}}},
          {"targets", targets},
          {"fleet",
           {{"m", f.m},
            {"w", f.w},
            {"d_max", f.d_max},
            {"cruise_speed", f.cruise_speed},
            {"battery_capacity", f.battery_capacity}}},
          {"seed", instance.seed}};
}

Instance instance_from_json(const json& j) {
  return parse_as("instance", [&] {
    only_keys(j, {"area", "targets", "fleet", "seed"}, "instance");
    Instance inst;
    const json& area = field(j, "area", "instance");
    only_keys(area, {"width", "height"}, "instance.area");
    inst.area = {number(area, "width", "instance.area"), number(area, "height", "instance.area")};
    const json& targets = field(j, "targets", "instance");
    if (!targets.is_array()) bad("instance", "targets", "expected an array");
    for (const json& p : targets) inst.targets.push_back(point(p, "instance", "targets"));
    const json& f = field(j, "fleet", "instance");
    only_keys(f, {"m", "w", "d_max", "cruise_speed", "battery_capacity"}, "instance.fleet");
    inst.fleet.m = integer(f, "m", "instance.fleet");
    inst.fleet.w = number(f, "w", "instance.fleet");
    inst.fleet.d_max = number(f, "d_max", "instance.fleet");
    inst.fleet.cruise_speed = number(f, "cruise_speed", "instance.fleet");
    inst.fleet.battery_capacity = number(f, "battery_capacity", "instance.fleet");
    if (j.contains("seed")) {
      const json& s = j["seed"];
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
        bad("instance", "seed", "expected a non-negative integer");
      }
      inst.seed = s.get<std::uint64_t>();
    }
    inst.validate();
    return inst;
  });
}

ojson plan_to_json(const PlanFile& plan) {
  ojson wp = ojson::array();
  for (const auto& path : plan.waypoints) {
    ojson list = ojson::array();
    for (const Point2d& p : path) list.push_back(point_json(p));
    wp.push_back(std::move(list));
  }
  const PlanReport& r = plan.report;
  ojson options = {{"eps_cov", plan.options.eps_cov}, {"separation", plan.options.separation}};
  if (plan.options.spacing) options["spacing"] = *plan.options.spacing;
  return {{"algorithm", plan.algorithm},
          {"options", options},
          {"waypoints", wp},
          {"report",
           {{"L_j", r.per_uav_distance},
            {"L_fleet", r.fleet_cost},
            {"LB", r.lower_bound},
            {"L_adjust", r.adjust},
            {"L_trans", r.transfer},
            {"K", r.rounds},
            {"per_round_boundary", r.per_round_boundary},
            {"per_round_cost", r.per_round_cost}}}};
}

PlanFile plan_from_json(const json& j) {
  return parse_as("plan", [&] {
    only_keys(j, {"algorithm", "options", "waypoints", "report"}, "plan");
    PlanFile plan;
    if (j.contains("algorithm")) {
      if (!j["algorithm"].is_string()) bad("plan", "algorithm", "expected a string");
      plan.algorithm = j["algorithm"].get<std::string>();
    }
    if (j.contains("options")) {
      const json& o = j["options"];
      only_keys(o, {"spacing", "eps_cov", "separation"}, "plan.options");
      if (o.contains("spacing")) plan.options.spacing = number(o, "spacing", "plan.options");
      if (o.contains("eps_cov")) plan.options.eps_cov = number(o, "eps_cov", "plan.options");
      if (o.contains("separation")) {
        plan.options.separation = number(o, "separation", "plan.options");
      }
    }
    const json& wp = field(j, "waypoints", "plan");
    if (!wp.is_array()) bad("plan", "waypoints", "expected an array per UAV");
    for (const json& path : wp) {
      if (!path.is_array()) bad("plan", "waypoints", "expected an array per UAV");
      auto& list = plan.waypoints.emplace_back();
      for (const json& p : path) list.push_back(point(p, "plan", "waypoints"));
    }
    if (j.contains("report")) {
      const json& r = j["report"];
      const std::string ctx = "plan.report";
      only_keys(r, {"L_j", "L_fleet", "LB", "L_adjust", "L_trans", "K", "per_round_boundary",
                    "per_round_cost"},
                ctx);
      plan.report.per_uav_distance = numbers(field(r, "L_j", ctx), ctx, "L_j");
      plan.report.fleet_cost = number(r, "L_fleet", ctx);
      plan.report.lower_bound = number(r, "LB", ctx);
      plan.report.adjust = number(r, "L_adjust", ctx);
      plan.report.transfer = number(r, "L_trans", ctx);
      plan.report.rounds = integer(r, "K", ctx);
      if (r.contains("per_round_boundary")) {
        plan.report.per_round_boundary = numbers(r["per_round_boundary"], ctx, "per_round_boundary");
      }
      if (r.contains("per_round_cost")) {
        plan.report.per_round_cost = numbers(r["per_round_cost"], ctx, "per_round_cost");
      }
    }
    return plan;
  });
}

ojson task_to_json(std::span<const Action> task) {
  ojson out = ojson::array();
  for (const Action& a : task) out.push_back(ojson::parse(action_to_json(a).dump()));
  return out;
}

std::vector<Action> task_from_json(const json& j) {
  return parse_as("task", [&] {
    if (!j.is_array()) throw InputError("task: expected an array of actions");
    std::vector<Action> task;
    for (const json& a : j) task.push_back(action_from_json(a));
    return task;
  });
}

ojson sim_config_to_json(const SimConfig& c) {
  ojson out = {{"dt", c.dt},
               {"wind_sigma", c.wind_sigma},
               {"gps_sigma", c.gps_sigma},
               {"div_correct", c.div_correct},
               {"div_replan", c.div_replan},
               {"collide_dist", c.collide_dist},
               {"collide_horizon", c.collide_horizon},
               {"seed", c.seed},
               {"status_period", c.status_period},
               {"arrival_tolerance", c.arrival_tolerance},
               {"coverage_eps", c.coverage_eps},
               {"max_time", c.max_time}};
  if (c.gust) {
    out["gust"] = {{"start", c.gust->start},
                   {"end", c.gust->end},
                   {"velocity", point_json(c.gust->velocity)}};
  }
  if (!c.offsets.empty()) {
    ojson offsets = ojson::array();
    for (const PositionOffset& o : c.offsets) {
      offsets.push_back({{"t", o.t}, {"uav", o.uav}, {"delta", point_json(o.delta)}});
    }
    out["offsets"] = offsets;
  }
  return out;
}

SimConfig sim_config_from_json(const json& j) {
  return parse_as("config", [&] {
    const std::string ctx = "config";
    only_keys(j, {"dt", "wind_sigma", "gust", "gps_sigma", "div_correct", "div_replan",
                  "collide_dist", "collide_horizon", "seed", "status_period",
                  "arrival_tolerance", "coverage_eps", "max_time", "offsets"},
              ctx);
    SimConfig c;
    auto opt = [&](const char* key, double& into) {
      if (j.contains(key)) into = number(j, key, ctx);
    };
    opt("dt", c.dt);
    opt("wind_sigma", c.wind_sigma);
    opt("gps_sigma", c.gps_sigma);
    opt("div_correct", c.div_correct);
    opt("div_replan", c.div_replan);
    opt("collide_dist", c.collide_dist);
    opt("collide_horizon", c.collide_horizon);
    opt("status_period", c.status_period);
    opt("arrival_tolerance", c.arrival_tolerance);
    opt("coverage_eps", c.coverage_eps);
    opt("max_time", c.max_time);
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) bad(ctx, "seed", "expected a non-negative integer");
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("gust")) {
      const json& g = j["gust"];
      only_keys(g, {"start", "end", "velocity"}, "config.gust");
      c.gust = Gust{number(g, "start", "config.gust"), number(g, "end", "config.gust"),
                    point(field(g, "velocity", "config.gust"), "config.gust", "velocity")};
    }
    if (j.contains("offsets")) {
      if (!j["offsets"].is_array()) bad(ctx, "offsets", "expected an array");
      for (const json& o : j["offsets"]) {
        only_keys(o, {"t", "uav", "delta"}, "config.offsets");
        c.offsets.push_back({number(o, "t", "config.offsets"), integer(o, "uav", "config.offsets"),
                             point(field(o, "delta", "config.offsets"), "config.offsets", "delta")});
      }
    }
    c.validate();
    return c;
  });
}

ojson energy_models_to_json(const EnergyModels& models) {
  const auto& A = models.calibration.A;
  ojson cal = {{"A", ojson::array({ojson::array({A(0, 0), A(0, 1), A(0, 2)}),
                                   ojson::array({A(1, 0), A(1, 1), A(1, 2)})})}};
  const ConsumptionModel& c = models.consumption;
  ojson support = ojson::array();
  for (Eigen::Index i = 0; i < c.support.rows(); ++i) {
    support.push_back(ojson::array({c.support(i, 0), c.support(i, 1)}));
  }
  std::vector<double> alpha(c.alpha.data(), c.alpha.data() + c.alpha.size());
  return {{"calibration", cal},
          {"consumption",
           {{"bandwidth", c.bandwidth},
            {"ridge", c.ridge},
            {"mean", point_json(c.mean)},
            {"scale", point_json(c.scale)},
            {"support", support},
            {"alpha", alpha}}}};
}

EnergyModels energy_models_from_json(const json& j) {
  return parse_as("energy model", [&] {
    only_keys(j, {"calibration", "consumption"}, "model");
    EnergyModels models;
    const json& cal = field(j, "calibration", "model");
    only_keys(cal, {"A"}, "model.calibration");
    const json& A = field(cal, "A", "model.calibration");
    if (!A.is_array() || A.size() != 2) bad("model.calibration", "A", "expected a 2x3 matrix");
    for (int r = 0; r < 2; ++r) {
      const std::vector<double> row = numbers(A[r], "model.calibration", "A");
      if (row.size() != 3) bad("model.calibration", "A", "expected a 2x3 matrix");
      for (int c = 0; c < 3; ++c) models.calibration.A(r, c) = row[c];
    }
    const std::string ctx = "model.consumption";
    const json& con = field(j, "consumption", "model");
    only_keys(con, {"bandwidth", "ridge", "mean", "scale", "support", "alpha"}, ctx);
    ConsumptionModel& c = models.consumption;
    c.bandwidth = number(con, "bandwidth", ctx);
    c.ridge = number(con, "ridge", ctx);
    c.mean = point(field(con, "mean", ctx), ctx, "mean");
    c.scale = point(field(con, "scale", ctx), ctx, "scale");
    const json& support = field(con, "support", ctx);
    if (!support.is_array()) bad(ctx, "support", "expected an array of [t, d]");
    const std::vector<double> alpha = numbers(field(con, "alpha", ctx), ctx, "alpha");
    if (alpha.size() != support.size()) bad(ctx, "alpha", "length differs from support");
    if (!(c.bandwidth > 0)) bad(ctx, "bandwidth", "must be positive");
    c.support.resize(static_cast<Eigen::Index>(support.size()), 2);
    c.alpha.resize(static_cast<Eigen::Index>(alpha.size()));
    for (std::size_t i = 0; i < support.size(); ++i) {
      const Point2d row = point(support[i], ctx, "support");
      c.support(static_cast<Eigen::Index>(i), 0) = row.x();
      c.support(static_cast<Eigen::Index>(i), 1) = row.y();
      c.alpha(static_cast<Eigen::Index>(i)) = alpha[i];
    }
    return models;
  });
}

namespace {

std::vector<std::string> split_cells(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string cell(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    const auto first = cell.find_first_not_of(" \t");
    const auto last = cell.find_last_not_of(" \t");
    cells.push_back(first == std::string::npos ? "" : cell.substr(first, last - first + 1));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

TrainingData parse_training_csv(std::string_view text) {
  static constexpr std::array<const char*, 5> kColumns = {"t_sim_s", "d_sim_m", "t_real_s",
                                                          "d_real_m", "energy_j"};
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw InputError("training csv: empty file");
  const std::vector<std::string> header = split_cells(lines.front());
  std::array<std::size_t, 5> at{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw InputError(fmt::format("training csv: missing column '{}'", kColumns[c]));
    }
    at[c] = static_cast<std::size_t>(it - header.begin());
  }
  TrainingData data;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].empty()) continue;
    const std::vector<std::string> cells = split_cells(lines[r]);
    if (cells.size() != header.size()) {
      throw InputError(fmt::format("training csv row {}: expected {} cells, found {}", r,
                                   header.size(), cells.size()));
    }
    std::array<std::optional<double>, 5> v;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      const std::string& cell = cells[at[c]];
      if (cell.empty()) continue;
      double x = 0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(x)) {
        throw InputError(fmt::format("training csv row {}, column '{}': not a number: '{}'", r,
                                     kColumns[c], cell));
      }
      v[c] = x;
    }
    const bool real = v[2] && v[3];
    if (v[0].has_value() != v[1].has_value()) {
      throw InputError(fmt::format("training csv row {}, column '{}': missing value", r,
                                   v[0] ? kColumns[1] : kColumns[0]));
    }
    if (!real) {
      throw InputError(fmt::format("training csv row {}, column '{}': missing value", r,
                                   v[2] ? kColumns[3] : kColumns[2]));
    }
    if (!v[0] && !v[4]) {
      throw InputError(fmt::format("training csv row {}, column '{}': missing value", r,
                                   kColumns[4]));
    }
    if (v[0]) data.calibration.push_back({*v[0], *v[1], *v[2], *v[3]});
    if (v[4]) data.consumption.push_back({*v[2], *v[3], *v[4]});
  }
  return data;
}

std::vector<std::array<double, 2>> parse_prediction_csv(std::string_view text) {
  static constexpr std::array<const char*, 2> kColumns = {"t_sim_s", "d_sim_m"};
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw InputError("prediction csv: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_cells(line);
  std::array<std::size_t, 2> at{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), kColumns[c]);
    if (it == header.end()) {
      throw InputError(fmt::format("prediction csv: missing column '{}'", kColumns[c]));
    }
    at[c] = static_cast<std::size_t>(it - header.begin());
  }
  std::vector<std::array<double, 2>> rows;
  for (std::size_t r = 1; std::getline(in, line); ++r) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_cells(line);
    if (cells.size() != header.size()) {
      throw InputError(fmt::format("prediction csv row {}: expected {} cells, found {}", r,
                                   header.size(), cells.size()));
    }
    std::array<double, 2> row{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      const std::string& cell = cells[at[c]];
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), row[c]);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size() ||
          !std::isfinite(row[c])) {
        throw InputError(fmt::format("prediction csv row {}, column '{}': not a number: '{}'", r,
                                     kColumns[c], cell));
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string training_csv(std::span<const SyntheticFlight> flights) {
  std::string out(kTrainingHeader);
  out += '\n';
  for (const SyntheticFlight& f : flights) {
    out += fmt::format("{},{},{},{},{}\n", fixed6(f.pair.t_sim), fixed6(f.pair.d_sim),
                       fixed6(f.pair.t_real), fixed6(f.pair.d_real), fixed6(f.energy));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("'{}': {}", path, e.what()));
  }
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path));
  out << content;
  if (!out) throw InputError(fmt::format("cannot write '{}'", path));
}

std::string fixed6(double v) {
  std::string s = fmt::format("{:.6f}", v);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace couav
