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

// File formats: instance, plan, task, simulation config and energy model
// JSON; the energy training CSV; whole-file read and write helpers.

#ifndef COUAV_IO_HPP_
#define COUAV_IO_HPP_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "couav/energy.hpp"
#include "couav/model.hpp"
#include "couav/planner.hpp"
#include "couav/protocol.hpp"
#include "couav/simulator.hpp"

namespace couav {

nlohmann::ordered_json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& j);

struct PlanFile {
  std::string algorithm = "psa";
  Waypoints waypoints;
  PlanReport report;
  PlannerOptions options;
};

nlohmann::ordered_json plan_to_json(const PlanFile& plan);
PlanFile plan_from_json(const nlohmann::json& j);

nlohmann::ordered_json task_to_json(std::span<const Action> task);
std::vector<Action> task_from_json(const nlohmann::json& j);

nlohmann::ordered_json sim_config_to_json(const SimConfig& config);
/// Missing fields keep their defaults; unknown fields are rejected.
SimConfig sim_config_from_json(const nlohmann::json& j);

nlohmann::ordered_json energy_models_to_json(const EnergyModels& models);
EnergyModels energy_models_from_json(const nlohmann::json& j);

inline constexpr std::string_view kTrainingHeader = "t_sim_s,d_sim_m,t_real_s,d_real_m,energy_j";

/// Rows with all four time/distance columns give calibration pairs; rows
/// with the real columns and energy give consumption samples.
struct TrainingData {
  std::vector<CalibrationPair> calibration;
  std::vector<FlightSample> consumption;
};

TrainingData parse_training_csv(std::string_view text);

/// (t_sim_s, d_sim_m) rows of a CSV that has at least those two columns.
std::vector<std::array<double, 2>> parse_prediction_csv(std::string_view text);
std::string training_csv(std::span<const SyntheticFlight> flights);

std::string read_file(const std::string& path);
nlohmann::json read_json(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Six decimals, "-0.000000" normalised to "0.000000".
std::string fixed6(double v);

}  // namespace couav

#endif  // COUAV_IO_HPP_
