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

#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "couav/io.hpp"
#include "support.hpp"

namespace couav {
namespace {

using nlohmann::json;

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(InstanceJson, RoundTrip) {
  const Instance inst = testing::random_instance(12, 3, 10, 5);
  const Instance back = instance_from_json(json::parse(instance_to_json(inst).dump()));
  EXPECT_EQ(back.targets, inst.targets);
  EXPECT_EQ(back.fleet.m, 3);
  EXPECT_EQ(back.fleet.w, 10);
  EXPECT_EQ(back.seed, 5u);
  EXPECT_EQ(back.area.width, 400);
}

TEST(InstanceJson, RejectsBadFields) {
  json j = instance_to_json(testing::random_instance(3, 2, 10, 1));
  j["extra"] = 1;
  EXPECT_NE(error_of([&] { instance_from_json(j); }).find("extra"), std::string::npos);
  j.erase("extra");
  j["fleet"]["m"] = 1.5;
  EXPECT_NE(error_of([&] { instance_from_json(j); }).find("'m'"), std::string::npos);
  j["fleet"]["m"] = 0;
  EXPECT_FALSE(error_of([&] { instance_from_json(j); }).empty());
  j["fleet"]["m"] = 2;
  j["targets"][0] = json::array({1});
  EXPECT_NE(error_of([&] { instance_from_json(j); }).find("targets"), std::string::npos);
}

TEST(PlanJson, RoundTrip) {
  const Instance inst = testing::random_instance(15, 3, 10, 2);
  PlanFile file;
  file.options.spacing = 8;
  file.options.eps_cov = 0.3;
  const Plan plan = psa_plan(inst, file.options);
  file.waypoints = plan.waypoints;
  file.report = plan.report;
  const PlanFile back = plan_from_json(json::parse(plan_to_json(file).dump()));
  EXPECT_EQ(back.algorithm, "psa");
  EXPECT_EQ(back.waypoints, file.waypoints);
  EXPECT_EQ(back.report.fleet_cost, file.report.fleet_cost);
  EXPECT_EQ(back.report.per_round_cost, file.report.per_round_cost);
  EXPECT_EQ(back.report.rounds, file.report.rounds);
  EXPECT_EQ(back.options.spacing, 8);
  EXPECT_EQ(back.options.eps_cov, 0.3);
  EXPECT_EQ(back.options.separation, file.options.separation);
}

TEST(TaskJson, RoundTrip) {
  Action a;
  a.kind = ActionKind::kGoto;
  a.connection_id = 2;
  a.sync = true;
  a.absolute_destination = Point2d(1.25, -3);
  a.duration = 4;
  Action land;
  land.kind = ActionKind::kLand;
  land.connection_id = 2;
  const std::vector<Action> task{a, land};
  EXPECT_EQ(task_from_json(json::parse(task_to_json(task).dump())), task);
  EXPECT_FALSE(error_of([] { task_from_json(json::parse(R"([{"kind":"fly"}])")); }).empty());
}

TEST(SimConfigJson, RoundTripAndDefaults) {
  SimConfig c;
  c.seed = 99;
  c.gust = Gust{1, 2, Point2d(3, 4)};
  c.offsets.push_back({5, 1, Point2d(0, 5)});
  c.div_correct = 2.5;
  const SimConfig back = sim_config_from_json(json::parse(sim_config_to_json(c).dump()));
  EXPECT_EQ(back.seed, 99u);
  ASSERT_TRUE(back.gust);
  EXPECT_EQ(back.gust->velocity, Point2d(3, 4));
  ASSERT_EQ(back.offsets.size(), 1u);
  EXPECT_EQ(back.offsets[0].delta, Point2d(0, 5));
  EXPECT_EQ(back.div_correct, 2.5);
  const SimConfig partial = sim_config_from_json(json::parse(R"({"seed": 3})"));
  EXPECT_EQ(partial.dt, 0.1);
  EXPECT_EQ(partial.gps_sigma, 1.0);
  EXPECT_FALSE(error_of([] { sim_config_from_json(json::parse(R"({"sed": 3})")); }).empty());
  EXPECT_FALSE(error_of([] { sim_config_from_json(json::parse(R"({"dt": -1})")); }).empty());
}

TEST(EnergyJson, RoundTripPredictsIdentically) {
  EnergyModels models;
  std::vector<CalibrationPair> pairs;
  std::vector<FlightSample> samples;
  for (const auto& f : synthetic_flights(SyntheticField{}, 30, 1)) {
    pairs.push_back(f.pair);
    samples.push_back({f.pair.t_real, f.pair.d_real, f.energy});
  }
  models.calibration = fit_calibration(pairs);
  models.consumption = fit_consumption(samples);
  const EnergyModels back = energy_models_from_json(json::parse(energy_models_to_json(models).dump()));
  for (double t : {60.0, 300.0}) {
    EXPECT_EQ(predict_energy(back.calibration, back.consumption, t, 1.3 * t),
              predict_energy(models.calibration, models.consumption, t, 1.3 * t));
  }
}

TEST(TrainingCsv, RoundTripAndPartialRows) {
  const auto flights = synthetic_flights(SyntheticField{}, 5, 3);
  const TrainingData data = parse_training_csv(training_csv(flights));
  ASSERT_EQ(data.calibration.size(), 5u);
  ASSERT_EQ(data.consumption.size(), 5u);
  EXPECT_NEAR(data.consumption[2].energy, flights[2].energy, 1e-6);
  const TrainingData mixed = parse_training_csv(
      "energy_j,t_real_s,d_real_m,t_sim_s,d_sim_m\n100,10,12,,\n,10,12,9,11\r\n\n");
  EXPECT_EQ(mixed.consumption.size(), 1u);
  EXPECT_EQ(mixed.calibration.size(), 1u);
  EXPECT_EQ(mixed.calibration[0].t_sim, 9);
}

TEST(TrainingCsv, ErrorsNameRowAndColumn) {
  const std::string header = std::string(kTrainingHeader) + "\n";
  EXPECT_EQ(error_of([&] { parse_training_csv(header + "1,2,3,x,5\n"); }),
            "training csv row 1, column 'd_real_m': not a number: 'x'");
  EXPECT_EQ(error_of([] { parse_training_csv("t_sim_s,d_sim_m,t_real_s,energy_j\n"); }),
            "training csv: missing column 'd_real_m'");
  EXPECT_EQ(error_of([&] { parse_training_csv(header + "1,2,3\n"); }),
            "training csv row 1: expected 5 cells, found 3");
  EXPECT_EQ(error_of([&] { parse_training_csv(header + "1,,3,4,5\n"); }),
            "training csv row 1, column 'd_sim_m': missing value");
  EXPECT_EQ(error_of([&] { parse_training_csv(header + "1,2,,4,5\n"); }),
            "training csv row 1, column 't_real_s': missing value");
  EXPECT_EQ(error_of([] { parse_training_csv(""); }), "training csv: empty file");
}

TEST(PredictionCsv, ReadsSimulatedColumns) {
  const auto rows = parse_prediction_csv("uav,d_sim_m,t_sim_s\n0,100,50\n1,80.5,40\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], 40);
  EXPECT_EQ(rows[1][1], 80.5);
  EXPECT_EQ(error_of([] { parse_prediction_csv("t_sim_s\n1\n"); }),
            "prediction csv: missing column 'd_sim_m'");
  EXPECT_EQ(error_of([] { parse_prediction_csv("t_sim_s,d_sim_m\n1,abc\n"); }),
            "prediction csv row 1, column 'd_sim_m': not a number: 'abc'");
}

TEST(Files, MissingAndMalformed) {
  EXPECT_NE(error_of([] { read_file("/nonexistent/file.json"); }).find("cannot open"),
            std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "couav_io_test.json";
  write_file(path.string(), "{\"a\": ");
  EXPECT_FALSE(error_of([&] { read_json(path.string()); }).empty());
  write_file(path.string(), "{\"a\": 1}");
  EXPECT_EQ(read_json(path.string())["a"], 1);
  std::filesystem::remove(path);
}

TEST(Fixed6, NormalisesNegativeZero) {
  EXPECT_EQ(fixed6(-0.0000001), "0.000000");
  EXPECT_EQ(fixed6(1.5), "1.500000");
  EXPECT_EQ(fixed6(-2.25), "-2.250000");
}

}  // namespace
}  // namespace couav
