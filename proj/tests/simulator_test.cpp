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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "couav/energy.hpp"
#include "couav/planner.hpp"
#include "couav/simulator.hpp"
#include "support.hpp"

namespace couav {
namespace {

using testing::random_instance;

SimConfig quiet(std::uint64_t seed = 0) {
  SimConfig c;
  c.seed = seed;
  c.gps_sigma = 0;
  c.wind_sigma = 0;
  return c;
}

// Two UAVs flying one 180 m straight leg side by side.
struct StraightLine {
  Instance inst;
  Waypoints wp;
  StraightLine() {
    inst.area = {200, 200};
    inst.fleet = {2, 20, 1, 4, 1e6};
    inst.targets = {{50, 50}, {150, 50}, {150, 60}};
    wp = {{{10, 50}, {190, 50}}, {{10, 60}, {190, 60}}};
  }
};

// Minimum distance over the horizon by fine time stepping.
double sampled_min_distance(const Point2d& pa, const Point2d& va, const Point2d& pb,
                            const Point2d& vb, double horizon) {
  double best = (pa - pb).norm();
  for (int i = 1; i <= 20000; ++i) {
    const double t = horizon * i / 20000.0;
    best = std::min(best, ((pa + t * va) - (pb + t * vb)).norm());
  }
  return best;
}

TEST(CollisionMonitor, MatchesFineStepOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(0, 30), vel(-6, 6);
  int warnings = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::vector<Point2d> p{{pos(rng), pos(rng)}, {pos(rng), pos(rng)}, {pos(rng), pos(rng)}};
    const std::vector<Point2d> v{{vel(rng), vel(rng)}, {vel(rng), vel(rng)}, {vel(rng), vel(rng)}};
    const auto got = collision_monitor(p, v, 2.0, 2.0);
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const double oracle = sampled_min_distance(p[a], v[a], p[b], v[b], 2.0);
        if (std::abs(oracle - 2.0) < 1e-3) continue;
        const auto it = std::find_if(got.begin(), got.end(), [&](const CollisionWarning& w) {
          return w.first == a && w.second == b;
        });
        ASSERT_EQ(it != got.end(), oracle < 2.0) << trial;
        if (it != got.end()) {
          EXPECT_NEAR(it->predicted_min, oracle, 1e-3);
          EXPECT_NEAR(it->distance, (p[a] - p[b]).norm(), 1e-12);
          ++warnings;
        }
      }
    }
  }
  EXPECT_GT(warnings, 5);
}

TEST(CollisionMonitor, HeadOnApproachWarns) {
  const std::vector<Point2d> p{{0, 0}, {10, 0}};
  const std::vector<Point2d> v{{4, 0}, {-4, 0}};
  const auto w = collision_monitor(p, v, 2.0, 2.0);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_TRUE(w[0].closing);
  EXPECT_NEAR(w[0].predicted_min, 0, 1e-12);
  const std::vector<Point2d> away{{-4, 0}, {4, 0}};
  EXPECT_TRUE(collision_monitor(p, away, 2.0, 2.0).empty());
}

TEST(Simulator, HeadOnPlanRaisesWarnings) {
  Instance inst;
  inst.area = {100, 100};
  inst.fleet = {2, 200, 1, 4, 1e6};
  inst.targets = {{10, 50}, {90, 50}};
  const Waypoints wp{{{10, 50}, {90, 50}}, {{90, 50.5}, {10, 50.5}}};
  const MissionTrace tr = run_mission(inst, wp, std::nullopt, quiet());
  EXPECT_GE(tr.count("collision_warning"), 1);
  EXPECT_TRUE(tr.completed);
}

TEST(Simulator, NoiselessRunFollowsThePlan) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance inst = random_instance(30, 3, 20, seed, 120);
    PlannerOptions po;
    po.spacing = 16;
    po.eps_cov = 0.25;
    const Plan plan = psa_plan(inst, po);
    const MissionTrace tr = run_mission(inst, plan.waypoints, std::nullopt, quiet(seed), po);
    EXPECT_TRUE(tr.completed);
    EXPECT_TRUE(tr.uncovered.empty());
    EXPECT_EQ(tr.connectivity_violations, 0u);
    EXPECT_EQ(tr.count("divergence"), 0);
    EXPECT_EQ(tr.count("replan"), 0);
    EXPECT_NEAR(tr.fleet_distance / plan.report.fleet_cost, 1.0, 1e-3) << seed;
    for (std::size_t j = 0; j < tr.summary.size(); ++j) {
      EXPECT_NEAR(tr.summary[j].d, plan.report.per_uav_distance[j], 1e-3 * plan.report.fleet_cost);
    }
  }
}

TEST(Simulator, SameSeedSameTraceBytes) {
  const Instance inst = random_instance(20, 3, 20, 4, 120);
  PlannerOptions po;
  po.spacing = 16;
  const Plan plan = psa_plan(inst, po);
  SimConfig cfg;
  cfg.seed = 17;
  const std::string a = run_mission(inst, plan.waypoints, std::nullopt, cfg, po).to_ndjson();
  const std::string b = run_mission(inst, plan.waypoints, std::nullopt, cfg, po).to_ndjson();
  EXPECT_EQ(a, b);
  cfg.seed = 18;
  EXPECT_NE(a, run_mission(inst, plan.waypoints, std::nullopt, cfg, po).to_ndjson());
}

TEST(Simulator, FiveMetreOffsetGetsOneCorrection) {
  const StraightLine s;
  SimConfig cfg = quiet();
  cfg.offsets.push_back({20.05, 0, Point2d(0, 5)});
  const MissionTrace tr = run_mission(s.inst, s.wp, std::nullopt, cfg);
  EXPECT_EQ(tr.count("divergence"), 1);
  EXPECT_EQ(tr.count("replan"), 0);
  EXPECT_TRUE(tr.completed);
  EXPECT_TRUE(tr.uncovered.empty());
  bool found = false;
  for (const auto& rec : tr.records) {
    if (rec["kind"] == "divergence") {
      found = true;
      EXPECT_EQ(rec["action"], "correct");
      EXPECT_NEAR(rec["deviation"].get<double>(), 5, 0.5);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Simulator, FifteenMetreOffsetReplansAndStillCovers) {
  const StraightLine s;
  SimConfig cfg = quiet();
  cfg.offsets.push_back({20.05, 0, Point2d(0, 15)});
  const MissionTrace tr = run_mission(s.inst, s.wp, std::nullopt, cfg);
  EXPECT_EQ(tr.count("replan"), 1);
  EXPECT_TRUE(tr.completed);
  EXPECT_TRUE(tr.uncovered.empty());
  for (const auto& rec : tr.records) {
    if (rec["kind"] == "replan") EXPECT_EQ(rec["outcome"], "replaced");
  }
}

TEST(Simulator, SmallNoiseNeverCorrects) {
  const StraightLine s;
  SimConfig cfg = quiet();
  cfg.gps_sigma = 0.2;
  cfg.wind_sigma = 0.1;
  const MissionTrace tr = run_mission(s.inst, s.wp, std::nullopt, cfg);
  EXPECT_EQ(tr.count("divergence"), 0);
  EXPECT_TRUE(tr.uncovered.empty());
}

TEST(Simulator, SafeSeparationAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance(30, 4, 10, seed);
    const Plan plan = psa_plan(inst);
    SimConfig cfg;
    cfg.seed = seed;
    const MissionTrace tr = run_mission(inst, plan.waypoints, std::nullopt, cfg);
    EXPECT_TRUE(tr.completed) << seed;
    EXPECT_GE(tr.min_separation, 2.0) << seed;
  }
}

EnergyModels synthetic_models() {
  std::vector<CalibrationPair> pairs;
  std::vector<FlightSample> samples;
  for (const auto& f : synthetic_flights(SyntheticField{}, 60, 5)) {
    pairs.push_back(f.pair);
    samples.push_back({f.pair.t_real, f.pair.d_real, f.energy});
  }
  return {fit_calibration(pairs), fit_consumption(samples)};
}

TEST(Simulator, EnergyCurveAndBatteryAgree) {
  const StraightLine s;
  const EnergyModels models = synthetic_models();
  const MissionTrace tr = run_mission(s.inst, s.wp, models, SimConfig{});
  const auto curves = energy_integrate(tr, models);
  ASSERT_EQ(curves.size(), 2u);
  const double capacity = s.inst.fleet.battery_capacity;
  for (std::size_t j = 0; j < 2; ++j) {
    ASSERT_EQ(curves[j].size(), tr.status[j].size());
    ASSERT_FALSE(curves[j].empty());
    for (std::size_t k = 0; k < curves[j].size(); ++k) {
      EXPECT_NEAR(tr.status[j][k].battery * capacity + curves[j][k].energy, capacity, 1e-6);
      if (k > 0) EXPECT_GE(curves[j][k].distance, curves[j][k - 1].distance);
    }
    EXPECT_NEAR(tr.summary[j].energy,
                predict_energy(models.calibration, models.consumption, tr.summary[j].t,
                               tr.summary[j].d),
                1e-9);
    EXPECT_GT(tr.summary[j].energy, 0);
  }
}

TEST(Simulator, LowBatterySendsUavHome) {
  StraightLine s;
  const EnergyModels models = synthetic_models();
  s.inst.fleet.battery_capacity =
      1.1 * predict_energy(models.calibration, models.consumption, 20, 80);
  const MissionTrace tr = run_mission(s.inst, s.wp, models, quiet());
  EXPECT_GE(tr.count("exception"), 1);
  EXPECT_FALSE(tr.completed);
  for (int j = 0; j < 2; ++j) EXPECT_LT((tr.paths[j].back() - s.wp[j].front()).norm(), 1.0);
}

TEST(Simulator, GeofenceBreachRaisesException) {
  const StraightLine s;
  SimConfig cfg = quiet();
  cfg.offsets.push_back({10.05, 1, Point2d(0, 400)});
  const MissionTrace tr = run_mission(s.inst, s.wp, std::nullopt, cfg);
  bool breach = false;
  for (const auto& rec : tr.records) {
    if (rec["kind"] == "exception" && rec["exception"] == "geofence_breach") breach = true;
  }
  EXPECT_TRUE(breach);
  EXPECT_FALSE(tr.completed);
}

TEST(Simulator, TraceRecordsAreTimeOrdered) {
  const StraightLine s;
  const MissionTrace tr = run_mission(s.inst, s.wp, std::nullopt, SimConfig{});
  double last = -1;
  for (const auto& rec : tr.records) {
    ASSERT_TRUE(rec.contains("t"));
    EXPECT_GE(rec["t"].get<double>(), last);
    last = rec["t"].get<double>();
  }
  EXPECT_EQ(tr.records.back()["kind"], "end");
  EXPECT_GT(tr.count("sync"), 0);
}

TEST(Simulator, RejectsBadInput) {
  const StraightLine s;
  EXPECT_THROW(run_mission(s.inst, Waypoints{{{0, 0}}}, std::nullopt, SimConfig{}), Error);
  SimConfig cfg;
  cfg.div_correct = 20;
  EXPECT_THROW(run_mission(s.inst, s.wp, std::nullopt, cfg), Error);
  cfg = SimConfig{};
  cfg.dt = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(SegmentDeviation, DistanceToTheSegment) {
  EXPECT_DOUBLE_EQ(segment_deviation(Point2d(5, 3), Point2d(0, 0), Point2d(10, 0)), 3);
  EXPECT_DOUBLE_EQ(segment_deviation(Point2d(13, 4), Point2d(0, 0), Point2d(10, 0)), 5);
}

}  // namespace
}  // namespace couav
