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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "couav/energy.hpp"
#include "couav/model.hpp"
#include "couav/planner.hpp"
#include "couav/simulator.hpp"
#include "barrier_model.hpp"
#include "oracles.hpp"
#include "packet_fuzz.hpp"
#include "support.hpp"

namespace {

using namespace couav;
using testing::random_instance;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

template <typename F>
void criterion(int id, const char* name, double limit_s, F&& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (secs >= limit_s) {
    v.pass = false;
    v.detail += fmt::format("; over the {:.0f} s limit", limit_s);
  }
  failures += !v.pass;
  fmt::print("criterion {} {} {}: {} ({:.2f} s)\n", id, v.pass ? "PASS" : "FAIL", name, v.detail,
             secs);
  std::fflush(stdout);
}

Verdict cost_ledger() {
  double worst = 0;
  int bound_violations = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = random_instance(10 + static_cast<int>(seed % 31), 2 + static_cast<int>(seed % 5), 10, seed);
    const PlanReport r = psa_plan(inst).report;
    worst = std::max(worst, std::abs(r.fleet_cost - r.lower_bound - r.adjust));
    bound_violations += r.lower_bound > r.fleet_cost + 1e-9;  // rounding only
  }
  return {worst < 1e-6 && bound_violations == 0,
          fmt::format("max |L - LB - L_adjust| = {:.3g} over 200 instances, LB > L on {}", worst,
                      bound_violations)};
}

Verdict constraint_soundness() {
  int dirty = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = random_instance(10 + static_cast<int>(seed % 31), 2 + static_cast<int>(seed % 5), 10, 1000 + seed);
    dirty += !validate_waypoints(inst, psa_plan(inst).waypoints).clean();
    dirty += !validate_waypoints(inst, greedy_plan(inst).waypoints).clean();
  }
  return {dirty == 0, fmt::format("{} of 200 plans (100 PSA, 100 greedy) with violations", dirty)};
}

Verdict geometry_oracles() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> count(1, 12), lattice(0, 8), coin(0, 1);
  int hull_mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Point2d> pts;
    const int n = count(rng);
    if (coin(rng)) {
      for (int k = 0; k < n; ++k) pts.emplace_back(lattice(rng), lattice(rng));
    } else {
      pts = testing::random_points(rng, n, -100, 100);
    }
    hull_mismatches += !testing::hull_mismatch(pts).empty();
  }
  std::uniform_int_distribution<int> lanes(1, 6), members(1, 8);
  std::uniform_real_distribution<double> spacing(2, 20);
  int excursion_mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const int m = lanes(rng);
    const double s = spacing(rng);
    std::uniform_real_distribution<double> depth(0, m * s + 5);
    std::vector<double> depths(members(rng));
    for (double& x : depths) x = depth(rng);
    const double got = testing::group_excursion(depths, s, m, kDefaultCoverageEps);
    const double want = testing::excursion_oracle(depths, s, m, kDefaultCoverageEps);
    excursion_mismatches += std::abs(got - want) > 1e-3;
  }
  return {hull_mismatches == 0 && excursion_mismatches == 0,
          fmt::format("hull mismatches {}/1000, excursion mismatches {}/500 at 1 mm",
                      hull_mismatches, excursion_mismatches)};
}

Verdict protocol() {
  const auto exhaustive = testing::explore_barrier(3, 3);
  const auto random = testing::random_barrier_runs(5, 10, 10000, 11, false);
  std::mt19937_64 rng(12);
  int fuzz_failures = 0;
  for (int i = 0; i < 10000; ++i) fuzz_failures += !testing::round_trip_failure(testing::random_packet(rng)).empty();
  const bool ok = exhaustive.ok() && random.ok() && fuzz_failures == 0;
  return {ok, fmt::format("exhaustive 3x3: {} states, {} terminal, {} violations; random 5x10: {} runs, "
                          "{} violations; packet fuzz: {} failures in 10000",
                          exhaustive.states, exhaustive.runs, exhaustive.violations.size(),
                          random.runs, random.violations.size(), fuzz_failures)};
}

struct Means {
  double psa = 0, greedy = 0;
};

Means sweep_point(int n, int m) {
  Means out;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance(n, m, 10, seed);
    out.psa += psa_plan(inst).report.fleet_cost / 50;
    out.greedy += greedy_plan(inst).report.fleet_cost / 50;
  }
  return out;
}

Verdict trends() {
  const std::array<int, 4> ns{10, 20, 30, 40};
  const std::array<double, 4> reference{1019.266, 2116.791, 2733.867, 3269.500};
  const std::array<int, 3> ms{2, 4, 6};
  std::vector<Means> by_n, by_m;
  for (int n : ns) by_n.push_back(sweep_point(n, 4));
  for (int m : ms) by_m.push_back(sweep_point(30, m));

  bool a = true, b = true, c = true, d = true;
  for (std::size_t i = 1; i < by_m.size(); ++i) a = a && by_m[i].psa < by_m[i - 1].psa;
  for (std::size_t i = 1; i < by_n.size(); ++i) b = b && by_n[i].psa > by_n[i - 1].psa;
  std::string detail = "n-sweep m=4 (PSA/greedy/ref):";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double rel = by_n[i].psa / reference[i] - 1;
    d = d && std::abs(rel) <= 0.25;
    c = c && by_n[i].psa < by_n[i].greedy;
    detail += fmt::format(" {}:{:.1f}/{:.1f}/{:.1f} ({:+.1f}%)", ns[i], by_n[i].psa, by_n[i].greedy,
                          reference[i], 100 * rel);
  }
  detail += "; m-sweep n=30 (PSA/greedy):";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    c = c && by_m[i].psa < by_m[i].greedy;
    detail += fmt::format(" {}:{:.1f}/{:.1f}", ms[i], by_m[i].psa, by_m[i].greedy);
  }
  detail += fmt::format("; (a) {} (b) {} (c) {} (d) {}", a ? "pass" : "fail", b ? "pass" : "fail",
                        c ? "pass" : "fail", d ? "pass" : "fail");
  return {a && b && c && d, detail};
}

Instance field_task(std::uint64_t seed, double speed) {
  Instance inst = random_instance(30, 3, 20, seed, 120);
  inst.fleet.cruise_speed = speed;
  return inst;
}

PlannerOptions field_options() {
  PlannerOptions po;
  po.spacing = 16;
  po.eps_cov = 0.25;
  return po;
}

Verdict energy_accuracy() {
  const SyntheticField field;
  std::vector<CalibrationPair> pairs;
  std::vector<FlightSample> samples;
  for (const auto& f : synthetic_flights(field, 80, 21)) {
    pairs.push_back(f.pair);
    samples.push_back({f.pair.t_real, f.pair.d_real, f.energy});
  }
  const EnergyModels models{fit_calibration(pairs), fit_consumption(samples)};
  std::mt19937_64 rng(22);
  std::normal_distribution<double> noise(0.0, field.noise);
  double total = 0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = field_task(seed, 1.5);
    const Plan plan = psa_plan(inst, field_options());
    SimConfig cfg;
    cfg.seed = seed;
    const MissionTrace tr = run_mission(inst, plan.waypoints, models, cfg, field_options());
    for (const UavSummary& s : tr.summary) {
      const Eigen::Vector2d real = field.distortion * Eigen::Vector3d(s.t, s.d, 1.0);
      const double measured = field.energy(real(0), real(1)) * (1 + noise(rng));
      total += std::abs(s.energy - measured) / measured;
      ++count;
    }
  }
  const double mean = total / count;
  return {mean <= 0.06, fmt::format("mean relative error {:.2f}% over {} end-of-mission UAV flights (limit 6%)",
                                    100 * mean, count)};
}

MissionTrace field_run(std::uint64_t seed, Plan* plan_out = nullptr) {
  const Instance inst = field_task(seed, 4.0);
  const Plan plan = psa_plan(inst, field_options());
  if (plan_out) *plan_out = plan;
  SimConfig cfg;
  cfg.seed = seed;
  return run_mission(inst, plan.waypoints, std::nullopt, cfg, field_options());
}

Verdict end_to_end() {
  int bad = 0;
  double worst = 0;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Plan plan;
    const MissionTrace tr = field_run(seed, &plan);
    const double rel = tr.fleet_distance / plan.report.fleet_cost - 1;
    worst = std::max(worst, std::abs(rel));
    const bool ok = tr.completed && tr.uncovered.empty() && tr.connectivity_violations == 0 &&
                    std::abs(rel) <= 0.05;
    if (!ok && first_bad.empty()) {
      first_bad = fmt::format("; seed {}: completed {}, uncovered {}, disconnected ticks {}, distance {:+.2f}%",
                              seed, tr.completed, tr.uncovered.size(), tr.connectivity_violations,
                              100 * rel);
    }
    bad += !ok;
  }
  return {bad == 0, fmt::format("{} of 10 seeded missions failed; worst |sim/plan - 1| = {:.2f}%{}", bad,
                                100 * worst, first_bad)};
}

Verdict determinism() {
  const std::string a = field_run(0).to_ndjson();
  const std::string b = field_run(0).to_ndjson();
  return {a == b, fmt::format("{} trace bytes, {}", a.size(), a == b ? "identical" : "different")};
}

}  // namespace

int main() {
  criterion(1, "cost ledger", 30, cost_ledger);
  criterion(2, "constraint soundness", 60, constraint_soundness);
  criterion(3, "geometry oracles", 60, geometry_oracles);
  criterion(4, "protocol", 30, protocol);
  criterion(5, "trend reproduction", 300, trends);
  criterion(6, "energy accuracy", 10, energy_accuracy);
  criterion(7, "end-to-end field task", 20, end_to_end);
  criterion(8, "determinism", 60, determinism);
  fmt::print("{} of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
