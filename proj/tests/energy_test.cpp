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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "couav/energy.hpp"

namespace couav {
namespace {

// Dense Gaussian elimination with partial pivoting.
std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    std::swap(a[c], a[pivot]);
    std::swap(b[c], b[pivot]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

std::vector<FlightSample> random_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t(30, 600), speed(1, 2), noise(-50, 50);
  std::vector<FlightSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = t(rng);
    const double di = ti * speed(rng);
    out.push_back({ti, di, 250 * ti + 30 * di + noise(rng)});
  }
  return out;
}

TEST(Calibration, MatchesPseudoInverseLeastSquares) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 500), noise(-2, 2);
  std::vector<CalibrationPair> pairs;
  Eigen::MatrixXd X(40, 3), Y(40, 2);
  for (int i = 0; i < 40; ++i) {
    const double t = u(rng), d = u(rng);
    const CalibrationPair p{t, d, 1.1 * t + 0.02 * d + 4 + noise(rng), 0.9 * d - 3 + noise(rng)};
    pairs.push_back(p);
    X.row(i) << t, d, 1;
    Y.row(i) << p.t_real, p.d_real;
  }
  const Eigen::MatrixXd pinv = X.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                                   .solve(Eigen::MatrixXd::Identity(40, 40));
  const Eigen::MatrixXd expected = (pinv * Y).transpose();
  const CalibrationModel model = fit_calibration(pairs);
  EXPECT_LT((model.A - expected).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Calibration, RecoversExactAffineMap) {
  std::vector<CalibrationPair> pairs;
  for (int i = 0; i < 10; ++i) {
    const double t = 10.0 * i, d = 7.0 * i * i;
    pairs.push_back({t, d, 2 * t - d + 1, 0.5 * d + 3});
  }
  const CalibrationModel model = fit_calibration(pairs);
  EXPECT_NEAR(model.apply(3, 4)(0), 3, 1e-9);
  EXPECT_NEAR(model.apply(3, 4)(1), 5, 1e-9);
}

TEST(Calibration, RejectsRankDeficientData) {
  std::vector<CalibrationPair> pairs;
  for (int i = 0; i < 5; ++i) pairs.push_back({1.0 * i, 2.0 * i, 1, 1});
  EXPECT_THROW(fit_calibration(pairs), Error);
}

TEST(Consumption, MatchesDenseGaussianEliminationOracle) {
  const auto samples = random_samples(30, 2);
  const ConsumptionModel model = fit_consumption(samples);
  const std::size_t n = samples.size();
  // Standardise with population statistics.
  double mt = 0, md = 0;
  for (const auto& s : samples) {
    mt += s.t;
    md += s.d;
  }
  mt /= n;
  md /= n;
  double vt = 0, vd = 0;
  for (const auto& s : samples) {
    vt += (s.t - mt) * (s.t - mt);
    vd += (s.d - md) * (s.d - md);
  }
  const double st = std::sqrt(vt / n), sd = std::sqrt(vd / n);
  std::vector<std::pair<double, double>> z;
  for (const auto& s : samples) z.emplace_back((s.t - mt) / st, (s.d - md) / sd);
  std::vector<double> dists;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dists.push_back(std::hypot(z[i].first - z[j].first, z[i].second - z[j].second));
    }
  }
  std::sort(dists.begin(), dists.end());
  const std::size_t mid = dists.size() / 2;
  const double h = dists.size() % 2 ? dists[mid] : 0.5 * (dists[mid - 1] + dists[mid]);
  EXPECT_NEAR(model.bandwidth, h, 1e-12);
  auto k = [&](std::pair<double, double> a, std::pair<double, double> b) {
    const double dx = a.first - b.first, dy = a.second - b.second;
    return std::exp(-(dx * dx + dy * dy) / (2 * h * h));
  };
  std::vector<std::vector<double>> gram(n, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = k(z[i], z[j]);
    gram[i][i] += kDefaultRidge * n;
    y[i] = samples[i].energy;
  }
  const std::vector<double> alpha = gauss_solve(gram, y);
  for (double t : {100.0, 250.0, 480.0}) {
    for (double d : {150.0, 400.0, 700.0}) {
      const std::pair<double, double> q{(t - mt) / st, (d - md) / sd};
      double expected = 0;
      for (std::size_t i = 0; i < n; ++i) expected += alpha[i] * k(q, z[i]);
      EXPECT_NEAR(model.predict(t, d), expected, 1e-6 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(Consumption, FitsTrainingDataClosely) {
  const auto samples = random_samples(50, 3);
  const ConsumptionModel model = fit_consumption(samples);
  double err = 0;
  for (const auto& s : samples) err += std::abs(model.predict(s.t, s.d) - s.energy) / s.energy;
  EXPECT_LT(err / samples.size(), 0.02);
}

TEST(Consumption, RejectsBadInput) {
  EXPECT_THROW(fit_consumption(random_samples(1, 1)), Error);
  ConsumptionOptions bad;
  bad.ridge = 0;
  EXPECT_THROW(fit_consumption(random_samples(5, 1), bad), Error);
  bad.ridge = 1e-3;
  bad.bandwidth = -1;
  EXPECT_THROW(fit_consumption(random_samples(5, 1), bad), Error);
}

TEST(Kernel, BasicProperties) {
  const Eigen::Vector2d a(0, 0), b(3, 4);
  EXPECT_DOUBLE_EQ(gaussian_kernel(a, a, 2), 1);
  EXPECT_DOUBLE_EQ(gaussian_kernel(a, b, 5), std::exp(-0.5));
  Eigen::MatrixX2d same(3, 2);
  same.setOnes();
  EXPECT_EQ(median_pairwise_distance(same), 1.0);
}

TEST(PredictEnergy, ClampsAtZero) {
  EnergyModels models;
  models.consumption = fit_consumption(std::vector<FlightSample>{{1, 1, -100}, {2, 2, -100}});
  EXPECT_EQ(predict_energy(models.calibration, models.consumption, 1, 1), 0);
}

TEST(Feasibility, ComparesAgainstDiscountedBattery) {
  const auto samples = random_samples(40, 4);
  EnergyModels models;
  models.consumption = fit_consumption(samples);
  PlanReport report;
  report.per_uav_distance = {800, 100};
  const FleetConfig fleet{2, 10, 1, 2.0, 100000};
  const auto entries = check_feasibility(report, fleet, models);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_DOUBLE_EQ(entries[0].time, 400);
  EXPECT_DOUBLE_EQ(entries[0].budget, 80000);
  EXPECT_FALSE(entries[0].feasible);
  EXPECT_TRUE(entries[1].feasible);
}

TEST(SyntheticField, HeldOutErrorIsSmall) {
  const SyntheticField field;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto train = synthetic_flights(field, 60, 100 + seed);
    const auto test = synthetic_flights(field, 30, 200 + seed);
    std::vector<CalibrationPair> pairs;
    std::vector<FlightSample> samples;
    for (const auto& f : train) {
      pairs.push_back(f.pair);
      samples.push_back({f.pair.t_real, f.pair.d_real, f.energy});
    }
    const CalibrationModel cal = fit_calibration(pairs);
    const ConsumptionModel con = fit_consumption(samples);
    double err = 0;
    for (const auto& f : test) {
      err += std::abs(predict_energy(cal, con, f.pair.t_sim, f.pair.d_sim) - f.energy) / f.energy;
    }
    EXPECT_LT(err / test.size(), 0.06);
  }
  EXPECT_EQ(synthetic_flights(field, 5, 9)[3].energy, synthetic_flights(field, 5, 9)[3].energy);
}

}  // namespace
}  // namespace couav
