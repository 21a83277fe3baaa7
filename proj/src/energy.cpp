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

#include "couav/energy.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>

namespace couav {

CalibrationModel fit_calibration(std::span<const CalibrationPair> pairs) {
  if (pairs.size() < 3) throw Error("degenerate calibration data");
  const Eigen::Index n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixX3d X(n, 3);
  Eigen::MatrixX2d Y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    X.row(i) << p.t_sim, p.d_sim, 1.0;
    Y.row(i) << p.t_real, p.d_real;
  }
  if (!X.allFinite() || !Y.allFinite()) throw Error("non-finite calibration data");
  Eigen::ColPivHouseholderQR<Eigen::MatrixX3d> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw Error("degenerate calibration data");
  CalibrationModel model;
  model.A = qr.solve(Y).transpose();
  return model;
}

double gaussian_kernel(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double bandwidth) {
  return std::exp(-(a - b).squaredNorm() / (2 * bandwidth * bandwidth));
}

double median_pairwise_distance(const Eigen::MatrixX2d& rows) {
  std::vector<double> dists;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < rows.rows(); ++j) dists.push_back((rows.row(i) - rows.row(j)).norm());
  }
  if (dists.empty()) return 1.0;
  std::sort(dists.begin(), dists.end());
  const std::size_t mid = dists.size() / 2;
  const double median = dists.size() % 2 ? dists[mid] : 0.5 * (dists[mid - 1] + dists[mid]);
  return median > 0 ? median : 1.0;
}

double ConsumptionModel::predict(double t, double d) const {
  const Eigen::Vector2d z = standardize(t, d);
  double total = 0;
  for (Eigen::Index i = 0; i < support.rows(); ++i) {
    total += alpha(i) * gaussian_kernel(z, support.row(i).transpose(), bandwidth);
  }
  return total;
}

ConsumptionModel fit_consumption(std::span<const FlightSample> samples,
                                 const ConsumptionOptions& options) {
  if (samples.size() < 2) throw Error("consumption fit needs at least 2 samples");
  if (!(options.ridge > 0) || !std::isfinite(options.ridge)) throw Error("ridge must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixX2d raw(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    raw.row(i) << s.t, s.d;
    y(i) = s.energy;
  }
  if (!raw.allFinite() || !y.allFinite()) throw Error("non-finite flight sample");

  ConsumptionModel model;
  model.ridge = options.ridge;
  model.mean = raw.colwise().mean().transpose();
  const Eigen::MatrixX2d centered = raw.rowwise() - model.mean.transpose();
  model.scale = (centered.colwise().squaredNorm() / static_cast<double>(n)).cwiseSqrt().transpose();
  for (int c = 0; c < 2; ++c) {
    if (!(model.scale(c) > 0)) model.scale(c) = 1.0;
  }
  model.support = centered.array().rowwise() / model.scale.transpose().array();
  model.bandwidth = options.bandwidth.value_or(median_pairwise_distance(model.support));
  if (!(model.bandwidth > 0) || !std::isfinite(model.bandwidth)) {
    throw Error("kernel bandwidth must be positive");
  }

  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(i, j) = gaussian_kernel(model.support.row(i).transpose(), model.support.row(j).transpose(),
                                   model.bandwidth);
    }
  }
  gram.diagonal().array() += options.ridge * static_cast<double>(n);
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error("kernel system is not positive definite");
  model.alpha = llt.solve(y);
  if (!model.alpha.allFinite()) throw Error("kernel system solve failed");
  return model;
}

double predict_energy(const CalibrationModel& cal, const ConsumptionModel& con, double t_sim,
                      double d_sim) {
  const Eigen::Vector2d real = cal.apply(t_sim, d_sim);
  return std::max(0.0, con.predict(real(0), real(1)));
}

std::vector<FeasibilityEntry> check_feasibility(const PlanReport& report, const FleetConfig& fleet,
                                                const EnergyModels& models, double safety_factor) {
  std::vector<FeasibilityEntry> out;
  for (std::size_t j = 0; j < report.per_uav_distance.size(); ++j) {
    FeasibilityEntry e;
    e.uav = static_cast<int>(j);
    e.distance = report.per_uav_distance[j];
    e.time = e.distance / fleet.cruise_speed;
    e.predicted = predict_energy(models.calibration, models.consumption, e.time, e.distance);
    e.budget = safety_factor * fleet.battery_capacity;
    e.feasible = e.predicted <= e.budget;
    out.push_back(e);
  }
  return out;
}

double SyntheticField::energy(double t_real, double d_real) const {
  return c_time * t_real + c_dist * d_real + c_mix * std::sqrt(std::max(0.0, t_real * d_real));
}

std::vector<SyntheticFlight> synthetic_flights(const SyntheticField& field, std::size_t count,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> time(0.05 * field.max_time, field.max_time);
  std::uniform_real_distribution<double> speed(field.min_speed, field.max_speed);
  std::normal_distribution<double> noise(0.0, field.noise);
  std::vector<SyntheticFlight> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SyntheticFlight f;
    f.pair.t_sim = time(rng);
    f.pair.d_sim = f.pair.t_sim * speed(rng);
    const Eigen::Vector2d real = field.distortion * Eigen::Vector3d(f.pair.t_sim, f.pair.d_sim, 1.0);
    f.pair.t_real = real(0);
    f.pair.d_real = real(1);
    f.energy = field.energy(real(0), real(1)) * (1.0 + noise(rng));
    out.push_back(f);
  }
  return out;
}

}  // namespace couav
