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

// Two-step energy model: an affine calibration from simulated to real
// (time, distance), followed by Gaussian-kernel ridge regression from real
// (time, distance) to consumed energy.

#ifndef COUAV_ENERGY_HPP_
#define COUAV_ENERGY_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "couav/model.hpp"

namespace couav {

inline constexpr double kDefaultRidge = 1e-3;
inline constexpr double kDefaultSafetyFactor = 0.8;

struct CalibrationPair {
  double t_sim = 0;
  double d_sim = 0;
  double t_real = 0;
  double d_real = 0;
};

struct CalibrationModel {
  Eigen::Matrix<double, 2, 3> A = (Eigen::Matrix<double, 2, 3>() << 1, 0, 0, 0, 1, 0).finished();

  Eigen::Vector2d apply(double t_sim, double d_sim) const {
    return A * Eigen::Vector3d(t_sim, d_sim, 1.0);
  }
};

struct FlightSample {
  double t = 0;
  double d = 0;
  double energy = 0;
};

struct ConsumptionModel {
  Eigen::MatrixX2d support;  // standardised (t, d) rows
  Eigen::VectorXd alpha;
  double bandwidth = 1;
  double ridge = kDefaultRidge;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d scale = Eigen::Vector2d::Ones();

  Eigen::Vector2d standardize(double t, double d) const {
    return (Eigen::Vector2d(t, d) - mean).cwiseQuotient(scale);
  }
  /// Unclamped regression output.
  double predict(double t, double d) const;
};

struct ConsumptionOptions {
  double ridge = kDefaultRidge;
  std::optional<double> bandwidth;  // median pairwise distance when unset
};

struct EnergyModels {
  CalibrationModel calibration;
  ConsumptionModel consumption;
};

/// Least-squares affine map [t_sim, d_sim, 1] -> [t_real, d_real].
CalibrationModel fit_calibration(std::span<const CalibrationPair> pairs);

double gaussian_kernel(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double bandwidth);

/// Median of the pairwise distances between rows; 1 when all rows coincide.
double median_pairwise_distance(const Eigen::MatrixX2d& rows);

ConsumptionModel fit_consumption(std::span<const FlightSample> samples,
                                 const ConsumptionOptions& options = {});

/// Predicted energy in joules, clamped at zero.
double predict_energy(const CalibrationModel& cal, const ConsumptionModel& con, double t_sim,
                      double d_sim);

struct FeasibilityEntry {
  int uav = 0;
  double distance = 0;
  double time = 0;
  double predicted = 0;
  double budget = 0;
  bool feasible = false;
};

/// Per-UAV feasibility of the distances in `report` flown at cruise speed.
std::vector<FeasibilityEntry> check_feasibility(const PlanReport& report, const FleetConfig& fleet,
                                                const EnergyModels& models,
                                                double safety_factor = kDefaultSafetyFactor);

/// Synthetic flight log used for benchmarking the model: simulated
/// (time, distance) pairs, their real counterparts under a fixed affine
/// distortion, and energy from c_time*t + c_dist*d + c_mix*sqrt(t*d) with
/// multiplicative Gaussian noise.
struct SyntheticField {
  double c_time = 268.0;  // J/s
  double c_dist = 40.0;   // J/m
  double c_mix = 60.0;    // J/sqrt(s*m)
  double noise = 0.02;
  double max_time = 600.0;
  double min_speed = 1.0;
  double max_speed = 1.75;
  Eigen::Matrix<double, 2, 3> distortion =
      (Eigen::Matrix<double, 2, 3>() << 1.04, 0.0, 3.0, 0.0, 0.97, 1.5).finished();

  double energy(double t_real, double d_real) const;
};

struct SyntheticFlight {
  CalibrationPair pair;
  double energy = 0;  // noisy "measured" energy at the real (t, d)
};

std::vector<SyntheticFlight> synthetic_flights(const SyntheticField& field, std::size_t count,
                                               std::uint64_t seed);

}  // namespace couav

#endif  // COUAV_ENERGY_HPP_
