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

#ifndef COUAV_TESTS_SUPPORT_HPP_
#define COUAV_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "couav/model.hpp"

namespace couav::testing {

inline Instance random_instance(int n, int m, double w, std::uint64_t seed, double side = 400) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, side);
  Instance inst;
  inst.area = {side, side};
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    inst.targets.emplace_back(x, u(rng));
  }
  inst.fleet = {m, w, 1.0, 4.0, 1e6};
  inst.seed = seed;
  return inst;
}

inline std::vector<Point2d> random_points(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point2d> pts;
  for (int i = 0; i < n; ++i) {
    const double x = u(rng);
    pts.emplace_back(x, u(rng));
  }
  return pts;
}

}  // namespace couav::testing

#endif  // COUAV_TESTS_SUPPORT_HPP_
