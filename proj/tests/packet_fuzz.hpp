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

// Random packet generation for codec round-trip fuzzing.

#ifndef COUAV_TESTS_PACKET_FUZZ_HPP_
#define COUAV_TESTS_PACKET_FUZZ_HPP_

#include <cstdint>
#include <random>
#include <string>

#include "couav/protocol.hpp"

namespace couav::testing {

inline Action random_action(std::mt19937_64& rng, int connection_id) {
  std::uniform_int_distribution<int> kind(0, 4), coin(0, 1);
  std::uniform_real_distribution<double> coord(-1e4, 1e4), dur(0, 1e3);
  Action a;
  a.kind = static_cast<ActionKind>(kind(rng));
  a.connection_id = connection_id;
  a.sync = coin(rng);
  if (a.kind == ActionKind::kGoto) {
    if (coin(rng)) {
      a.absolute_destination = Point2d(coord(rng), coord(rng));
    } else {
      a.relative_distance = Point2d(coord(rng), coord(rng));
    }
  }
  if (a.kind == ActionKind::kWait || coin(rng)) a.duration = dur(rng);
  return a;
}

inline Packet random_packet(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> type(0, 6), id(0, 1000), coin(0, 1), count(0, 6);
  std::uniform_real_distribution<double> coord(-1e6, 1e6), unit(0, 1), tiny(-1e-300, 1e-300);
  auto pt = [&] { return Point2d(coin(rng) ? coord(rng) : tiny(rng), coord(rng)); };
  switch (type(rng)) {
    case 0: return ConnectRequest{};
    case 1: return ConnectResponse{id(rng)};
    case 2: return StatusReport{id(rng), unit(rng) * 1e5, pt(), pt(), unit(rng), id(rng)};
    case 3: return GeoFence{pt(), 1e-3 + unit(rng) * 1e4};
    case 4: {
      ActionBatch b;
      const int c = id(rng);
      for (int i = count(rng); i > 0; --i) b.actions.push_back(random_action(rng, c));
      b.high_priority = coin(rng);
      b.replace = coin(rng);
      return b;
    }
    case 5: return SyncSignal{coin(rng) ? SyncPhase::kDone : SyncPhase::kRelease, id(rng)};
    default: return CloseConnection{};
  }
}

/// Empty when the packet survives encode/decode unchanged.
inline std::string round_trip_failure(const Packet& p) {
  const std::string line = encode(p);
  if (line.empty() || line.back() != '\n' || line.find('\n') != line.size() - 1) {
    return "bad framing: " + line;
  }
  try {
    if (!(decode(line) == p)) return "decoded packet differs: " + line;
  } catch (const std::exception& e) {
    return std::string("decode threw: ") + e.what() + " for " + line;
  }
  return "";
}

}  // namespace couav::testing

#endif  // COUAV_TESTS_PACKET_FUZZ_HPP_
