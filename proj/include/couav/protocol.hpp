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

// Agent <-> monitor protocol: packet types and their newline-delimited JSON
// framing, task actions and step partitioning, the monitor's step barrier,
// the agent state machine, and exception detection.

#ifndef COUAV_PROTOCOL_HPP_
#define COUAV_PROTOCOL_HPP_

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "couav/geometry.hpp"

namespace couav {

enum class ActionKind { kTakeoff, kGoto, kLand, kReturnHome, kWait };

std::string_view to_string(ActionKind kind);
ActionKind action_kind_from_string(std::string_view name);

struct Action {
  ActionKind kind = ActionKind::kWait;
  int connection_id = 0;
  bool sync = false;
  std::optional<Point2d> relative_distance;
  std::optional<Point2d> absolute_destination;
  std::optional<double> duration;

  void validate() const;
  friend bool operator==(const Action&, const Action&) = default;
};

struct Step {
  int index = 0;
  std::vector<Action> actions;

  friend bool operator==(const Step&, const Step&) = default;
};

/// Cuts the task after every synchronised action.
std::vector<Step> partition_steps(std::span<const Action> task);

// Packet bodies, one per wire type.
struct ConnectRequest {  // 0
  friend bool operator==(const ConnectRequest&, const ConnectRequest&) = default;
};
struct ConnectResponse {  // 1
  int connection_id = 0;
  friend bool operator==(const ConnectResponse&, const ConnectResponse&) = default;
};
struct StatusReport {  // 2
  int connection_id = 0;
  double t = 0;
  Point2d position = Point2d::Zero();
  Point2d velocity = Point2d::Zero();
  double battery = 1;  // remaining fraction
  int step = 0;
  friend bool operator==(const StatusReport&, const StatusReport&) = default;
};
struct GeoFence {  // 3
  Point2d center = Point2d::Zero();
  double radius = 1;
  friend bool operator==(const GeoFence&, const GeoFence&) = default;
};
struct ActionBatch {  // 4
  std::vector<Action> actions;
  bool high_priority = false;
  bool replace = false;  // supersedes every action not yet completed
  friend bool operator==(const ActionBatch&, const ActionBatch&) = default;
};
enum class SyncPhase { kDone, kRelease };
struct SyncSignal {  // 5
  SyncPhase phase = SyncPhase::kDone;
  int step = 0;
  friend bool operator==(const SyncSignal&, const SyncSignal&) = default;
};
struct CloseConnection {  // 6
  friend bool operator==(const CloseConnection&, const CloseConnection&) = default;
};

using Packet = std::variant<ConnectRequest, ConnectResponse, StatusReport, GeoFence, ActionBatch,
                            SyncSignal, CloseConnection>;

inline int packet_type(const Packet& p) { return static_cast<int>(p.index()); }

nlohmann::json action_to_json(const Action& action);
Action action_from_json(const nlohmann::json& j);

/// One JSON object followed by a single newline.
std::string encode(const Packet& packet);
/// Parses one framed line (trailing newline required, no other newline).
/// Errors name the offending field.
Packet decode(std::string_view line);

// Monitor-side step barrier.
class SyncBarrier {
 public:
  enum class Verdict { kRecorded, kDuplicate, kReleased, kStale, kFuture };
  struct Outcome {
    Verdict verdict = Verdict::kRecorded;
    std::vector<int> release_to;  // agents that must receive the release
    int step = 0;
  };

  /// Registers an agent after its handshake. Throws once any report has
  /// been received.
  void register_agent(int agent);
  Outcome on_sync(int agent, int step);

  int current_step() const { return step_; }
  const std::set<int>& agents() const { return agents_; }
  const std::set<int>& pending() const { return reported_; }

 private:
  std::set<int> agents_;
  std::set<int> reported_;
  int step_ = 0;
  bool started_ = false;
};

enum class AgentState {
  kDisconnected,
  kHandshaking,
  kIdle,
  kExecutingStep,
  kAwaitingRelease,
  kEmergency,
  kClosed
};

std::string_view to_string(AgentState state);

enum class ExceptionKind { kLowBattery, kGeoFenceBreach, kLinkUnhealthy };

std::string_view to_string(ExceptionKind kind);

namespace agent_event {
struct Connect {};
struct Receive {
  Packet packet;
};
struct ActionCompleted {};
struct StatusTick {
  StatusReport status;
};
struct ExceptionRaised {
  ExceptionKind kind;
};
}  // namespace agent_event

using AgentEvent = std::variant<agent_event::Connect, agent_event::Receive,
                                agent_event::ActionCompleted, agent_event::StatusTick,
                                agent_event::ExceptionRaised>;

struct AgentOutput {
  std::vector<Packet> packets;   // to the monitor
  std::vector<Action> commands;  // to the flight controller
};

class AgentMachine {
 public:
  AgentState state() const { return state_; }
  int connection_id() const { return connection_id_; }
  int current_step() const { return step_; }
  const std::string& reason() const { return reason_; }
  const std::optional<GeoFence>& fence() const { return fence_; }
  const std::vector<Step>& steps() const { return steps_; }

  AgentOutput step(const AgentEvent& event);

 private:
  AgentOutput on_packet(const Packet& packet);
  AgentOutput on_completed();
  AgentOutput begin_step(std::size_t index);
  void append_steps(std::vector<Step> extra);
  AgentOutput fail(std::string reason);
  bool connected() const;

  AgentState state_ = AgentState::kDisconnected;
  int connection_id_ = -1;
  std::vector<Step> steps_;
  int step_ = 0;
  std::size_t action_ = 0;
  std::optional<GeoFence> fence_;
  std::string reason_;
};

struct ExceptionThresholds {
  double battery_floor = 0.20;  // fraction
  double link_timeout = 5.0;    // seconds
};

struct AgentHealth {
  Point2d position = Point2d::Zero();
  double battery = 1;    // remaining fraction
  double link_age = 0;  // seconds since last contact
};

/// Conditions violated right now, in ExceptionKind order.
std::vector<ExceptionKind> exception_conditions(const AgentHealth& health,
                                                const std::optional<GeoFence>& fence,
                                                const ExceptionThresholds& thresholds = {});

/// Raises each exception once per continuous violation episode.
class ExceptionMonitor {
 public:
  explicit ExceptionMonitor(ExceptionThresholds thresholds = {}) : thresholds_(thresholds) {}
  std::vector<ExceptionKind> check(const AgentHealth& health, const std::optional<GeoFence>& fence);

 private:
  ExceptionThresholds thresholds_;
  std::array<bool, 3> active_{};
};

}  // namespace couav

#endif  // COUAV_PROTOCOL_HPP_
