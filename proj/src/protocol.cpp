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

#include "couav/protocol.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace couav {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error("packet field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path + key, "missing");
  return *it;
}

void only_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (std::string_view k : keys) known = known || key == k;
    if (!known) field_error(path + key, "unexpected field");
  }
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number()) field_error(path + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(path + key, "not finite");
  return x;
}

int integer(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_integer()) field_error(path + key, "expected an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    field_error(path + key, "out of range");
  }
  return static_cast<int>(x);
}

bool boolean(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_boolean()) field_error(path + key, "expected a boolean");
  return v.get<bool>();
}

Point2d point(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    field_error(path + key, "expected [x, y]");
  }
  const Point2d p(v[0].get<double>(), v[1].get<double>());
  if (!is_finite<double>(p)) field_error(path + key, "not finite");
  return p;
}

json point_json(const Point2d& p) { return json::array({p.x(), p.y()}); }

const json& object(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_object()) field_error(path + key, "expected an object");
  return v;
}

Action parse_action(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  only_keys(j, {"kind", "connection_id", "sync", "relative_distance", "absolute_destination", "duration"},
            path + ".");
  Action a;
  const json& kind = require(j, "kind", path + ".");
  if (!kind.is_string()) field_error(path + ".kind", "expected a string");
  try {
    a.kind = action_kind_from_string(kind.get<std::string>());
  } catch (const Error&) {
    field_error(path + ".kind", "unknown action '" + kind.get<std::string>() + "'");
  }
  a.connection_id = integer(j, "connection_id", path + ".");
  a.sync = boolean(j, "sync", path + ".");
  if (j.contains("relative_distance")) a.relative_distance = point(j, "relative_distance", path + ".");
  if (j.contains("absolute_destination")) {
    a.absolute_destination = point(j, "absolute_destination", path + ".");
  }
  if (j.contains("duration")) a.duration = number(j, "duration", path + ".");
  try {
    a.validate();
  } catch (const Error& e) {
    field_error(path, e.what());
  }
  return a;
}

json body_json(const Packet& packet) {
  return std::visit(
      [](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConnectRequest> || std::is_same_v<T, CloseConnection>) {
          return json::object();
        } else if constexpr (std::is_same_v<T, ConnectResponse>) {
          return {{"connection_id", b.connection_id}};
        } else if constexpr (std::is_same_v<T, StatusReport>) {
          return {{"connection_id", b.connection_id}, {"t", b.t},
                  {"position", point_json(b.position)}, {"velocity", point_json(b.velocity)},
                  {"battery", b.battery}, {"step", b.step}};
        } else if constexpr (std::is_same_v<T, GeoFence>) {
          return {{"center", point_json(b.center)}, {"radius", b.radius}};
        } else if constexpr (std::is_same_v<T, ActionBatch>) {
          json actions = json::array();
          for (const Action& a : b.actions) actions.push_back(action_to_json(a));
          return {{"actions", actions}, {"high_priority", b.high_priority}, {"replace", b.replace}};
        } else {
          return {{"phase", b.phase == SyncPhase::kDone ? "done" : "release"}, {"step", b.step}};
        }
      },
      packet);
}

Packet parse_body(int type, const json& body) {
  const std::string p = "body.";
  switch (type) {
    case 0:
      only_keys(body, {}, p);
      return ConnectRequest{};
    case 1:
      only_keys(body, {"connection_id"}, p);
      return ConnectResponse{integer(body, "connection_id", p)};
    case 2: {
      only_keys(body, {"connection_id", "t", "position", "velocity", "battery", "step"}, p);
      StatusReport s;
      s.connection_id = integer(body, "connection_id", p);
      s.t = number(body, "t", p);
      s.position = point(body, "position", p);
      s.velocity = point(body, "velocity", p);
      s.battery = number(body, "battery", p);
      s.step = integer(body, "step", p);
      return s;
    }
    case 3: {
      only_keys(body, {"center", "radius"}, p);
      GeoFence f{point(body, "center", p), number(body, "radius", p)};
      if (!(f.radius > 0)) field_error("body.radius", "must be positive");
      return f;
    }
    case 4: {
      only_keys(body, {"actions", "high_priority", "replace"}, p);
      ActionBatch batch;
      const json& actions = require(body, "actions", p);
      if (!actions.is_array()) field_error("body.actions", "expected an array");
      for (std::size_t i = 0; i < actions.size(); ++i) {
        batch.actions.push_back(parse_action(actions[i], "body.actions[" + std::to_string(i) + "]"));
      }
      batch.high_priority = boolean(body, "high_priority", p);
      batch.replace = boolean(body, "replace", p);
      return batch;
    }
    case 5: {
      only_keys(body, {"phase", "step"}, p);
      const json& phase = require(body, "phase", p);
      SyncSignal s;
      if (phase == "done") {
        s.phase = SyncPhase::kDone;
      } else if (phase == "release") {
        s.phase = SyncPhase::kRelease;
      } else {
        field_error("body.phase", "expected \"done\" or \"release\"");
      }
      s.step = integer(body, "step", p);
      if (s.step < 0) field_error("body.step", "must be non-negative");
      return s;
    }
    case 6:
      only_keys(body, {}, p);
      return CloseConnection{};
    default:
      field_error("type", "unknown packet type " + std::to_string(type));
  }
}

}  // namespace

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::kTakeoff: return "takeoff";
    case ActionKind::kGoto: return "goto";
    case ActionKind::kLand: return "land";
    case ActionKind::kReturnHome: return "return_home";
    case ActionKind::kWait: return "wait";
  }
  return "?";
}

ActionKind action_kind_from_string(std::string_view name) {
  for (ActionKind k : {ActionKind::kTakeoff, ActionKind::kGoto, ActionKind::kLand,
                       ActionKind::kReturnHome, ActionKind::kWait}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown action kind '" + std::string(name) + "'");
}

void Action::validate() const {
  if (connection_id < 0) throw Error("connection_id must be non-negative");
  if (kind == ActionKind::kGoto && relative_distance.has_value() == absolute_destination.has_value()) {
    throw Error("goto needs exactly one of relative_distance and absolute_destination");
  }
  if (kind != ActionKind::kGoto && (relative_distance || absolute_destination)) {
    throw Error("only goto carries a destination");
  }
  if (kind == ActionKind::kWait && !duration) throw Error("wait needs a duration");
  if (duration && !(*duration >= 0)) throw Error("duration must be non-negative");
}

std::vector<Step> partition_steps(std::span<const Action> task) {
  std::vector<Step> steps;
  bool open = false;
  for (const Action& a : task) {
    a.validate();
    if (!open) {
      steps.push_back({static_cast<int>(steps.size()), {}});
      open = true;
    }
    steps.back().actions.push_back(a);
    if (a.sync) open = false;
  }
  return steps;
}

json action_to_json(const Action& a) {
  json j{{"kind", to_string(a.kind)}, {"connection_id", a.connection_id}, {"sync", a.sync}};
  if (a.relative_distance) j["relative_distance"] = point_json(*a.relative_distance);
  if (a.absolute_destination) j["absolute_destination"] = point_json(*a.absolute_destination);
  if (a.duration) j["duration"] = *a.duration;
  return j;
}

Action action_from_json(const json& j) { return parse_action(j, "action"); }

std::string encode(const Packet& packet) {
  const json j{{"type", packet_type(packet)}, {"body", body_json(packet)}};
  return j.dump() + "\n";
}

Packet decode(std::string_view line) {
  if (line.empty() || line.back() != '\n') throw Error("packet line must end with a newline");
  line.remove_suffix(1);
  if (line.find('\n') != std::string_view::npos) throw Error("packet line contains a newline");
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed packet JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("packet must be a JSON object");
  only_keys(j, {"type", "body"}, "");
  const int type = integer(j, "type", "");
  return parse_body(type, object(j, "body", ""));
}

void SyncBarrier::register_agent(int agent) {
  if (started_) throw Error("late join rejected for agent " + std::to_string(agent));
  agents_.insert(agent);
}

SyncBarrier::Outcome SyncBarrier::on_sync(int agent, int step) {
  if (!agents_.contains(agent)) throw Error("sync from unknown agent " + std::to_string(agent));
  started_ = true;
  Outcome out;
  out.step = step;
  if (step < step_) {
    out.verdict = Verdict::kStale;
    return out;
  }
  if (step > step_) {
    out.verdict = Verdict::kFuture;
    return out;
  }
  if (!reported_.insert(agent).second) {
    out.verdict = Verdict::kDuplicate;
    return out;
  }
  if (reported_ == agents_) {
    out.verdict = Verdict::kReleased;
    out.release_to.assign(agents_.begin(), agents_.end());
    reported_.clear();
    ++step_;
    return out;
  }
  out.verdict = Verdict::kRecorded;
  return out;
}

std::string_view to_string(AgentState state) {
  switch (state) {
    case AgentState::kDisconnected: return "disconnected";
    case AgentState::kHandshaking: return "handshaking";
    case AgentState::kIdle: return "idle";
    case AgentState::kExecutingStep: return "executing_step";
    case AgentState::kAwaitingRelease: return "awaiting_release";
    case AgentState::kEmergency: return "emergency";
    case AgentState::kClosed: return "closed";
  }
  return "?";
}

std::string_view to_string(ExceptionKind kind) {
  switch (kind) {
    case ExceptionKind::kLowBattery: return "low_battery";
    case ExceptionKind::kGeoFenceBreach: return "geofence_breach";
    case ExceptionKind::kLinkUnhealthy: return "link_unhealthy";
  }
  return "?";
}

bool AgentMachine::connected() const {
  return state_ == AgentState::kIdle || state_ == AgentState::kExecutingStep ||
         state_ == AgentState::kAwaitingRelease || state_ == AgentState::kEmergency;
}

AgentOutput AgentMachine::fail(std::string reason) {
  state_ = AgentState::kEmergency;
  reason_ = std::move(reason);
  return {};
}

void AgentMachine::append_steps(std::vector<Step> extra) {
  for (Step& s : extra) {
    s.index = static_cast<int>(steps_.size());
    steps_.push_back(std::move(s));
  }
}

AgentOutput AgentMachine::begin_step(std::size_t index) {
  if (index >= steps_.size()) {
    state_ = AgentState::kIdle;
    step_ = static_cast<int>(steps_.size());
    return {};
  }
  state_ = AgentState::kExecutingStep;
  step_ = static_cast<int>(index);
  action_ = 0;
  return {{}, {steps_[index].actions.front()}};
}

AgentOutput AgentMachine::step(const AgentEvent& event) {
  if (state_ == AgentState::kClosed) return {};
  return std::visit(
      [&](const auto& ev) -> AgentOutput {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, agent_event::Connect>) {
          if (state_ != AgentState::kDisconnected) {
            return fail("connect while " + std::string(to_string(state_)));
          }
          state_ = AgentState::kHandshaking;
          return {{ConnectRequest{}}, {}};
        } else if constexpr (std::is_same_v<T, agent_event::Receive>) {
          return on_packet(ev.packet);
        } else if constexpr (std::is_same_v<T, agent_event::ActionCompleted>) {
          return on_completed();
        } else if constexpr (std::is_same_v<T, agent_event::StatusTick>) {
          if (!connected()) return {};
          StatusReport report = ev.status;
          report.connection_id = connection_id_;
          report.step = step_;
          return {{report}, {}};
        } else {
          state_ = AgentState::kEmergency;
          reason_ = "exception: " + std::string(to_string(ev.kind));
          return {};
        }
      },
      event);
}

AgentOutput AgentMachine::on_packet(const Packet& packet) {
  const std::string type = std::to_string(packet_type(packet));
  switch (state_) {
    case AgentState::kDisconnected:
      return fail("packet type " + type + " while disconnected");
    case AgentState::kHandshaking:
      if (const auto* r = std::get_if<ConnectResponse>(&packet)) {
        connection_id_ = r->connection_id;
        state_ = AgentState::kIdle;
        return {};
      }
      if (std::holds_alternative<CloseConnection>(packet)) {
        state_ = AgentState::kClosed;
        return {};
      }
      return fail("packet type " + type + " during handshake");
    case AgentState::kEmergency:
      if (std::holds_alternative<CloseConnection>(packet)) {
        state_ = AgentState::kClosed;
      } else if (const auto* f = std::get_if<GeoFence>(&packet)) {
        fence_ = *f;
      } else if (const auto* b = std::get_if<ActionBatch>(&packet); b && b->high_priority) {
        return {{}, b->actions};
      }
      return {};
    default:
      break;
  }

  if (std::holds_alternative<CloseConnection>(packet)) {
    state_ = AgentState::kClosed;
    return {};
  }
  if (const auto* f = std::get_if<GeoFence>(&packet)) {
    fence_ = *f;
    return {};
  }
  if (const auto* b = std::get_if<ActionBatch>(&packet)) {
    for (const Action& a : b->actions) {
      if (a.connection_id != connection_id_) {
        return fail("action addressed to connection " + std::to_string(a.connection_id));
      }
    }
    if (b->high_priority) {
      state_ = AgentState::kEmergency;
      reason_ = "high-priority command";
      return {{}, b->actions};
    }
    std::vector<Step> extra = partition_steps(b->actions);
    if (b->replace && state_ == AgentState::kExecutingStep) {
      // The in-flight action and the rest of the task give way to the batch;
      // its first step continues the current one.
      Step& current = steps_[static_cast<std::size_t>(step_)];
      steps_.resize(static_cast<std::size_t>(step_) + 1);
      current.actions.resize(action_);
      if (!extra.empty()) {
        current.actions.insert(current.actions.end(), extra.front().actions.begin(),
                               extra.front().actions.end());
        extra.erase(extra.begin());
      }
      append_steps(std::move(extra));
      if (action_ < current.actions.size()) return {{}, {current.actions[action_]}};
      return begin_step(static_cast<std::size_t>(step_) + 1);
    }
    const bool was_idle = state_ == AgentState::kIdle;
    if (b->replace) steps_.resize(static_cast<std::size_t>(step_) + (was_idle ? 0 : 1));
    const std::size_t first = steps_.size();
    append_steps(std::move(extra));
    if (was_idle && first < steps_.size()) return begin_step(first);
    return {};
  }
  if (const auto* s = std::get_if<SyncSignal>(&packet)) {
    if (s->phase == SyncPhase::kRelease) {
      if (s->step < step_) return {};
      if (state_ == AgentState::kAwaitingRelease && s->step == step_) {
        return begin_step(static_cast<std::size_t>(step_) + 1);
      }
    }
    return fail("unexpected sync signal for step " + std::to_string(s->step) + " while " +
                std::string(to_string(state_)));
  }
  return fail("unexpected packet type " + type);
}

AgentOutput AgentMachine::on_completed() {
  if (state_ == AgentState::kEmergency) return {};
  if (state_ != AgentState::kExecutingStep) {
    return fail("action completed while " + std::string(to_string(state_)));
  }
  const Step& current = steps_[static_cast<std::size_t>(step_)];
  if (current.actions[action_].sync) {
    state_ = AgentState::kAwaitingRelease;
    return {{SyncSignal{SyncPhase::kDone, step_}}, {}};
  }
  if (++action_ < current.actions.size()) return {{}, {current.actions[action_]}};
  return begin_step(static_cast<std::size_t>(step_) + 1);
}

std::vector<ExceptionKind> exception_conditions(const AgentHealth& health,
                                                const std::optional<GeoFence>& fence,
                                                const ExceptionThresholds& thresholds) {
  std::vector<ExceptionKind> out;
  if (health.battery < thresholds.battery_floor) out.push_back(ExceptionKind::kLowBattery);
  if (fence && (health.position - fence->center).norm() > fence->radius) {
    out.push_back(ExceptionKind::kGeoFenceBreach);
  }
  if (health.link_age > thresholds.link_timeout) out.push_back(ExceptionKind::kLinkUnhealthy);
  return out;
}

std::vector<ExceptionKind> ExceptionMonitor::check(const AgentHealth& health,
                                                   const std::optional<GeoFence>& fence) {
  const std::vector<ExceptionKind> now = exception_conditions(health, fence, thresholds_);
  std::vector<ExceptionKind> raised;
  for (std::size_t k = 0; k < active_.size(); ++k) {
    const auto kind = static_cast<ExceptionKind>(k);
    const bool violated = std::find(now.begin(), now.end(), kind) != now.end();
    if (violated && !active_[k]) raised.push_back(kind);
    active_[k] = violated;
  }
  return raised;
}

}  // namespace couav
