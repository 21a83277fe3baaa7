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

#include "couav/simulator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "couav/error.hpp"
#include "couav/protocol.hpp"

namespace couav {

namespace {

constexpr double kWindFilter = 0.2;  // gain of the ground-speed wind estimate

using ojson = nlohmann::ordered_json;

ojson point_json(const Point2d& p) { return ojson::array({p.x(), p.y()}); }

struct Body {
  Point2d pos = Point2d::Zero();
  Point2d home = Point2d::Zero();
  Point2d hold = Point2d::Zero();
  Point2d velocity = Point2d::Zero();
  Point2d wind_estimate = Point2d::Zero();
  double distance = 0;
  double flight_time = 0;
  bool airborne = false;
  std::optional<Action> command;
  double command_start = 0;
  Point2d command_origin = Point2d::Zero();
  bool hold_next = false;
  bool held_last = false;
};

struct Leg {
  Point2d from = Point2d::Zero();
  Point2d to = Point2d::Zero();
  double duration = 0;
};

class Mission {
 public:
  Mission(const Instance& instance, const Waypoints& waypoints,
          const std::optional<EnergyModels>& models, const SimConfig& config,
          const PlannerOptions& planner)
      : instance_(instance),
        models_(models),
        cfg_(config),
        planner_(planner),
        m_(instance.fleet.m),
        rng_(config.seed),
        bodies_(static_cast<std::size_t>(m_)),
        agents_(static_cast<std::size_t>(m_)),
        legs_(static_cast<std::size_t>(m_)),
        tasks_(static_cast<std::size_t>(m_)),
        done_step_(static_cast<std::size_t>(m_), -1),
        correcting_(static_cast<std::size_t>(m_), -1),
        last_contact_(static_cast<std::size_t>(m_), 0.0),
        last_report_(static_cast<std::size_t>(m_)),
        exceptions_(static_cast<std::size_t>(m_)) {
    for (int j = 0; j < m_; ++j) {
      Body& b = bodies_[j];
      b.pos = b.home = b.hold = waypoints[j].front();
      last_report_[j].position = b.pos;
    }
    trace_.dt = cfg_.dt;
    trace_.paths.assign(static_cast<std::size_t>(m_), {});
    trace_.status.assign(static_cast<std::size_t>(m_), {});
    const Point2d center(instance.area.width / 2, instance.area.height / 2);
    fence_ = GeoFence{center, std::hypot(instance.area.width, instance.area.height) / 2 +
                                  (m_ - 1) * instance.fleet.w + 10.0};
    std::vector<std::vector<Action>> task = build_task(waypoints, 0, true);
    double planned = 0;
    for (const Leg& leg : legs_.front()) planned += leg.duration;
    max_time_ = cfg_.max_time > 0 ? cfg_.max_time : 10 * planned + 600;
    initial_task_ = std::move(task);
  }

  MissionTrace run() {
    handshake();
    record_state();
    const long status_every = std::max(1L, std::lround(cfg_.status_period / cfg_.dt));
    long tick = 0;
    while (!finished()) {
      ++tick;
      now_ = tick * cfg_.dt;
      if (now_ > max_time_ + 1e-9) break;
      apply_offsets();
      move_bodies();
      complete_actions();
      if (tick % status_every == 0) report_status();
      process_inbox();
      check_exceptions();
      deliver();
      watch_collisions();
      record_state();
    }
    finish();
    return std::move(trace_);
  }

 private:
  // Task construction ------------------------------------------------------

  Action make(ActionKind kind, int j, bool sync) const {
    Action a;
    a.kind = kind;
    a.connection_id = j;
    a.sync = sync;
    return a;
  }

  /// One synchronised goto per keyframe, then a landing. Legs are recorded
  /// from step `first_step` on.
  std::vector<std::vector<Action>> build_task(const Waypoints& wp, int first_step,
                                              bool takeoff) {
    std::vector<std::vector<Action>> task(static_cast<std::size_t>(m_));
    int step = first_step;
    auto hold_leg = [&](int j, std::size_t k) {
      legs_[j].resize(static_cast<std::size_t>(step));
      legs_[j].push_back({wp[j][k], wp[j][k], 0.0});
    };
    if (takeoff) {
      for (int j = 0; j < m_; ++j) {
        task[j].push_back(make(ActionKind::kTakeoff, j, true));
        hold_leg(j, 0);
      }
      ++step;
    }
    std::size_t frames = 0;
    for (const auto& path : wp) frames = std::max(frames, path.size());
    auto at = [&](int j, std::size_t k) { return wp[j][std::min(k, wp[j].size() - 1)]; };
    for (std::size_t k = 1; k < frames; ++k) {
      double longest = 0;
      for (int j = 0; j < m_; ++j) longest = std::max(longest, (at(j, k) - at(j, k - 1)).norm());
      if (longest <= 1e-9) continue;
      const double duration = longest / instance_.fleet.cruise_speed;
      for (int j = 0; j < m_; ++j) {
        Action a = make(ActionKind::kGoto, j, true);
        a.absolute_destination = at(j, k);
        a.duration = duration;
        task[j].push_back(a);
        legs_[j].resize(static_cast<std::size_t>(step));
        legs_[j].push_back({at(j, k - 1), at(j, k), duration});
      }
      ++step;
    }
    for (int j = 0; j < m_; ++j) {
      task[j].push_back(make(ActionKind::kLand, j, true));
      legs_[j].resize(static_cast<std::size_t>(step));
      legs_[j].push_back({at(j, frames - 1), at(j, frames - 1), 0.0});
    }
    for (int j = 0; j < m_; ++j) {
      std::vector<Step> steps = partition_steps(task[j]);
      tasks_[j].resize(static_cast<std::size_t>(first_step));
      for (Step& s : steps) {
        s.index = static_cast<int>(tasks_[j].size());
        tasks_[j].push_back(std::move(s));
      }
    }
    return task;
  }

  // Transport ----------------------------------------------------------------

  void log_packet(const char* dir, int j, const std::string& line) {
    const auto parsed = nlohmann::json::parse(line);
    ojson rec;
    rec["t"] = now_;
    rec["kind"] = "packet";
    rec["dir"] = dir;
    rec["uav"] = j;
    rec["type"] = parsed.at("type");
    rec["body"] = parsed.at("body");
    trace_.records.push_back(std::move(rec));
  }

  void send_up(int j, const std::vector<Packet>& packets) {
    for (const Packet& p : packets) {
      std::string line = encode(p);
      log_packet("up", j, line);
      inbox_.emplace_back(j, std::move(line));
    }
  }

  void send_down(int j, const Packet& p) {
    std::string line = encode(p);
    log_packet("down", j, line);
    outbox_.emplace_back(j, std::move(line));
  }

  void apply_output(int j, const AgentOutput& out) {
    send_up(j, out.packets);
    for (const Action& a : out.commands) start_command(j, a);
  }

  void deliver() {
    while (!outbox_.empty()) {
      std::vector<std::pair<int, std::string>> batch;
      batch.swap(outbox_);
      for (auto& [j, line] : batch) {
        apply_output(j, agents_[j].step(agent_event::Receive{decode(line)}));
      }
      process_inbox();
    }
  }

  void handshake() {
    for (int j = 0; j < m_; ++j) apply_output(j, agents_[j].step(agent_event::Connect{}));
    process_inbox();
    deliver();
    for (int j = 0; j < m_; ++j) {
      send_down(j, fence_);
      send_down(j, ActionBatch{initial_task_[j], false, false});
    }
    deliver();
  }

  // Monitor ------------------------------------------------------------------

  void event(ojson rec, const std::string& kind) {
    ojson full;
    full["t"] = now_;
    full["kind"] = kind;
    for (auto& [k, v] : rec.items()) full[k] = v;
    trace_.records.push_back(std::move(full));
    ++trace_.events[kind];
  }

  void process_inbox() {
    while (!inbox_.empty()) {
      std::vector<std::pair<int, std::string>> batch;
      batch.swap(inbox_);
      for (auto& [j, line] : batch) on_packet(j, decode(line));
    }
  }

  void on_packet(int j, const Packet& p) {
    last_contact_[j] = now_;
    if (std::holds_alternative<ConnectRequest>(p)) {
      barrier_.register_agent(j);
      send_down(j, ConnectResponse{j});
    } else if (const auto* s = std::get_if<StatusReport>(&p)) {
      last_report_[j].position = s->position;
      last_report_[j].battery = s->battery;
      check_divergence(j, *s);
    } else if (const auto* sync = std::get_if<SyncSignal>(&p)) {
      done_step_[j] = std::max(done_step_[j], sync->step);
      const SyncBarrier::Outcome out = barrier_.on_sync(j, sync->step);
      if (out.verdict == SyncBarrier::Verdict::kReleased) release(out);
    }
  }

  void release(const SyncBarrier::Outcome& out) {
    if (replan_pending_) do_replan(out.step);
    ojson rec;
    rec["step"] = out.step;
    event(std::move(rec), "sync");
    step_start_[out.step + 1] = now_;
    for (int j : out.release_to) send_down(j, SyncSignal{SyncPhase::kRelease, out.step});
  }

  std::vector<Action> rest_of_task(int j, int step) const {
    std::vector<Action> rest;
    for (std::size_t s = static_cast<std::size_t>(step) + 1; s < tasks_[j].size(); ++s) {
      rest.insert(rest.end(), tasks_[j][s].actions.begin(), tasks_[j][s].actions.end());
    }
    return rest;
  }

  void check_divergence(int j, const StatusReport& s) {
    if (correcting_[j] >= 0 && done_step_[j] >= correcting_[j]) correcting_[j] = -1;
    if (s.step < 0 || static_cast<std::size_t>(s.step) >= legs_[j].size()) return;
    if (agents_[j].state() == AgentState::kEmergency) return;
    const Leg& leg = legs_[j][s.step];
    const double dev = segment_deviation(s.position, leg.from, leg.to);
    if (dev > cfg_.div_replan) {
      if (replan_pending_) return;
      replan_pending_ = true;
      ojson rec;
      rec["uav"] = j;
      rec["deviation"] = dev;
      rec["action"] = "replan";
      event(std::move(rec), "divergence");
      return;
    }
    const bool moving = (leg.to - leg.from).norm() > 0 && done_step_[j] < s.step;
    if (dev <= cfg_.div_correct || replan_pending_ || correcting_[j] >= 0 || !moving) return;
    const Point2d dir = leg.to - leg.from;
    double along = std::clamp((s.position - leg.from).dot(dir) / dir.squaredNorm(), 0.0, 1.0);
    if (leg.duration > 0) {
      along = std::max(along, std::clamp((now_ - step_start_[s.step]) / leg.duration, 0.0, 1.0));
    }
    const Point2d back = leg.from + along * dir;
    Action detour = make(ActionKind::kGoto, j, false);
    detour.absolute_destination = back;
    Action resume = make(ActionKind::kGoto, j, true);
    resume.absolute_destination = leg.to;
    resume.duration = std::max(cfg_.dt, step_start_[s.step] + leg.duration - now_);
    std::vector<Action> batch{detour, resume};
    const std::vector<Action> rest = rest_of_task(j, s.step);
    batch.insert(batch.end(), rest.begin(), rest.end());
    tasks_[j][s.step].actions = {detour, resume};
    correcting_[j] = s.step;
    ojson rec;
    rec["uav"] = j;
    rec["deviation"] = dev;
    rec["action"] = "correct";
    rec["target"] = point_json(back);
    event(std::move(rec), "divergence");
    send_down(j, ActionBatch{std::move(batch), false, true});
  }

  std::set<std::size_t> covered_so_far() const {
    std::vector<Trajectory> trajs;
    for (int j = 0; j < m_; ++j) trajs.push_back({j, trace_.paths[j]});
    const std::vector<std::size_t> missing =
        check_coverage(trajs, instance_.targets, cfg_.coverage_eps);
    std::set<std::size_t> visited;
    for (std::size_t i = 0; i < instance_.targets.size(); ++i) visited.insert(i);
    for (std::size_t i : missing) visited.erase(i);
    return visited;
  }

  void do_replan(int step) {
    replan_pending_ = false;
    const std::set<std::size_t> visited = covered_so_far();
    ojson rec;
    rec["step"] = step;
    rec["unvisited"] = instance_.targets.size() - visited.size();
    if (visited.size() == instance_.targets.size()) {
      rec["outcome"] = "nothing_left";
      event(std::move(rec), "replan");
      return;
    }
    std::vector<Point2d> positions;
    for (int j = 0; j < m_; ++j) positions.push_back(legs_[j][step].to);
    Plan plan;
    try {
      plan = replan(instance_, visited, positions, planner_);
    } catch (const Error& e) {
      rec["outcome"] = std::string("failed: ") + e.what();
      event(std::move(rec), "replan");
      return;
    }
    const bool landed = static_cast<std::size_t>(step) + 1 >= tasks_.front().size();
    std::vector<std::vector<Action>> task = build_task(plan.waypoints, step + 1, landed);
    rec["outcome"] = "replaced";
    rec["fleet_cost"] = plan.report.fleet_cost;
    event(std::move(rec), "replan");
    for (int j = 0; j < m_; ++j) {
      correcting_[j] = -1;
      send_down(j, ActionBatch{std::move(task[j]), false, true});
    }
  }

  void check_exceptions() {
    for (int j = 0; j < m_; ++j) {
      if (agents_[j].state() == AgentState::kClosed) continue;
      AgentHealth health = last_report_[j];
      health.link_age = now_ - last_contact_[j];
      for (ExceptionKind kind : exceptions_[j].check(health, fence_)) {
        ojson rec;
        rec["uav"] = j;
        rec["exception"] = std::string(to_string(kind));
        event(std::move(rec), "exception");
        if (kind == ExceptionKind::kLinkUnhealthy) continue;
        send_down(j, ActionBatch{{make(ActionKind::kReturnHome, j, false)}, true, false});
      }
    }
  }

  // Flight ---------------------------------------------------------------------

  void start_command(int j, const Action& a) {
    Body& b = bodies_[j];
    b.command = a;
    b.command_start = now_;
    b.command_origin = b.pos;
    b.hold = b.pos;
  }

  std::optional<Point2d> destination(const Body& b) const {
    if (!b.command) return std::nullopt;
    switch (b.command->kind) {
      case ActionKind::kGoto:
        if (b.command->absolute_destination) return *b.command->absolute_destination;
        return b.command_origin + *b.command->relative_distance;
      case ActionKind::kReturnHome:
        return b.home;
      default:
        return std::nullopt;
    }
  }

  Point2d wind_at(double t) {
    Point2d wind(cfg_.wind_sigma * normal_(rng_), cfg_.wind_sigma * normal_(rng_));
    if (cfg_.gust && t > cfg_.gust->start && t <= cfg_.gust->end) wind += cfg_.gust->velocity;
    return wind;
  }

  void apply_offsets() {
    for (const PositionOffset& o : cfg_.offsets) {
      if (o.uav < 0 || o.uav >= m_) continue;
      if (o.t > now_ - cfg_.dt + 1e-9 && o.t <= now_ + 1e-9) {
        bodies_[o.uav].pos += o.delta;
        ojson rec;
        rec["uav"] = o.uav;
        rec["delta"] = point_json(o.delta);
        event(std::move(rec), "offset");
      }
    }
  }

  void move_bodies() {
    const double tick_start = now_ - cfg_.dt;
    for (int j = 0; j < m_; ++j) {
      Body& b = bodies_[j];
      const Point2d wind = wind_at(now_);
      if (!b.airborne) {
        b.velocity.setZero();
        continue;
      }
      const Point2d target = destination(b).value_or(b.hold);
      const Point2d gap = target - b.pos;
      const double remaining = gap.norm();
      double speed = std::min(instance_.fleet.cruise_speed, remaining / cfg_.dt);
      if (b.command && b.command->kind == ActionKind::kGoto && b.command->duration) {
        // Whole ticks left, so paced legs end exactly on a tick.
        const double left = b.command_start + *b.command->duration - tick_start;
        const double ticks = std::max(1.0, std::ceil(left / cfg_.dt - 1e-9));
        speed = std::min(speed, remaining / (ticks * cfg_.dt));
      }
      Point2d desired = remaining > 0 ? Point2d(gap / remaining * speed) : Point2d::Zero();
      if (b.hold_next) desired.setZero();
      b.held_last = b.hold_next;
      b.hold_next = false;
      const Point2d step = (desired - b.wind_estimate + wind) * cfg_.dt;
      b.wind_estimate += kWindFilter * (wind - b.wind_estimate);
      b.pos += step;
      b.distance += step.norm();
      b.flight_time += cfg_.dt;
      b.velocity = step / cfg_.dt;
    }
  }

  bool action_done(const Body& b) const {
    if (!b.command) return false;
    switch (b.command->kind) {
      case ActionKind::kTakeoff:
      case ActionKind::kLand:
        return true;
      case ActionKind::kWait:
        return now_ - b.command_start >= b.command->duration.value_or(0) - 1e-9;
      default:
        return (*destination(b) - b.pos).norm() <= cfg_.arrival_tolerance;
    }
  }

  void complete_actions() {
    for (int j = 0; j < m_; ++j) {
      Body& b = bodies_[j];
      if (!action_done(b)) continue;
      const ActionKind kind = b.command->kind;
      b.command.reset();
      b.hold = b.pos;
      if (kind == ActionKind::kTakeoff) b.airborne = true;
      if (kind == ActionKind::kLand || kind == ActionKind::kReturnHome) b.airborne = false;
      apply_output(j, agents_[j].step(agent_event::ActionCompleted{}));
    }
  }

  double predicted_energy(const Body& b) const {
    if (!models_) return 0;
    return predict_energy(models_->calibration, models_->consumption, b.flight_time, b.distance);
  }

  void report_status() {
    const double capacity = instance_.fleet.battery_capacity;
    for (int j = 0; j < m_; ++j) {
      const Body& b = bodies_[j];
      const Point2d noise(cfg_.gps_sigma * normal_(rng_), cfg_.gps_sigma * normal_(rng_));
      StatusReport s;
      s.t = now_;
      s.position = b.pos + noise;
      s.velocity = b.velocity;
      s.battery = capacity > 0 && models_
                      ? std::max(0.0, (capacity - predicted_energy(b)) / capacity)
                      : 1.0;
      const AgentOutput out = agents_[j].step(agent_event::StatusTick{s});
      if (out.packets.empty()) continue;
      trace_.status[j].push_back({now_, b.flight_time, b.distance, s.position, s.battery,
                                  agents_[j].current_step()});
      apply_output(j, out);
    }
  }

  void watch_collisions() {
    std::vector<Point2d> pos, vel;
    for (const Body& b : bodies_) {
      pos.push_back(b.pos);
      vel.push_back(b.velocity);
    }
    std::set<std::pair<int, int>> active;
    for (const CollisionWarning& w :
         collision_monitor(pos, vel, cfg_.collide_dist, cfg_.collide_horizon)) {
      if (!bodies_[w.first].airborne || !bodies_[w.second].airborne) continue;
      const std::pair<int, int> key{w.first, w.second};
      active.insert(key);
      if (!warned_.contains(key)) {
        ojson rec;
        rec["uavs"] = ojson::array({w.first, w.second});
        rec["distance"] = w.distance;
        rec["predicted_min"] = w.predicted_min;
        event(std::move(rec), "collision_warning");
      }
      Body& later = bodies_[w.second];
      if (w.closing && !later.held_last) later.hold_next = true;
    }
    warned_ = std::move(active);
  }

  void record_state() {
    ojson rec;
    rec["t"] = now_;
    rec["kind"] = "state";
    ojson pos = ojson::array();
    for (int j = 0; j < m_; ++j) {
      pos.push_back(point_json(bodies_[j].pos));
      trace_.paths[j].push_back(bodies_[j].pos);
    }
    rec["pos"] = std::move(pos);
    trace_.records.push_back(std::move(rec));
  }

  bool finished() const {
    bool all_done = true;
    bool all_down = true;
    for (int j = 0; j < m_; ++j) {
      const AgentMachine& a = agents_[j];
      const bool done = a.state() == AgentState::kIdle && !a.steps().empty() &&
                        static_cast<std::size_t>(a.current_step()) == a.steps().size();
      all_done = all_done && done && !bodies_[j].airborne;
      all_down = all_down && a.state() == AgentState::kEmergency && !bodies_[j].airborne &&
                 !bodies_[j].command;
    }
    return all_done || all_down;
  }

  void finish() {
    trace_.completed = finished() && agents_.front().state() == AgentState::kIdle;
    if (trace_.completed) {
      for (int j = 0; j < m_; ++j) send_down(j, CloseConnection{});
      deliver();
    }
    trace_.duration = now_;
    std::vector<Trajectory> trajs;
    for (int j = 0; j < m_; ++j) trajs.push_back({j, trace_.paths[j]});
    trace_.uncovered = check_coverage(trajs, instance_.targets, cfg_.coverage_eps);
    trace_.summary.assign(static_cast<std::size_t>(m_), {});
    for (const SlotViolation& v : check_connectivity(trajs, instance_.fleet.w)) {
      ++trace_.summary[v.uav].violations;
      ++trace_.connectivity_violations;
    }
    const std::size_t ticks = trace_.paths.front().size();
    for (std::size_t t = 0; t < ticks; ++t) {
      for (int i = 0; i < m_; ++i) {
        for (int j = i + 1; j < m_; ++j) {
          trace_.min_separation = std::min(
              trace_.min_separation, (trace_.paths[i][t] - trace_.paths[j][t]).norm());
        }
      }
    }
    for (int j = 0; j < m_; ++j) {
      UavSummary& s = trace_.summary[j];
      s.t = bodies_[j].flight_time;
      s.d = bodies_[j].distance;
      s.energy = predicted_energy(bodies_[j]);
      trace_.fleet_distance = std::max(trace_.fleet_distance, s.d);
    }
    ojson rec;
    rec["completed"] = trace_.completed;
    rec["uncovered"] = trace_.uncovered.size();
    rec["connectivity_violations"] = trace_.connectivity_violations;
    event(std::move(rec), "end");
  }

  const Instance& instance_;
  const std::optional<EnergyModels>& models_;
  const SimConfig& cfg_;
  const PlannerOptions& planner_;
  int m_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  double now_ = 0;
  double max_time_ = 0;

  std::vector<Body> bodies_;
  std::vector<AgentMachine> agents_;
  std::vector<std::pair<int, std::string>> inbox_;
  std::vector<std::pair<int, std::string>> outbox_;

  GeoFence fence_;
  SyncBarrier barrier_;
  std::vector<std::vector<Leg>> legs_;
  std::vector<std::vector<Step>> tasks_;
  std::vector<std::vector<Action>> initial_task_;
  std::map<int, double> step_start_{{0, 0.0}};
  std::vector<int> done_step_;
  std::vector<int> correcting_;
  bool replan_pending_ = false;
  std::vector<double> last_contact_;
  std::vector<AgentHealth> last_report_;
  std::vector<ExceptionMonitor> exceptions_;
  std::set<std::pair<int, int>> warned_;

  MissionTrace trace_;
};

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0)) throw Error("dt must be positive");
  if (wind_sigma < 0 || gps_sigma < 0) throw Error("noise sigmas must be non-negative");
  if (!(div_correct < div_replan)) throw Error("div_correct must be below div_replan");
  if (collide_dist < 0 || collide_horizon < 0) throw Error("collision parameters must be >= 0");
  if (!(status_period > 0)) throw Error("status_period must be positive");
  if (!(arrival_tolerance > 0)) throw Error("arrival_tolerance must be positive");
  if (!(coverage_eps > 0)) throw Error("coverage_eps must be positive");
}

double segment_deviation(const Point2d& reported, const Point2d& a, const Point2d& b) {
  return segment_distance(reported, a, b);
}

std::vector<CollisionWarning> collision_monitor(std::span<const Point2d> positions,
                                                std::span<const Point2d> velocities,
                                                double collide_dist, double horizon) {
  if (positions.size() != velocities.size()) {
    throw Error("position and velocity counts differ");
  }
  std::vector<CollisionWarning> out;
  const int n = static_cast<int>(positions.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Point2d p = positions[j] - positions[i];
      const Point2d v = velocities[j] - velocities[i];
      const double vv = v.squaredNorm();
      const double tc = vv > 0 ? std::clamp(-p.dot(v) / vv, 0.0, horizon) : 0.0;
      CollisionWarning w{i, j, p.norm(), (p + tc * v).norm(), p.dot(v) < 0};
      if (w.distance < collide_dist || w.predicted_min < collide_dist) out.push_back(w);
    }
  }
  return out;
}

MissionTrace run_mission(const Instance& instance, const Waypoints& waypoints,
                         const std::optional<EnergyModels>& models, const SimConfig& config,
                         const PlannerOptions& planner) {
  instance.validate();
  config.validate();
  if (static_cast<int>(waypoints.size()) != instance.fleet.m) {
    throw Error(fmt::format("plan has {} UAVs, instance has {}", waypoints.size(),
                            instance.fleet.m));
  }
  for (const auto& path : waypoints) {
    if (path.empty()) throw Error("every UAV needs at least one waypoint");
  }
  Mission mission(instance, waypoints, models, config, planner);
  return mission.run();
}

std::string MissionTrace::to_ndjson() const {
  std::string out;
  for (const ojson& rec : records) {
    out += rec.dump();
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json MissionTrace::summary_json() const {
  ojson uavs = ojson::array();
  for (const UavSummary& s : summary) {
    uavs.push_back({{"t", s.t}, {"d", s.d}, {"energy", s.energy}, {"violations", s.violations}});
  }
  ojson counts = ojson::object();
  for (const auto& [k, v] : events) counts[k] = v;
  return {{"completed", completed},
          {"duration", duration},
          {"fleet_distance", fleet_distance},
          {"min_separation", min_separation},
          {"connectivity_violations", connectivity_violations},
          {"uncovered", uncovered},
          {"events", counts},
          {"uavs", uavs}};
}

std::vector<std::vector<EnergyPoint>> energy_integrate(const MissionTrace& trace,
                                                       const EnergyModels& models) {
  std::vector<std::vector<EnergyPoint>> curves;
  for (const auto& samples : trace.status) {
    std::vector<EnergyPoint>& curve = curves.emplace_back();
    for (const StatusSample& s : samples) {
      curve.push_back({s.t, s.flight_time, s.distance,
                       predict_energy(models.calibration, models.consumption, s.flight_time,
                                      s.distance)});
    }
  }
  return curves;
}

}  // namespace couav
