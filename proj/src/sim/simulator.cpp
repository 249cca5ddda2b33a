// Copyright 2026 The aveas-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aveas/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aveas/errors.hpp"
#include "aveas/util/rng.hpp"

namespace aveas::sim {

using nlohmann::json;

namespace {

constexpr double kV80 = 80.0 / 3.6;  // anchor speed for the cc8->cc9 ramp
constexpr double kComfortRelease = 1.0;   // m/s^2, drift back to desired
constexpr double kLaneChangeLookahead = 100.0;  // m, leader relevance horizon
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(RoadKind k) {
  return k == RoadKind::kRing ? "ring" : "open";
}

std::optional<RoadKind> road_kind_from_string(std::string_view s) {
  if (s == "ring") return RoadKind::kRing;
  if (s == "open") return RoadKind::kOpen;
  return std::nullopt;
}

ClassDimensions class_dimensions(VehicleClass c) {
  switch (c) {
    case VehicleClass::kTruck:
      return {12.0, 2.5, 3.9};
    case VehicleClass::kCar:
    default:
      return {4.5, 1.8, 1.5};
  }
}

int SimConfig::total_vehicles() const {
  int n = 0;
  for (const auto& [c, count] : n_vehicles) {
    (void)c;
    n += count;
  }
  return n;
}

void SimConfig::validate() const {
  if (lane_count < 1) throw ConfigError("lane_count must be at least 1");
  if (!(lane_length > 0.0) || !std::isfinite(lane_length)) {
    throw ConfigError("lane_length must be positive and finite");
  }
  if (!(dt > 0.0) || dt > 0.5) {
    throw ConfigError("dt must be in (0, 0.5]");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ConfigError("duration must be positive and finite");
  }
  for (const auto& [c, count] : n_vehicles) {
    (void)c;
    if (count < 0) throw ConfigError("vehicle counts must be non-negative");
  }
}

json SimConfig::to_json() const {
  json nv = json::object();
  for (const auto& [c, count] : n_vehicles) nv[to_string(c)] = count;
  return json{
      {"road",
       json{{"kind", to_string(road_kind)},
            {"lane_count", lane_count},
            {"lane_length", lane_length}}},
      {"n_vehicles", std::move(nv)},
      {"dt", dt},
      {"duration", duration},
      {"seed", seed},
  };
}

SimConfig SimConfig::from_json(const json& j) {
  SimConfig cfg;
  try {
    const json& road = j.at("road");
    const auto kind =
        road_kind_from_string(road.at("kind").get<std::string>());
    if (!kind) {
      throw ConfigError("road.kind must be 'ring' or 'open'");
    }
    cfg.road_kind = *kind;
    cfg.lane_count = road.at("lane_count").get<int>();
    cfg.lane_length = road.at("lane_length").get<double>();
    for (const auto& [cname, count] : j.at("n_vehicles").items()) {
      const auto c = vehicle_class_from_string(cname);
      if (!c) throw ConfigError("unknown vehicle class '" + cname + "'");
      cfg.n_vehicles[*c] = count.get<int>();
    }
    cfg.dt = j.at("dt").get<double>();
    cfg.duration = j.at("duration").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sim config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

namespace {

// Free driving: accelerate along the cc8->cc9 ramp, land exactly on the
// desired speed (the last step applies (v_des - v)/dt), and ease back down
// when above it.
double free_accel(double v, double v_des, const ModelParams& p, double dt) {
  if (v < v_des) {
    const double a_max =
        p.cc8 + (p.cc9 - p.cc8) * std::min(v / kV80, 1.0);
    return std::min(a_max, (v_des - v) / dt);
  }
  if (v > v_des) return std::max(-kComfortRelease, (v_des - v) / dt);
  return 0.0;
}

// Psycho-physical car following. gap is bumper to bumper and positive.
double follow_accel(double v, double v_des, double v_lead, double gap,
                    double max_decel, const ModelParams& p, double dt) {
  const double a_free = free_accel(v, v_des, p, dt);
  const double dv = v - v_lead;  // closing when positive
  const double v_slow = std::min(v, v_lead);
  const double sdxc = p.cc0 + p.cc1 * v_slow;  // minimum following distance
  const double sdxo = sdxc + p.cc2;            // end of the following band
  const double band = p.cc6 * gap * gap;
  const double close_thr = p.cc4 + band;
  const double open_thr = -(p.cc5 + band);

  if (gap <= 0.1) return -max_decel;
  if (gap < sdxc) {
    // Too close. Brake to stop the closing plus a nudge to reopen the gap.
    if (dv > 0.0) {
      const double a =
          -(dv * dv) / (2.0 * std::max(gap - p.cc0, 0.1)) - p.cc7;
      return std::max(a, -max_decel);
    }
    return -p.cc7;
  }
  const double sdxv = sdxo + p.cc3 * std::max(dv, 0.0);
  if (dv > close_thr && gap < sdxv) {
    // Conscious approach: reach dv = 0 right at the minimum distance.
    const double a = -(dv * dv) / (2.0 * std::max(gap - sdxc, 0.1));
    return std::clamp(a, -max_decel, 0.0);
  }
  if (gap < sdxo) {
    // Following band: low-amplitude oscillation around the leader's speed.
    if (dv > 0.0) return std::min(-p.cc7, a_free);
    if (dv < open_thr) return std::min(p.cc7, a_free);
    return std::min(0.0, a_free);
  }
  return a_free;
}

struct VehState {
  int lane = 0;
  double s = 0.0;  // unwrapped
  double v = 0.0;
  double a = 0.0;
  double last_change = -kInf;
};

class Engine {
 public:
  Engine(const SimConfig& cfg, const ModelParams& par,
         std::vector<VehicleInfo> infos, std::vector<VehState> init)
      : cfg_(cfg),
        par_(par),
        infos_(std::move(infos)),
        veh_(std::move(init)),
        ring_(cfg.road_kind == RoadKind::kRing) {}

  SimTrace run() {
    const int n = static_cast<int>(veh_.size());
    SimTrace trace;
    trace.config = cfg_;
    trace.vehicles = infos_;
    const auto n_steps =
        static_cast<std::size_t>(std::llround(cfg_.duration / cfg_.dt));
    trace.times.reserve(n_steps + 1);
    trace.steps.reserve(n_steps + 1);

    rebuild_lanes();
    check_initial_feasibility();
    record(trace, 0.0);

    for (std::size_t k = 1; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * cfg_.dt;
      rebuild_lanes();
      for (int i = 0; i < n; ++i) maybe_change_lane(i, t);
      for (int i = 0; i < n; ++i) veh_[i].a = acceleration(i);
      for (int i = 0; i < n; ++i) {
        veh_[i].v = std::max(veh_[i].v + veh_[i].a * cfg_.dt, 0.0);
        veh_[i].s += veh_[i].v * cfg_.dt;
      }
      record(trace, t);
      if (detect_collision(trace)) break;
    }
    return trace;
  }

 private:
  double wrapped(double s) const {
    return ring_ ? s - cfg_.lane_length * std::floor(s / cfg_.lane_length) : s;
  }

  // Signed forward distance from a to b along the driving direction.
  double forward_delta(double s_a, double s_b) const {
    if (!ring_) return s_b - s_a;
    const double d = wrapped(s_b) - wrapped(s_a);
    return d >= 0.0 ? d : d + cfg_.lane_length;
  }

  void rebuild_lanes() {
    lanes_.assign(static_cast<std::size_t>(cfg_.lane_count), {});
    for (int i = 0; i < static_cast<int>(veh_.size()); ++i) {
      lanes_[static_cast<std::size_t>(veh_[i].lane)].push_back(i);
    }
    for (auto& members : lanes_) {
      std::sort(members.begin(), members.end(), [&](int a, int b) {
        const double sa = wrapped(veh_[a].s);
        const double sb = wrapped(veh_[b].s);
        return sa != sb ? sa < sb : a < b;
      });
    }
  }

  void check_initial_feasibility() const {
    for (const auto& members : lanes_) {
      if (members.size() < 2) continue;
      double occupied = 0.0;
      for (int i : members) occupied += infos_[i].length + par_.cc0;
      if (ring_ && occupied > cfg_.lane_length) {
        throw ConfigError(
            "infeasible density: vehicles plus standstill gaps exceed the "
            "lane length");
      }
      for (std::size_t k = 0; k < members.size(); ++k) {
        if (!ring_ && k + 1 == members.size()) break;
        const int rear = members[k];
        const int front = members[(k + 1) % members.size()];
        if (rear == front) continue;
        const double gap =
            forward_delta(veh_[rear].s, veh_[front].s) -
            0.5 * (infos_[rear].length + infos_[front].length);
        if (gap <= 0.0) {
          throw ConfigError("infeasible initial state: vehicles overlap");
        }
      }
    }
  }

  // Index into lanes_[lane] of the nearest vehicle ahead of position s, or
  // -1 when the lane offers no leader.
  int leader_in_lane(int lane, double s, int exclude) const {
    const auto& members = lanes_[static_cast<std::size_t>(lane)];
    int best = -1;
    double best_d = kInf;
    for (int j : members) {
      if (j == exclude) continue;
      const double d = forward_delta(s, veh_[j].s);
      if (d > 0.0 && d < best_d) {
        best = j;
        best_d = d;
      }
    }
    return best;
  }

  int follower_in_lane(int lane, double s, int exclude) const {
    const auto& members = lanes_[static_cast<std::size_t>(lane)];
    int best = -1;
    double best_d = kInf;
    for (int j : members) {
      if (j == exclude) continue;
      const double d = forward_delta(veh_[j].s, s);
      if (d > 0.0 && d < best_d) {
        best = j;
        best_d = d;
      }
    }
    return best;
  }

  double bumper_gap(int rear, int front) const {
    return forward_delta(veh_[rear].s, veh_[front].s) -
           0.5 * (infos_[rear].length + infos_[front].length);
  }

  // Speed-deficit trigger with lead/lag gap acceptance in the target lane.
  // Left lane (higher index) is preferred; a change needs the prospective
  // leader to be faster than the current one by the advantage threshold.
  void maybe_change_lane(int i, double t) {
    if (cfg_.lane_count < 2) return;
    VehState& me = veh_[i];
    const auto& lc = par_.lane_change;
    if (t - me.last_change < lc.cooldown) return;
    const double deficit = infos_[i].desired_speed - me.v;
    if (deficit <= lc.speed_advantage_threshold) return;
    const int cur_leader = leader_in_lane(me.lane, me.s, i);
    if (cur_leader < 0) return;
    if (forward_delta(me.s, veh_[cur_leader].s) > kLaneChangeLookahead) return;
    if (veh_[cur_leader].v >= infos_[i].desired_speed) return;

    for (const int target : {me.lane + 1, me.lane - 1}) {
      if (target < 0 || target >= cfg_.lane_count) continue;
      const int lead = leader_in_lane(target, me.s, i);
      if (lead >= 0) {
        const double lead_gap =
            forward_delta(me.s, veh_[lead].s) -
            0.5 * (infos_[i].length + infos_[lead].length);
        if (lead_gap < lc.min_gap_lead) continue;
        const bool relevant =
            forward_delta(me.s, veh_[lead].s) <= kLaneChangeLookahead;
        if (relevant && veh_[lead].v < veh_[cur_leader].v +
                                           lc.speed_advantage_threshold) {
          continue;
        }
      }
      const int lag = follower_in_lane(target, me.s, i);
      if (lag >= 0) {
        const double lag_gap =
            forward_delta(veh_[lag].s, me.s) -
            0.5 * (infos_[i].length + infos_[lag].length);
        if (lag_gap < lc.min_gap_lag) continue;
      }
      apply_lane_change(i, target, t);
      return;
    }
  }

  void apply_lane_change(int i, int target, double t) {
    auto& old_members = lanes_[static_cast<std::size_t>(veh_[i].lane)];
    old_members.erase(
        std::find(old_members.begin(), old_members.end(), i));
    veh_[i].lane = target;
    veh_[i].last_change = t;
    auto& members = lanes_[static_cast<std::size_t>(target)];
    const auto at = std::lower_bound(
        members.begin(), members.end(), i, [&](int a, int b) {
          const double sa = wrapped(veh_[a].s);
          const double sb = wrapped(veh_[b].s);
          return sa != sb ? sa < sb : a < b;
        });
    members.insert(at, i);
  }

  double acceleration(int i) const {
    const VehState& me = veh_[i];
    const int lead = leader_in_lane(me.lane, me.s, i);
    if (lead < 0) {
      return free_accel(me.v, infos_[i].desired_speed, par_, cfg_.dt);
    }
    const double gap = bumper_gap(i, lead);
    return follow_accel(me.v, infos_[i].desired_speed, veh_[lead].v,
                        std::max(gap, 0.0), infos_[i].max_decel, par_,
                        cfg_.dt);
  }

  void record(SimTrace& trace, double t) {
    trace.times.push_back(t);
    std::vector<VehicleStep> row;
    row.reserve(veh_.size());
    for (const auto& v : veh_) {
      row.push_back({v.lane, v.s, v.v, v.a});
    }
    trace.steps.push_back(std::move(row));
  }

  bool detect_collision(SimTrace& trace) {
    // The pre-step ordering is current enough: interpenetration shows up as
    // a negative gap for a previously adjacent pair.
    for (const auto& members : lanes_) {
      if (members.size() < 2) continue;
      const std::size_t pairs =
          ring_ ? members.size() : members.size() - 1;
      for (std::size_t k = 0; k < pairs; ++k) {
        const int rear = members[k];
        const int front = members[(k + 1) % members.size()];
        if (rear == front) continue;
        if (bumper_gap(rear, front) < 0.0) {
          trace.collision = true;
          trace.collision_step = trace.steps.size() - 1;
          trace.collision_pair = {rear, front};
          return true;
        }
      }
    }
    return false;
  }

  const SimConfig& cfg_;
  const ModelParams& par_;
  std::vector<VehicleInfo> infos_;
  std::vector<VehState> veh_;
  std::vector<std::vector<int>> lanes_;
  bool ring_;
};

VehicleInfo make_info(VehicleClass c, double desired,
                      const ModelParams& par) {
  const ClassDimensions dims = class_dimensions(c);
  return {c,           dims.length, dims.width, dims.height,
          desired,     par.max_decel.at(c)};
}

}  // namespace

SimTrace simulate(const SimConfig& config, const ModelParams& params) {
  config.validate();
  params.validate();
  const int n = config.total_vehicles();
  if (n < 1) throw ConfigError("simulate needs at least one vehicle");

  const util::CounterRng rng = util::CounterRng::master(config.seed);
  std::vector<VehicleInfo> infos;
  infos.reserve(static_cast<std::size_t>(n));
  // Cars first, trucks after; round-robin lane assignment mixes classes.
  std::vector<VehicleClass> classes;
  for (const VehicleClass c : {VehicleClass::kCar, VehicleClass::kTruck}) {
    const auto it = config.n_vehicles.find(c);
    const int count = it == config.n_vehicles.end() ? 0 : it->second;
    classes.insert(classes.end(), static_cast<std::size_t>(count), c);
  }
  for (int i = 0; i < n; ++i) {
    const VehicleClass c = classes[static_cast<std::size_t>(i)];
    const ClassGaussian g = params.desired_speed.at(c);
    const double desired = rng.stream(static_cast<std::uint64_t>(i))
                               .truncated_normal(
                                   0, g.mean, g.stddev,
                                   kDesiredSpeedTruncation[0] * g.mean,
                                   kDesiredSpeedTruncation[1] * g.mean);
    infos.push_back(make_info(c, desired, params));
  }

  // Evenly spaced start positions per lane at 60% of the desired speed.
  std::vector<int> lane_counts(static_cast<std::size_t>(config.lane_count), 0);
  for (int i = 0; i < n; ++i) lane_counts[i % config.lane_count]++;
  std::vector<int> placed(static_cast<std::size_t>(config.lane_count), 0);
  std::vector<VehState> init(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int lane = i % config.lane_count;
    const double spacing =
        config.lane_length / std::max(lane_counts[lane], 1);
    init[i].lane = lane;
    init[i].s = spacing * placed[lane]++;
    init[i].v = 0.6 * infos[i].desired_speed;
  }

  return Engine(config, params, std::move(infos), std::move(init)).run();
}

SimTrace simulate_from(const SimConfig& config, const ModelParams& params,
                       const std::vector<InitialVehicle>& initial) {
  config.validate();
  params.validate();
  if (initial.empty()) {
    throw ConfigError("simulate_from needs at least one vehicle");
  }
  std::vector<VehicleInfo> infos;
  std::vector<VehState> init;
  infos.reserve(initial.size());
  init.reserve(initial.size());
  for (const auto& iv : initial) {
    if (iv.lane < 0 || iv.lane >= config.lane_count) {
      throw ConfigError("initial vehicle lane out of range");
    }
    if (iv.speed < 0.0 || iv.desired_speed < 0.0) {
      throw ConfigError("initial and desired speeds must be non-negative");
    }
    infos.push_back(make_info(iv.cls, iv.desired_speed, params));
    VehState st;
    st.lane = iv.lane;
    st.s = iv.s;
    st.v = iv.speed;
    init.push_back(st);
  }
  return Engine(config, params, std::move(infos), std::move(init)).run();
}

std::optional<double> leader_gap(const SimTrace& trace, std::size_t step,
                                 int vehicle) {
  const auto& row = trace.steps.at(step);
  const auto& me = row.at(static_cast<std::size_t>(vehicle));
  const bool ring = trace.config.road_kind == RoadKind::kRing;
  const double length = trace.config.lane_length;
  const auto wrapped = [&](double s) {
    return ring ? s - length * std::floor(s / length) : s;
  };
  int best = -1;
  double best_d = kInf;
  for (int j = 0; j < static_cast<int>(row.size()); ++j) {
    if (j == vehicle || row[static_cast<std::size_t>(j)].lane != me.lane) {
      continue;
    }
    double d = ring
                   ? wrapped(row[static_cast<std::size_t>(j)].s) -
                         wrapped(me.s)
                   : row[static_cast<std::size_t>(j)].s - me.s;
    if (ring && d < 0.0) d += length;
    if (d > 0.0 && d < best_d) {
      best = j;
      best_d = d;
    }
  }
  if (best < 0) return std::nullopt;
  return best_d - 0.5 * (trace.vehicles.at(static_cast<std::size_t>(vehicle))
                             .length +
                         trace.vehicles.at(static_cast<std::size_t>(best))
                             .length);
}

double required_deceleration(const FollowSlice& slice, double cc0) {
  const double dv = slice.follower_speed - slice.leader_speed;
  if (dv <= 0.0) return 0.0;
  if (slice.gap <= cc0) return kInf;
  return (dv * dv) / (2.0 * (slice.gap - cc0));
}

}  // namespace aveas::sim
