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

#include "aveas/sampler/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "aveas/errors.hpp"
#include "aveas/sim/trace.hpp"
#include "aveas/util/parallel.hpp"

namespace aveas::sampler {

using model::Scenario;
using nlohmann::json;

namespace {

constexpr double kSweepDuration = 20.0;  // s simulated per grid point
constexpr double kEventTagLength = 2.0;  // s, span of the cut_in event tag
// Effectively disables lane changing during sweep runs; the pair
// interaction must stay longitudinal for a_req to be meaningful.
constexpr double kNoLaneChangeThreshold = 1e9;
constexpr double kBehaviorRiskCap = 1e12;  // JSON cannot carry infinity
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* to_string(ScenarioType t) {
  (void)t;
  return "lane_change_cut_in";
}

const char* to_string(VariedParameter p) {
  return p == VariedParameter::kCutInGap ? "cut_in_gap"
                                         : "approach_speed_delta";
}

std::optional<ScenarioType> scenario_type_from_string(std::string_view s) {
  if (s == "lane_change_cut_in") return ScenarioType::kLaneChangeCutIn;
  return std::nullopt;
}

std::optional<VariedParameter> varied_parameter_from_string(
    std::string_view s) {
  if (s == "cut_in_gap") return VariedParameter::kCutInGap;
  if (s == "approach_speed_delta") return VariedParameter::kApproachSpeedDelta;
  return std::nullopt;
}

void VariationSpec::validate() const {
  if (base_scenario_id.empty()) {
    throw ConfigError("base_scenario_id must not be empty");
  }
  if (varied.empty()) throw ConfigError("varied must not be empty");
  std::set<VariedParameter> seen;
  for (const auto& axis : varied) {
    if (!seen.insert(axis.parameter).second) {
      throw ConfigError("each parameter may be varied only once");
    }
    const int sources = (!axis.values.empty() ? 1 : 0) +
                        (axis.range ? 1 : 0) + (axis.from_range ? 1 : 0);
    if (sources != 1) {
      throw ConfigError(
          "each axis needs exactly one of values, range, or from_range");
    }
    if (!axis.values.empty()) {
      for (const double v : axis.values) {
        if (!std::isfinite(v)) throw ConfigError("axis values must be finite");
        if (axis.parameter == VariedParameter::kCutInGap && v <= 0.0) {
          throw ConfigError("cut_in_gap values must be positive");
        }
      }
    } else {
      if (axis.n_steps < 2) {
        throw ConfigError("range axes need n_steps >= 2");
      }
      if (axis.range) {
        if (!std::isfinite((*axis.range)[0]) ||
            !std::isfinite((*axis.range)[1]) ||
            !((*axis.range)[0] < (*axis.range)[1])) {
          throw ConfigError("axis range must be finite with lo < hi");
        }
        if (axis.parameter == VariedParameter::kCutInGap &&
            (*axis.range)[0] <= 0.0) {
          throw ConfigError("cut_in_gap range must be positive");
        }
      }
    }
  }
  params.validate();
}

json VariationSpec::to_json() const {
  json axes = json::array();
  for (const auto& axis : varied) {
    json a{{"parameter", to_string(axis.parameter)}};
    if (!axis.values.empty()) {
      a["values"] = axis.values;
    } else if (axis.range) {
      a["range"] = json::array({(*axis.range)[0], (*axis.range)[1]});
      a["n_steps"] = axis.n_steps;
    } else if (axis.from_range) {
      a["from_range"] = *axis.from_range;
      a["n_steps"] = axis.n_steps;
    }
    axes.push_back(std::move(a));
  }
  return json{{"base_scenario_id", base_scenario_id},
              {"scenario_type", to_string(scenario_type)},
              {"varied", std::move(axes)},
              {"params", params.to_json()}};
}

VariationSpec VariationSpec::from_json(const json& j) {
  VariationSpec spec;
  try {
    spec.base_scenario_id = j.at("base_scenario_id").get<std::string>();
    const auto type =
        scenario_type_from_string(j.at("scenario_type").get<std::string>());
    if (!type) throw ConfigError("unknown scenario_type");
    spec.scenario_type = *type;
    for (const auto& a : j.at("varied")) {
      VariedAxis axis;
      const auto p =
          varied_parameter_from_string(a.at("parameter").get<std::string>());
      if (!p) throw ConfigError("unknown varied parameter");
      axis.parameter = *p;
      if (a.contains("values")) {
        axis.values = a.at("values").get<std::vector<double>>();
      }
      if (a.contains("range")) {
        axis.range = {a.at("range").at(0).get<double>(),
                      a.at("range").at(1).get<double>()};
      }
      if (a.contains("from_range")) {
        axis.from_range = a.at("from_range").get<std::string>();
      }
      if (a.contains("n_steps")) axis.n_steps = a.at("n_steps").get<int>();
      spec.varied.push_back(std::move(axis));
    }
    spec.params = j.contains("params")
                      ? sim::ModelParams::from_json(j.at("params"))
                      : sim::ModelParams::defaults();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed variation spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::vector<double> resolve_axis(const VariedAxis& axis,
                                 const Scenario& base) {
  std::vector<double> values;
  if (!axis.values.empty()) {
    values = axis.values;
  } else {
    std::array<double, 2> r{0.0, 0.0};
    if (axis.range) {
      r = *axis.range;
    } else {
      const auto it = base.metadata.dynamic_ranges.find(*axis.from_range);
      if (it == base.metadata.dynamic_ranges.end()) {
        throw ConfigError("base scenario declares no dynamic range named '" +
                          *axis.from_range + "'");
      }
      r = it->second;
    }
    values.reserve(static_cast<std::size_t>(axis.n_steps));
    for (int i = 0; i < axis.n_steps; ++i) {
      values.push_back(r[0] + (r[1] - r[0]) * static_cast<double>(i) /
                                  static_cast<double>(axis.n_steps - 1));
    }
  }
  if (axis.parameter == VariedParameter::kCutInGap) {
    for (const double v : values) {
      if (!(v > 0.0)) throw ConfigError("cut_in_gap values must be positive");
    }
  }
  return values;
}

const model::EventRecord& find_lane_change_event(const Scenario& s) {
  for (const auto& ev : s.events) {
    if (ev.event_type == model::EventType::kLaneChange ||
        ev.event_type == model::EventType::kCutIn) {
      return ev;
    }
  }
  throw NoSuchEventError("scenario '" + s.scenario_id +
                         "' has no lane_change or cut_in event");
}

namespace {

// First frame at or after t (events are validated to lie within the span).
const model::Frame& frame_at(const Scenario& s, double t) {
  for (const auto& f : s.frames) {
    if (f.timestamp >= t - 1e-9) return f;
  }
  return s.frames.back();
}

sim::VehicleClass class_of(const model::Participant& p) {
  return p.road_user_type == model::RoadUserType::kTruck
             ? sim::VehicleClass::kTruck
             : sim::VehicleClass::kCar;
}

double body_length(sim::VehicleClass c) {
  return sim::class_dimensions(c).length;
}

}  // namespace

StartState extract_start_state(const Scenario& s,
                               const model::EventRecord& event) {
  if (s.frames.empty()) throw MissingStatesError("scenario has no frames");
  const model::Frame& start = frame_at(s, event.t_start);
  const model::Frame& end = frame_at(s, event.t_end);

  // The cutter is the first involved participant whose lane changes across
  // the event.
  std::string cutter_id;
  int from_lane_raw = 0;
  int to_lane_raw = 0;
  for (const auto& [pid, movement] : event.involved) {
    (void)movement;
    const auto a = start.states.find(pid);
    const auto b = end.states.find(pid);
    if (a == start.states.end() || !a->second.lane_position) {
      throw MissingStatesError("involved participant '" + pid +
                               "' has no positioned state at the event start");
    }
    if (b == end.states.end() || !b->second.lane_position) continue;
    if (a->second.lane_position->lane_id != b->second.lane_position->lane_id) {
      cutter_id = pid;
      from_lane_raw = a->second.lane_position->lane_id;
      to_lane_raw = b->second.lane_position->lane_id;
      break;
    }
  }
  if (cutter_id.empty()) {
    throw SemanticError(
        "no involved participant changes lane across the event");
  }

  // Collect every positioned participant at the start frame; lane ids are
  // shifted to start at 0 for the simulator.
  int min_lane = std::min(from_lane_raw, to_lane_raw);
  int max_lane = std::max(from_lane_raw, to_lane_raw);
  for (const auto& [pid, st] : start.states) {
    (void)pid;
    if (st.lane_position) {
      min_lane = std::min(min_lane, st.lane_position->lane_id);
      max_lane = std::max(max_lane, st.lane_position->lane_id);
    }
  }

  StartState out;
  out.from_lane = from_lane_raw - min_lane;
  out.to_lane = to_lane_raw - min_lane;

  double max_s = 0.0;
  std::size_t idx = 0;
  bool cutter_found = false;
  for (const auto& [pid, st] : start.states) {
    if (!st.lane_position) continue;
    const auto pit = s.participants.find(pid);
    if (pit == s.participants.end()) continue;
    sim::InitialVehicle iv;
    iv.cls = class_of(pit->second);
    iv.lane = st.lane_position->lane_id - min_lane;
    iv.s = st.lane_position->s;
    iv.speed = st.speed;
    iv.desired_speed = st.speed;  // holds speed; the sweep is longitudinal
    if (pid == cutter_id) {
      out.cutter = idx;
      cutter_found = true;
    }
    max_s = std::max(max_s, st.lane_position->s);
    out.vehicles.push_back(iv);
    ++idx;
  }
  if (!cutter_found) {
    throw MissingStatesError("cutter '" + cutter_id +
                             "' has no positioned state at the event start");
  }

  const auto& cutter = out.vehicles[out.cutter];
  bool found = false;
  double best_s = -kInf;
  for (std::size_t i = 0; i < out.vehicles.size(); ++i) {
    if (i == out.cutter) continue;
    const auto& v = out.vehicles[i];
    if (v.lane == out.to_lane && v.s < cutter.s && v.s > best_s) {
      best_s = v.s;
      out.approacher = i;
      found = true;
    }
  }
  if (!found) {
    throw MissingStatesError(
        "no approaching vehicle behind the cut-in position in the "
        "destination lane");
  }

  const auto& appr = out.vehicles[out.approacher];
  out.base_gap = cutter.s - appr.s -
                 0.5 * (body_length(cutter.cls) + body_length(appr.cls));
  out.base_speed_delta = appr.speed - cutter.speed;

  // Frame spacing of the base recording, clamped to the simulator's domain.
  double dt = 0.1;
  if (s.frames.size() >= 2) {
    dt = std::clamp(
        (s.frames.back().timestamp - s.frames.front().timestamp) /
            static_cast<double>(s.frames.size() - 1),
        1e-3, 0.5);
  }
  out.config.road_kind = sim::RoadKind::kOpen;
  out.config.lane_count = max_lane - min_lane + 1;
  out.config.lane_length = std::max(1000.0, max_s + 100.0);
  out.config.dt = dt;
  out.config.duration = kSweepDuration;
  out.config.seed = 0;
  return out;
}

namespace {

struct GridPoint {
  std::vector<sim::InitialVehicle> vehicles;
  std::size_t cutter = 0;
  std::size_t approacher = 0;
  sim::FollowSlice slice;  // realized gap and speeds at the cut-in
};

// Applies one grid point to the start state: the cutter lands in the
// destination lane at the requested gap ahead of the approacher, with the
// requested speed delta. Third vehicles overlapping the landing spot are
// dropped.
GridPoint construct_point(const StartState& base, double gap, double delta) {
  const auto& base_cutter = base.vehicles[base.cutter];
  const auto& base_appr = base.vehicles[base.approacher];
  const double half_sum =
      0.5 * (body_length(base_cutter.cls) + body_length(base_appr.cls));

  sim::InitialVehicle cutter = base_cutter;
  cutter.lane = base.to_lane;
  cutter.s = base_appr.s + gap + half_sum;
  cutter.speed = std::max(base_appr.speed - delta, 0.0);
  cutter.desired_speed = cutter.speed;

  GridPoint out;
  for (std::size_t i = 0; i < base.vehicles.size(); ++i) {
    if (i == base.cutter) {
      out.cutter = out.vehicles.size();
      out.vehicles.push_back(cutter);
      continue;
    }
    if (i == base.approacher) {
      out.approacher = out.vehicles.size();
      out.vehicles.push_back(base.vehicles[i]);
      continue;
    }
    const auto& v = base.vehicles[i];
    if (v.lane == base.to_lane) {
      const double clearance = std::abs(v.s - cutter.s) -
                               0.5 * (body_length(v.cls) +
                                      body_length(cutter.cls));
      if (clearance < 0.5) continue;  // occupied landing spot
    }
    out.vehicles.push_back(v);
  }

  out.slice.gap = gap;
  out.slice.leader_speed = cutter.speed;
  out.slice.follower_speed = base_appr.speed;
  return out;
}

struct Grid {
  std::vector<std::vector<double>> axes;  // resolved values per axis
  std::size_t total = 0;

  std::vector<double> values_at(std::size_t index) const {
    std::vector<double> vals(axes.size());
    std::size_t rest = index;
    for (std::size_t a = axes.size(); a-- > 0;) {
      vals[a] = axes[a][rest % axes[a].size()];
      rest /= axes[a].size();
    }
    return vals;
  }
};

Grid make_grid(const VariationSpec& spec, const Scenario& base) {
  Grid grid;
  grid.total = 1;
  for (const auto& axis : spec.varied) {
    grid.axes.push_back(resolve_axis(axis, base));
    grid.total *= grid.axes.back().size();
  }
  return grid;
}

struct PointRun {
  GridPoint point;
  sim::SimTrace trace;
  CriticalityOutcome outcome;
};

PointRun run_point(const VariationSpec& spec, const StartState& start,
                   const std::vector<double>& values) {
  double gap = start.base_gap;
  double delta = start.base_speed_delta;
  for (std::size_t a = 0; a < spec.varied.size(); ++a) {
    if (spec.varied[a].parameter == VariedParameter::kCutInGap) {
      gap = values[a];
    } else {
      delta = values[a];
    }
  }

  PointRun run;
  run.point = construct_point(start, gap, delta);

  sim::ModelParams params = spec.params;
  params.lane_change.speed_advantage_threshold = kNoLaneChangeThreshold;

  run.trace = sim::simulate_from(start.config, params, run.point.vehicles);

  CriticalityOutcome& oc = run.outcome;
  oc.varied_values = values;
  oc.a_req = sim::required_deceleration(run.point.slice, params.cc0);
  const auto appr_cls = run.point.vehicles[run.point.approacher].cls;
  oc.crashed = oc.a_req > params.max_decel.at(appr_cls);

  const double half_sum =
      0.5 * (body_length(run.point.vehicles[run.point.cutter].cls) +
             body_length(appr_cls));
  oc.min_gap = kInf;
  for (const auto& row : run.trace.steps) {
    const auto& c = row[run.point.cutter];
    const auto& a = row[run.point.approacher];
    if (c.lane != a.lane) continue;
    const double g = c.s - a.s - half_sum;
    oc.min_gap = std::min(oc.min_gap, g);
    const double dv = a.speed - c.speed;
    if (g > 0.0 && dv > 1e-12) {
      const double ttc = g / dv;
      if (!oc.min_ttc || ttc < *oc.min_ttc) oc.min_ttc = ttc;
    }
  }
  return run;
}

std::string padded_index(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%03zu", i);
  return buf;
}

}  // namespace

std::vector<CriticalityOutcome> sweep(const VariationSpec& spec,
                                      const Scenario& base, int threads) {
  spec.validate();
  const model::EventRecord& event = find_lane_change_event(base);
  const StartState start = extract_start_state(base, event);
  const Grid grid = make_grid(spec, base);

  std::vector<CriticalityOutcome> outcomes(grid.total);
  util::parallel_for(grid.total, threads, [&](std::size_t i) {
    outcomes[i] = run_point(spec, start, grid.values_at(i)).outcome;
  });
  return outcomes;
}

std::vector<Scenario> emit_samples(
    const VariationSpec& spec, const Scenario& base,
    const std::vector<CriticalityOutcome>& outcomes, double threshold) {
  spec.validate();
  const model::EventRecord& event = find_lane_change_event(base);
  const StartState start = extract_start_state(base, event);

  std::vector<Scenario> emitted;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!(outcomes[i].a_req >= threshold)) continue;
    const PointRun run = run_point(spec, start, outcomes[i].varied_values);
    Scenario sc = sim::trace_to_scenario(
        run.trace, base.scenario_id + "-cutin-" + padded_index(i));

    model::EventRecord ev;
    ev.event_id = "cutin-" + padded_index(i);
    ev.event_type = model::EventType::kCutIn;
    ev.t_start = sc.frames.front().timestamp;
    ev.t_end = std::min(sc.frames.front().timestamp + kEventTagLength,
                        sc.frames.back().timestamp);
    ev.involved["v" + std::to_string(run.point.cutter)] = "cut_in";
    ev.involved["v" + std::to_string(run.point.approacher)] = "approach";
    sc.events.push_back(std::move(ev));

    auto& state =
        sc.frames.front().states["v" + std::to_string(run.point.approacher)];
    state.behavior_risk = std::map<std::string, double>{
        {"required_deceleration",
         std::min(outcomes[i].a_req, kBehaviorRiskCap)}};
    emitted.push_back(std::move(sc));
  }
  return emitted;
}

std::string outcomes_to_csv(const VariationSpec& spec,
                            const std::vector<CriticalityOutcome>& outcomes) {
  const auto fmt = [](double v) -> std::string {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return json(v).dump();
  };
  std::string csv;
  for (const auto& axis : spec.varied) {
    csv += to_string(axis.parameter);
    csv += ',';
  }
  csv += "a_req,crashed,min_gap,min_ttc\n";
  for (const auto& oc : outcomes) {
    for (const double v : oc.varied_values) {
      csv += fmt(v);
      csv += ',';
    }
    csv += fmt(oc.a_req);
    csv += ',';
    csv += oc.crashed ? "true" : "false";
    csv += ',';
    csv += fmt(oc.min_gap);
    csv += ',';
    if (oc.min_ttc) csv += fmt(*oc.min_ttc);
    csv += '\n';
  }
  return csv;
}

}  // namespace aveas::sampler
