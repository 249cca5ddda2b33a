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

#include "aveas/sim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "aveas/errors.hpp"
#include "aveas/io/openlabel.hpp"
#include "aveas/util/hash.hpp"

namespace aveas::sim {

using model::Scenario;

namespace {

// Synthetic scenarios carry a fixed creation time so identical traces map to
// identical bytes.
constexpr const char* kSyntheticCreationTime = "2026-01-01T00:00:00Z";
constexpr const char* kRoadId = "road_0";
constexpr int kWorldEpsg = 25832;

double lane_center(int lane) { return (lane + 0.5) * kLaneWidth; }

// Lateral speed limit for the y interpolation after a lane change. Scaling
// with the longitudinal speed keeps recorded speeds consistent with the
// world positions at any speed.
double lateral_rate(double v) { return std::min(1.0, 0.25 * v); }

std::string derive_id(const SimTrace& trace) {
  nlohmann::json digest{{"config", trace.config.to_json()},
                        {"n_steps", trace.times.size()},
                        {"collision", trace.collision}};
  nlohmann::json fin = nlohmann::json::array();
  if (!trace.steps.empty()) {
    for (const auto& v : trace.steps.back()) {
      fin.push_back(nlohmann::json::array({v.lane, v.s, v.speed}));
    }
  }
  digest["final"] = std::move(fin);
  return "sim-" + util::sha256_hex(io::canonical_dump(digest)).substr(0, 12);
}

model::RoadUserType road_user_type(VehicleClass c) {
  return c == VehicleClass::kTruck ? model::RoadUserType::kTruck
                                   : model::RoadUserType::kCar;
}

}  // namespace

Scenario trace_to_scenario(const SimTrace& trace,
                           const std::string& scenario_id) {
  if (trace.steps.empty() || trace.vehicles.empty()) {
    throw ConfigError("cannot convert an empty trace to a scenario");
  }
  const std::size_t n_steps = trace.steps.size();
  const std::size_t n_veh = trace.vehicles.size();

  Scenario sc;
  sc.scenario_id = scenario_id.empty() ? derive_id(trace) : scenario_id;
  sc.context.weather = model::Weather::kClear;
  sc.context.lighting = model::Lighting::kDay;
  sc.context.traffic_condition = model::TrafficCondition::kUnknown;
  sc.context.road_surface = model::RoadSurface::kDry;

  // World positions: x follows the unwrapped arc length, y tracks the lane
  // centerline with rate-limited lateral interpolation across lane changes.
  std::vector<std::vector<std::array<double, 2>>> pos(n_steps);
  std::vector<double> y(n_veh);
  for (std::size_t i = 0; i < n_veh; ++i) {
    y[i] = lane_center(trace.steps[0][i].lane);
  }
  for (std::size_t k = 0; k < n_steps; ++k) {
    pos[k].resize(n_veh);
    const double dt = k == 0 ? 0.0 : trace.times[k] - trace.times[k - 1];
    for (std::size_t i = 0; i < n_veh; ++i) {
      const auto& st = trace.steps[k][i];
      if (k > 0) {
        const double target = lane_center(st.lane);
        const double max_dy = lateral_rate(st.speed) * dt;
        y[i] += std::clamp(target - y[i], -max_dy, max_dy);
      }
      pos[k][i] = {st.s, y[i]};
    }
  }

  std::vector<double> heading(n_veh, 0.0);
  double speed_min = trace.steps[0][0].speed;
  double speed_max = speed_min;
  double accel_min = trace.steps[0][0].accel;
  double accel_max = accel_min;

  sc.frames.resize(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    model::Frame& frame = sc.frames[k];
    frame.frame_id = static_cast<std::int64_t>(k);
    frame.timestamp = trace.times[k];
    for (std::size_t i = 0; i < n_veh; ++i) {
      const auto& st = trace.steps[k][i];
      const auto& info = trace.vehicles[i];
      // Heading from the displacement into this step; standstill keeps the
      // previous value.
      const std::size_t ref = k == 0 ? 1 : k;
      if (ref < n_steps) {
        const double dx = pos[ref][i][0] - pos[ref - 1][i][0];
        const double dy = pos[ref][i][1] - pos[ref - 1][i][1];
        if (std::hypot(dx, dy) > 1e-9) heading[i] = std::atan2(dy, dx);
      }
      model::FrameState fs;
      fs.world_position = pos[k][i];
      fs.speed = st.speed;
      fs.acceleration = st.accel;
      fs.bbox3d.center = {pos[k][i][0], pos[k][i][1], 0.5 * info.height};
      fs.bbox3d.extent = {info.length, info.width, info.height};
      fs.bbox3d.heading = heading[i];
      model::LanePosition lp;
      lp.road_id = kRoadId;
      lp.lane_id = st.lane;
      lp.s = st.s;
      lp.t = pos[k][i][1] - lane_center(st.lane);
      fs.lane_position = lp;
      frame.states["v" + std::to_string(i)] = std::move(fs);

      speed_min = std::min(speed_min, st.speed);
      speed_max = std::max(speed_max, st.speed);
      accel_min = std::min(accel_min, st.accel);
      accel_max = std::max(accel_max, st.accel);
    }
  }

  for (std::size_t i = 0; i < n_veh; ++i) {
    const auto& info = trace.vehicles[i];
    model::Participant p;
    p.participant_id = "v" + std::to_string(i);
    p.road_user_type = road_user_type(info.cls);
    p.dimensions.length = info.length;
    p.dimensions.width = info.width;
    p.dimensions.height = info.height;
    double lo = trace.steps[0][i].speed;
    double hi = lo;
    for (std::size_t k = 1; k < n_steps; ++k) {
      lo = std::min(lo, trace.steps[k][i].speed);
      hi = std::max(hi, trace.steps[k][i].speed);
    }
    p.speed_range = {lo, hi};
    sc.participants[p.participant_id] = std::move(p);
  }

  if (trace.collision && trace.collision_pair) {
    model::EventRecord ev;
    ev.event_id = "collision-0";
    ev.event_type = model::EventType::kCollision;
    ev.t_start = n_steps >= 2 ? trace.times[n_steps - 2] : trace.times.back();
    ev.t_end = trace.times.back();
    ev.involved["v" + std::to_string(trace.collision_pair->first)] = "rear";
    ev.involved["v" + std::to_string(trace.collision_pair->second)] = "front";
    sc.events.push_back(std::move(ev));
  }

  sc.metadata.creation_time = kSyntheticCreationTime;
  sc.metadata.acquisition_method = model::AcquisitionMethod::kSynthetic;
  sc.metadata.data_use_restrictions = "none";
  sc.metadata.origin = model::Origin::kSampled;
  sc.metadata.area = model::Area::kHighway;
  sc.metadata.scenario_duration = trace.times.back() - trace.times.front();
  sc.metadata.dynamic_ranges["speed"] = {speed_min, speed_max};
  sc.metadata.dynamic_ranges["acceleration"] = {accel_min, accel_max};

  sc.coordinate_systems.world_epsg = kWorldEpsg;
  sc.coordinate_systems.local_origin = {0.0, 0.0};
  model::CoordinateSystem world;
  world.type = model::CoordinateSystemType::kStatic;
  model::CoordinateSystem local;
  local.type = model::CoordinateSystemType::kLocal;
  local.parent = "world";
  sc.coordinate_systems.systems["world"] = world;
  sc.coordinate_systems.systems["local"] = local;

  return sc;
}

}  // namespace aveas::sim
