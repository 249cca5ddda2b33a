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

#ifndef AVEAS_SIM_SIMULATOR_HPP_
#define AVEAS_SIM_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aveas/sim/params.hpp"

namespace aveas::sim {

enum class RoadKind { kRing, kOpen };

const char* to_string(RoadKind k);
std::optional<RoadKind> road_kind_from_string(std::string_view s);

struct SimConfig {
  RoadKind road_kind = RoadKind::kRing;
  int lane_count = 1;
  double lane_length = 1000.0;  // m; on open roads only initial placement
  std::map<VehicleClass, int> n_vehicles;
  double dt = 0.1;        // s
  double duration = 60.0; // s
  std::uint64_t seed = 0;

  int total_vehicles() const;
  void validate() const;  // throws ConfigError

  nlohmann::json to_json() const;
  static SimConfig from_json(const nlohmann::json& j);

  bool operator==(const SimConfig&) const = default;
};

// Fixed per-class body dimensions (length, width, height in m).
struct ClassDimensions {
  double length;
  double width;
  double height;
};
ClassDimensions class_dimensions(VehicleClass c);

struct VehicleInfo {
  VehicleClass cls = VehicleClass::kCar;
  double length = 0.0;
  double width = 0.0;
  double height = 0.0;
  double desired_speed = 0.0;
  double max_decel = 0.0;

  bool operator==(const VehicleInfo&) const = default;
};

struct VehicleStep {
  int lane = 0;
  double s = 0.0;      // unwrapped arc length; ring geometry wraps modulo
                       // lane_length only for neighbor lookups
  double speed = 0.0;  // m/s, >= 0
  double accel = 0.0;  // m/s^2 applied over the step that produced this state

  bool operator==(const VehicleStep&) const = default;
};

struct SimTrace {
  SimConfig config;
  std::vector<VehicleInfo> vehicles;
  std::vector<double> times;                    // one entry per recorded step
  std::vector<std::vector<VehicleStep>> steps;  // [time index][vehicle index]
  bool collision = false;
  std::optional<std::size_t> collision_step;
  std::optional<std::pair<int, int>> collision_pair;  // (rear, front)

  bool operator==(const SimTrace&) const = default;
};

// Explicit initial state for one vehicle, used by the scenario sampler.
struct InitialVehicle {
  VehicleClass cls = VehicleClass::kCar;
  int lane = 0;
  double s = 0.0;
  double speed = 0.0;
  double desired_speed = 0.0;
};

// Closed-loop simulation from a seeded random initial population. Desired
// speeds are truncated Gaussians drawn per vehicle id, so traces are
// bit-identical for identical (config, params). Throws ConfigError for
// invalid configs or infeasible initial densities. A detected collision
// truncates the trace at the colliding step and sets the collision fields.
SimTrace simulate(const SimConfig& config, const ModelParams& params);

// Same engine, but the population and its desired speeds are given
// explicitly; no random numbers are consumed.
SimTrace simulate_from(const SimConfig& config, const ModelParams& params,
                       const std::vector<InitialVehicle>& initial);

// Bumper gap from a vehicle to its same-lane leader at one recorded step,
// or nullopt when the lane offers no leader. Ring geometry wraps.
std::optional<double> leader_gap(const SimTrace& trace, std::size_t step,
                                 int vehicle);

// Deceleration the follower needs in order to come to the leader's speed
// with a standstill-gap margin of cc0, assuming the leader keeps speed:
//   a_req = dv^2 / (2 (gap - cc0))   for dv = follower - leader > 0
// Returns 0 when not closing and +infinity when gap <= cc0.
struct FollowSlice {
  double gap = 0.0;           // bumper to bumper, m
  double leader_speed = 0.0;  // m/s
  double follower_speed = 0.0;
};
double required_deceleration(const FollowSlice& slice, double cc0);

}  // namespace aveas::sim

#endif  // AVEAS_SIM_SIMULATOR_HPP_
