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

#ifndef AVEAS_SIM_PARAMS_HPP_
#define AVEAS_SIM_PARAMS_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aveas::sim {

enum class VehicleClass { kCar, kTruck };

const char* to_string(VehicleClass c);
std::optional<VehicleClass> vehicle_class_from_string(std::string_view s);

struct ClassGaussian {
  double mean = 0.0;    // m/s
  double stddev = 0.0;  // m/s

  bool operator==(const ClassGaussian&) const = default;
};

struct LaneChangeParams {
  double min_gap_lead = 10.0;              // m, accepted gap to the new leader
  double min_gap_lag = 15.0;               // m, accepted gap to the new follower
  double speed_advantage_threshold = 1.0;  // m/s, required deficit/advantage
  double cooldown = 5.0;                   // s between changes of one vehicle

  bool operator==(const LaneChangeParams&) const = default;
};

// Longitudinal car-following parameters in the ten-coefficient scheme plus
// per-class desired speed distributions and braking limits.
struct ModelParams {
  double cc0 = 1.5;    // standstill gap [m]
  double cc1 = 1.3;    // speed-proportional following headway [s]
  double cc2 = 4.0;    // following band width [m]
  double cc3 = 6.0;    // approach anticipation per m/s of closing [s]
  double cc4 = 0.35;   // closing perception threshold at zero distance [m/s]
  double cc5 = 0.35;   // opening perception threshold at zero distance [m/s]
  double cc6 = 4e-4;   // distance dependence of the perception band [1/(m*s)]
  double cc7 = 0.25;   // oscillation acceleration [m/s^2]
  double cc8 = 3.5;    // acceleration from standstill [m/s^2]
  double cc9 = 1.5;    // acceleration at 80 km/h [m/s^2]
  std::map<VehicleClass, ClassGaussian> desired_speed;  // m/s
  std::map<VehicleClass, double> max_decel;  // positive magnitudes [m/s^2]
  LaneChangeParams lane_change;

  static ModelParams defaults();

  // Throws ConfigError when a parameter is outside its physical domain or a
  // vehicle class lacks its entries.
  void validate() const;

  nlohmann::json to_json() const;
  static ModelParams from_json(const nlohmann::json& j);

  // Calibration addresses parameters by dotted names, e.g. "cc1",
  // "desired_speed.car.mean", "max_decel.truck",
  // "lane_change.min_gap_lead". Unknown names throw ConfigError.
  double get(const std::string& name) const;
  void set(const std::string& name, double value);
  static const std::vector<std::string>& parameter_names();

  bool operator==(const ModelParams&) const = default;
};

// Desired speeds are drawn from the class Gaussian truncated to
// [kDesiredSpeedTruncation[0] * mean, kDesiredSpeedTruncation[1] * mean].
inline constexpr double kDesiredSpeedTruncation[2] = {0.5, 1.5};

}  // namespace aveas::sim

#endif  // AVEAS_SIM_PARAMS_HPP_
