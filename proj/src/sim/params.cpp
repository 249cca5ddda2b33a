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

#include "aveas/sim/params.hpp"

#include <cmath>

#include "aveas/errors.hpp"

namespace aveas::sim {

using nlohmann::json;

const char* to_string(VehicleClass c) {
  return c == VehicleClass::kCar ? "car" : "truck";
}

std::optional<VehicleClass> vehicle_class_from_string(std::string_view s) {
  if (s == "car") return VehicleClass::kCar;
  if (s == "truck") return VehicleClass::kTruck;
  return std::nullopt;
}

ModelParams ModelParams::defaults() {
  ModelParams p;
  p.desired_speed[VehicleClass::kCar] = {33.3, 2.5};
  p.desired_speed[VehicleClass::kTruck] = {24.4, 1.5};
  p.max_decel[VehicleClass::kCar] = 7.5;
  p.max_decel[VehicleClass::kTruck] = 5.5;
  return p;
}

void ModelParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("model parameter ") + name +
                        " must be positive and finite");
    }
  };
  const auto non_negative = [](double v, const char* name) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw ConfigError(std::string("model parameter ") + name +
                        " must be non-negative and finite");
    }
  };
  positive(cc0, "cc0");
  positive(cc1, "cc1");
  non_negative(cc2, "cc2");
  non_negative(cc3, "cc3");
  non_negative(cc4, "cc4");
  non_negative(cc5, "cc5");
  non_negative(cc6, "cc6");
  non_negative(cc7, "cc7");
  positive(cc8, "cc8");
  positive(cc9, "cc9");
  for (const VehicleClass c : {VehicleClass::kCar, VehicleClass::kTruck}) {
    const auto ds = desired_speed.find(c);
    if (ds == desired_speed.end()) {
      throw ConfigError(std::string("desired_speed missing for class ") +
                        to_string(c));
    }
    positive(ds->second.mean, "desired_speed.mean");
    positive(ds->second.stddev, "desired_speed.stddev");
    const auto md = max_decel.find(c);
    if (md == max_decel.end()) {
      throw ConfigError(std::string("max_decel missing for class ") +
                        to_string(c));
    }
    positive(md->second, "max_decel");
  }
  non_negative(lane_change.min_gap_lead, "lane_change.min_gap_lead");
  non_negative(lane_change.min_gap_lag, "lane_change.min_gap_lag");
  if (lane_change.min_gap_lead < cc0 || lane_change.min_gap_lag < cc0) {
    throw ConfigError("lane change gaps must be at least cc0");
  }
  non_negative(lane_change.speed_advantage_threshold,
               "lane_change.speed_advantage_threshold");
  non_negative(lane_change.cooldown, "lane_change.cooldown");
}

json ModelParams::to_json() const {
  json ds = json::object();
  for (const auto& [c, g] : desired_speed) {
    ds[to_string(c)] = json{{"mean", g.mean}, {"stddev", g.stddev}};
  }
  json md = json::object();
  for (const auto& [c, v] : max_decel) md[to_string(c)] = v;
  return json{
      {"cc0", cc0},
      {"cc1", cc1},
      {"cc2", cc2},
      {"cc3", cc3},
      {"cc4", cc4},
      {"cc5", cc5},
      {"cc6", cc6},
      {"cc7", cc7},
      {"cc8", cc8},
      {"cc9", cc9},
      {"desired_speed", std::move(ds)},
      {"max_decel", std::move(md)},
      {"lane_change",
       json{{"min_gap_lead", lane_change.min_gap_lead},
            {"min_gap_lag", lane_change.min_gap_lag},
            {"speed_advantage_threshold",
             lane_change.speed_advantage_threshold},
            {"cooldown", lane_change.cooldown}}},
  };
}

ModelParams ModelParams::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("model params must be a JSON object");
  ModelParams p = defaults();
  try {
    for (const char* name : {"cc0", "cc1", "cc2", "cc3", "cc4", "cc5", "cc6",
                             "cc7", "cc8", "cc9"}) {
      if (auto it = j.find(name); it != j.end()) {
        p.set(name, it->get<double>());
      }
    }
    if (auto it = j.find("desired_speed"); it != j.end()) {
      for (const auto& [cname, gv] : it->items()) {
        const auto c = vehicle_class_from_string(cname);
        if (!c) throw ConfigError("unknown vehicle class '" + cname + "'");
        p.desired_speed[*c] = {gv.at("mean").get<double>(),
                               gv.at("stddev").get<double>()};
      }
    }
    if (auto it = j.find("max_decel"); it != j.end()) {
      for (const auto& [cname, v] : it->items()) {
        const auto c = vehicle_class_from_string(cname);
        if (!c) throw ConfigError("unknown vehicle class '" + cname + "'");
        p.max_decel[*c] = v.get<double>();
      }
    }
    if (auto it = j.find("lane_change"); it != j.end()) {
      const json& lc = *it;
      if (auto f = lc.find("min_gap_lead"); f != lc.end()) {
        p.lane_change.min_gap_lead = f->get<double>();
      }
      if (auto f = lc.find("min_gap_lag"); f != lc.end()) {
        p.lane_change.min_gap_lag = f->get<double>();
      }
      if (auto f = lc.find("speed_advantage_threshold"); f != lc.end()) {
        p.lane_change.speed_advantage_threshold = f->get<double>();
      }
      if (auto f = lc.find("cooldown"); f != lc.end()) {
        p.lane_change.cooldown = f->get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model params: ") + e.what());
  }
  p.validate();
  return p;
}

namespace {

double* field_by_name(ModelParams& p, const std::string& name) {
  if (name == "cc0") return &p.cc0;
  if (name == "cc1") return &p.cc1;
  if (name == "cc2") return &p.cc2;
  if (name == "cc3") return &p.cc3;
  if (name == "cc4") return &p.cc4;
  if (name == "cc5") return &p.cc5;
  if (name == "cc6") return &p.cc6;
  if (name == "cc7") return &p.cc7;
  if (name == "cc8") return &p.cc8;
  if (name == "cc9") return &p.cc9;
  if (name == "desired_speed.car.mean") {
    return &p.desired_speed[VehicleClass::kCar].mean;
  }
  if (name == "desired_speed.car.stddev") {
    return &p.desired_speed[VehicleClass::kCar].stddev;
  }
  if (name == "desired_speed.truck.mean") {
    return &p.desired_speed[VehicleClass::kTruck].mean;
  }
  if (name == "desired_speed.truck.stddev") {
    return &p.desired_speed[VehicleClass::kTruck].stddev;
  }
  if (name == "max_decel.car") return &p.max_decel[VehicleClass::kCar];
  if (name == "max_decel.truck") return &p.max_decel[VehicleClass::kTruck];
  if (name == "lane_change.min_gap_lead") return &p.lane_change.min_gap_lead;
  if (name == "lane_change.min_gap_lag") return &p.lane_change.min_gap_lag;
  if (name == "lane_change.speed_advantage_threshold") {
    return &p.lane_change.speed_advantage_threshold;
  }
  if (name == "lane_change.cooldown") return &p.lane_change.cooldown;
  return nullptr;
}

}  // namespace

double ModelParams::get(const std::string& name) const {
  // field_by_name may default-insert missing class entries; work on a copy
  // so a getter never mutates.
  ModelParams copy = *this;
  const double* f = field_by_name(copy, name);
  if (!f) throw ConfigError("unknown model parameter '" + name + "'");
  return *f;
}

void ModelParams::set(const std::string& name, double value) {
  double* f = field_by_name(*this, name);
  if (!f) throw ConfigError("unknown model parameter '" + name + "'");
  *f = value;
}

const std::vector<std::string>& ModelParams::parameter_names() {
  static const std::vector<std::string> names = {
      "cc0",
      "cc1",
      "cc2",
      "cc3",
      "cc4",
      "cc5",
      "cc6",
      "cc7",
      "cc8",
      "cc9",
      "desired_speed.car.mean",
      "desired_speed.car.stddev",
      "desired_speed.truck.mean",
      "desired_speed.truck.stddev",
      "max_decel.car",
      "max_decel.truck",
      "lane_change.min_gap_lead",
      "lane_change.min_gap_lag",
      "lane_change.speed_advantage_threshold",
      "lane_change.cooldown",
  };
  return names;
}

}  // namespace aveas::sim
