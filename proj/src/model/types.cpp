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

#include "aveas/model/types.hpp"

#include <utility>

namespace aveas::model {

namespace {

template <typename E, std::size_t N>
const char* lookup(const std::pair<E, const char*> (&table)[N], E v) {
  for (const auto& [e, s] : table) {
    if (e == v) return s;
  }
  return "unknown";
}

template <typename E, std::size_t N>
std::optional<E> reverse_lookup(const std::pair<E, const char*> (&table)[N],
                                std::string_view s) {
  for (const auto& [e, str] : table) {
    if (s == str) return e;
  }
  return std::nullopt;
}

constexpr std::pair<Weather, const char*> kWeather[] = {
    {Weather::kClear, "clear"}, {Weather::kRain, "rain"},
    {Weather::kSnow, "snow"},   {Weather::kFog, "fog"},
    {Weather::kUnknown, "unknown"},
};

constexpr std::pair<Lighting, const char*> kLighting[] = {
    {Lighting::kDay, "day"},
    {Lighting::kTwilight, "twilight"},
    {Lighting::kNight, "night"},
    {Lighting::kArtificial, "artificial"},
    {Lighting::kUnknown, "unknown"},
};

constexpr std::pair<TrafficCondition, const char*> kTrafficCondition[] = {
    {TrafficCondition::kFreeFlow, "free_flow"},
    {TrafficCondition::kDense, "dense"},
    {TrafficCondition::kCongested, "congested"},
    {TrafficCondition::kUnknown, "unknown"},
};

constexpr std::pair<RoadSurface, const char*> kRoadSurface[] = {
    {RoadSurface::kDry, "dry"},
    {RoadSurface::kWet, "wet"},
    {RoadSurface::kIcy, "icy"},
    {RoadSurface::kUnknown, "unknown"},
};

constexpr std::pair<RoadUserType, const char*> kRoadUserType[] = {
    {RoadUserType::kCar, "car"},
    {RoadUserType::kTruck, "truck"},
    {RoadUserType::kBus, "bus"},
    {RoadUserType::kMotorcycle, "motorcycle"},
    {RoadUserType::kBicycle, "bicycle"},
    {RoadUserType::kPedestrian, "pedestrian"},
    {RoadUserType::kOther, "other"},
};

constexpr std::pair<EventType, const char*> kEventType[] = {
    {EventType::kLaneChange, "lane_change"},
    {EventType::kCutIn, "cut_in"},
    {EventType::kHardBraking, "hard_braking"},
    {EventType::kNearMiss, "near_miss"},
    {EventType::kCollision, "collision"},
    {EventType::kHandover, "handover"},
    {EventType::kOther, "other"},
};

constexpr std::pair<AcquisitionMethod, const char*> kAcquisitionMethod[] = {
    {AcquisitionMethod::kStationaryLidar, "stationary_lidar"},
    {AcquisitionMethod::kStationaryInfrared, "stationary_infrared"},
    {AcquisitionMethod::kAerialRgbVideo, "aerial_rgb_video"},
    {AcquisitionMethod::kVehicleSensors, "vehicle_sensors"},
    {AcquisitionMethod::kSynthetic, "synthetic"},
};

constexpr std::pair<Origin, const char*> kOrigin[] = {
    {Origin::kReconstructed, "reconstructed"},
    {Origin::kSampled, "sampled"},
    {Origin::kOriginal, "original"},
};

constexpr std::pair<Area, const char*> kArea[] = {
    {Area::kUrban, "urban"},
    {Area::kHighway, "highway"},
    {Area::kRural, "rural"},
};

constexpr std::pair<CoordinateSystemType, const char*>
    kCoordinateSystemType[] = {
        {CoordinateSystemType::kStatic, "static"},
        {CoordinateSystemType::kLocal, "local"},
        {CoordinateSystemType::kSensor, "sensor"},
};

}  // namespace

const char* to_string(Weather v) { return lookup(kWeather, v); }
const char* to_string(Lighting v) { return lookup(kLighting, v); }
const char* to_string(TrafficCondition v) {
  return lookup(kTrafficCondition, v);
}
const char* to_string(RoadSurface v) { return lookup(kRoadSurface, v); }
const char* to_string(RoadUserType v) { return lookup(kRoadUserType, v); }
const char* to_string(EventType v) { return lookup(kEventType, v); }
const char* to_string(AcquisitionMethod v) {
  return lookup(kAcquisitionMethod, v);
}
const char* to_string(Origin v) { return lookup(kOrigin, v); }
const char* to_string(Area v) { return lookup(kArea, v); }
const char* to_string(CoordinateSystemType v) {
  return lookup(kCoordinateSystemType, v);
}

std::optional<Weather> weather_from_string(std::string_view s) {
  return reverse_lookup(kWeather, s);
}
std::optional<Lighting> lighting_from_string(std::string_view s) {
  return reverse_lookup(kLighting, s);
}
std::optional<TrafficCondition> traffic_condition_from_string(
    std::string_view s) {
  return reverse_lookup(kTrafficCondition, s);
}
std::optional<RoadSurface> road_surface_from_string(std::string_view s) {
  return reverse_lookup(kRoadSurface, s);
}
std::optional<RoadUserType> road_user_type_from_string(std::string_view s) {
  return reverse_lookup(kRoadUserType, s);
}
std::optional<EventType> event_type_from_string(std::string_view s) {
  return reverse_lookup(kEventType, s);
}
std::optional<AcquisitionMethod> acquisition_method_from_string(
    std::string_view s) {
  return reverse_lookup(kAcquisitionMethod, s);
}
std::optional<Origin> origin_from_string(std::string_view s) {
  return reverse_lookup(kOrigin, s);
}
std::optional<Area> area_from_string(std::string_view s) {
  return reverse_lookup(kArea, s);
}
std::optional<CoordinateSystemType> coordinate_system_type_from_string(
    std::string_view s) {
  return reverse_lookup(kCoordinateSystemType, s);
}

}  // namespace aveas::model
