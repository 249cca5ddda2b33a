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

#ifndef AVEAS_MODEL_TYPES_HPP_
#define AVEAS_MODEL_TYPES_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aveas::model {

// ---------------------------------------------------------------------------
// Enumerations. String forms are the wire format; conversion helpers live in
// types.cpp and reject unknown strings by returning nullopt.
// ---------------------------------------------------------------------------

enum class Weather { kClear, kRain, kSnow, kFog, kUnknown };
enum class Lighting { kDay, kTwilight, kNight, kArtificial, kUnknown };
enum class TrafficCondition { kFreeFlow, kDense, kCongested, kUnknown };
enum class RoadSurface { kDry, kWet, kIcy, kUnknown };

enum class RoadUserType {
  kCar,
  kTruck,
  kBus,
  kMotorcycle,
  kBicycle,
  kPedestrian,
  kOther,
};

enum class EventType {
  kLaneChange,
  kCutIn,
  kHardBraking,
  kNearMiss,
  kCollision,
  kHandover,
  kOther,
};

enum class AcquisitionMethod {
  kStationaryLidar,
  kStationaryInfrared,
  kAerialRgbVideo,
  kVehicleSensors,
  kSynthetic,
};

enum class Origin { kReconstructed, kSampled, kOriginal };
enum class Area { kUrban, kHighway, kRural };
enum class CoordinateSystemType { kStatic, kLocal, kSensor };

const char* to_string(Weather v);
const char* to_string(Lighting v);
const char* to_string(TrafficCondition v);
const char* to_string(RoadSurface v);
const char* to_string(RoadUserType v);
const char* to_string(EventType v);
const char* to_string(AcquisitionMethod v);
const char* to_string(Origin v);
const char* to_string(Area v);
const char* to_string(CoordinateSystemType v);

std::optional<Weather> weather_from_string(std::string_view s);
std::optional<Lighting> lighting_from_string(std::string_view s);
std::optional<TrafficCondition> traffic_condition_from_string(
    std::string_view s);
std::optional<RoadSurface> road_surface_from_string(std::string_view s);
std::optional<RoadUserType> road_user_type_from_string(std::string_view s);
std::optional<EventType> event_type_from_string(std::string_view s);
std::optional<AcquisitionMethod> acquisition_method_from_string(
    std::string_view s);
std::optional<Origin> origin_from_string(std::string_view s);
std::optional<Area> area_from_string(std::string_view s);
std::optional<CoordinateSystemType> coordinate_system_type_from_string(
    std::string_view s);

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

struct Context {
  Weather weather = Weather::kUnknown;
  Lighting lighting = Lighting::kUnknown;
  TrafficCondition traffic_condition = TrafficCondition::kUnknown;
  RoadSurface road_surface = RoadSurface::kUnknown;

  bool operator==(const Context&) const = default;
};

// ---------------------------------------------------------------------------
// Participants
// ---------------------------------------------------------------------------

struct Dimensions {
  double length = 0.0;
  double width = 0.0;
  std::optional<double> height;

  bool operator==(const Dimensions&) const = default;
};

struct SpeedRange {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const SpeedRange&) const = default;
};

struct Participant {
  std::string participant_id;
  RoadUserType road_user_type = RoadUserType::kOther;
  Dimensions dimensions;
  SpeedRange speed_range;
  // Free-form records; kept as raw JSON because their shape is dictated by
  // upstream tooling, not by this profile.
  std::optional<nlohmann::json> collision_dynamics;
  std::optional<nlohmann::json> steering_wheel_positions;

  bool operator==(const Participant&) const = default;
};

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

struct EventRecord {
  std::string event_id;
  std::optional<EventType> event_type;
  double t_start = 0.0;
  double t_end = 0.0;
  // participant_id -> optional movement classification. A participant can be
  // listed as involved without any classification.
  std::map<std::string, std::optional<std::string>> involved;

  bool operator==(const EventRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

struct RiskMeasureSet {
  std::optional<double> thw;
  std::optional<double> dhw;
  std::optional<double> ttc;
  std::optional<double> gttc;
  std::optional<double> pret;

  bool operator==(const RiskMeasureSet&) const = default;
};

struct BBox3D {
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::array<double, 3> extent{0.0, 0.0, 0.0};  // length, width, height
  double heading = 0.0;                         // yaw, radians

  bool operator==(const BBox3D&) const = default;
};

struct LanePosition {
  std::string road_id;
  int lane_id = 0;
  double s = 0.0;  // arc length along the lane
  double t = 0.0;  // signed lateral offset from the lane centerline

  bool operator==(const LanePosition&) const = default;
};

struct FrameState {
  BBox3D bbox3d;
  std::optional<LanePosition> lane_position;
  std::array<double, 2> world_position{0.0, 0.0};
  double speed = 0.0;
  std::optional<double> acceleration;
  std::optional<double> yaw_rate;
  std::optional<double> pitch;
  std::optional<double> roll;
  std::optional<std::map<std::string, bool>> light_states;
  std::optional<double> speed_limit;
  std::optional<TrafficCondition> traffic_condition;
  // Named per-participant risk annotations, e.g. required deceleration.
  std::optional<std::map<std::string, double>> behavior_risk;
  // Keyed by the other participant's id; never by the own id.
  std::map<std::string, RiskMeasureSet> pairwise_risk;

  bool operator==(const FrameState&) const = default;
};

using Polygon2D = std::vector<std::array<double, 2>>;

struct Frame {
  std::int64_t frame_id = 0;
  double timestamp = 0.0;  // seconds, relative to scenario start
  std::map<std::string, FrameState> states;  // participant_id -> state
  std::vector<Polygon2D> unobserved_areas;

  bool operator==(const Frame&) const = default;
};

// ---------------------------------------------------------------------------
// Metadata, coordinate systems, resources, ontologies
// ---------------------------------------------------------------------------

struct ScenarioMetadata {
  std::string creation_time;  // ISO 8601 UTC, e.g. "2026-03-01T12:00:00Z"
  AcquisitionMethod acquisition_method = AcquisitionMethod::kSynthetic;
  std::string data_use_restrictions;
  Origin origin = Origin::kOriginal;
  Area area = Area::kHighway;
  double scenario_duration = 0.0;  // seconds
  // quantity name -> [min, max] actually spanned by the data.
  std::map<std::string, std::array<double, 2>> dynamic_ranges;

  bool operator==(const ScenarioMetadata&) const = default;
};

struct RigidTransform2D {
  double rotation = 0.0;  // radians
  std::array<double, 2> translation{0.0, 0.0};

  bool operator==(const RigidTransform2D&) const = default;
};

struct CoordinateSystem {
  CoordinateSystemType type = CoordinateSystemType::kLocal;
  // Absent parent means the system is anchored to the world frame.
  std::optional<std::string> parent;
  RigidTransform2D transform_to_parent;

  bool operator==(const CoordinateSystem&) const = default;
};

struct CoordinateSystemSet {
  int world_epsg = 0;
  std::array<double, 2> local_origin{0.0, 0.0};  // lon, lat of the local frame
  std::map<std::string, CoordinateSystem> systems;

  bool operator==(const CoordinateSystemSet&) const = default;
};

struct ResourceLinks {
  // Relative path to the road network description, if any.
  std::optional<std::string> opendrive_path;

  bool operator==(const ResourceLinks&) const = default;
};

struct OntologyRef {
  std::optional<std::string> uri;
  std::optional<std::vector<std::string>> boundaries;

  bool operator==(const OntologyRef&) const = default;
};

// ---------------------------------------------------------------------------
// Scenario root
// ---------------------------------------------------------------------------

struct Scenario {
  std::string scenario_id;
  Context context;
  std::map<std::string, Participant> participants;  // keyed by participant_id
  std::vector<EventRecord> events;
  std::vector<Frame> frames;  // ordered by frame_id
  ScenarioMetadata metadata;
  CoordinateSystemSet coordinate_systems;
  ResourceLinks resources;
  // Keyed by ontology id; absent when the scenario references no ontologies.
  std::optional<std::map<std::string, OntologyRef>> ontology_refs;

  bool operator==(const Scenario&) const = default;
};

}  // namespace aveas::model

#endif  // AVEAS_MODEL_TYPES_HPP_
