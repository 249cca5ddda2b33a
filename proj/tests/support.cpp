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

#include "support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "aveas/errors.hpp"
#include "aveas/io/openlabel.hpp"
#include "aveas/util/vec2.hpp"

namespace testsupport {

namespace model = aveas::model;
using aveas::util::Vec2;

// ---------------------------------------------------------------------------
// TestRng
// ---------------------------------------------------------------------------

std::uint64_t TestRng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double TestRng::u01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double TestRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * u01();
}

int TestRng::uniform_int(int lo, int hi) {
  return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

bool TestRng::chance(double p) { return u01() < p; }

double TestRng::normal(double mean, double sd) {
  if (have_spare_) {
    have_spare_ = false;
    return mean + sd * spare_;
  }
  double u = 0.0;
  do {
    u = u01();
  } while (u <= 0.0);
  const double v = u01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double a = 2.0 * 3.14159265358979323846 * v;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return mean + sd * r * std::cos(a);
}

// ---------------------------------------------------------------------------
// TempDir
// ---------------------------------------------------------------------------

namespace {

std::atomic<std::uint64_t> g_tempdir_counter{0};

}  // namespace

TempDir::TempDir() {
  const std::uint64_t n = g_tempdir_counter.fetch_add(1);
  path_ = std::filesystem::temp_directory_path() /
          ("aveas-test-" + std::to_string(::getpid()) + "-" +
           std::to_string(n));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

namespace {

constexpr double kCarLength = 4.5;
constexpr double kCarWidth = 1.8;
constexpr double kCarHeight = 1.5;

model::CoordinateSystemSet world_only_systems() {
  model::CoordinateSystemSet cs;
  cs.world_epsg = 25832;
  cs.local_origin = {9.1, 48.7};
  cs.systems["world"].type = model::CoordinateSystemType::kStatic;
  return cs;
}

model::FrameState car_state(double x, double y, double heading, double speed) {
  model::FrameState st;
  st.bbox3d.center = {x, y, kCarHeight / 2.0};
  st.bbox3d.extent = {kCarLength, kCarWidth, kCarHeight};
  st.bbox3d.heading = heading;
  st.world_position = {x, y};
  st.speed = speed;
  return st;
}

model::Participant car_participant(const std::string& id, double v_min,
                                   double v_max) {
  model::Participant p;
  p.participant_id = id;
  p.road_user_type = model::RoadUserType::kCar;
  p.dimensions = {kCarLength, kCarWidth, kCarHeight};
  p.speed_range = {v_min, v_max};
  return p;
}

}  // namespace

model::Scenario minimal_scenario() {
  model::Scenario s;
  s.scenario_id = "minimal-0";
  s.context = {model::Weather::kClear, model::Lighting::kDay,
               model::TrafficCondition::kFreeFlow, model::RoadSurface::kDry};
  s.participants["p0"] = car_participant("p0", 10.0, 10.0);
  for (int k = 0; k < 3; ++k) {
    model::Frame f;
    f.frame_id = k;
    f.timestamp = 0.1 * k;
    f.states["p0"] = car_state(10.0 * f.timestamp, 0.0, 0.0, 10.0);
    s.frames.push_back(std::move(f));
  }
  s.metadata.creation_time = "2026-02-01T00:00:00Z";
  s.metadata.acquisition_method = model::AcquisitionMethod::kVehicleSensors;
  s.metadata.data_use_restrictions = "none";
  s.metadata.origin = model::Origin::kOriginal;
  s.metadata.area = model::Area::kUrban;
  s.metadata.scenario_duration =
      s.frames.back().timestamp - s.frames.front().timestamp;
  s.coordinate_systems = world_only_systems();
  return s;
}

model::Scenario following_scenario(int n_frames, double gap, double v_lead,
                                   double v_ego) {
  model::Scenario s;
  s.scenario_id = "following-0";
  s.context = {model::Weather::kClear, model::Lighting::kDay,
               model::TrafficCondition::kDense, model::RoadSurface::kDry};
  s.participants["ego"] = car_participant("ego", v_ego, v_ego);
  s.participants["lead"] = car_participant("lead", v_lead, v_lead);
  const double d0 = gap + kCarLength;  // center-to-center at t = 0
  for (int k = 0; k < n_frames; ++k) {
    model::Frame f;
    f.frame_id = k;
    f.timestamp = 0.1 * k;
    const double ego_x = v_ego * f.timestamp;
    const double lead_x = d0 + v_lead * f.timestamp;
    f.states["ego"] = car_state(ego_x, 1.75, 0.0, v_ego);
    f.states["ego"].lane_position = model::LanePosition{"road_0", 0, ego_x, 0.0};
    f.states["lead"] = car_state(lead_x, 1.75, 0.0, v_lead);
    f.states["lead"].lane_position =
        model::LanePosition{"road_0", 0, lead_x, 0.0};
    s.frames.push_back(std::move(f));
  }
  s.metadata.creation_time = "2026-02-01T00:00:00Z";
  s.metadata.acquisition_method = model::AcquisitionMethod::kStationaryLidar;
  s.metadata.data_use_restrictions = "research";
  s.metadata.origin = model::Origin::kReconstructed;
  s.metadata.area = model::Area::kHighway;
  s.metadata.scenario_duration =
      s.frames.back().timestamp - s.frames.front().timestamp;
  s.metadata.dynamic_ranges["speed"] = {std::min(v_ego, v_lead),
                                        std::max(v_ego, v_lead)};
  s.coordinate_systems = world_only_systems();
  return s;
}

model::Scenario cutin_base_scenario() {
  model::Scenario s;
  s.scenario_id = "cutin-base-0";
  s.context = {model::Weather::kClear, model::Lighting::kDay,
               model::TrafficCondition::kDense, model::RoadSurface::kDry};
  s.participants["appr"] = car_participant("appr", 36.0, 36.0);
  s.participants["cutter"] = car_participant("cutter", 28.0, 28.0);
  s.participants["lead"] = car_participant("lead", 27.0, 27.0);

  // Lane centers: lane 0 at y = 1.75, lane 1 at y = 5.25. The cutter slides
  // between them over t in [0.5, 1.5]; its lane id switches once it crosses
  // the lane boundary at y = 3.5 (t = 1.0). The slow ramp keeps the scalar
  // speed consistent with the position differences.
  for (int k = 0; k <= 20; ++k) {
    const double t = 0.1 * k;
    model::Frame f;
    f.frame_id = k;
    f.timestamp = t;

    f.states["appr"] = car_state(10.0 + 36.0 * t, 1.75, 0.0, 36.0);
    f.states["appr"].lane_position =
        model::LanePosition{"road_0", 0, 10.0 + 36.0 * t, 0.0};

    double cutter_y = 5.25;
    if (t >= 1.5) {
      cutter_y = 1.75;
    } else if (t > 0.5) {
      cutter_y = 5.25 - 3.5 * (t - 0.5);
    }
    const int cutter_lane = cutter_y > 3.5 ? 1 : 0;
    const double lane_center = cutter_lane == 1 ? 5.25 : 1.75;
    f.states["cutter"] = car_state(30.0 + 28.0 * t, cutter_y, 0.0, 28.0);
    f.states["cutter"].lane_position = model::LanePosition{
        "road_0", cutter_lane, 30.0 + 28.0 * t, cutter_y - lane_center};

    f.states["lead"] = car_state(90.0 + 27.0 * t, 1.75, 0.0, 27.0);
    f.states["lead"].lane_position =
        model::LanePosition{"road_0", 0, 90.0 + 27.0 * t, 0.0};

    s.frames.push_back(std::move(f));
  }

  model::EventRecord ev;
  ev.event_id = "lc-0";
  ev.event_type = model::EventType::kLaneChange;
  ev.t_start = 0.4;
  ev.t_end = 1.2;
  ev.involved["appr"] = std::nullopt;
  ev.involved["cutter"] = std::make_optional<std::string>("cuts_in");
  s.events.push_back(std::move(ev));

  s.metadata.creation_time = "2026-02-01T00:00:00Z";
  s.metadata.acquisition_method = model::AcquisitionMethod::kAerialRgbVideo;
  s.metadata.data_use_restrictions = "research-only";
  s.metadata.origin = model::Origin::kReconstructed;
  s.metadata.area = model::Area::kHighway;
  s.metadata.scenario_duration =
      s.frames.back().timestamp - s.frames.front().timestamp;
  s.metadata.dynamic_ranges["speed"] = {27.0, 36.0};
  s.coordinate_systems = world_only_systems();
  return s;
}

model::Scenario rich_scenario() {
  model::Scenario s;
  s.scenario_id = "rich-0";
  s.context = {model::Weather::kRain, model::Lighting::kTwilight,
               model::TrafficCondition::kDense, model::RoadSurface::kWet};

  model::Participant veh = car_participant("veh0", 5.0, 5.0);
  veh.collision_dynamics = nlohmann::json{
      {"impact_speed", 3.2},
      {"contact_points", nlohmann::json::array({{0.1, 0.2}, {0.3, 0.4}})},
      {"severity", "minor"},
      {"airbag", true},
      {"n_contacts", 2},
  };
  veh.steering_wheel_positions =
      nlohmann::json::array({{0.0, 0.01}, {0.5, -0.02}});
  s.participants["veh0"] = std::move(veh);

  model::Participant walker;
  walker.participant_id = "walker";
  walker.road_user_type = model::RoadUserType::kPedestrian;
  walker.dimensions = {0.5, 0.5, std::nullopt};  // aerial capture, no height
  walker.speed_range = {1.2, 1.2};
  s.participants["walker"] = std::move(walker);

  const double kPi = 3.14159265358979323846;
  for (int k = 0; k < 4; ++k) {
    const double t = 0.5 * k;
    model::Frame f;
    f.frame_id = k;
    f.timestamp = t;

    model::FrameState v = car_state(5.0 * t, 0.0, 0.0, 5.0);
    v.lane_position = model::LanePosition{"road_0", 0, 5.0 * t, -0.1};
    v.acceleration = 0.0;
    if (k == 0) {
      v.light_states = std::map<std::string, bool>{{"brake_light", true},
                                                   {"indicator_left", false}};
    }
    if (k == 1) {
      v.yaw_rate = 0.01;
      v.pitch = -0.002;
      v.roll = 0.0005;
    }
    if (k == 2) {
      v.behavior_risk =
          std::map<std::string, double>{{"required_deceleration", 1.25}};
    }
    v.speed_limit = 13.9;
    v.traffic_condition = model::TrafficCondition::kDense;

    model::FrameState w;
    w.bbox3d.center = {20.0 - 1.2 * t, 4.0, 0.9};
    w.bbox3d.extent = {0.5, 0.5, 1.8};
    w.bbox3d.heading = kPi;
    w.world_position = {20.0 - 1.2 * t, 4.0};
    w.speed = 1.2;

    if (k == 1) {
      v.pairwise_risk["walker"] = {std::nullopt, 7.5, std::nullopt, 2.5,
                                   std::nullopt};
      w.pairwise_risk["veh0"] = {std::nullopt, std::nullopt, std::nullopt,
                                 std::nullopt, 0.75};
    }
    if (k == 2) {
      v.pairwise_risk["walker"] = {1.5, 7.0, 2.0, 1.9, 0.6};
    }
    if (k == 3) {
      f.unobserved_areas.push_back({{50.0, 0.0}, {60.0, 0.0}, {55.0, 5.0}});
      f.unobserved_areas.push_back(
          {{-10.0, -10.0}, {-5.0, -10.0}, {-5.0, -5.0}, {-10.0, -5.0}});
    }
    f.states["veh0"] = std::move(v);
    f.states["walker"] = std::move(w);
    s.frames.push_back(std::move(f));
  }

  model::EventRecord braking;
  braking.event_id = "ev-brake";
  braking.event_type = model::EventType::kHardBraking;
  braking.t_start = 0.5;
  braking.t_end = 1.0;
  braking.involved["veh0"] = std::make_optional<std::string>("brakes");
  s.events.push_back(std::move(braking));

  model::EventRecord untyped;
  untyped.event_id = "ev-untyped";
  untyped.t_start = 0.0;
  untyped.t_end = 1.5;
  untyped.involved["walker"] = std::nullopt;
  s.events.push_back(std::move(untyped));

  s.metadata.creation_time = "2026-02-01T06:30:00.250Z";
  s.metadata.acquisition_method = model::AcquisitionMethod::kAerialRgbVideo;
  s.metadata.data_use_restrictions = "cc-by-4.0 attribution required";
  s.metadata.origin = model::Origin::kReconstructed;
  s.metadata.area = model::Area::kUrban;
  s.metadata.scenario_duration =
      s.frames.back().timestamp - s.frames.front().timestamp;
  s.metadata.dynamic_ranges["speed"] = {1.2, 5.0};
  s.metadata.dynamic_ranges["acceleration"] = {0.0, 0.0};
  s.metadata.dynamic_ranges["yaw_rate"] = {-1.0, 1.0};

  s.coordinate_systems.world_epsg = 25832;
  s.coordinate_systems.local_origin = {9.1, 48.7};
  s.coordinate_systems.systems["world"].type =
      model::CoordinateSystemType::kStatic;
  model::CoordinateSystem local;
  local.type = model::CoordinateSystemType::kLocal;
  local.parent = "world";
  local.transform_to_parent = {0.1, {10.0, -3.0}};
  s.coordinate_systems.systems["local"] = std::move(local);
  model::CoordinateSystem cam;
  cam.type = model::CoordinateSystemType::kSensor;
  cam.parent = "local";
  cam.transform_to_parent = {-0.05, {1.2, 0.4}};
  s.coordinate_systems.systems["cam0"] = std::move(cam);

  s.resources.opendrive_path = "maps/site.xodr";

  std::map<std::string, model::OntologyRef> onts;
  onts["core"].uri = "https://example.org/ontology/core";
  onts["ext"].boundaries =
      std::vector<std::string>{"lane_marking", "vehicle", "vru"};
  onts["both"].uri = "https://example.org/ontology/ext";
  onts["both"].boundaries = std::vector<std::string>{"signal"};
  s.ontology_refs = std::move(onts);
  return s;
}

namespace {

const char* kRestrictionPool[] = {"none", "research-only", "cc-by-4.0",
                                  "internal use only", "share-alike"};

model::RoadUserType random_user_type(TestRng& rng) {
  static const model::RoadUserType types[] = {
      model::RoadUserType::kCar,        model::RoadUserType::kTruck,
      model::RoadUserType::kBus,        model::RoadUserType::kMotorcycle,
      model::RoadUserType::kBicycle,    model::RoadUserType::kPedestrian,
      model::RoadUserType::kOther,
  };
  return types[rng.uniform_int(0, 6)];
}

model::EventType random_event_type(TestRng& rng) {
  static const model::EventType types[] = {
      model::EventType::kLaneChange, model::EventType::kCutIn,
      model::EventType::kHardBraking, model::EventType::kNearMiss,
      model::EventType::kCollision,   model::EventType::kHandover,
      model::EventType::kOther,
  };
  return types[rng.uniform_int(0, 6)];
}

}  // namespace

model::Scenario random_scenario(TestRng& rng, int index) {
  model::Scenario s;
  s.scenario_id = "gen-" + std::to_string(index);

  s.context.weather = static_cast<model::Weather>(rng.uniform_int(0, 4));
  s.context.lighting = static_cast<model::Lighting>(rng.uniform_int(0, 4));
  s.context.traffic_condition =
      static_cast<model::TrafficCondition>(rng.uniform_int(0, 3));
  s.context.road_surface =
      static_cast<model::RoadSurface>(rng.uniform_int(0, 3));

  const int n_participants = rng.uniform_int(1, 4);
  struct Motion {
    std::string id;
    Vec2 p0;
    Vec2 v;
    double speed;
    double heading;
    model::Dimensions dims;
  };
  std::vector<Motion> motions;
  for (int i = 0; i < n_participants; ++i) {
    Motion m;
    m.id = "p" + std::to_string(i);
    m.speed = rng.uniform(0.0, 40.0);
    m.heading = rng.uniform(-3.1, 3.1);
    m.p0 = {rng.uniform(-200.0, 200.0), rng.uniform(-50.0, 50.0)};
    m.v = aveas::util::unit_from_heading(m.heading) * m.speed;
    m.dims.length = rng.uniform(0.4, 16.0);
    m.dims.width = rng.uniform(0.4, 2.6);
    if (!rng.chance(0.3)) m.dims.height = rng.uniform(1.0, 4.0);

    model::Participant p;
    p.participant_id = m.id;
    p.road_user_type = random_user_type(rng);
    p.dimensions = m.dims;
    p.speed_range = {m.speed, m.speed};
    if (rng.chance(0.25)) {
      p.collision_dynamics =
          nlohmann::json{{"impact_speed", rng.uniform(0.0, 20.0)},
                         {"note", "estimated"}};
    }
    if (rng.chance(0.25)) {
      p.steering_wheel_positions = nlohmann::json::array(
          {{0.0, rng.uniform(-0.3, 0.3)}, {1.0, rng.uniform(-0.3, 0.3)}});
    }
    s.participants[m.id] = std::move(p);
    motions.push_back(std::move(m));
  }

  const int n_frames = rng.uniform_int(3, 8);
  const double dt = rng.chance(0.5) ? 0.1 : 0.25;
  // At most one participant may sit out one middle frame.
  const int absent_participant =
      n_participants > 1 && rng.chance(0.3) ? rng.uniform_int(0, n_participants - 1) : -1;
  const int absent_frame = rng.uniform_int(1, n_frames - 2);

  bool any_acceleration = false;
  for (int k = 0; k < n_frames; ++k) {
    const double t = dt * k;
    model::Frame f;
    f.frame_id = k;
    f.timestamp = t;
    for (int i = 0; i < n_participants; ++i) {
      if (i == absent_participant && k == absent_frame) continue;
      const Motion& m = motions[i];
      model::FrameState st;
      const Vec2 pos = m.p0 + m.v * t;
      const double h = m.dims.height.value_or(1.6);
      st.bbox3d.center = {pos.x, pos.y, h / 2.0};
      st.bbox3d.extent = {m.dims.length, m.dims.width, h};
      st.bbox3d.heading = m.heading;
      st.world_position = {pos.x, pos.y};
      st.speed = m.speed;
      if (rng.chance(0.4)) {
        st.lane_position = model::LanePosition{
            "road_0", rng.uniform_int(0, 2), rng.uniform(0.0, 500.0),
            rng.uniform(-1.0, 1.0)};
      }
      if (rng.chance(0.4)) {
        st.acceleration = 0.0;
        any_acceleration = true;
      }
      if (rng.chance(0.2)) st.yaw_rate = rng.uniform(-0.5, 0.5);
      if (rng.chance(0.15)) st.pitch = rng.uniform(-0.1, 0.1);
      if (rng.chance(0.15)) st.roll = rng.uniform(-0.1, 0.1);
      if (rng.chance(0.3)) {
        st.light_states = std::map<std::string, bool>{
            {"brake_light", rng.chance(0.5)},
            {"indicator_right", rng.chance(0.5)}};
      }
      if (rng.chance(0.3)) st.speed_limit = rng.uniform(8.0, 36.0);
      if (rng.chance(0.3)) {
        st.traffic_condition =
            static_cast<model::TrafficCondition>(rng.uniform_int(0, 3));
      }
      if (rng.chance(0.2)) {
        st.behavior_risk =
            std::map<std::string, double>{{"attention", rng.u01()}};
      }
      f.states[m.id] = std::move(st);
    }
    // Risk annotations toward another participant present in this frame.
    if (f.states.size() >= 2 && rng.chance(0.5)) {
      const int a = rng.uniform_int(0, n_participants - 1);
      const int b = rng.uniform_int(0, n_participants - 1);
      const std::string& ida = motions[a].id;
      const std::string& idb = motions[b].id;
      if (a != b && f.states.count(ida) && f.states.count(idb)) {
        model::RiskMeasureSet risk;
        if (rng.chance(0.6)) risk.thw = rng.uniform(0.0, 10.0);
        if (rng.chance(0.6)) risk.dhw = rng.uniform(0.0, 200.0);
        if (rng.chance(0.6)) risk.ttc = rng.uniform(0.0, 30.0);
        if (rng.chance(0.6)) risk.gttc = rng.uniform(0.0, 30.0);
        if (rng.chance(0.6)) risk.pret = rng.uniform(0.0, 10.0);
        f.states[ida].pairwise_risk[idb] = risk;
      }
    }
    if (rng.chance(0.25)) {
      const double x = rng.uniform(-100.0, 100.0);
      const double y = rng.uniform(-100.0, 100.0);
      const double w = rng.uniform(1.0, 30.0);
      f.unobserved_areas.push_back({{x, y}, {x + w, y}, {x + w / 2.0, y + w}});
    }
    s.frames.push_back(std::move(f));
  }
  const double t_last = s.frames.back().timestamp;

  const int n_events = rng.uniform_int(0, 2);
  for (int e = 0; e < n_events; ++e) {
    model::EventRecord ev;
    ev.event_id = "ev-" + std::to_string(e);
    if (rng.chance(0.7)) ev.event_type = random_event_type(rng);
    ev.t_start = rng.uniform(0.0, t_last);
    ev.t_end = rng.uniform(ev.t_start, t_last);
    const int n_involved = rng.uniform_int(1, n_participants);
    for (int i = 0; i < n_involved; ++i) {
      const std::string& pid = motions[rng.uniform_int(0, n_participants - 1)].id;
      if (rng.chance(0.5)) {
        ev.involved[pid] = std::make_optional<std::string>("crossing");
      } else {
        ev.involved[pid] = std::nullopt;
      }
    }
    s.events.push_back(std::move(ev));
  }

  s.metadata.creation_time =
      rng.chance(0.5) ? "2026-02-01T00:00:00Z" : "2026-02-01T12:34:56.125Z";
  if (rng.chance(0.3)) {
    s.metadata.acquisition_method = model::AcquisitionMethod::kSynthetic;
    s.metadata.origin = model::Origin::kSampled;
  } else {
    s.metadata.acquisition_method =
        static_cast<model::AcquisitionMethod>(rng.uniform_int(0, 3));
    s.metadata.origin = rng.chance(0.5) ? model::Origin::kReconstructed
                                        : model::Origin::kOriginal;
  }
  s.metadata.data_use_restrictions = kRestrictionPool[rng.uniform_int(0, 4)];
  s.metadata.area = static_cast<model::Area>(rng.uniform_int(0, 2));
  s.metadata.scenario_duration = t_last - s.frames.front().timestamp;
  if (rng.chance(0.8)) {
    double lo = motions[0].speed;
    double hi = motions[0].speed;
    for (const Motion& m : motions) {
      lo = std::min(lo, m.speed);
      hi = std::max(hi, m.speed);
    }
    s.metadata.dynamic_ranges["speed"] = {lo, hi};
  }
  if (any_acceleration) s.metadata.dynamic_ranges["acceleration"] = {0.0, 0.0};
  if (rng.chance(0.3)) {
    s.metadata.dynamic_ranges["jerk"] = {-2.0, 2.0};
  }

  s.coordinate_systems = world_only_systems();
  s.coordinate_systems.world_epsg = rng.chance(0.5) ? 25832 : 32632;
  s.coordinate_systems.local_origin = {rng.uniform(-10.0, 10.0),
                                       rng.uniform(45.0, 55.0)};
  if (rng.chance(0.5)) {
    model::CoordinateSystem local;
    local.type = model::CoordinateSystemType::kLocal;
    local.parent = "world";
    local.transform_to_parent = {rng.uniform(-3.0, 3.0),
                                 {rng.uniform(-50.0, 50.0), rng.uniform(-50.0, 50.0)}};
    s.coordinate_systems.systems["local"] = std::move(local);
    if (rng.chance(0.5)) {
      model::CoordinateSystem sensor;
      sensor.type = model::CoordinateSystemType::kSensor;
      sensor.parent = "local";
      sensor.transform_to_parent = {rng.uniform(-3.0, 3.0), {0.0, 1.5}};
      s.coordinate_systems.systems["lidar0"] = std::move(sensor);
    }
  }

  if (rng.chance(0.4)) {
    s.resources.opendrive_path = "maps/r" + std::to_string(index) + ".xodr";
  }
  if (rng.chance(0.4)) {
    std::map<std::string, model::OntologyRef> onts;
    onts["core"].uri = "https://example.org/ont/core";
    if (rng.chance(0.5)) {
      onts["ext"].boundaries = std::vector<std::string>{"lane", "vehicle"};
    }
    s.ontology_refs = std::move(onts);
  }
  return s;
}

// ---------------------------------------------------------------------------
// gttc stepping oracle
// ---------------------------------------------------------------------------

namespace {

struct Corners {
  Vec2 pts[4];
};

Corners corners_at(const aveas::metrics::Body& b, double t) {
  const Vec2 c = b.position + b.velocity * t;
  const Vec2 u = aveas::util::unit_from_heading(b.heading) * (b.length * 0.5);
  const Vec2 v =
      aveas::util::unit_from_heading(b.heading).perp() * (b.width * 0.5);
  return {{c + u + v, c + u - v, c - u + v, c - u - v}};
}

void project(const Corners& c, Vec2 axis, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const Vec2& p : c.pts) {
    const double d = p.dot(axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
}

bool rectangles_overlap(const Corners& a, const Corners& b,
                        const Vec2 axes[4]) {
  for (int i = 0; i < 4; ++i) {
    double alo, ahi, blo, bhi;
    project(a, axes[i], alo, ahi);
    project(b, axes[i], blo, bhi);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

}  // namespace

std::optional<double> gttc_stepping_oracle(
    const aveas::metrics::KinematicPair& pair, double horizon, double dt) {
  const Vec2 ue = aveas::util::unit_from_heading(pair.ego.heading);
  const Vec2 ut = aveas::util::unit_from_heading(pair.target.heading);
  const Vec2 axes[4] = {ue, ue.perp(), ut, ut.perp()};
  const long n_steps = std::lround(horizon / dt);
  for (long k = 0; k <= n_steps; ++k) {
    const double t = dt * static_cast<double>(k);
    if (rectangles_overlap(corners_at(pair.ego, t), corners_at(pair.target, t),
                           axes)) {
      return t;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Store brute force
// ---------------------------------------------------------------------------

std::vector<std::string> brute_force_query(const std::filesystem::path& root,
                                           const aveas::store::QueryFilter& f) {
  std::vector<std::string> ids;
  const std::string ext = ".aveas.json";
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= ext.size() ||
        name.compare(name.size() - ext.size(), ext.size(), ext) != 0) {
      continue;
    }
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    model::Scenario sc;
    try {
      sc = aveas::io::parse(buf.str());
    } catch (const aveas::Error&) {
      continue;  // unindexable files never match
    }
    const model::ScenarioMetadata& md = sc.metadata;

    if (!f.areas.empty() && !f.areas.count(md.area)) continue;
    if (!f.acquisition_methods.empty() &&
        !f.acquisition_methods.count(md.acquisition_method)) {
      continue;
    }
    if (!f.origins.empty() && !f.origins.count(md.origin)) continue;
    if (!f.event_types.empty()) {
      bool any = false;
      for (const auto& ev : sc.events) {
        if (ev.event_type && f.event_types.count(*ev.event_type)) any = true;
      }
      if (!any) continue;
    }
    if (f.duration_range &&
        (md.scenario_duration < (*f.duration_range)[0] ||
         md.scenario_duration > (*f.duration_range)[1])) {
      continue;
    }
    if (f.dynamic_range) {
      auto it = md.dynamic_ranges.find(f.dynamic_range->quantity);
      if (it == md.dynamic_ranges.end()) continue;
      if (it->second[0] > f.dynamic_range->range[1] ||
          f.dynamic_range->range[0] > it->second[1]) {
        continue;
      }
    }
    if (f.restrictions_contain &&
        md.data_use_restrictions.find(*f.restrictions_contain) ==
            std::string::npos) {
      continue;
    }
    ids.push_back(sc.scenario_id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

aveas::store::QueryFilter random_filter(TestRng& rng) {
  aveas::store::QueryFilter f;
  if (rng.chance(0.35)) {
    const int n = rng.uniform_int(1, 2);
    for (int i = 0; i < n; ++i) {
      f.areas.insert(static_cast<model::Area>(rng.uniform_int(0, 2)));
    }
  }
  if (rng.chance(0.35)) {
    const int n = rng.uniform_int(1, 2);
    for (int i = 0; i < n; ++i) {
      f.acquisition_methods.insert(
          static_cast<model::AcquisitionMethod>(rng.uniform_int(0, 4)));
    }
  }
  if (rng.chance(0.35)) {
    f.origins.insert(static_cast<model::Origin>(rng.uniform_int(0, 2)));
  }
  if (rng.chance(0.35)) {
    const int n = rng.uniform_int(1, 3);
    for (int i = 0; i < n; ++i) f.event_types.insert(random_event_type(rng));
  }
  if (rng.chance(0.35)) {
    const double lo = rng.uniform(0.0, 2.0);
    f.duration_range = {{lo, lo + rng.uniform(0.0, 3.0)}};
  }
  if (rng.chance(0.35)) {
    static const char* quantities[] = {"speed", "acceleration", "jerk",
                                       "curvature"};
    aveas::store::QueryFilter::DynamicRangeFilter d;
    d.quantity = quantities[rng.uniform_int(0, 3)];
    const double lo = rng.uniform(-5.0, 30.0);
    d.range = {lo, lo + rng.uniform(0.0, 25.0)};
    f.dynamic_range = d;
  }
  if (rng.chance(0.35)) {
    static const char* needles[] = {"none", "research", "cc-by", "internal",
                                    "xyzzy"};
    f.restrictions_contain = needles[rng.uniform_int(0, 4)];
  }
  return f;
}

// ---------------------------------------------------------------------------
// CLI harness and goldens
// ---------------------------------------------------------------------------

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CliResult run_cli(const std::string& args) {
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t n = counter.fetch_add(1);
  const auto base = std::filesystem::temp_directory_path() /
                    ("aveas-cli-" + std::to_string(::getpid()) + "-" +
                     std::to_string(n));
  const std::string out_file = base.string() + ".out";
  const std::string err_file = base.string() + ".err";
  const std::string cmd = std::string(AVEAS_TESTS_CLI_PATH) + " " + args +
                          " >" + out_file + " 2>" + err_file;
  const int status = std::system(cmd.c_str());

  CliResult result;
  if (status != -1 && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  std::error_code ec;
  std::filesystem::remove(out_file, ec);
  std::filesystem::remove(err_file, ec);
  return result;
}

std::filesystem::path golden_path(const std::string& rel) {
  return std::filesystem::path(AVEAS_TESTS_GOLDEN_DIR) / rel;
}

bool matches_golden(const std::string& rel, const std::string& actual) {
  const auto path = golden_path(rel);
  if (std::getenv("AVEAS_UPDATE_GOLDEN") != nullptr) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << actual;
    return true;
  }
  if (!std::filesystem::exists(path)) {
    std::fprintf(stderr, "golden file missing: %s\n", path.string().c_str());
    return false;
  }
  const std::string expected = slurp(path);
  if (expected != actual) {
    std::fprintf(stderr, "golden mismatch: %s (expected %zu bytes, got %zu)\n",
                 path.string().c_str(), expected.size(), actual.size());
    return false;
  }
  return true;
}

}  // namespace testsupport
