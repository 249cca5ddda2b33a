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

#include "aveas/model/validate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace aveas::model {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

// Accepts "YYYY-MM-DDTHH:MM:SSZ" with optional fractional seconds.
bool is_iso8601_utc(std::string_view s) {
  if (s.size() < 20 || s.back() != 'Z') return false;
  if (s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':') {
    return false;
  }
  if (!all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) ||
      !all_digits(s.substr(8, 2)) || !all_digits(s.substr(11, 2)) ||
      !all_digits(s.substr(14, 2)) || !all_digits(s.substr(17, 2))) {
    return false;
  }
  std::string_view rest = s.substr(19, s.size() - 20);
  if (rest.empty()) return true;
  return rest.size() >= 2 && rest[0] == '.' && all_digits(rest.substr(1));
}

struct Seg {
  double ax, ay, bx, by;
};

int orientation(double px, double py, double qx, double qy, double rx,
                double ry) {
  const double v = (qx - px) * (ry - py) - (qy - py) * (rx - px);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(double px, double py, double qx, double qy, double rx,
                double ry) {
  return std::min(px, rx) <= qx && qx <= std::max(px, rx) &&
         std::min(py, ry) <= qy && qy <= std::max(py, ry);
}

bool segments_intersect(const Seg& s1, const Seg& s2) {
  const int o1 = orientation(s1.ax, s1.ay, s1.bx, s1.by, s2.ax, s2.ay);
  const int o2 = orientation(s1.ax, s1.ay, s1.bx, s1.by, s2.bx, s2.by);
  const int o3 = orientation(s2.ax, s2.ay, s2.bx, s2.by, s1.ax, s1.ay);
  const int o4 = orientation(s2.ax, s2.ay, s2.bx, s2.by, s1.bx, s1.by);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(s1.ax, s1.ay, s2.ax, s2.ay, s1.bx, s1.by))
    return true;
  if (o2 == 0 && on_segment(s1.ax, s1.ay, s2.bx, s2.by, s1.bx, s1.by))
    return true;
  if (o3 == 0 && on_segment(s2.ax, s2.ay, s1.ax, s1.ay, s2.bx, s2.by))
    return true;
  if (o4 == 0 && on_segment(s2.ax, s2.ay, s1.bx, s1.by, s2.bx, s2.by))
    return true;
  return false;
}

bool polygon_is_simple(const Polygon2D& poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Seg si{poly[i][0], poly[i][1], poly[(i + 1) % n][0],
                 poly[(i + 1) % n][1]};
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // closing edge shares a vertex
      const Seg sj{poly[j][0], poly[j][1], poly[(j + 1) % n][0],
                   poly[(j + 1) % n][1]};
      if (segments_intersect(si, sj)) return true;
    }
  }
  return false;
}

class Checker {
 public:
  explicit Checker(const Scenario& s) : s_(s) {}

  ValidationReport run() {
    check_metadata();
    check_context_and_participants();
    check_coordinate_systems();
    check_resources_and_ontologies();
    check_frames();
    check_events();
    check_speed_consistency();
    return std::move(report_);
  }

 private:
  void err(std::string path, std::string msg) {
    report_.add_error(std::move(path), std::move(msg));
  }
  void warn(std::string path, std::string msg) {
    report_.add_warning(std::move(path), std::move(msg));
  }

  void fin(double v, const std::string& path) {
    if (!std::isfinite(v)) err(path, "value must be finite, got " + fmt(v));
  }

  void check_metadata() {
    const auto& m = s_.metadata;
    if (s_.scenario_id.empty()) {
      err("/openlabel/metadata/scenario_id", "scenario_id must not be empty");
    } else {
      // Ids double as file names in the scenario store.
      const bool safe = std::all_of(
          s_.scenario_id.begin(), s_.scenario_id.end(), [](unsigned char c) {
            return std::isalnum(c) || c == '.' || c == '_' || c == '-';
          });
      if (!safe || s_.scenario_id.front() == '.') {
        err("/openlabel/metadata/scenario_id",
            "scenario_id must match [A-Za-z0-9_-][A-Za-z0-9._-]*");
      }
    }
    if (!is_iso8601_utc(m.creation_time)) {
      err("/openlabel/metadata/creation_time",
          "creation_time must be ISO 8601 UTC like 2026-03-01T12:00:00Z, got "
          "'" + m.creation_time + "'");
    }
    fin(m.scenario_duration, "/openlabel/metadata/scenario_duration");
    if (m.scenario_duration < 0) {
      err("/openlabel/metadata/scenario_duration",
          "scenario_duration must be non-negative");
    }
    for (const auto& [name, range] : m.dynamic_ranges) {
      const std::string path = "/openlabel/metadata/dynamic_ranges/" + name;
      fin(range[0], path);
      fin(range[1], path);
      if (range[0] > range[1]) {
        err(path, "range min " + fmt(range[0]) + " exceeds max " +
                      fmt(range[1]));
      }
    }
    if (m.origin == Origin::kSampled &&
        m.acquisition_method != AcquisitionMethod::kSynthetic) {
      err("/openlabel/metadata/origin",
          "origin 'sampled' requires acquisition_method 'synthetic'");
    }
    if (m.acquisition_method == AcquisitionMethod::kSynthetic &&
        m.origin == Origin::kOriginal) {
      warn("/openlabel/metadata/origin",
           "synthetic acquisition with origin 'original' is suspicious");
    }
  }

  void check_context_and_participants() {
    for (const auto& [pid, p] : s_.participants) {
      const std::string base = "/openlabel/objects/" + pid;
      if (pid.empty()) err("/openlabel/objects", "empty participant id");
      if (p.participant_id != pid) {
        err(base, "participant_id '" + p.participant_id +
                      "' does not match its key '" + pid + "'");
      }
      fin(p.dimensions.length, base + "/dimensions/length");
      fin(p.dimensions.width, base + "/dimensions/width");
      if (p.dimensions.length <= 0 || p.dimensions.width <= 0) {
        err(base + "/dimensions", "length and width must be positive");
      }
      if (p.dimensions.height) {
        fin(*p.dimensions.height, base + "/dimensions/height");
        if (*p.dimensions.height <= 0) {
          err(base + "/dimensions/height", "height must be positive");
        }
      }
      fin(p.speed_range.min, base + "/speed_range");
      fin(p.speed_range.max, base + "/speed_range");
      if (p.speed_range.min < 0 || p.speed_range.min > p.speed_range.max) {
        err(base + "/speed_range",
            "speed_range must satisfy 0 <= min <= max");
      }
      if (p.collision_dynamics && p.collision_dynamics->is_null()) {
        err(base + "/collision_dynamics",
            "optional fields must be omitted, not null");
      }
      if (p.steering_wheel_positions && p.steering_wheel_positions->is_null()) {
        err(base + "/steering_wheel_positions",
            "optional fields must be omitted, not null");
      }
    }
  }

  void check_coordinate_systems() {
    const auto& cs = s_.coordinate_systems;
    if (cs.world_epsg <= 0) {
      err("/openlabel/coordinate_systems/world_epsg",
          "world_epsg must be a positive EPSG code");
    }
    fin(cs.local_origin[0], "/openlabel/coordinate_systems/local_origin");
    fin(cs.local_origin[1], "/openlabel/coordinate_systems/local_origin");
    for (const auto& [name, sys] : cs.systems) {
      const std::string base = "/openlabel/coordinate_systems/systems/" + name;
      if (name.empty()) {
        err("/openlabel/coordinate_systems/systems",
            "empty coordinate system name");
      }
      fin(sys.transform_to_parent.rotation, base + "/transform_to_parent");
      fin(sys.transform_to_parent.translation[0],
          base + "/transform_to_parent");
      fin(sys.transform_to_parent.translation[1],
          base + "/transform_to_parent");
      if (sys.parent && !cs.systems.count(*sys.parent)) {
        err(base + "/parent",
            "parent coordinate system '" + *sys.parent + "' does not exist");
      }
    }
    // Parent chains must terminate at the world frame; a cycle never does.
    for (const auto& [name, sys] : cs.systems) {
      std::unordered_set<std::string> seen{name};
      const CoordinateSystem* cur = &sys;
      while (cur->parent) {
        if (!seen.insert(*cur->parent).second) {
          err("/openlabel/coordinate_systems/systems/" + name,
              "cycle in coordinate system parents");
          break;
        }
        auto it = cs.systems.find(*cur->parent);
        if (it == cs.systems.end()) break;  // dangling parent reported above
        cur = &it->second;
      }
    }
  }

  void check_resources_and_ontologies() {
    if (s_.resources.opendrive_path) {
      const std::string& p = *s_.resources.opendrive_path;
      if (p.empty() || p.front() == '/') {
        err("/openlabel/resources/opendrive",
            "resource paths must be non-empty and relative");
      }
    }
    if (s_.ontology_refs) {
      for (const auto& [oid, ref] : *s_.ontology_refs) {
        if (oid.empty()) {
          err("/openlabel/ontologies", "empty ontology id");
        }
        if (ref.uri && ref.uri->empty()) {
          err("/openlabel/ontologies/" + oid,
              "uri must be omitted or non-empty");
        }
      }
    }
  }

  void check_frames() {
    if (s_.frames.empty()) {
      err("/openlabel/frames", "a scenario must contain at least one frame");
      return;
    }
    for (std::size_t i = 0; i < s_.frames.size(); ++i) {
      const Frame& f = s_.frames[i];
      const std::string fbase = "/openlabel/frames/" + std::to_string(i);
      if (f.frame_id != static_cast<std::int64_t>(i)) {
        err(fbase, "frame ids must be dense starting at 0; expected " +
                       std::to_string(i) + ", got " +
                       std::to_string(f.frame_id));
      }
      fin(f.timestamp, fbase + "/timestamp");
      if (i > 0 && !(f.timestamp > s_.frames[i - 1].timestamp)) {
        err(fbase + "/timestamp", "timestamps must be strictly increasing");
      }
      for (std::size_t a = 0; a < f.unobserved_areas.size(); ++a) {
        const Polygon2D& poly = f.unobserved_areas[a];
        const std::string pbase =
            fbase + "/unobserved_areas/" + std::to_string(a);
        if (poly.size() < 3) {
          err(pbase, "polygon needs at least 3 vertices");
          continue;
        }
        bool finite = true;
        for (const auto& v : poly) {
          if (!std::isfinite(v[0]) || !std::isfinite(v[1])) finite = false;
        }
        if (!finite) {
          err(pbase, "polygon vertices must be finite");
          continue;
        }
        if (polygon_is_simple(poly)) {
          err(pbase, "polygon must be simple (no self-intersection)");
        }
      }
      for (const auto& [pid, st] : f.states) {
        check_frame_state(f, i, pid, st);
      }
    }
    const double span = s_.frames.back().timestamp - s_.frames.front().timestamp;
    if (std::abs(span - s_.metadata.scenario_duration) >
        kDurationToleranceSeconds) {
      err("/openlabel/metadata/scenario_duration",
          "scenario_duration " + fmt(s_.metadata.scenario_duration) +
              " does not match the frame span " + fmt(span));
    }
    check_dynamic_ranges();
    check_speed_ranges();
  }

  void check_frame_state(const Frame& f, std::size_t fi,
                         const std::string& pid, const FrameState& st) {
    const std::string base =
        "/openlabel/frames/" + std::to_string(fi) + "/objects/" + pid;
    if (!s_.participants.count(pid)) {
      err(base, "participant '" + pid + "' is not declared in objects");
    }
    for (double v : st.bbox3d.center) fin(v, base + "/bbox3d/center");
    for (double v : st.bbox3d.extent) fin(v, base + "/bbox3d/extent");
    fin(st.bbox3d.heading, base + "/bbox3d/heading");
    for (double v : st.bbox3d.extent) {
      if (v < 0) err(base + "/bbox3d/extent", "extents must be non-negative");
    }
    fin(st.world_position[0], base + "/world_position");
    fin(st.world_position[1], base + "/world_position");
    fin(st.speed, base + "/speed");
    if (st.speed < 0) err(base + "/speed", "speed must be non-negative");
    if (st.lane_position) {
      fin(st.lane_position->s, base + "/lane_position/s");
      fin(st.lane_position->t, base + "/lane_position/t");
      if (st.lane_position->road_id.empty()) {
        err(base + "/lane_position/road_id", "road_id must not be empty");
      }
    }
    for (const auto& [field, value] :
         std::initializer_list<std::pair<const char*, std::optional<double>>>{
             {"acceleration", st.acceleration},
             {"yaw_rate", st.yaw_rate},
             {"pitch", st.pitch},
             {"roll", st.roll},
             {"speed_limit", st.speed_limit}}) {
      if (value) fin(*value, base + "/" + field);
    }
    if (st.behavior_risk) {
      for (const auto& [name, v] : *st.behavior_risk) {
        if (name.empty()) err(base + "/behavior_risk", "empty measure name");
        fin(v, base + "/behavior_risk/" + name);
      }
    }
    for (const auto& [other, risk] : st.pairwise_risk) {
      const std::string rbase = base + "/pairwise_risk/" + other;
      if (other == pid) {
        err(rbase, "pairwise_risk must not reference the participant itself");
      } else if (!s_.participants.count(other)) {
        err(rbase, "pairwise_risk references unknown participant '" + other +
                       "'");
      } else if (!f.states.count(other)) {
        warn(rbase,
             "pairwise_risk references a participant absent from this frame");
      }
      for (const auto& [mname, mval] :
           std::initializer_list<std::pair<const char*, std::optional<double>>>{
               {"thw", risk.thw},
               {"dhw", risk.dhw},
               {"ttc", risk.ttc},
               {"gttc", risk.gttc},
               {"pret", risk.pret}}) {
        if (!mval) continue;
        fin(*mval, rbase + "/" + mname);
        if (*mval < 0) {
          err(rbase + "/" + mname, "risk measures must be non-negative");
        }
      }
    }
  }

  void check_dynamic_ranges() {
    const auto check = [&](const char* name, double value,
                           const std::string& where) {
      auto it = s_.metadata.dynamic_ranges.find(name);
      if (it == s_.metadata.dynamic_ranges.end()) return;
      if (value < it->second[0] - kDynamicRangeTolerance ||
          value > it->second[1] + kDynamicRangeTolerance) {
        err("/openlabel/metadata/dynamic_ranges/" + std::string(name),
            std::string(name) + " " + fmt(value) + " at " + where +
                " lies outside the declared dynamic range [" +
                fmt(it->second[0]) + ", " + fmt(it->second[1]) + "]");
      }
    };
    for (std::size_t i = 0; i < s_.frames.size(); ++i) {
      for (const auto& [pid, st] : s_.frames[i].states) {
        const std::string base =
            "/openlabel/frames/" + std::to_string(i) + "/objects/" + pid;
        check("speed", st.speed, base + "/speed");
        if (st.acceleration) {
          check("acceleration", *st.acceleration, base + "/acceleration");
        }
      }
    }
  }

  void check_speed_ranges() {
    std::unordered_map<std::string, std::pair<double, double>> observed;
    for (const auto& f : s_.frames) {
      for (const auto& [pid, st] : f.states) {
        auto [it, inserted] =
            observed.try_emplace(pid, st.speed, st.speed);
        if (!inserted) {
          it->second.first = std::min(it->second.first, st.speed);
          it->second.second = std::max(it->second.second, st.speed);
        }
      }
    }
    for (const auto& [pid, p] : s_.participants) {
      auto it = observed.find(pid);
      if (it == observed.end()) continue;
      if (it->second.first < p.speed_range.min - kSpeedRangeTolerance ||
          it->second.second > p.speed_range.max + kSpeedRangeTolerance) {
        err("/openlabel/objects/" + pid + "/speed_range",
            "observed speeds [" + fmt(it->second.first) + ", " +
                fmt(it->second.second) +
                "] exceed the declared speed_range [" + fmt(p.speed_range.min) +
                ", " + fmt(p.speed_range.max) + "]");
      }
    }
  }

  void check_events() {
    if (s_.frames.empty()) return;
    const double t0 = s_.frames.front().timestamp;
    const double t1 = s_.frames.back().timestamp;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < s_.events.size(); ++i) {
      const EventRecord& e = s_.events[i];
      const std::string base = "/openlabel/events/" + std::to_string(i);
      if (e.event_id.empty()) {
        err(base + "/event_id", "event_id must not be empty");
      } else if (!ids.insert(e.event_id).second) {
        err(base + "/event_id", "duplicate event_id '" + e.event_id + "'");
      }
      fin(e.t_start, base + "/t_start");
      fin(e.t_end, base + "/t_end");
      if (e.t_start > e.t_end) {
        err(base, "t_start must not exceed t_end");
      }
      if (e.t_start < t0 - kEventTimeTolerance ||
          e.t_end > t1 + kEventTimeTolerance) {
        err(base, "event interval [" + fmt(e.t_start) + ", " + fmt(e.t_end) +
                      "] lies outside the frame span [" + fmt(t0) + ", " +
                      fmt(t1) + "]");
      }
      for (const auto& [pid, movement] : e.involved) {
        if (!s_.participants.count(pid)) {
          err(base + "/involved/" + pid,
              "involved participant '" + pid + "' is not declared");
        }
        if (movement && movement->empty()) {
          err(base + "/involved/" + pid,
              "movement classification must be omitted or non-empty");
        }
      }
    }
  }

  // Warns where the recorded scalar speed disagrees with the finite
  // difference of world_position. Needs the participant in three frames with
  // consecutive frame ids.
  void check_speed_consistency() {
    for (std::size_t i = 1; i + 1 < s_.frames.size(); ++i) {
      const Frame& prev = s_.frames[i - 1];
      const Frame& cur = s_.frames[i];
      const Frame& next = s_.frames[i + 1];
      if (cur.frame_id != prev.frame_id + 1 ||
          next.frame_id != cur.frame_id + 1) {
        continue;
      }
      const double dt = next.timestamp - prev.timestamp;
      if (!(dt > 0)) continue;
      for (const auto& [pid, st] : cur.states) {
        auto itp = prev.states.find(pid);
        auto itn = next.states.find(pid);
        if (itp == prev.states.end() || itn == next.states.end()) continue;
        const double dx =
            itn->second.world_position[0] - itp->second.world_position[0];
        const double dy =
            itn->second.world_position[1] - itp->second.world_position[1];
        const double v_fd = std::sqrt(dx * dx + dy * dy) / dt;
        if (std::abs(v_fd - st.speed) > kSpeedConsistencyTolerance) {
          warn("/openlabel/frames/" + std::to_string(i) + "/objects/" + pid +
                   "/speed",
               "speed " + fmt(st.speed) +
                   " deviates from the position finite difference " +
                   fmt(v_fd));
        }
      }
    }
  }

  const Scenario& s_;
  ValidationReport report_;
};

}  // namespace

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [](const auto& v) {
        return v.severity == Severity::kError;
      }));
}

std::size_t ValidationReport::warning_count() const {
  return violations.size() - error_count();
}

void ValidationReport::add_error(std::string path, std::string message) {
  violations.push_back(
      {Severity::kError, std::move(path), std::move(message)});
}

void ValidationReport::add_warning(std::string path, std::string message) {
  violations.push_back(
      {Severity::kWarning, std::move(path), std::move(message)});
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& v : violations) {
    items.push_back({
        {"severity", v.severity == Severity::kError ? "error" : "warning"},
        {"path", v.path},
        {"message", v.message},
    });
  }
  return {{"errors", error_count()},
          {"warnings", warning_count()},
          {"violations", std::move(items)}};
}

ValidationReport validate_scenario(const Scenario& scenario) {
  return Checker(scenario).run();
}

}  // namespace aveas::model
