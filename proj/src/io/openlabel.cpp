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

#include "aveas/io/openlabel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "aveas/errors.hpp"

namespace aveas::io {

using nlohmann::json;

namespace {

// -------------------------------------------------------------------------
// Writing
// -------------------------------------------------------------------------

// Negative zero compares equal to zero in the model, so both must map to the
// same canonical bytes.
json num(double v) { return v == 0.0 ? json(0.0) : json(v); }

json vec2_json(const std::array<double, 2>& v) {
  return json::array({num(v[0]), num(v[1])});
}

json vec3_json(const std::array<double, 3>& v) {
  return json::array({num(v[0]), num(v[1]), num(v[2])});
}

// Free-form subtrees are caller-controlled; reject what the canonical text
// form cannot represent and normalize negative zero.
json normalize_free_form(const json& j, const std::string& path) {
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        throw ValidationError(path + ": non-finite number in free-form field");
      }
      return num(v);
    }
    case json::value_t::binary:
    case json::value_t::discarded:
      throw ValidationError(path + ": unserializable value in free-form field");
    case json::value_t::object: {
      json out = json::object();
      for (const auto& [k, v] : j.items()) {
        out[k] = normalize_free_form(v, path + "/" + k);
      }
      return out;
    }
    case json::value_t::array: {
      json out = json::array();
      for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(normalize_free_form(j[i], path + "/" + std::to_string(i)));
      }
      return out;
    }
    default:
      return j;
  }
}

json write_metadata(const model::Scenario& s) {
  const auto& m = s.metadata;
  json out{
      {"schema_version", kSchemaVersion},
      {"profile", kProfileName},
      {"scenario_id", s.scenario_id},
      {"creation_time", m.creation_time},
      {"acquisition_method", model::to_string(m.acquisition_method)},
      {"data_use_restrictions", m.data_use_restrictions},
      {"origin", model::to_string(m.origin)},
      {"area", model::to_string(m.area)},
      {"scenario_duration", num(m.scenario_duration)},
  };
  if (!m.dynamic_ranges.empty()) {
    json ranges = json::object();
    for (const auto& [name, r] : m.dynamic_ranges) ranges[name] = vec2_json(r);
    out["dynamic_ranges"] = std::move(ranges);
  }
  return out;
}

json write_contexts(const model::Context& c) {
  return {
      {"weather", model::to_string(c.weather)},
      {"lighting", model::to_string(c.lighting)},
      {"traffic_condition", model::to_string(c.traffic_condition)},
      {"road_surface", model::to_string(c.road_surface)},
  };
}

json write_objects(const model::Scenario& s) {
  json out = json::object();
  for (const auto& [pid, p] : s.participants) {
    json dims{{"length", num(p.dimensions.length)},
              {"width", num(p.dimensions.width)}};
    if (p.dimensions.height) dims["height"] = num(*p.dimensions.height);
    json obj{
        {"road_user_type", model::to_string(p.road_user_type)},
        {"dimensions", std::move(dims)},
        {"speed_range",
         json::array({num(p.speed_range.min), num(p.speed_range.max)})},
    };
    if (p.collision_dynamics) {
      obj["collision_dynamics"] = normalize_free_form(
          *p.collision_dynamics,
          "/openlabel/objects/" + pid + "/collision_dynamics");
    }
    if (p.steering_wheel_positions) {
      obj["steering_wheel_positions"] = normalize_free_form(
          *p.steering_wheel_positions,
          "/openlabel/objects/" + pid + "/steering_wheel_positions");
    }
    out[pid] = std::move(obj);
  }
  return out;
}

json write_events(const model::Scenario& s) {
  json out = json::array();
  for (const auto& e : s.events) {
    json involved = json::object();
    for (const auto& [pid, movement] : e.involved) {
      json entry = json::object();
      if (movement) entry["movement"] = *movement;
      involved[pid] = std::move(entry);
    }
    json ev{
        {"event_id", e.event_id},
        {"t_start", num(e.t_start)},
        {"t_end", num(e.t_end)},
        {"involved", std::move(involved)},
    };
    if (e.event_type) ev["event_type"] = model::to_string(*e.event_type);
    out.push_back(std::move(ev));
  }
  return out;
}

json write_state(const model::FrameState& st) {
  json bbox{{"center", vec3_json(st.bbox3d.center)},
            {"extent", vec3_json(st.bbox3d.extent)},
            {"heading", num(st.bbox3d.heading)}};
  json out{
      {"bbox3d", std::move(bbox)},
      {"world_position", vec2_json(st.world_position)},
      {"speed", num(st.speed)},
  };
  if (st.lane_position) {
    out["lane_position"] = json{{"road_id", st.lane_position->road_id},
                                {"lane_id", st.lane_position->lane_id},
                                {"s", num(st.lane_position->s)},
                                {"t", num(st.lane_position->t)}};
  }
  if (st.acceleration) out["acceleration"] = num(*st.acceleration);
  if (st.yaw_rate) out["yaw_rate"] = num(*st.yaw_rate);
  if (st.pitch) out["pitch"] = num(*st.pitch);
  if (st.roll) out["roll"] = num(*st.roll);
  if (st.light_states) {
    json ls = json::object();
    for (const auto& [name, on] : *st.light_states) ls[name] = on;
    out["light_states"] = std::move(ls);
  }
  if (st.speed_limit) out["speed_limit"] = num(*st.speed_limit);
  if (st.traffic_condition) {
    out["traffic_condition"] = model::to_string(*st.traffic_condition);
  }
  if (st.behavior_risk) {
    json br = json::object();
    for (const auto& [name, v] : *st.behavior_risk) br[name] = num(v);
    out["behavior_risk"] = std::move(br);
  }
  if (!st.pairwise_risk.empty()) {
    json pr = json::object();
    for (const auto& [other, risk] : st.pairwise_risk) {
      json r = json::object();
      if (risk.thw) r["thw"] = num(*risk.thw);
      if (risk.dhw) r["dhw"] = num(*risk.dhw);
      if (risk.ttc) r["ttc"] = num(*risk.ttc);
      if (risk.gttc) r["gttc"] = num(*risk.gttc);
      if (risk.pret) r["pret"] = num(*risk.pret);
      pr[other] = std::move(r);
    }
    out["pairwise_risk"] = std::move(pr);
  }
  return out;
}

json write_frames(const model::Scenario& s) {
  json out = json::object();
  for (const auto& f : s.frames) {
    json objects = json::object();
    for (const auto& [pid, st] : f.states) objects[pid] = write_state(st);
    json frame{{"timestamp", num(f.timestamp)},
               {"objects", std::move(objects)}};
    if (!f.unobserved_areas.empty()) {
      json areas = json::array();
      for (const auto& poly : f.unobserved_areas) {
        json jp = json::array();
        for (const auto& v : poly) jp.push_back(vec2_json(v));
        areas.push_back(std::move(jp));
      }
      frame["unobserved_areas"] = std::move(areas);
    }
    out[std::to_string(f.frame_id)] = std::move(frame);
  }
  return out;
}

json write_coordinate_systems(const model::CoordinateSystemSet& cs) {
  json systems = json::object();
  for (const auto& [name, sys] : cs.systems) {
    json entry{
        {"type", model::to_string(sys.type)},
        {"transform_to_parent",
         json{{"rotation", num(sys.transform_to_parent.rotation)},
              {"translation", vec2_json(sys.transform_to_parent.translation)}}},
    };
    if (sys.parent) entry["parent"] = *sys.parent;
    systems[name] = std::move(entry);
  }
  return {
      {"world_epsg", cs.world_epsg},
      {"local_origin", vec2_json(cs.local_origin)},
      {"systems", std::move(systems)},
  };
}

json write_scenario(const model::Scenario& s) {
  json ol{
      {"metadata", write_metadata(s)},
      {"contexts", write_contexts(s.context)},
      {"objects", write_objects(s)},
      {"frames", write_frames(s)},
      {"coordinate_systems", write_coordinate_systems(s.coordinate_systems)},
  };
  if (!s.events.empty()) ol["events"] = write_events(s);
  if (s.resources.opendrive_path) {
    ol["resources"] = json{{"opendrive", *s.resources.opendrive_path}};
  }
  if (s.ontology_refs) {
    json onts = json::object();
    for (const auto& [oid, ref] : *s.ontology_refs) {
      json entry = json::object();
      if (ref.uri) entry["uri"] = *ref.uri;
      if (ref.boundaries) entry["boundaries"] = *ref.boundaries;
      onts[oid] = std::move(entry);
    }
    ol["ontologies"] = std::move(onts);
  }
  return json{{"openlabel", std::move(ol)}};
}

// -------------------------------------------------------------------------
// Reading
// -------------------------------------------------------------------------

const char* type_name(const json& v) {
  switch (v.type()) {
    case json::value_t::null: return "null";
    case json::value_t::object: return "object";
    case json::value_t::array: return "array";
    case json::value_t::string: return "string";
    case json::value_t::boolean: return "boolean";
    case json::value_t::binary: return "binary";
    default: return v.is_number() ? "number" : "unknown";
  }
}

// Frame keys must be canonical decimal integers so that each frame id has
// exactly one spelling.
bool is_canonical_frame_key(const std::string& k) {
  if (k.empty() || k.size() > 18) return false;
  if (k.size() > 1 && k[0] == '0') return false;
  return std::all_of(k.begin(), k.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

class Reader {
 public:
  model::ValidationReport report;

  model::Scenario read_root(const json& root) {
    model::Scenario s;
    if (!root.is_object()) {
      err("", "top-level value must be an object");
      return s;
    }
    allow(root, "", {"openlabel"});
    const json* ol = req_obj(root, "openlabel", "");
    if (!ol) return s;
    const std::string base = "/openlabel";
    allow(*ol, base,
          {"metadata", "contexts", "objects", "events", "frames",
           "coordinate_systems", "resources", "ontologies"});
    read_metadata(*ol, base, s);
    read_contexts(*ol, base, s);
    read_objects(*ol, base, s);
    read_events(*ol, base, s);
    read_frames(*ol, base, s);
    read_coordinate_systems(*ol, base, s);
    read_resources(*ol, base, s);
    read_ontologies(*ol, base, s);
    return s;
  }

 private:
  void err(const std::string& path, const std::string& msg) {
    report.add_error(path.empty() ? "/" : path, msg);
  }

  void allow(const json& o, const std::string& path,
             std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : o.items()) {
      (void)v;
      if (std::find_if(keys.begin(), keys.end(), [&](const char* a) {
            return k == a;
          }) == keys.end()) {
        err(path + "/" + k, "unknown field");
      }
    }
  }

  const json* find(const json& o, const char* key) {
    auto it = o.find(key);
    return it == o.end() ? nullptr : &*it;
  }

  const json* typed(const json& o, const char* key, const std::string& path,
                    json::value_t want, const char* want_name, bool required) {
    const json* v = find(o, key);
    if (!v) {
      if (required) err(path + "/" + key, "missing required field");
      return nullptr;
    }
    if (v->type() != want) {
      err(path + "/" + key,
          std::string("expected ") + want_name + ", got " + type_name(*v));
      return nullptr;
    }
    return v;
  }

  const json* req_obj(const json& o, const char* key, const std::string& path) {
    return typed(o, key, path, json::value_t::object, "an object", true);
  }
  const json* opt_obj(const json& o, const char* key, const std::string& path) {
    return typed(o, key, path, json::value_t::object, "an object", false);
  }
  const json* req_arr(const json& o, const char* key, const std::string& path) {
    return typed(o, key, path, json::value_t::array, "an array", true);
  }
  const json* opt_arr(const json& o, const char* key, const std::string& path) {
    return typed(o, key, path, json::value_t::array, "an array", false);
  }

  std::optional<std::string> str_field(const json& o, const char* key,
                                       const std::string& path, bool required) {
    const json* v = find(o, key);
    if (!v) {
      if (required) err(path + "/" + key, "missing required field");
      return std::nullopt;
    }
    if (!v->is_string()) {
      err(path + "/" + key,
          std::string("expected a string, got ") + type_name(*v));
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<double> num_field(const json& o, const char* key,
                                  const std::string& path, bool required) {
    const json* v = find(o, key);
    if (!v) {
      if (required) err(path + "/" + key, "missing required field");
      return std::nullopt;
    }
    if (!v->is_number()) {
      err(path + "/" + key,
          std::string("expected a number, got ") + type_name(*v));
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::int64_t> int_field(const json& o, const char* key,
                                        const std::string& path,
                                        bool required) {
    const json* v = find(o, key);
    if (!v) {
      if (required) err(path + "/" + key, "missing required field");
      return std::nullopt;
    }
    if (!v->is_number_integer() && !v->is_number_unsigned()) {
      err(path + "/" + key,
          std::string("expected an integer, got ") + type_name(*v));
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<double> num_at(const json& v, const std::string& path) {
    if (!v.is_number()) {
      err(path, std::string("expected a number, got ") + type_name(v));
      return std::nullopt;
    }
    return v.get<double>();
  }

  template <std::size_t N>
  std::optional<std::array<double, N>> fixed_array(const json& o,
                                                   const char* key,
                                                   const std::string& path,
                                                   bool required) {
    const json* v = find(o, key);
    if (!v) {
      if (required) err(path + "/" + key, "missing required field");
      return std::nullopt;
    }
    return fixed_array_at<N>(*v, path + "/" + key);
  }

  template <std::size_t N>
  std::optional<std::array<double, N>> fixed_array_at(const json& v,
                                                      const std::string& path) {
    if (!v.is_array() || v.size() != N) {
      err(path, "expected an array of " + std::to_string(N) + " numbers");
      return std::nullopt;
    }
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      auto x = num_at(v[i], path + "/" + std::to_string(i));
      if (!x) return std::nullopt;
      out[i] = *x;
    }
    return out;
  }

  template <typename E>
  std::optional<E> enum_field(const json& o, const char* key,
                              const std::string& path,
                              std::optional<E> (*from)(std::string_view),
                              bool required) {
    auto s = str_field(o, key, path, required);
    if (!s) return std::nullopt;
    auto e = from(*s);
    if (!e) err(path + "/" + key, "invalid value '" + *s + "'");
    return e;
  }

  std::optional<json> free_form_field(const json& o, const char* key,
                                      const std::string& path) {
    const json* v = find(o, key);
    if (!v) return std::nullopt;
    if (v->is_null()) {
      err(path + "/" + key, "optional fields must be omitted, not null");
      return std::nullopt;
    }
    return std::make_optional<json>(*v);
  }

  void read_metadata(const json& ol, const std::string& base,
                     model::Scenario& s) {
    const json* m = req_obj(ol, "metadata", base);
    if (!m) return;
    const std::string p = base + "/metadata";
    allow(*m, p,
          {"schema_version", "profile", "scenario_id", "creation_time",
           "acquisition_method", "data_use_restrictions", "origin", "area",
           "scenario_duration", "dynamic_ranges"});
    if (auto v = str_field(*m, "schema_version", p, true);
        v && *v != kSchemaVersion) {
      err(p + "/schema_version", "unsupported schema_version '" + *v +
                                     "', expected '" + kSchemaVersion + "'");
    }
    if (auto v = str_field(*m, "profile", p, true); v && *v != kProfileName) {
      err(p + "/profile",
          "unsupported profile '" + *v + "', expected '" + kProfileName + "'");
    }
    if (auto v = str_field(*m, "scenario_id", p, true)) s.scenario_id = *v;
    if (auto v = str_field(*m, "creation_time", p, true)) {
      s.metadata.creation_time = *v;
    }
    if (auto v = enum_field(*m, "acquisition_method", p,
                            model::acquisition_method_from_string, true)) {
      s.metadata.acquisition_method = *v;
    }
    if (auto v = str_field(*m, "data_use_restrictions", p, true)) {
      s.metadata.data_use_restrictions = *v;
    }
    if (auto v = enum_field(*m, "origin", p, model::origin_from_string, true)) {
      s.metadata.origin = *v;
    }
    if (auto v = enum_field(*m, "area", p, model::area_from_string, true)) {
      s.metadata.area = *v;
    }
    if (auto v = num_field(*m, "scenario_duration", p, true)) {
      s.metadata.scenario_duration = *v;
    }
    if (const json* ranges = opt_obj(*m, "dynamic_ranges", p)) {
      for (const auto& [name, rv] : ranges->items()) {
        if (auto r = fixed_array_at<2>(rv, p + "/dynamic_ranges/" + name)) {
          s.metadata.dynamic_ranges[name] = *r;
        }
      }
    }
  }

  void read_contexts(const json& ol, const std::string& base,
                     model::Scenario& s) {
    const json* c = req_obj(ol, "contexts", base);
    if (!c) return;
    const std::string p = base + "/contexts";
    allow(*c, p, {"weather", "lighting", "traffic_condition", "road_surface"});
    if (auto v =
            enum_field(*c, "weather", p, model::weather_from_string, true)) {
      s.context.weather = *v;
    }
    if (auto v =
            enum_field(*c, "lighting", p, model::lighting_from_string, true)) {
      s.context.lighting = *v;
    }
    if (auto v = enum_field(*c, "traffic_condition", p,
                            model::traffic_condition_from_string, true)) {
      s.context.traffic_condition = *v;
    }
    if (auto v = enum_field(*c, "road_surface", p,
                            model::road_surface_from_string, true)) {
      s.context.road_surface = *v;
    }
  }

  void read_objects(const json& ol, const std::string& base,
                    model::Scenario& s) {
    const json* objs = req_obj(ol, "objects", base);
    if (!objs) return;
    for (const auto& [pid, pv] : objs->items()) {
      const std::string p = base + "/objects/" + pid;
      if (!pv.is_object()) {
        err(p, std::string("expected an object, got ") + type_name(pv));
        continue;
      }
      allow(pv, p,
            {"road_user_type", "dimensions", "speed_range",
             "collision_dynamics", "steering_wheel_positions"});
      model::Participant part;
      part.participant_id = pid;
      if (auto v = enum_field(pv, "road_user_type", p,
                              model::road_user_type_from_string, true)) {
        part.road_user_type = *v;
      }
      if (const json* dims = req_obj(pv, "dimensions", p)) {
        const std::string dp = p + "/dimensions";
        allow(*dims, dp, {"length", "width", "height"});
        if (auto v = num_field(*dims, "length", dp, true)) {
          part.dimensions.length = *v;
        }
        if (auto v = num_field(*dims, "width", dp, true)) {
          part.dimensions.width = *v;
        }
        if (auto v = num_field(*dims, "height", dp, false)) {
          part.dimensions.height = *v;
        }
      }
      if (auto r = fixed_array<2>(pv, "speed_range", p, true)) {
        part.speed_range = {(*r)[0], (*r)[1]};
      }
      part.collision_dynamics = free_form_field(pv, "collision_dynamics", p);
      part.steering_wheel_positions =
          free_form_field(pv, "steering_wheel_positions", p);
      s.participants.emplace(pid, std::move(part));
    }
  }

  void read_events(const json& ol, const std::string& base,
                   model::Scenario& s) {
    const json* events = opt_arr(ol, "events", base);
    if (!events) return;
    for (std::size_t i = 0; i < events->size(); ++i) {
      const json& ev = (*events)[i];
      const std::string p = base + "/events/" + std::to_string(i);
      if (!ev.is_object()) {
        err(p, std::string("expected an object, got ") + type_name(ev));
        continue;
      }
      allow(ev, p, {"event_id", "event_type", "t_start", "t_end", "involved"});
      model::EventRecord rec;
      if (auto v = str_field(ev, "event_id", p, true)) rec.event_id = *v;
      rec.event_type =
          enum_field(ev, "event_type", p, model::event_type_from_string, false);
      if (auto v = num_field(ev, "t_start", p, true)) rec.t_start = *v;
      if (auto v = num_field(ev, "t_end", p, true)) rec.t_end = *v;
      if (const json* inv = req_obj(ev, "involved", p)) {
        for (const auto& [pid, entry] : inv->items()) {
          const std::string ip = p + "/involved/" + pid;
          if (!entry.is_object()) {
            err(ip, std::string("expected an object, got ") + type_name(entry));
            continue;
          }
          allow(entry, ip, {"movement"});
          rec.involved[pid] = str_field(entry, "movement", ip, false);
        }
      }
      s.events.push_back(std::move(rec));
    }
  }

  model::FrameState read_state(const json& sv, const std::string& p) {
    model::FrameState st;
    allow(sv, p,
          {"bbox3d", "lane_position", "world_position", "speed",
           "acceleration", "yaw_rate", "pitch", "roll", "light_states",
           "speed_limit", "traffic_condition", "behavior_risk",
           "pairwise_risk"});
    if (const json* bb = req_obj(sv, "bbox3d", p)) {
      const std::string bp = p + "/bbox3d";
      allow(*bb, bp, {"center", "extent", "heading"});
      if (auto v = fixed_array<3>(*bb, "center", bp, true)) {
        st.bbox3d.center = *v;
      }
      if (auto v = fixed_array<3>(*bb, "extent", bp, true)) {
        st.bbox3d.extent = *v;
      }
      if (auto v = num_field(*bb, "heading", bp, true)) st.bbox3d.heading = *v;
    }
    if (const json* lp = opt_obj(sv, "lane_position", p)) {
      const std::string lpp = p + "/lane_position";
      allow(*lp, lpp, {"road_id", "lane_id", "s", "t"});
      model::LanePosition pos;
      if (auto v = str_field(*lp, "road_id", lpp, true)) pos.road_id = *v;
      if (auto v = int_field(*lp, "lane_id", lpp, true)) {
        pos.lane_id = static_cast<int>(*v);
      }
      if (auto v = num_field(*lp, "s", lpp, true)) pos.s = *v;
      if (auto v = num_field(*lp, "t", lpp, true)) pos.t = *v;
      st.lane_position = std::move(pos);
    }
    if (auto v = fixed_array<2>(sv, "world_position", p, true)) {
      st.world_position = *v;
    }
    if (auto v = num_field(sv, "speed", p, true)) st.speed = *v;
    st.acceleration = num_field(sv, "acceleration", p, false);
    st.yaw_rate = num_field(sv, "yaw_rate", p, false);
    st.pitch = num_field(sv, "pitch", p, false);
    st.roll = num_field(sv, "roll", p, false);
    if (const json* ls = opt_obj(sv, "light_states", p)) {
      std::map<std::string, bool> lights;
      for (const auto& [name, lv] : ls->items()) {
        if (!lv.is_boolean()) {
          err(p + "/light_states/" + name,
              std::string("expected a boolean, got ") + type_name(lv));
          continue;
        }
        lights[name] = lv.get<bool>();
      }
      st.light_states = std::move(lights);
    }
    st.speed_limit = num_field(sv, "speed_limit", p, false);
    st.traffic_condition = enum_field(
        sv, "traffic_condition", p, model::traffic_condition_from_string,
        false);
    if (const json* br = opt_obj(sv, "behavior_risk", p)) {
      std::map<std::string, double> risk;
      for (const auto& [name, rv] : br->items()) {
        if (auto v = num_at(rv, p + "/behavior_risk/" + name)) risk[name] = *v;
      }
      st.behavior_risk = std::move(risk);
    }
    if (const json* pr = opt_obj(sv, "pairwise_risk", p)) {
      for (const auto& [other, rv] : pr->items()) {
        const std::string rp = p + "/pairwise_risk/" + other;
        if (!rv.is_object()) {
          err(rp, std::string("expected an object, got ") + type_name(rv));
          continue;
        }
        allow(rv, rp, {"thw", "dhw", "ttc", "gttc", "pret"});
        model::RiskMeasureSet ms;
        ms.thw = num_field(rv, "thw", rp, false);
        ms.dhw = num_field(rv, "dhw", rp, false);
        ms.ttc = num_field(rv, "ttc", rp, false);
        ms.gttc = num_field(rv, "gttc", rp, false);
        ms.pret = num_field(rv, "pret", rp, false);
        st.pairwise_risk.emplace(other, ms);
      }
    }
    return st;
  }

  void read_frames(const json& ol, const std::string& base,
                   model::Scenario& s) {
    const json* frames = req_obj(ol, "frames", base);
    if (!frames) return;
    std::vector<model::Frame> parsed;
    for (const auto& [key, fv] : frames->items()) {
      const std::string p = base + "/frames/" + key;
      if (!is_canonical_frame_key(key)) {
        err(p, "frame keys must be canonical decimal integers");
        continue;
      }
      if (!fv.is_object()) {
        err(p, std::string("expected an object, got ") + type_name(fv));
        continue;
      }
      allow(fv, p, {"timestamp", "objects", "unobserved_areas"});
      model::Frame frame;
      frame.frame_id = std::stoll(key);
      if (auto v = num_field(fv, "timestamp", p, true)) frame.timestamp = *v;
      if (const json* objs = req_obj(fv, "objects", p)) {
        for (const auto& [pid, sv] : objs->items()) {
          const std::string sp = p + "/objects/" + pid;
          if (!sv.is_object()) {
            err(sp, std::string("expected an object, got ") + type_name(sv));
            continue;
          }
          frame.states.emplace(pid, read_state(sv, sp));
        }
      }
      if (const json* areas = opt_arr(fv, "unobserved_areas", p)) {
        for (std::size_t a = 0; a < areas->size(); ++a) {
          const json& av = (*areas)[a];
          const std::string ap =
              p + "/unobserved_areas/" + std::to_string(a);
          if (!av.is_array()) {
            err(ap, std::string("expected an array, got ") + type_name(av));
            continue;
          }
          model::Polygon2D poly;
          for (std::size_t vi = 0; vi < av.size(); ++vi) {
            if (auto vertex = fixed_array_at<2>(
                    av[vi], ap + "/" + std::to_string(vi))) {
              poly.push_back(*vertex);
            }
          }
          frame.unobserved_areas.push_back(std::move(poly));
        }
      }
      parsed.push_back(std::move(frame));
    }
    std::sort(parsed.begin(), parsed.end(),
              [](const model::Frame& a, const model::Frame& b) {
                return a.frame_id < b.frame_id;
              });
    for (std::size_t i = 0; i < parsed.size(); ++i) {
      if (parsed[i].frame_id != static_cast<std::int64_t>(i)) {
        err(base + "/frames",
            "non-dense frame keys; expected " + std::to_string(i) +
                ", found " + std::to_string(parsed[i].frame_id));
        break;
      }
    }
    s.frames = std::move(parsed);
  }

  void read_coordinate_systems(const json& ol, const std::string& base,
                               model::Scenario& s) {
    const json* cs = req_obj(ol, "coordinate_systems", base);
    if (!cs) return;
    const std::string p = base + "/coordinate_systems";
    allow(*cs, p, {"world_epsg", "local_origin", "systems"});
    if (auto v = int_field(*cs, "world_epsg", p, true)) {
      s.coordinate_systems.world_epsg = static_cast<int>(*v);
    }
    if (auto v = fixed_array<2>(*cs, "local_origin", p, true)) {
      s.coordinate_systems.local_origin = *v;
    }
    if (const json* systems = req_obj(*cs, "systems", p)) {
      for (const auto& [name, sv] : systems->items()) {
        const std::string sp = p + "/systems/" + name;
        if (!sv.is_object()) {
          err(sp, std::string("expected an object, got ") + type_name(sv));
          continue;
        }
        allow(sv, sp, {"type", "parent", "transform_to_parent"});
        model::CoordinateSystem sys;
        if (auto v = enum_field(sv, "type", sp,
                                model::coordinate_system_type_from_string,
                                true)) {
          sys.type = *v;
        }
        sys.parent = str_field(sv, "parent", sp, false);
        if (const json* tf = req_obj(sv, "transform_to_parent", sp)) {
          const std::string tp = sp + "/transform_to_parent";
          allow(*tf, tp, {"rotation", "translation"});
          if (auto v = num_field(*tf, "rotation", tp, true)) {
            sys.transform_to_parent.rotation = *v;
          }
          if (auto v = fixed_array<2>(*tf, "translation", tp, true)) {
            sys.transform_to_parent.translation = *v;
          }
        }
        s.coordinate_systems.systems.emplace(name, std::move(sys));
      }
    }
  }

  void read_resources(const json& ol, const std::string& base,
                      model::Scenario& s) {
    const json* res = opt_obj(ol, "resources", base);
    if (!res) return;
    const std::string p = base + "/resources";
    allow(*res, p, {"opendrive"});
    s.resources.opendrive_path = str_field(*res, "opendrive", p, false);
  }

  void read_ontologies(const json& ol, const std::string& base,
                       model::Scenario& s) {
    const json* onts = opt_obj(ol, "ontologies", base);
    if (!onts) return;
    std::map<std::string, model::OntologyRef> refs;
    for (const auto& [oid, ov] : onts->items()) {
      const std::string p = base + "/ontologies/" + oid;
      if (!ov.is_object()) {
        err(p, std::string("expected an object, got ") + type_name(ov));
        continue;
      }
      allow(ov, p, {"uri", "boundaries"});
      model::OntologyRef ref;
      ref.uri = str_field(ov, "uri", p, false);
      if (const json* bounds = opt_arr(ov, "boundaries", p)) {
        std::vector<std::string> items;
        for (std::size_t i = 0; i < bounds->size(); ++i) {
          const json& bv = (*bounds)[i];
          if (!bv.is_string()) {
            err(p + "/boundaries/" + std::to_string(i),
                std::string("expected a string, got ") + type_name(bv));
            continue;
          }
          items.push_back(bv.get<std::string>());
        }
        ref.boundaries = std::move(items);
      }
      refs.emplace(oid, std::move(ref));
    }
    s.ontology_refs = std::move(refs);
  }
};

std::string summarize(const model::ValidationReport& rep) {
  for (const auto& v : rep.violations) {
    if (v.severity == model::Severity::kError) {
      std::string msg = v.path + ": " + v.message;
      const std::size_t extra = rep.error_count() - 1;
      if (extra > 0) {
        msg += " (and " + std::to_string(extra) + " more error" +
               (extra > 1 ? "s" : "") + ")";
      }
      return msg;
    }
  }
  return "no errors";
}

}  // namespace

std::string canonical_dump(const json& j) {
  return j.dump(2) + "\n";
}

model::Scenario parse(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.what());
  }
  Reader reader;
  model::Scenario s = reader.read_root(root);
  if (reader.report.error_count() > 0) {
    throw SchemaError(summarize(reader.report));
  }
  const model::ValidationReport rep = model::validate_scenario(s);
  if (!rep.ok()) {
    throw SemanticError(summarize(rep));
  }
  return s;
}

model::ValidationReport schema_check(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes);
  } catch (const json::parse_error& e) {
    model::ValidationReport rep;
    rep.add_error("/", e.what());
    return rep;
  }
  Reader reader;
  reader.read_root(root);
  return reader.report;
}

model::ValidationReport full_check(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes);
  } catch (const json::parse_error& e) {
    model::ValidationReport rep;
    rep.add_error("/", e.what());
    return rep;
  }
  Reader reader;
  const model::Scenario s = reader.read_root(root);
  model::ValidationReport merged = reader.report;
  if (merged.error_count() > 0) return merged;
  const model::ValidationReport semantic = model::validate_scenario(s);
  merged.violations.insert(merged.violations.end(),
                           semantic.violations.begin(),
                           semantic.violations.end());
  return merged;
}

std::string serialize(const model::Scenario& scenario) {
  const model::ValidationReport rep = model::validate_scenario(scenario);
  if (!rep.ok()) {
    throw ValidationError(summarize(rep));
  }
  try {
    return canonical_dump(write_scenario(scenario));
  } catch (const json::type_error& e) {
    // Invalid UTF-8 in a string surfaces here from the dumper.
    throw ValidationError(std::string("cannot serialize scenario: ") +
                          e.what());
  }
}

nlohmann::json metadata_to_json(const model::ScenarioMetadata& m) {
  json out{
      {"creation_time", m.creation_time},
      {"acquisition_method", model::to_string(m.acquisition_method)},
      {"data_use_restrictions", m.data_use_restrictions},
      {"origin", model::to_string(m.origin)},
      {"area", model::to_string(m.area)},
      {"scenario_duration", num(m.scenario_duration)},
  };
  if (!m.dynamic_ranges.empty()) {
    json ranges = json::object();
    for (const auto& [name, r] : m.dynamic_ranges) ranges[name] = vec2_json(r);
    out["dynamic_ranges"] = std::move(ranges);
  }
  return out;
}

model::ScenarioMetadata metadata_from_json(const nlohmann::json& j) {
  model::ScenarioMetadata m;
  m.creation_time = j.at("creation_time").get<std::string>();
  const auto method = model::acquisition_method_from_string(
      j.at("acquisition_method").get<std::string>());
  const auto origin =
      model::origin_from_string(j.at("origin").get<std::string>());
  const auto area = model::area_from_string(j.at("area").get<std::string>());
  if (!method || !origin || !area) {
    throw SchemaError("metadata: invalid enum value");
  }
  m.acquisition_method = *method;
  m.origin = *origin;
  m.area = *area;
  m.data_use_restrictions = j.at("data_use_restrictions").get<std::string>();
  m.scenario_duration = j.at("scenario_duration").get<double>();
  if (auto it = j.find("dynamic_ranges"); it != j.end()) {
    for (const auto& [name, rv] : it->items()) {
      m.dynamic_ranges[name] = {rv.at(0).get<double>(), rv.at(1).get<double>()};
    }
  }
  return m;
}

}  // namespace aveas::io
