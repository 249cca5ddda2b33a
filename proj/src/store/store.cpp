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

#include "aveas/store/store.hpp"

#include <algorithm>

#include "aveas/errors.hpp"
#include "aveas/io/openlabel.hpp"
#include "aveas/util/fs.hpp"
#include "aveas/util/hash.hpp"

namespace aveas::store {

using nlohmann::json;

namespace {

constexpr const char* kIndexFile = "index.json";
constexpr const char* kLockFile = ".lock";
constexpr int kIndexVersion = 1;

std::set<model::EventType> collect_event_types(const model::Scenario& s) {
  std::set<model::EventType> types;
  for (const auto& e : s.events) {
    if (e.event_type) types.insert(*e.event_type);
  }
  return types;
}

template <typename E>
std::set<E> enum_set_from_json(const json& v, const char* what,
                               std::optional<E> (*from)(std::string_view)) {
  if (!v.is_array()) {
    throw ConfigError(std::string("query filter '") + what +
                      "' must be an array of strings");
  }
  std::set<E> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw ConfigError(std::string("query filter '") + what +
                        "' must contain only strings");
    }
    const auto e = from(item.get<std::string>());
    if (!e) {
      throw ConfigError(std::string("query filter '") + what +
                        "': unknown value '" + item.get<std::string>() + "'");
    }
    out.insert(*e);
  }
  return out;
}

std::array<double, 2> range_from_json(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
      !v[1].is_number()) {
    throw ConfigError(std::string("query filter '") + what +
                      "' must be [min, max]");
  }
  const std::array<double, 2> r{v[0].get<double>(), v[1].get<double>()};
  if (r[0] > r[1]) {
    throw ConfigError(std::string("query filter '") + what +
                      "': min exceeds max");
  }
  return r;
}

}  // namespace

json StoreIndex::to_json() const {
  json out_entries = json::object();
  for (const auto& [id, e] : entries) {
    std::vector<std::string> types;
    types.reserve(e.event_types.size());
    for (const auto t : e.event_types) types.push_back(model::to_string(t));
    std::sort(types.begin(), types.end());
    out_entries[id] = json{
        {"file", e.file},
        {"content_hash", e.content_hash},
        {"event_types", types},
        {"metadata", io::metadata_to_json(e.metadata)},
    };
  }
  return json{{"version", kIndexVersion}, {"entries", std::move(out_entries)}};
}

StoreIndex StoreIndex::from_json(const json& j) {
  StoreIndex idx;
  if (j.at("version").get<int>() != kIndexVersion) {
    throw CorruptEntryError("index.json: unsupported index version");
  }
  for (const auto& [id, ev] : j.at("entries").items()) {
    IndexEntry entry;
    entry.file = ev.at("file").get<std::string>();
    entry.content_hash = ev.at("content_hash").get<std::string>();
    for (const auto& tv : ev.at("event_types")) {
      const auto t = model::event_type_from_string(tv.get<std::string>());
      if (!t) {
        throw CorruptEntryError("index.json: unknown event type '" +
                                tv.get<std::string>() + "'");
      }
      entry.event_types.insert(*t);
    }
    entry.metadata = io::metadata_from_json(ev.at("metadata"));
    idx.entries.emplace(id, std::move(entry));
  }
  return idx;
}

bool QueryFilter::matches(const IndexEntry& entry) const {
  const auto& m = entry.metadata;
  if (!areas.empty() && !areas.count(m.area)) return false;
  if (!acquisition_methods.empty() &&
      !acquisition_methods.count(m.acquisition_method)) {
    return false;
  }
  if (!origins.empty() && !origins.count(m.origin)) return false;
  if (!event_types.empty()) {
    const bool any = std::any_of(
        event_types.begin(), event_types.end(),
        [&](model::EventType t) { return entry.event_types.count(t) > 0; });
    if (!any) return false;
  }
  if (duration_range &&
      (m.scenario_duration < (*duration_range)[0] ||
       m.scenario_duration > (*duration_range)[1])) {
    return false;
  }
  if (dynamic_range) {
    const auto it = m.dynamic_ranges.find(dynamic_range->quantity);
    if (it == m.dynamic_ranges.end()) return false;
    if (it->second[1] < dynamic_range->range[0] ||
        it->second[0] > dynamic_range->range[1]) {
      return false;
    }
  }
  if (restrictions_contain &&
      m.data_use_restrictions.find(*restrictions_contain) ==
          std::string::npos) {
    return false;
  }
  return true;
}

QueryFilter QueryFilter::from_json(const json& j) {
  if (!j.is_object()) {
    throw ConfigError("query filter must be a JSON object");
  }
  QueryFilter f;
  for (const auto& [key, v] : j.items()) {
    if (key == "area") {
      f.areas = enum_set_from_json(v, "area", model::area_from_string);
    } else if (key == "acquisition_method") {
      f.acquisition_methods = enum_set_from_json(
          v, "acquisition_method", model::acquisition_method_from_string);
    } else if (key == "origin") {
      f.origins = enum_set_from_json(v, "origin", model::origin_from_string);
    } else if (key == "event_type") {
      f.event_types =
          enum_set_from_json(v, "event_type", model::event_type_from_string);
    } else if (key == "duration") {
      f.duration_range = range_from_json(v, "duration");
    } else if (key == "dynamic_range") {
      if (!v.is_object() || !v.contains("quantity") ||
          !v["quantity"].is_string()) {
        throw ConfigError(
            "query filter 'dynamic_range' needs a string 'quantity' and a "
            "'range' [min, max]");
      }
      DynamicRangeFilter drf;
      drf.quantity = v["quantity"].get<std::string>();
      drf.range = range_from_json(v.at("range"), "dynamic_range.range");
      f.dynamic_range = std::move(drf);
    } else if (key == "restrictions_contain") {
      if (!v.is_string()) {
        throw ConfigError("query filter 'restrictions_contain' must be a "
                          "string");
      }
      f.restrictions_contain = v.get<std::string>();
    } else {
      throw ConfigError("unknown query filter field '" + key + "'");
    }
  }
  return f;
}

Store::Store(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) {
    throw IoError("cannot create store root: " + root_.string() + " (" +
                  ec.message() + ")");
  }
  load_index();
}

void Store::load_index() {
  const auto path = root_ / kIndexFile;
  if (!std::filesystem::exists(path)) {
    index_ = StoreIndex{};
    return;
  }
  const std::string bytes = util::read_file(path);
  try {
    index_ = StoreIndex::from_json(json::parse(bytes));
  } catch (const json::exception& e) {
    throw CorruptEntryError("index.json is not valid JSON: " +
                            std::string(e.what()));
  }
}

void Store::save_index() const {
  util::write_file_atomic(root_ / kIndexFile,
                          io::canonical_dump(index_.to_json()));
}

std::string Store::ingest(std::string_view bytes) {
  model::Scenario scenario;
  try {
    scenario = io::parse(bytes);
  } catch (const SyntaxError& e) {
    throw ValidationFailedError(std::string("ingest rejected: ") + e.what());
  } catch (const SchemaError& e) {
    throw ValidationFailedError(std::string("ingest rejected: ") + e.what());
  } catch (const SemanticError& e) {
    throw ValidationFailedError(std::string("ingest rejected: ") + e.what());
  }
  const std::string canonical = io::serialize(scenario);
  const std::string& id = scenario.scenario_id;

  util::FileLock lock(root_ / kLockFile);
  load_index();  // pick up concurrent writers before checking for duplicates
  if (index_.entries.count(id)) {
    throw DuplicateIdError("scenario '" + id + "' is already stored");
  }

  const std::string area = model::to_string(scenario.metadata.area);
  const std::string rel = area + "/" + id + io::kFileExtension;
  std::error_code ec;
  std::filesystem::create_directories(root_ / area, ec);
  if (ec) {
    throw IoError("cannot create area directory: " + (root_ / area).string());
  }
  util::write_file_atomic(root_ / rel, canonical);

  IndexEntry entry;
  entry.file = rel;
  entry.content_hash = util::sha256_hex(canonical);
  entry.event_types = collect_event_types(scenario);
  entry.metadata = scenario.metadata;
  index_.entries.emplace(id, std::move(entry));
  save_index();
  return id;
}

void Store::replace(const std::string& id, std::string_view bytes) {
  model::Scenario scenario;
  try {
    scenario = io::parse(bytes);
  } catch (const Error& e) {
    throw ValidationFailedError(std::string("replace rejected: ") + e.what());
  }
  if (scenario.scenario_id != id) {
    throw ValidationFailedError("replace rejected: document carries id '" +
                                scenario.scenario_id + "', expected '" + id +
                                "'");
  }
  const std::string canonical = io::serialize(scenario);

  util::FileLock lock(root_ / kLockFile);
  load_index();
  const auto it = index_.entries.find(id);
  if (it == index_.entries.end()) {
    throw NotFoundError("scenario '" + id + "' is not in the store");
  }

  const std::string area = model::to_string(scenario.metadata.area);
  const std::string rel = area + "/" + id + io::kFileExtension;
  std::error_code ec;
  std::filesystem::create_directories(root_ / area, ec);
  if (ec) {
    throw IoError("cannot create area directory: " + (root_ / area).string());
  }
  util::write_file_atomic(root_ / rel, canonical);
  if (rel != it->second.file) {
    std::filesystem::remove(root_ / it->second.file, ec);
  }

  it->second.file = rel;
  it->second.content_hash = util::sha256_hex(canonical);
  it->second.event_types = collect_event_types(scenario);
  it->second.metadata = scenario.metadata;
  save_index();
}

model::Scenario Store::fetch(const std::string& id) const {
  const auto it = index_.entries.find(id);
  if (it == index_.entries.end()) {
    throw NotFoundError("scenario '" + id + "' is not in the store");
  }
  const auto path = root_ / it->second.file;
  std::string bytes;
  try {
    bytes = util::read_file(path);
  } catch (const IoError&) {
    throw CorruptEntryError("scenario '" + id +
                            "': indexed file is missing: " + it->second.file);
  }
  if (util::sha256_hex(bytes) != it->second.content_hash) {
    throw CorruptEntryError("scenario '" + id +
                            "': content hash mismatch, file was modified");
  }
  try {
    return io::parse(bytes);
  } catch (const Error& e) {
    throw CorruptEntryError("scenario '" + id +
                            "': stored bytes no longer parse: " + e.what());
  }
}

std::vector<std::pair<std::string, model::ScenarioMetadata>> Store::query(
    const QueryFilter& filter) const {
  std::vector<std::pair<std::string, model::ScenarioMetadata>> out;
  for (const auto& [id, entry] : index_.entries) {
    if (filter.matches(entry)) out.emplace_back(id, entry.metadata);
  }
  return out;
}

ReindexResult Store::reindex() {
  util::FileLock lock(root_ / kLockFile);
  ReindexResult result;

  std::vector<std::filesystem::path> files;
  for (const auto& de :
       std::filesystem::recursive_directory_iterator(root_)) {
    if (!de.is_regular_file()) continue;
    const std::string name = de.path().filename().string();
    if (name.size() < std::string(io::kFileExtension).size() ||
        name.substr(name.size() - std::string(io::kFileExtension).size()) !=
            io::kFileExtension) {
      continue;
    }
    files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    const std::string rel =
        std::filesystem::relative(path, root_).generic_string();
    std::string bytes;
    try {
      bytes = util::read_file(path);
    } catch (const IoError& e) {
      result.skipped.emplace_back(rel, e.what());
      continue;
    }
    model::Scenario scenario;
    try {
      scenario = io::parse(bytes);
    } catch (const Error& e) {
      result.skipped.emplace_back(rel, e.what());
      continue;
    }
    const std::string& id = scenario.scenario_id;
    if (result.index.entries.count(id)) {
      result.skipped.emplace_back(
          rel, "duplicate scenario_id '" + id + "', already indexed from " +
                   result.index.entries.at(id).file);
      continue;
    }
    IndexEntry entry;
    entry.file = rel;
    entry.content_hash = util::sha256_hex(bytes);
    entry.event_types = collect_event_types(scenario);
    entry.metadata = scenario.metadata;
    result.index.entries.emplace(id, std::move(entry));
  }

  index_ = result.index;
  save_index();
  return result;
}

}  // namespace aveas::store
