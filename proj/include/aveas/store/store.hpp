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

#ifndef AVEAS_STORE_STORE_HPP_
#define AVEAS_STORE_STORE_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aveas/model/types.hpp"

namespace aveas::store {

struct IndexEntry {
  std::string file;          // path relative to the store root
  std::string content_hash;  // SHA-256 of the stored bytes, lowercase hex
  std::set<model::EventType> event_types;
  model::ScenarioMetadata metadata;

  bool operator==(const IndexEntry&) const = default;
};

struct StoreIndex {
  std::map<std::string, IndexEntry> entries;  // keyed by scenario_id

  nlohmann::json to_json() const;
  static StoreIndex from_json(const nlohmann::json& j);

  bool operator==(const StoreIndex&) const = default;
};

// All filter dimensions are optional and combined with AND. Empty set
// filters impose no constraint; set filters match when the entry value is
// in the set (for event types: any overlap).
struct QueryFilter {
  std::set<model::Area> areas;
  std::set<model::AcquisitionMethod> acquisition_methods;
  std::set<model::Origin> origins;
  std::set<model::EventType> event_types;
  std::optional<std::array<double, 2>> duration_range;  // inclusive
  // Quantity must be declared and its recorded range overlap the given one.
  struct DynamicRangeFilter {
    std::string quantity;
    std::array<double, 2> range{0.0, 0.0};
  };
  std::optional<DynamicRangeFilter> dynamic_range;
  std::optional<std::string> restrictions_contain;  // substring match

  bool matches(const IndexEntry& entry) const;
  // Throws ConfigError on unknown fields or malformed values.
  static QueryFilter from_json(const nlohmann::json& j);
};

struct ReindexResult {
  StoreIndex index;
  // (relative path, reason) for files that were found but not indexed.
  std::vector<std::pair<std::string, std::string>> skipped;
};

// Local content-addressed scenario store. Layout:
//   <root>/<area>/<scenario_id>.aveas.json   canonical scenario bytes
//   <root>/index.json                        canonical index
//   <root>/.lock                             advisory write lock
// Writers take the lock and replace files atomically (temp + rename), so a
// crash can leave stray *.tmp files but never a torn index or entry.
class Store {
 public:
  explicit Store(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  const StoreIndex& index() const { return index_; }

  // Validates, canonicalizes and stores the document; returns scenario_id.
  // Throws ValidationFailedError (document rejected) or DuplicateIdError.
  std::string ingest(std::string_view bytes);

  // Throws NotFoundError for unknown ids and CorruptEntryError when the
  // stored bytes are missing, hash-mismatched or unparseable.
  model::Scenario fetch(const std::string& id) const;

  // Replaces the stored document of an existing id (e.g. after metric
  // annotation). The document must be valid and carry that same id. Throws
  // NotFoundError or ValidationFailedError.
  void replace(const std::string& id, std::string_view bytes);

  // Entries matching the filter, ordered by scenario_id.
  std::vector<std::pair<std::string, model::ScenarioMetadata>> query(
      const QueryFilter& filter) const;

  // Rebuilds the index purely from the files on disk and rewrites
  // index.json. Unreadable or invalid files are reported, not fatal.
  ReindexResult reindex();

 private:
  void load_index();
  void save_index() const;

  std::filesystem::path root_;
  StoreIndex index_;
};

}  // namespace aveas::store

#endif  // AVEAS_STORE_STORE_HPP_
