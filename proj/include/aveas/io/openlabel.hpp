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

#ifndef AVEAS_IO_OPENLABEL_HPP_
#define AVEAS_IO_OPENLABEL_HPP_

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aveas/model/types.hpp"
#include "aveas/model/validate.hpp"

namespace aveas::io {

inline constexpr const char* kSchemaVersion = "1.0.0";
inline constexpr const char* kProfileName = "aveas-harmonized/1.0";
inline constexpr const char* kFileExtension = ".aveas.json";

// Canonical text form: sorted keys, two-space indent, shortest round-trip
// number rendering, UTF-8, one trailing newline. Two semantically equal
// documents serialize to identical bytes.
std::string canonical_dump(const nlohmann::json& j);

// Full parse. Throws SyntaxError (malformed JSON, message carries
// line/column), SchemaError (profile violation, message carries the JSON
// path) or SemanticError (content inconsistencies such as dangling
// references or non-monotonic timestamps). Every document schema_check
// rejects is also rejected here.
model::Scenario parse(std::string_view bytes);

// Structural check only: JSON syntax plus profile shape. Never throws on
// bad input; problems come back in the report. Semantic validation of the
// content is validate_scenario's job.
model::ValidationReport schema_check(std::string_view bytes);

// Structural and semantic check combined; total like schema_check. The
// semantic stage only runs once the document is structurally sound.
model::ValidationReport full_check(std::string_view bytes);

// Serializes to canonical bytes. Validates first and throws ValidationError
// when the scenario has validation errors or non-finite numbers anywhere,
// including inside free-form fields.
std::string serialize(const model::Scenario& scenario);

// Exposed for the store index, which embeds scenario metadata.
nlohmann::json metadata_to_json(const model::ScenarioMetadata& m);
model::ScenarioMetadata metadata_from_json(const nlohmann::json& j);

}  // namespace aveas::io

#endif  // AVEAS_IO_OPENLABEL_HPP_
