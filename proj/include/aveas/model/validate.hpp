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

#ifndef AVEAS_MODEL_VALIDATE_HPP_
#define AVEAS_MODEL_VALIDATE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aveas/model/types.hpp"

namespace aveas::model {

enum class Severity { kError, kWarning };

struct Violation {
  Severity severity = Severity::kError;
  std::string path;  // JSON-pointer-style location in the document layout
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return error_count() == 0; }
  std::size_t error_count() const;
  std::size_t warning_count() const;

  void add_error(std::string path, std::string message);
  void add_warning(std::string path, std::string message);

  nlohmann::json to_json() const;
};

// Tolerances are part of the contract: documents that pass on one machine
// must pass on every machine.
inline constexpr double kDurationToleranceSeconds = 1e-3;
inline constexpr double kSpeedRangeTolerance = 1e-2;
inline constexpr double kDynamicRangeTolerance = 1e-9;
inline constexpr double kEventTimeTolerance = 1e-9;
inline constexpr double kSpeedConsistencyTolerance = 0.5;  // m/s, warning

// Full semantic validation of an in-memory scenario. Errors mark documents
// that must not be stored or exchanged; warnings mark suspicious content.
ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace aveas::model

#endif  // AVEAS_MODEL_VALIDATE_HPP_
