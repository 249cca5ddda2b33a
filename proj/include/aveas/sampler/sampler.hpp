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

#ifndef AVEAS_SAMPLER_SAMPLER_HPP_
#define AVEAS_SAMPLER_SAMPLER_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aveas/model/types.hpp"
#include "aveas/sim/simulator.hpp"

namespace aveas::sampler {

enum class ScenarioType { kLaneChangeCutIn };
enum class VariedParameter { kCutInGap, kApproachSpeedDelta };

const char* to_string(ScenarioType t);
const char* to_string(VariedParameter p);
std::optional<ScenarioType> scenario_type_from_string(std::string_view s);
std::optional<VariedParameter> varied_parameter_from_string(
    std::string_view s);

// One swept axis. Exactly one source must be set: explicit values, a
// [lo, hi] range with n_steps, or the name of a dynamic-range quantity of
// the base scenario with n_steps.
struct VariedAxis {
  VariedParameter parameter = VariedParameter::kCutInGap;
  std::vector<double> values;
  std::optional<std::array<double, 2>> range;
  std::optional<std::string> from_range;
  int n_steps = 0;
};

struct VariationSpec {
  std::string base_scenario_id;
  ScenarioType scenario_type = ScenarioType::kLaneChangeCutIn;
  std::vector<VariedAxis> varied;
  sim::ModelParams params = sim::ModelParams::defaults();

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  static VariationSpec from_json(const nlohmann::json& j);
};

// Grid values of one axis; linspace for the range forms. Throws ConfigError
// when a from_range quantity is not declared by the base scenario or a
// cut-in gap value is not positive.
std::vector<double> resolve_axis(const VariedAxis& axis,
                                 const model::Scenario& base);

struct CriticalityOutcome {
  std::vector<double> varied_values;  // one per axis, spec order
  double a_req = 0.0;                 // +infinity when gap <= cc0
  bool crashed = false;  // definitionally a_req > approacher max_decel
  double min_gap = 0.0;  // m, over the simulated pair interaction
  std::optional<double> min_ttc;  // s, absent when never closing
};

// The simulation seed frame reconstructed from a recorded lane-change
// event: every positioned participant at the event start, plus which
// vehicle cuts in and which one approaches in the destination lane.
struct StartState {
  sim::SimConfig config;
  std::vector<sim::InitialVehicle> vehicles;
  std::size_t cutter = 0;      // index into vehicles
  std::size_t approacher = 0;  // index into vehicles
  int from_lane = 0;
  int to_lane = 0;
  double base_gap = 0.0;          // bumper gap approacher -> cutter, m
  double base_speed_delta = 0.0;  // approacher speed - cutter speed, m/s
};

// First lane_change or cut_in event of the scenario; throws
// NoSuchEventError when there is none.
const model::EventRecord& find_lane_change_event(const model::Scenario& s);

// Throws MissingStatesError when an involved participant has no positioned
// state at the event start or no approaching vehicle exists in the
// destination lane, SemanticError when no involved participant changes
// lane across the event.
StartState extract_start_state(const model::Scenario& s,
                               const model::EventRecord& event);

// One deterministic simulation per grid point, row-major over the axes
// (last axis fastest). Lane changing is disabled in these runs so the
// pair interaction stays longitudinal.
std::vector<CriticalityOutcome> sweep(const VariationSpec& spec,
                                      const model::Scenario& base,
                                      int threads = 1);

// Re-simulates every outcome with a_req >= threshold and converts it into a
// scenario tagged with a cut_in event and the realized a_req as the
// approacher's behavior risk. Ids are "<base id>-cutin-<grid index>".
std::vector<model::Scenario> emit_samples(
    const VariationSpec& spec, const model::Scenario& base,
    const std::vector<CriticalityOutcome>& outcomes, double threshold);

// CSV report: one column per varied axis, then a_req, crashed, min_gap,
// min_ttc. Infinite a_req prints as "inf"; absent min_ttc as empty.
std::string outcomes_to_csv(const VariationSpec& spec,
                            const std::vector<CriticalityOutcome>& outcomes);

}  // namespace aveas::sampler

#endif  // AVEAS_SAMPLER_SAMPLER_HPP_
