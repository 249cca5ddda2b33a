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

#ifndef AVEAS_CALIB_CALIBRATE_HPP_
#define AVEAS_CALIB_CALIBRATE_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aveas/calib/nelder_mead.hpp"
#include "aveas/model/types.hpp"
#include "aveas/sim/simulator.hpp"

namespace aveas::calib {

enum class Observable { kSpeed, kGap, kThw };

const char* to_string(Observable o);
std::optional<Observable> observable_from_string(std::string_view s);

// Observable extraction discards the first third of a run as warmup and
// then samples every kSampleInterval seconds; this decorrelates consecutive
// samples and keeps likelihood evaluation affordable.
inline constexpr double kWarmupFraction = 1.0 / 3.0;
inline constexpr double kSampleInterval = 10.0;  // s

struct ObjectiveSpec {
  Observable observable = Observable::kSpeed;
  std::optional<sim::VehicleClass> class_filter;
  std::vector<std::string> free_params;  // dotted ModelParams names
  std::vector<std::array<double, 2>> bounds;
  sim::SimConfig sim_config;  // template; repeat seeds derive from its seed
  int n_sim_repeats = 3;
  NelderMeadOptions optimizer;
  std::optional<sim::ModelParams> initial_params;

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  static ObjectiveSpec from_json(const nlohmann::json& j);
};

// Observable samples from a trace (post-warmup, strided). Gap and THW come
// from the same-lane leader relation; stopped vehicles contribute no THW.
std::vector<double> extract_observable(
    const sim::SimTrace& trace, Observable obs,
    std::optional<sim::VehicleClass> class_filter);

// Same quantities from a scenario via its lane positions; the class filter
// matches on road user type.
std::vector<double> extract_observable(
    const model::Scenario& scenario, Observable obs,
    std::optional<sim::VehicleClass> class_filter);

struct CalibrateOptions {
  int threads = 1;  // parallelism across the n_sim_repeats simulations
};

// Maximizes the mean (over repeats) KDE log-likelihood of `recorded` under
// the simulated observable distribution. The start point is params0's
// current values of the free parameters. Fully deterministic: repeat seeds
// are fixed functions of sim_config.seed.
CalibrationResult calibrate(const ObjectiveSpec& spec,
                            const std::vector<double>& recorded,
                            const sim::ModelParams& params0,
                            const CalibrateOptions& opts = {});

CalibrationResult calibrate(const ObjectiveSpec& spec,
                            const model::Scenario& recorded,
                            const sim::ModelParams& params0,
                            const CalibrateOptions& opts = {});

// Report for the CLI: result paired with the parameter names it optimized.
nlohmann::json result_to_json(const ObjectiveSpec& spec,
                              const CalibrationResult& result);

}  // namespace aveas::calib

#endif  // AVEAS_CALIB_CALIBRATE_HPP_
