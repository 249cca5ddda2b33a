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

#ifndef AVEAS_SIM_TRACE_HPP_
#define AVEAS_SIM_TRACE_HPP_

#include <string>

#include "aveas/model/types.hpp"
#include "aveas/sim/simulator.hpp"

namespace aveas::sim {

inline constexpr double kLaneWidth = 3.5;  // m, lane centerline spacing

// Converts a simulation trace into a scenario that passes validation:
// participants "v0".."vN", one frame per recorded step, lane geometry laid
// out on straight centerlines at y = (lane + 0.5) * kLaneWidth, origin
// "sampled", acquisition method "synthetic". Speeds are copied bit-exactly.
// A collision-truncated trace gets a "collision" event over its final step.
// An empty scenario_id derives one from a digest of the trace.
model::Scenario trace_to_scenario(const SimTrace& trace,
                                  const std::string& scenario_id = "");

}  // namespace aveas::sim

#endif  // AVEAS_SIM_TRACE_HPP_
