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

#ifndef AVEAS_METRICS_RISK_HPP_
#define AVEAS_METRICS_RISK_HPP_

#include <optional>

#include "aveas/model/types.hpp"
#include "aveas/util/vec2.hpp"

namespace aveas::metrics {

// Rigid body in the world frame at one instant. The footprint is an
// axis-oriented rectangle of the given length/width, centered on position
// and rotated by heading. Velocity is free and need not align with heading.
struct Body {
  util::Vec2 position;
  util::Vec2 velocity;
  double heading = 0.0;
  double length = 0.0;
  double width = 0.0;
};

// Ordered pair: measures describe the risk the ego is exposed to from (or
// toward) the target.
struct KinematicPair {
  Body ego;
  Body target;
};

enum class FootprintMode {
  kFootprint,       // full rectangle extents
  kReferencePoint,  // body center only, extents ignored
};

// Measures are undefined (nullopt) rather than negative or infinite; every
// defined value is >= 0.
inline constexpr double kDefaultGttcHorizon = 20.0;  // seconds

// Time headway: bumper-to-bumper gap divided by ego speed along its own
// heading. Defined only when the target is ahead of the ego within the
// combined half widths and the ego is moving forward.
std::optional<double> thw(const KinematicPair& pair);

// Distance headway: the bumper-to-bumper gap itself.
std::optional<double> dhw(const KinematicPair& pair);

// Time to collision under constant speeds for same-path following; defined
// only when closing.
std::optional<double> ttc(const KinematicPair& pair);

// Generalized TTC: the first t >= 0 at which the two footprints, translated
// by their constant world velocities with frozen headings, overlap. Closed
// form via per-axis interval intersection of the separating-axis test.
std::optional<double> gttc(const KinematicPair& pair,
                           double horizon = kDefaultGttcHorizon,
                           FootprintMode mode = FootprintMode::kFootprint);

// Predicted encroachment time: |t_ego - t_target| of straight-line arrival
// times at the crossing point of the two reference-point paths. Undefined
// for parallel paths or when either body moves away from the crossing
// point. In footprint mode the arrival times are the instants at which each
// rectangle first covers the crossing point.
std::optional<double> pret(const KinematicPair& pair,
                           FootprintMode mode = FootprintMode::kReferencePoint);

// Fills pairwise_risk for every ordered pair of participants present in each
// frame, skipping pairs where either body's center lies inside an unobserved
// area of that frame. Existing pairwise_risk content is replaced. thw, dhw
// and ttc prefer lane positions when both participants share a lane; gttc
// and pret always use world kinematics. Throws ValidationError when the
// input scenario has validation errors.
model::Scenario annotate_scenario(const model::Scenario& scenario,
                                  double horizon = kDefaultGttcHorizon,
                                  int threads = 1);

}  // namespace aveas::metrics

#endif  // AVEAS_METRICS_RISK_HPP_
