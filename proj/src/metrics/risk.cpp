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

#include "aveas/metrics/risk.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "aveas/errors.hpp"
#include "aveas/model/validate.hpp"
#include "aveas/util/parallel.hpp"

namespace aveas::metrics {

using util::Vec2;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inflation of the separating-axis half extents. Keeps grazing contact and
// degenerate (point-sized) footprints well defined without visibly moving
// the contact time of real-sized bodies.
constexpr double kContactEps = 1e-9;

struct FollowingGeometry {
  double gap = 0.0;           // bumper to bumper along the ego heading
  double ego_speed = 0.0;     // velocity component along the ego heading
  double target_speed = 0.0;  // same axis
};

// Same-path following geometry from world kinematics: target ahead of the
// ego along its heading, lateral offset within the combined half widths
// (inclusive, so point footprints on the exact same line still qualify).
std::optional<FollowingGeometry> following_geometry(const KinematicPair& p) {
  const Vec2 dir = util::unit_from_heading(p.ego.heading);
  const Vec2 lat = dir.perp();
  const Vec2 rel = p.target.position - p.ego.position;
  const double lon = rel.dot(dir);
  if (!(lon > 0.0)) return std::nullopt;
  if (std::abs(rel.dot(lat)) > 0.5 * (p.ego.width + p.target.width)) {
    return std::nullopt;
  }
  const double gap = lon - 0.5 * (p.ego.length + p.target.length);
  if (gap < 0.0) return std::nullopt;
  return FollowingGeometry{gap, p.ego.velocity.dot(dir),
                           p.target.velocity.dot(dir)};
}

struct Axes {
  Vec2 dir;
  Vec2 lat;
};

Axes body_axes(const Body& b) {
  const Vec2 dir = util::unit_from_heading(b.heading);
  return {dir, dir.perp()};
}

// First time the moving rectangle covers the static point q, or nullopt.
std::optional<double> cover_time(const Body& b, Vec2 q) {
  const Axes ax = body_axes(b);
  const Vec2 d0 = q - b.position;
  double lo = -kInf;
  double hi = kInf;
  const std::pair<Vec2, double> constraints[2] = {
      {ax.dir, 0.5 * b.length + kContactEps},
      {ax.lat, 0.5 * b.width + kContactEps},
  };
  for (const auto& [axis, r] : constraints) {
    const double c = d0.dot(axis);
    const double m = -b.velocity.dot(axis);
    if (m == 0.0) {
      if (std::abs(c) > r) return std::nullopt;
      continue;
    }
    double t1 = (-r - c) / m;
    double t2 = (r - c) / m;
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  if (lo > hi) return std::nullopt;
  const double t = std::max(lo, 0.0);
  if (t > hi) return std::nullopt;
  return t;
}

}  // namespace

std::optional<double> thw(const KinematicPair& pair) {
  const auto fg = following_geometry(pair);
  if (!fg || !(fg->ego_speed > 0.0)) return std::nullopt;
  return fg->gap / fg->ego_speed;
}

std::optional<double> dhw(const KinematicPair& pair) {
  const auto fg = following_geometry(pair);
  if (!fg) return std::nullopt;
  return fg->gap;
}

std::optional<double> ttc(const KinematicPair& pair) {
  const auto fg = following_geometry(pair);
  if (!fg || !(fg->ego_speed > fg->target_speed)) return std::nullopt;
  return fg->gap / (fg->ego_speed - fg->target_speed);
}

std::optional<double> gttc(const KinematicPair& pair, double horizon,
                           FootprintMode mode) {
  const Axes ego_ax = body_axes(pair.ego);
  const Axes tgt_ax = body_axes(pair.target);
  const Vec2 d0 = pair.target.position - pair.ego.position;
  const Vec2 vr = pair.target.velocity - pair.ego.velocity;

  const Vec2 axes[4] = {ego_ax.dir, ego_ax.lat, tgt_ax.dir, tgt_ax.lat};
  double lo = -kInf;
  double hi = kInf;
  for (const Vec2& axis : axes) {
    double r = kContactEps;
    if (mode == FootprintMode::kFootprint) {
      r += 0.5 * pair.ego.length * std::abs(axis.dot(ego_ax.dir)) +
           0.5 * pair.ego.width * std::abs(axis.dot(ego_ax.lat)) +
           0.5 * pair.target.length * std::abs(axis.dot(tgt_ax.dir)) +
           0.5 * pair.target.width * std::abs(axis.dot(tgt_ax.lat));
    }
    const double c = d0.dot(axis);
    const double m = vr.dot(axis);
    if (m == 0.0) {
      // No relative motion along this axis: either always or never
      // separated here.
      if (std::abs(c) > r) return std::nullopt;
      continue;
    }
    double t1 = (-r - c) / m;
    double t2 = (r - c) / m;
    if (t1 > t2) std::swap(t1, t2);
    lo = std::max(lo, t1);
    hi = std::min(hi, t2);
  }
  if (lo > hi) return std::nullopt;
  const double t = std::max(lo, 0.0);
  if (t > hi || t > horizon) return std::nullopt;
  return t;
}

std::optional<double> pret(const KinematicPair& pair, FootprintMode mode) {
  const Vec2 ve = pair.ego.velocity;
  const Vec2 vt = pair.target.velocity;
  // Exactly antisymmetric under swapping the pair, so the parallel test and
  // the arrival times below are bit-identical in both orders.
  const double denom = ve.cross(vt);
  if (denom == 0.0) return std::nullopt;
  const Vec2 dp = pair.target.position - pair.ego.position;
  const double t_ego = dp.cross(vt) / denom;
  const double t_tgt = dp.cross(ve) / denom;
  if (t_ego < 0.0 || t_tgt < 0.0) return std::nullopt;
  if (mode == FootprintMode::kReferencePoint) {
    return std::abs(t_ego - t_tgt);
  }
  // The two straight-line extrapolations meet at the same point up to
  // rounding; the midpoint keeps footprint mode symmetric in the pair.
  const Vec2 q_ego = pair.ego.position + t_ego * ve;
  const Vec2 q_tgt = pair.target.position + t_tgt * vt;
  const Vec2 q = 0.5 * (q_ego + q_tgt);
  const auto entry_ego = cover_time(pair.ego, q);
  const auto entry_tgt = cover_time(pair.target, q);
  if (!entry_ego || !entry_tgt) return std::nullopt;
  return std::abs(*entry_ego - *entry_tgt);
}

namespace {

bool point_in_polygon(Vec2 p, const model::Polygon2D& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = poly[i][0];
    const double yi = poly[i][1];
    const double xj = poly[j][0];
    const double yj = poly[j][1];
    if ((yi > p.y) != (yj > p.y) &&
        p.x < (xj - xi) * (p.y - yi) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

Body body_from_state(const model::FrameState& st) {
  Body b;
  b.position = {st.world_position[0], st.world_position[1]};
  b.heading = st.bbox3d.heading;
  b.length = st.bbox3d.extent[0];
  b.width = st.bbox3d.extent[1];
  b.velocity = st.speed * util::unit_from_heading(st.bbox3d.heading);
  return b;
}

void annotate_frame(model::Frame& frame, double horizon) {
  std::vector<std::string> ids;
  std::vector<Body> bodies;
  std::vector<bool> unobserved;
  ids.reserve(frame.states.size());
  for (auto& [pid, st] : frame.states) {
    st.pairwise_risk.clear();
    Body b = body_from_state(st);
    bool hidden = false;
    for (const auto& poly : frame.unobserved_areas) {
      if (poly.size() >= 3 && point_in_polygon(b.position, poly)) {
        hidden = true;
        break;
      }
    }
    ids.push_back(pid);
    bodies.push_back(b);
    unobserved.push_back(hidden);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (unobserved[i]) continue;
    model::FrameState& ego_state = frame.states.at(ids[i]);
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (i == j || unobserved[j]) continue;
      const KinematicPair pair{bodies[i], bodies[j]};
      model::RiskMeasureSet ms;
      const model::FrameState& tgt_state = frame.states.at(ids[j]);
      const auto& ego_lane = ego_state.lane_position;
      const auto& tgt_lane = tgt_state.lane_position;
      if (ego_lane && tgt_lane && ego_lane->road_id == tgt_lane->road_id &&
          ego_lane->lane_id == tgt_lane->lane_id) {
        // Shared lane: headways along the lane coordinate.
        const double ds = tgt_lane->s - ego_lane->s;
        const double gap =
            ds - 0.5 * (pair.ego.length + pair.target.length);
        if (ds > 0.0 && gap >= 0.0) {
          ms.dhw = gap;
          if (ego_state.speed > 0.0) ms.thw = gap / ego_state.speed;
          if (ego_state.speed > tgt_state.speed) {
            ms.ttc = gap / (ego_state.speed - tgt_state.speed);
          }
        }
      } else {
        ms.thw = thw(pair);
        ms.dhw = dhw(pair);
        ms.ttc = ttc(pair);
      }
      ms.gttc = gttc(pair, horizon);
      ms.pret = pret(pair);
      ego_state.pairwise_risk.emplace(ids[j], ms);
    }
  }
}

}  // namespace

model::Scenario annotate_scenario(const model::Scenario& scenario,
                                  double horizon, int threads) {
  const model::ValidationReport rep = model::validate_scenario(scenario);
  if (!rep.ok()) {
    std::string msg = "cannot annotate an invalid scenario";
    for (const auto& v : rep.violations) {
      if (v.severity == model::Severity::kError) {
        msg += ": " + v.path + ": " + v.message;
        break;
      }
    }
    throw ValidationError(msg);
  }
  model::Scenario out = scenario;
  util::parallel_for(out.frames.size(), threads, [&](std::size_t fi) {
    annotate_frame(out.frames[fi], horizon);
  });
  return out;
}

}  // namespace aveas::metrics
