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

#ifndef AVEAS_UTIL_VEC2_HPP_
#define AVEAS_UTIL_VEC2_HPP_

#include <cmath>

namespace aveas::util {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double k) const { return {x * k, y * k}; }
  constexpr bool operator==(const Vec2&) const = default;

  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  // z component of the 3D cross product; positive when o lies to the left.
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  // Left-hand normal, a quarter turn counter-clockwise.
  constexpr Vec2 perp() const { return {-y, x}; }
  double norm() const { return std::hypot(x, y); }
};

constexpr Vec2 operator*(double k, Vec2 v) { return {k * v.x, k * v.y}; }

inline Vec2 unit_from_heading(double heading) {
  return {std::cos(heading), std::sin(heading)};
}

}  // namespace aveas::util

#endif  // AVEAS_UTIL_VEC2_HPP_
