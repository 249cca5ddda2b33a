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

#ifndef AVEAS_UTIL_RNG_HPP_
#define AVEAS_UTIL_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace aveas::util {

// Counter-based generator built on the splitmix64 finalizer. Draws are a
// pure function of (key, counter), so per-entity randomness is independent
// of iteration order and of how many draws other entities consume. Bumping
// kRngVersion declares a deliberate break of bit-level reproducibility.
inline constexpr const char* kRngName = "splitmix64-counter";
inline constexpr int kRngVersion = 1;

inline constexpr std::uint64_t kSplitmixGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += kSplitmixGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr CounterRng master(std::uint64_t seed) {
    return CounterRng(splitmix64(seed ^ 0x5851F42D4C957F2Dull));
  }

  // Derives an independent stream, e.g. one per vehicle or per repeat.
  constexpr CounterRng stream(std::uint64_t stream_id) const {
    return CounterRng(splitmix64(key_ ^ splitmix64(stream_id)));
  }

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return splitmix64(key_ ^ splitmix64(counter + kSplitmixGamma));
  }

  // Uniform on the open interval (0, 1); never returns an exact endpoint,
  // which keeps log() in Box-Muller finite.
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t counter, double mean, double stddev) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double z =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + stddev * z;
  }

  // Rejection-sampled Gaussian restricted to [lo, hi]. The counter walk is
  // local, so neighbouring base counters must be spaced via stream() or a
  // generous stride.
  double truncated_normal(std::uint64_t counter0, double mean, double stddev,
                          double lo, double hi) const {
    for (std::uint64_t k = 0;; ++k) {
      const double x = normal(counter0 + k, mean, stddev);
      if (x >= lo && x <= hi) return x;
    }
  }

 private:
  std::uint64_t key_;
};

}  // namespace aveas::util

#endif  // AVEAS_UTIL_RNG_HPP_
