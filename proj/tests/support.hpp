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

// Shared fixtures, independent oracles and process helpers for the test
// binaries. Everything here is deliberately free of doctest so that the
// acceptance binary can link it too.

#ifndef AVEAS_TESTS_SUPPORT_HPP_
#define AVEAS_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aveas/metrics/risk.hpp"
#include "aveas/model/types.hpp"
#include "aveas/store/store.hpp"

namespace testsupport {

// Deterministic splitmix-style generator. The standard <random>
// distributions are implementation-defined, so every random draw in the
// tests goes through these helpers instead to keep fixtures and golden
// comparisons identical across toolchains.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double u01();                          // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int lo, int hi);       // inclusive bounds
  bool chance(double p);
  double normal(double mean, double sd);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Unique directory under the system temp root, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Fixtures. Each builder returns a scenario that validates with 0 errors
// and 0 warnings; the numbers are fixed so tests can recompute expectations
// independently.
// ---------------------------------------------------------------------------

// One car, three frames of straight constant-speed driving.
aveas::model::Scenario minimal_scenario();

// Two cars in one lane: "lead" ahead of "ego" by `gap` (bumper to bumper)
// at t = 0, both at constant speed, frames every 0.1 s. Both carry lane
// positions on road_0 lane 0. Car length is 4.5 m.
aveas::model::Scenario following_scenario(int n_frames, double gap,
                                          double v_lead, double v_ego);

// Three cars and a lane_change event "lc-0" over [0.4, 1.2] s: "cutter"
// moves from lane 1 to lane 0, in front of "appr" and behind "lead". At the
// event start frame (t = 0.4): appr s = 24.4 at 36 m/s, cutter s = 41.2 at
// 28 m/s, lead s = 100.8 at 27 m/s; bumper gap appr->cutter = 12.3 m.
aveas::model::Scenario cutin_base_scenario();

// Scenario with every optional field populated, fixed values throughout.
aveas::model::Scenario rich_scenario();

// Randomized valid scenario covering all optional fields. `index` feeds the
// scenario id and must be unique within one corpus.
aveas::model::Scenario random_scenario(TestRng& rng, int index);

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// First overlap time of the two moving footprints found by brute-force
// stepping: at t = 0, dt, 2dt, ..., horizon the corner-projection
// separating-axis test decides overlap. Independent of the closed-form
// implementation.
std::optional<double> gttc_stepping_oracle(
    const aveas::metrics::KinematicPair& pair, double horizon, double dt);

// Brute-force query evaluation: parses every .aveas.json file under root
// (ignoring the index entirely) and applies the documented filter semantics
// directly. Returns matching scenario ids, sorted.
std::vector<std::string> brute_force_query(const std::filesystem::path& root,
                                           const aveas::store::QueryFilter& f);

// Random conjunctive filter; each dimension participates with moderate
// probability so both narrow and broad queries occur.
aveas::store::QueryFilter random_filter(TestRng& rng);

// ---------------------------------------------------------------------------
// CLI harness and goldens
// ---------------------------------------------------------------------------

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the pipeline binary through the shell with stdout/stderr captured.
// `args` is appended verbatim; paths in it must not contain spaces.
CliResult run_cli(const std::string& args);

std::filesystem::path golden_path(const std::string& rel);

// Compares against the committed golden file. When AVEAS_UPDATE_GOLDEN is
// set in the environment, rewrites the golden instead and succeeds.
bool matches_golden(const std::string& rel, const std::string& actual);

}  // namespace testsupport

#endif  // AVEAS_TESTS_SUPPORT_HPP_
