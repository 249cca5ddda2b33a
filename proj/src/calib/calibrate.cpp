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

#include "aveas/calib/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aveas/calib/density.hpp"
#include "aveas/errors.hpp"
#include "aveas/util/parallel.hpp"
#include "aveas/util/rng.hpp"

namespace aveas::calib {

using nlohmann::json;

const char* to_string(Observable o) {
  switch (o) {
    case Observable::kSpeed: return "speed";
    case Observable::kGap: return "gap";
    case Observable::kThw: return "thw";
  }
  return "speed";
}

std::optional<Observable> observable_from_string(std::string_view s) {
  if (s == "speed") return Observable::kSpeed;
  if (s == "gap") return Observable::kGap;
  if (s == "thw") return Observable::kThw;
  return std::nullopt;
}

namespace {

constexpr double kMinThwSpeed = 1e-9;  // below this, THW is undefined

// Indices of the post-warmup sample times, at least kSampleInterval apart.
std::vector<std::size_t> kept_indices(const std::vector<double>& times) {
  std::vector<std::size_t> kept;
  if (times.empty()) return kept;
  const double span = times.back() - times.front();
  const double start = times.front() + kWarmupFraction * span;
  double next = start;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= next - 1e-9) {
      kept.push_back(k);
      next = times[k] + kSampleInterval;
    }
  }
  return kept;
}

bool class_matches(model::RoadUserType t, sim::VehicleClass c) {
  return (c == sim::VehicleClass::kCar && t == model::RoadUserType::kCar) ||
         (c == sim::VehicleClass::kTruck && t == model::RoadUserType::kTruck);
}

}  // namespace

std::vector<double> extract_observable(
    const sim::SimTrace& trace, Observable obs,
    std::optional<sim::VehicleClass> class_filter) {
  std::vector<double> out;
  for (const std::size_t k : kept_indices(trace.times)) {
    for (std::size_t i = 0; i < trace.vehicles.size(); ++i) {
      if (class_filter && trace.vehicles[i].cls != *class_filter) continue;
      const auto& st = trace.steps[k][i];
      if (obs == Observable::kSpeed) {
        out.push_back(st.speed);
        continue;
      }
      const auto gap = sim::leader_gap(trace, k, static_cast<int>(i));
      if (!gap) continue;
      if (obs == Observable::kGap) {
        out.push_back(*gap);
      } else if (st.speed > kMinThwSpeed) {
        out.push_back(*gap / st.speed);
      }
    }
  }
  return out;
}

std::vector<double> extract_observable(
    const model::Scenario& scenario, Observable obs,
    std::optional<sim::VehicleClass> class_filter) {
  std::vector<double> times;
  times.reserve(scenario.frames.size());
  for (const auto& f : scenario.frames) times.push_back(f.timestamp);

  std::vector<double> out;
  for (const std::size_t k : kept_indices(times)) {
    const auto& frame = scenario.frames[k];
    for (const auto& [pid, st] : frame.states) {
      const auto pit = scenario.participants.find(pid);
      if (pit == scenario.participants.end()) continue;
      if (class_filter &&
          !class_matches(pit->second.road_user_type, *class_filter)) {
        continue;
      }
      if (obs == Observable::kSpeed) {
        out.push_back(st.speed);
        continue;
      }
      if (!st.lane_position) continue;
      // Nearest participant ahead in the same lane.
      const model::FrameState* leader = nullptr;
      const model::Participant* leader_part = nullptr;
      double best_ds = std::numeric_limits<double>::infinity();
      for (const auto& [oid, ost] : frame.states) {
        if (oid == pid || !ost.lane_position) continue;
        if (ost.lane_position->road_id != st.lane_position->road_id ||
            ost.lane_position->lane_id != st.lane_position->lane_id) {
          continue;
        }
        const double ds = ost.lane_position->s - st.lane_position->s;
        if (ds > 0.0 && ds < best_ds) {
          const auto oit = scenario.participants.find(oid);
          if (oit == scenario.participants.end()) continue;
          best_ds = ds;
          leader = &ost;
          leader_part = &oit->second;
        }
      }
      if (!leader) continue;
      const double gap =
          best_ds -
          0.5 * (pit->second.dimensions.length + leader_part->dimensions.length);
      if (obs == Observable::kGap) {
        out.push_back(gap);
      } else if (st.speed > kMinThwSpeed) {
        out.push_back(gap / st.speed);
      }
    }
  }
  return out;
}

void ObjectiveSpec::validate() const {
  if (free_params.empty()) {
    throw ConfigError("free_params must not be empty");
  }
  if (bounds.size() != free_params.size()) {
    throw ConfigError("bounds must match free_params in length");
  }
  for (const auto& b : bounds) {
    if (!std::isfinite(b[0]) || !std::isfinite(b[1]) || !(b[0] < b[1])) {
      throw ConfigError("bounds must be finite with lo < hi");
    }
  }
  const sim::ModelParams probe = sim::ModelParams::defaults();
  for (const auto& name : free_params) {
    probe.get(name);  // throws ConfigError for unknown names
  }
  if (n_sim_repeats < 1) {
    throw ConfigError("n_sim_repeats must be at least 1");
  }
  if (!(optimizer.tol > 0.0) || optimizer.max_evals < 1) {
    throw ConfigError("optimizer tol must be positive, max_evals at least 1");
  }
  sim_config.validate();
}

json ObjectiveSpec::to_json() const {
  json b = json::array();
  for (const auto& r : bounds) b.push_back(json::array({r[0], r[1]}));
  json j{{"observable", to_string(observable)},
         {"free_params", free_params},
         {"bounds", std::move(b)},
         {"sim_config", sim_config.to_json()},
         {"n_sim_repeats", n_sim_repeats},
         {"tol", optimizer.tol},
         {"max_evals", optimizer.max_evals}};
  if (class_filter) j["class_filter"] = sim::to_string(*class_filter);
  if (initial_params) j["initial_params"] = initial_params->to_json();
  return j;
}

ObjectiveSpec ObjectiveSpec::from_json(const json& j) {
  ObjectiveSpec spec;
  try {
    const auto obs =
        observable_from_string(j.at("observable").get<std::string>());
    if (!obs) throw ConfigError("unknown observable");
    spec.observable = *obs;
    if (j.contains("class_filter")) {
      const auto c = sim::vehicle_class_from_string(
          j.at("class_filter").get<std::string>());
      if (!c) throw ConfigError("unknown class_filter");
      spec.class_filter = *c;
    }
    spec.free_params = j.at("free_params").get<std::vector<std::string>>();
    for (const auto& b : j.at("bounds")) {
      spec.bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
    }
    spec.sim_config = sim::SimConfig::from_json(j.at("sim_config"));
    if (j.contains("n_sim_repeats")) {
      spec.n_sim_repeats = j.at("n_sim_repeats").get<int>();
    }
    if (j.contains("tol")) spec.optimizer.tol = j.at("tol").get<double>();
    if (j.contains("max_evals")) {
      spec.optimizer.max_evals = j.at("max_evals").get<int>();
    }
    if (j.contains("initial_params")) {
      spec.initial_params =
          sim::ModelParams::from_json(j.at("initial_params"));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed objective spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

CalibrationResult calibrate(const ObjectiveSpec& spec,
                            const std::vector<double>& recorded,
                            const sim::ModelParams& params0,
                            const CalibrateOptions& opts) {
  spec.validate();
  params0.validate();
  if (recorded.empty()) throw EmptySampleError("recorded sample is empty");

  // Repeat seeds are fixed up front so every objective evaluation reuses the
  // same random populations (common random numbers).
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(spec.n_sim_repeats));
  for (std::size_t r = 0; r < seeds.size(); ++r) {
    seeds[r] = util::splitmix64(spec.sim_config.seed + r + 1);
  }

  const auto objective = [&](const std::vector<double>& x) {
    sim::ModelParams params = params0;
    for (std::size_t i = 0; i < spec.free_params.size(); ++i) {
      params.set(spec.free_params[i], x[i]);
    }
    params.validate();
    std::vector<double> lls(seeds.size());
    util::parallel_for(seeds.size(), opts.threads, [&](std::size_t r) {
      sim::SimConfig cfg = spec.sim_config;
      cfg.seed = seeds[r];
      const sim::SimTrace trace = sim::simulate(cfg, params);
      const std::vector<double> simulated =
          extract_observable(trace, spec.observable, spec.class_filter);
      lls[r] = log_likelihood(recorded, simulated);
    });
    double mean = 0.0;
    for (const double ll : lls) mean += ll;
    return mean / static_cast<double>(lls.size());
  };

  std::vector<double> x0;
  x0.reserve(spec.free_params.size());
  sim::ModelParams start = params0;
  for (const auto& name : spec.free_params) x0.push_back(start.get(name));

  return nelder_mead(objective, x0, spec.bounds, spec.optimizer);
}

CalibrationResult calibrate(const ObjectiveSpec& spec,
                            const model::Scenario& recorded,
                            const sim::ModelParams& params0,
                            const CalibrateOptions& opts) {
  const std::vector<double> sample =
      extract_observable(recorded, spec.observable, spec.class_filter);
  if (sample.empty()) {
    throw EmptySampleError("no observable values extracted from scenario");
  }
  return calibrate(spec, sample, params0, opts);
}

json result_to_json(const ObjectiveSpec& spec,
                    const CalibrationResult& result) {
  json best = json::object();
  for (std::size_t i = 0; i < spec.free_params.size(); ++i) {
    best[spec.free_params[i]] =
        i < result.best_params.size() ? result.best_params[i] : 0.0;
  }
  return json{{"best_params", std::move(best)},
              {"best_loglik", result.best_loglik},
              {"n_evals", result.n_evals},
              {"n_iterations", result.n_iterations},
              {"n_shrinks", result.n_shrinks},
              {"converged", result.converged},
              {"trace", result.trace}};
}

}  // namespace aveas::calib
