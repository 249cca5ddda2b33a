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

// Command line front end. Machine-readable results go to stdout as
// canonical JSON (documents) or compact JSON lines (listings); prose goes
// to stderr. Exit codes: 0 success, 1 validation errors, 2 usage error,
// 3 I/O error, 4 computation error.

#include <algorithm>
#include <array>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "aveas/calib/calibrate.hpp"
#include "aveas/errors.hpp"
#include "aveas/io/openlabel.hpp"
#include "aveas/metrics/risk.hpp"
#include "aveas/model/validate.hpp"
#include "aveas/sampler/sampler.hpp"
#include "aveas/sim/simulator.hpp"
#include "aveas/sim/trace.hpp"
#include "aveas/store/store.hpp"
#include "aveas/util/fs.hpp"

namespace {

using nlohmann::json;
namespace model = aveas::model;

constexpr double kRiskValueCap = 1e12;  // JSON lines cannot carry infinity

struct ValidateArgs {
  std::string file;
};

struct IngestArgs {
  std::string store_dir;
  std::vector<std::string> files;
};

struct MetricsArgs {
  std::string store_dir;
  std::string id;
  double horizon = aveas::metrics::kDefaultGttcHorizon;
  bool write = false;
  int threads = 1;
};

struct QueryArgs {
  std::string store_dir;
  std::vector<std::string> areas;
  std::vector<std::string> methods;
  std::vector<std::string> origins;
  std::vector<std::string> events;
  std::string duration;       // "lo:hi"
  std::string dynamic_range;  // "quantity:lo:hi"
  std::string restrictions;
};

struct SimulateArgs {
  std::string config_file;
  std::string out_file;
};

struct CalibrateArgs {
  std::string spec_file;
  std::string data;  // scenario file path or store id
  std::string out_file;
  std::string store_dir;
  int threads = 1;
};

struct SampleArgs {
  std::string spec_file;
  std::string store_dir;
  std::optional<double> threshold;
  std::string out_csv;
  int threads = 1;
};

json parse_json_file(const std::string& path) {
  const std::string bytes = aveas::util::read_file(path);
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw aveas::ConfigError(path + ": " + e.what());
  }
}

int run_validate(const ValidateArgs& a) {
  const std::string bytes = aveas::util::read_file(a.file);
  const model::ValidationReport report = aveas::io::full_check(bytes);
  std::cout << aveas::io::canonical_dump(report.to_json());
  std::cerr << a.file << ": " << report.error_count() << " error(s), "
            << report.warning_count() << " warning(s)\n";
  return report.ok() ? 0 : 1;
}

int run_ingest(const IngestArgs& a) {
  aveas::store::Store store(a.store_dir);
  for (const auto& file : a.files) {
    const std::string bytes = aveas::util::read_file(file);
    try {
      const std::string id = store.ingest(bytes);
      std::cout << json{{"file", file}, {"id", id}}.dump() << "\n";
    } catch (const aveas::Error&) {
      std::cerr << "while ingesting " << file << ":\n";
      throw;
    }
  }
  std::cerr << "ingested " << a.files.size() << " scenario(s) into "
            << a.store_dir << "\n";
  return 0;
}

int run_metrics(const MetricsArgs& a) {
  aveas::store::Store store(a.store_dir);
  const model::Scenario scenario = store.fetch(a.id);
  const model::Scenario annotated =
      aveas::metrics::annotate_scenario(scenario, a.horizon, a.threads);
  const std::string bytes = aveas::io::serialize(annotated);
  if (a.write) {
    store.replace(a.id, bytes);
    std::cerr << "updated stored scenario " << a.id << "\n";
  }
  std::cout << bytes;
  return 0;
}

std::array<double, 2> parse_range(const std::string& text,
                                  const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw aveas::ConfigError(flag + " expects lo:hi");
  }
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw aveas::ConfigError(flag + " expects numeric lo:hi");
  }
}

int run_query(const QueryArgs& a) {
  aveas::store::QueryFilter filter;
  for (const auto& s : a.areas) {
    const auto v = model::area_from_string(s);
    if (!v) throw aveas::ConfigError("unknown area '" + s + "'");
    filter.areas.insert(*v);
  }
  for (const auto& s : a.methods) {
    const auto v = model::acquisition_method_from_string(s);
    if (!v) throw aveas::ConfigError("unknown acquisition method '" + s + "'");
    filter.acquisition_methods.insert(*v);
  }
  for (const auto& s : a.origins) {
    const auto v = model::origin_from_string(s);
    if (!v) throw aveas::ConfigError("unknown origin '" + s + "'");
    filter.origins.insert(*v);
  }
  for (const auto& s : a.events) {
    const auto v = model::event_type_from_string(s);
    if (!v) throw aveas::ConfigError("unknown event type '" + s + "'");
    filter.event_types.insert(*v);
  }
  if (!a.duration.empty()) {
    filter.duration_range = parse_range(a.duration, "--duration");
  }
  if (!a.dynamic_range.empty()) {
    const auto colon = a.dynamic_range.find(':');
    if (colon == std::string::npos) {
      throw aveas::ConfigError("--dynamic-range expects quantity:lo:hi");
    }
    aveas::store::QueryFilter::DynamicRangeFilter f;
    f.quantity = a.dynamic_range.substr(0, colon);
    f.range = parse_range(a.dynamic_range.substr(colon + 1), "--dynamic-range");
    filter.dynamic_range = f;
  }
  if (!a.restrictions.empty()) filter.restrictions_contain = a.restrictions;

  aveas::store::Store store(a.store_dir);
  const auto results = store.query(filter);
  for (const auto& [id, metadata] : results) {
    std::cout << json{{"id", id},
                      {"metadata", aveas::io::metadata_to_json(metadata)}}
                     .dump()
              << "\n";
  }
  std::cerr << results.size() << " match(es)\n";
  return 0;
}

int run_simulate(const SimulateArgs& a) {
  const json j = parse_json_file(a.config_file);
  if (!j.contains("sim_config")) {
    throw aveas::ConfigError(a.config_file + ": missing sim_config");
  }
  const auto cfg = aveas::sim::SimConfig::from_json(j.at("sim_config"));
  const auto params = j.contains("params")
                          ? aveas::sim::ModelParams::from_json(j.at("params"))
                          : aveas::sim::ModelParams::defaults();
  std::string id;
  if (j.contains("scenario_id")) id = j.at("scenario_id").get<std::string>();

  const aveas::sim::SimTrace trace = aveas::sim::simulate(cfg, params);
  const model::Scenario scenario = aveas::sim::trace_to_scenario(trace, id);
  const std::string bytes = aveas::io::serialize(scenario);
  aveas::util::write_file_atomic(a.out_file, bytes);
  std::cout << json{{"collision", trace.collision},
                    {"n_frames", scenario.frames.size()},
                    {"scenario_id", scenario.scenario_id}}
                   .dump()
            << "\n";
  std::cerr << "wrote " << a.out_file << "\n";
  return 0;
}

int run_calibrate(const CalibrateArgs& a) {
  const auto spec = aveas::calib::ObjectiveSpec::from_json(
      parse_json_file(a.spec_file));
  model::Scenario recorded;
  if (std::filesystem::exists(a.data)) {
    recorded = aveas::io::parse(aveas::util::read_file(a.data));
  } else if (!a.store_dir.empty()) {
    recorded = aveas::store::Store(a.store_dir).fetch(a.data);
  } else {
    throw aveas::ConfigError(
        "--data is not a file; pass --store to resolve it as a store id");
  }
  const aveas::sim::ModelParams params0 =
      spec.initial_params.value_or(aveas::sim::ModelParams::defaults());
  const aveas::calib::CalibrationResult result =
      aveas::calib::calibrate(spec, recorded, params0, {a.threads});
  const std::string bytes =
      aveas::io::canonical_dump(aveas::calib::result_to_json(spec, result));
  aveas::util::write_file_atomic(a.out_file, bytes);
  std::cout << bytes;
  std::cerr << "calibration " << (result.converged ? "converged" : "stopped")
            << " after " << result.n_evals << " evaluation(s)\n";
  return 0;
}

int run_sample(const SampleArgs& a) {
  const auto spec = aveas::sampler::VariationSpec::from_json(
      parse_json_file(a.spec_file));
  aveas::store::Store store(a.store_dir);
  const model::Scenario base = store.fetch(spec.base_scenario_id);
  const auto outcomes = aveas::sampler::sweep(spec, base, a.threads);
  if (!a.out_csv.empty()) {
    aveas::util::write_file_atomic(
        a.out_csv, aveas::sampler::outcomes_to_csv(spec, outcomes));
    std::cerr << "wrote " << a.out_csv << "\n";
  }
  std::size_t ingested = 0;
  if (a.threshold) {
    const auto emitted =
        aveas::sampler::emit_samples(spec, base, outcomes, *a.threshold);
    std::size_t next = 0;
    for (const auto& outcome : outcomes) {
      if (!(outcome.a_req >= *a.threshold)) continue;
      const auto& scenario = emitted.at(next++);
      const std::string id = store.ingest(aveas::io::serialize(scenario));
      std::cout << json{{"a_req", std::min(outcome.a_req, kRiskValueCap)},
                        {"id", id}}
                       .dump()
                << "\n";
      ++ingested;
    }
  }
  std::cerr << "swept " << outcomes.size() << " grid point(s), ingested "
            << ingested << " scenario(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonized traffic scenario pipeline"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check a scenario file, print a report");
  validate_cmd->add_option("file", validate_args.file, "scenario JSON file")
      ->required();

  IngestArgs ingest_args;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "Store scenario files, print their ids");
  ingest_cmd->add_option("--store", ingest_args.store_dir, "store directory")
      ->required();
  ingest_cmd->add_option("files", ingest_args.files, "scenario JSON files")
      ->required();

  MetricsArgs metrics_args;
  auto* metrics_cmd = app.add_subcommand(
      "metrics", "Annotate a stored scenario with risk metrics");
  metrics_cmd->add_option("--store", metrics_args.store_dir, "store directory")
      ->required();
  metrics_cmd->add_option("--id", metrics_args.id, "scenario id")->required();
  metrics_cmd->add_option("--horizon", metrics_args.horizon,
                          "gTTC prediction horizon in seconds");
  metrics_cmd->add_flag("--write", metrics_args.write,
                        "persist the annotated scenario back into the store");
  metrics_cmd->add_option("--threads", metrics_args.threads,
                          "worker threads over frames");

  QueryArgs query_args;
  auto* query_cmd = app.add_subcommand(
      "query", "List stored scenarios matching all given filters");
  query_cmd->add_option("--store", query_args.store_dir, "store directory")
      ->required();
  query_cmd
      ->add_option("--area", query_args.areas,
                   "area filter (urban|highway|rural), repeatable")
      ->check(CLI::IsMember({"urban", "highway", "rural"}));
  query_cmd
      ->add_option("--method", query_args.methods,
                   "acquisition method filter, repeatable")
      ->check(CLI::IsMember({"stationary_lidar", "stationary_infrared",
                             "aerial_rgb_video", "vehicle_sensors",
                             "synthetic"}));
  query_cmd
      ->add_option("--origin", query_args.origins,
                   "origin filter, repeatable")
      ->check(CLI::IsMember({"reconstructed", "sampled", "original"}));
  query_cmd
      ->add_option("--event", query_args.events,
                   "event type filter, repeatable")
      ->check(CLI::IsMember({"lane_change", "cut_in", "hard_braking",
                             "near_miss", "collision", "handover", "other"}));
  query_cmd->add_option("--duration", query_args.duration,
                        "scenario duration range lo:hi in seconds");
  query_cmd->add_option("--dynamic-range", query_args.dynamic_range,
                        "declared dynamic range overlap, quantity:lo:hi");
  query_cmd->add_option("--restrictions", query_args.restrictions,
                        "substring of data_use_restrictions");

  SimulateArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Run the traffic simulator, write a scenario file");
  simulate_cmd
      ->add_option("--config", simulate_args.config_file,
                   "JSON file with sim_config and optional params")
      ->required();
  simulate_cmd
      ->add_option("--out", simulate_args.out_file, "output scenario file")
      ->required();

  CalibrateArgs calibrate_args;
  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "Fit model parameters against recorded data");
  calibrate_cmd
      ->add_option("--spec", calibrate_args.spec_file, "objective spec JSON")
      ->required();
  calibrate_cmd
      ->add_option("--data", calibrate_args.data,
                   "recorded scenario file or store id")
      ->required();
  calibrate_cmd
      ->add_option("--out", calibrate_args.out_file, "report JSON file")
      ->required();
  calibrate_cmd->add_option("--store", calibrate_args.store_dir,
                            "store directory for resolving --data as an id");
  calibrate_cmd->add_option("--threads", calibrate_args.threads,
                            "worker threads over simulation repeats");

  SampleArgs sample_args;
  auto* sample_cmd = app.add_subcommand(
      "sample", "Sweep a criticality grid around a stored scenario");
  sample_cmd->add_option("--spec", sample_args.spec_file, "variation spec JSON")
      ->required();
  sample_cmd->add_option("--store", sample_args.store_dir, "store directory")
      ->required();
  sample_cmd->add_option("--threshold", sample_args.threshold,
                         "ingest sampled scenarios with a_req at or above "
                         "this value, m/s^2");
  sample_cmd->add_option("--out", sample_args.out_csv, "outcome CSV file");
  sample_cmd->add_option("--threads", sample_args.threads,
                         "worker threads over grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(validate_args);
    if (ingest_cmd->parsed()) return run_ingest(ingest_args);
    if (metrics_cmd->parsed()) return run_metrics(metrics_args);
    if (query_cmd->parsed()) return run_query(query_args);
    if (simulate_cmd->parsed()) return run_simulate(simulate_args);
    if (calibrate_cmd->parsed()) return run_calibrate(calibrate_args);
    if (sample_cmd->parsed()) return run_sample(sample_args);
  } catch (const aveas::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const aveas::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const aveas::SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const aveas::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const aveas::ValidationFailedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const aveas::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aveas::NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aveas::CorruptEntryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
