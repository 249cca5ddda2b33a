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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "aveas/calib/calibrate.hpp"
#include "aveas/io/openlabel.hpp"
#include "aveas/metrics/risk.hpp"
#include "aveas/sampler/sampler.hpp"
#include "aveas/sim/simulator.hpp"
#include "aveas/sim/trace.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testsupport::run_cli;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void spew(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << bytes;
}

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    REQUIRE(nl != std::string::npos);
    lines.push_back(json::parse(text.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  return lines;
}

// Seeds a store directory with the three positional fixtures via the CLI.
struct CliStore {
  testsupport::TempDir dir;
  std::string store;

  CliStore() : store((dir.path() / "store").string()) {
    const fs::path f1 = dir.path() / "minimal.json";
    const fs::path f2 = dir.path() / "following.json";
    const fs::path f3 = dir.path() / "cutin.json";
    spew(f1, aveas::io::serialize(testsupport::minimal_scenario()));
    spew(f2, aveas::io::serialize(
                 testsupport::following_scenario(21, 18.0, 12.0, 12.0)));
    spew(f3, aveas::io::serialize(testsupport::cutin_base_scenario()));
    const auto r = run_cli("ingest --store " + store + " " + f1.string() +
                           " " + f2.string() + " " + f3.string());
    REQUIRE(r.exit_code == 0);
  }
};

aveas::sim::SimConfig pipeline_sim_config() {
  aveas::sim::SimConfig cfg;
  cfg.road_kind = aveas::sim::RoadKind::kRing;
  cfg.lane_count = 2;
  cfg.lane_length = 600.0;
  cfg.n_vehicles[aveas::sim::VehicleClass::kCar] = 6;
  cfg.n_vehicles[aveas::sim::VehicleClass::kTruck] = 2;
  cfg.dt = 0.1;
  cfg.duration = 10.0;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate reports and exits by severity") {
  testsupport::TempDir dir;
  const fs::path good = dir.path() / "good.json";
  spew(good, aveas::io::serialize(testsupport::rich_scenario()));

  const auto ok = run_cli("validate " + good.string());
  CHECK(ok.exit_code == 0);
  const json report = json::parse(ok.out);
  CHECK(report.at("errors").get<int>() == 0);
  CHECK(report.at("violations").is_array());
  CHECK(ok.err.find("0 error(s)") != std::string::npos);

  json broken = json::parse(aveas::io::serialize(
      testsupport::minimal_scenario()));
  broken["openlabel"]["metadata"]["scenario_duration"] = 99.0;
  const fs::path bad = dir.path() / "bad.json";
  spew(bad, broken.dump());
  const auto fail = run_cli("validate " + bad.string());
  CHECK(fail.exit_code == 1);
  CHECK(json::parse(fail.out).at("errors").get<int>() >= 1);

  const fs::path junk = dir.path() / "junk.json";
  spew(junk, "{nope");
  CHECK(run_cli("validate " + junk.string()).exit_code == 1);

  CHECK(run_cli("validate " + (dir.path() / "absent.json").string())
            .exit_code == 3);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("validate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("query --help").exit_code == 0);

  testsupport::TempDir dir;
  const std::string store = (dir.path() / "store").string();
  CHECK(run_cli("query --store " + store + " --area downtown").exit_code ==
        2);
  CHECK(run_cli("query --store " + store + " --event drizzle").exit_code ==
        2);
}

TEST_CASE("ingest then query round trips ids and metadata") {
  CliStore fixture;

  const auto all = run_cli("query --store " + fixture.store);
  REQUIRE(all.exit_code == 0);
  const auto lines = json_lines(all.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].at("id") == "cutin-base-0");
  CHECK(lines[1].at("id") == "following-0");
  CHECK(lines[2].at("id") == "minimal-0");
  CHECK(lines[2].at("metadata").at("area") == "urban");
  CHECK(all.err.find("3 match(es)") != std::string::npos);

  const auto highway =
      run_cli("query --store " + fixture.store + " --area highway");
  REQUIRE(highway.exit_code == 0);
  CHECK(testsupport::matches_golden("cli/query.jsonl", highway.out));

  const auto narrow = run_cli("query --store " + fixture.store +
                              " --duration 0:0.25");
  CHECK(json_lines(narrow.out).size() == 1);

  const auto banded = run_cli("query --store " + fixture.store +
                              " --dynamic-range speed:35:40");
  const auto banded_lines = json_lines(banded.out);
  REQUIRE(banded_lines.size() == 1);
  CHECK(banded_lines[0].at("id") == "cutin-base-0");

  const auto spaced = run_cli("query --store " + fixture.store +
                              " --restrictions research --area highway");
  CHECK(json_lines(spaced.out).size() == 2);

  // Deterministic output bytes.
  const auto again =
      run_cli("query --store " + fixture.store + " --area highway");
  CHECK(again.out == highway.out);

  CHECK(run_cli("query --store " + fixture.store + " --duration 5")
            .exit_code == 4);

  // Ingesting the same file twice trips the duplicate check.
  const fs::path dup = fixture.dir.path() / "minimal.json";
  CHECK(run_cli("ingest --store " + fixture.store + " " + dup.string())
            .exit_code == 4);
}

TEST_CASE("metrics annotates a stored scenario") {
  CliStore fixture;
  const fs::path stored =
      fs::path(fixture.store) / "highway" / "following-0.aveas.json";
  const std::string before = slurp(stored);

  const auto dry = run_cli("metrics --store " + fixture.store +
                           " --id following-0");
  REQUIRE(dry.exit_code == 0);
  CHECK(dry.out.find("pairwise_risk") != std::string::npos);
  CHECK(slurp(stored) == before);  // no --write, no mutation

  // Byte-for-byte the library annotation of the same scenario.
  const auto expected = aveas::io::serialize(aveas::metrics::annotate_scenario(
      testsupport::following_scenario(21, 18.0, 12.0, 12.0)));
  CHECK(dry.out == expected);
  CHECK(testsupport::matches_golden("cli/metrics.aveas.json", dry.out));

  const auto threaded = run_cli("metrics --store " + fixture.store +
                                " --id following-0 --threads 4");
  CHECK(threaded.out == dry.out);

  const auto write = run_cli("metrics --store " + fixture.store +
                             " --id following-0 --write");
  REQUIRE(write.exit_code == 0);
  CHECK(slurp(stored) == expected);

  CHECK(run_cli("metrics --store " + fixture.store + " --id ghost-0")
            .exit_code == 3);
}

TEST_CASE("simulate writes the canonical scenario deterministically") {
  testsupport::TempDir dir;
  const fs::path config = dir.path() / "sim.json";
  const fs::path out = dir.path() / "out.aveas.json";
  const auto cfg = pipeline_sim_config();
  spew(config, json{{"sim_config", cfg.to_json()},
                    {"scenario_id", "pipeline-sim-0"}}
                   .dump());

  const auto run = run_cli("simulate --config " + config.string() +
                           " --out " + out.string());
  REQUIRE(run.exit_code == 0);
  const json status = json::parse(run.out);
  CHECK(status.at("scenario_id") == "pipeline-sim-0");
  CHECK(status.at("collision") == false);
  CHECK(status.at("n_frames") == 101);

  // The process boundary must not change a single byte.
  const auto trace =
      aveas::sim::simulate(cfg, aveas::sim::ModelParams::defaults());
  const std::string expected = aveas::io::serialize(
      aveas::sim::trace_to_scenario(trace, "pipeline-sim-0"));
  CHECK(slurp(out) == expected);
  CHECK(testsupport::matches_golden("cli/sim.aveas.json", slurp(out)));

  const fs::path out2 = dir.path() / "out2.aveas.json";
  const auto rerun = run_cli("simulate --config " + config.string() +
                             " --out " + out2.string());
  CHECK(rerun.out == run.out);
  CHECK(slurp(out2) == expected);

  // The emitted scenario validates cleanly end to end.
  CHECK(run_cli("validate " + out.string()).exit_code == 0);

  json bad_cfg = json{{"sim_config", cfg.to_json()}};
  bad_cfg["sim_config"]["dt"] = 0.9;
  spew(config, bad_cfg.dump());
  CHECK(run_cli("simulate --config " + config.string() + " --out " +
                out.string())
            .exit_code == 4);
  CHECK(run_cli("simulate --config " + (dir.path() / "none.json").string() +
                " --out " + out.string())
            .exit_code == 3);
}

TEST_CASE("calibrate writes the optimizer report") {
  testsupport::TempDir dir;

  // Recorded data: free flow with a lowered car desired speed.
  aveas::sim::SimConfig data_cfg;
  data_cfg.road_kind = aveas::sim::RoadKind::kRing;
  data_cfg.lane_count = 1;
  data_cfg.lane_length = 3000.0;
  data_cfg.n_vehicles[aveas::sim::VehicleClass::kCar] = 4;
  data_cfg.dt = 0.1;
  data_cfg.duration = 60.0;
  data_cfg.seed = 4242;
  aveas::sim::ModelParams truth = aveas::sim::ModelParams::defaults();
  truth.desired_speed[aveas::sim::VehicleClass::kCar].mean = 28.0;
  const auto recorded_trace = aveas::sim::simulate(data_cfg, truth);
  const fs::path data = dir.path() / "recorded.aveas.json";
  spew(data, aveas::io::serialize(
                 aveas::sim::trace_to_scenario(recorded_trace, "recorded-0")));

  aveas::calib::ObjectiveSpec spec;
  spec.observable = aveas::calib::Observable::kSpeed;
  spec.free_params = {"desired_speed.car.mean"};
  spec.bounds = {{{20.0, 40.0}}};
  spec.sim_config = data_cfg;
  spec.sim_config.seed = 1717;
  spec.n_sim_repeats = 1;
  spec.optimizer.tol = 1e-2;
  spec.optimizer.max_evals = 25;
  const fs::path spec_file = dir.path() / "spec.json";
  spew(spec_file, spec.to_json().dump());

  const fs::path out = dir.path() / "result.json";
  const auto run = run_cli("calibrate --spec " + spec_file.string() +
                           " --data " + data.string() + " --out " +
                           out.string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.out == slurp(out));

  const json result = json::parse(run.out);
  const double best =
      result.at("best_params").at("desired_speed.car.mean").get<double>();
  CHECK(best >= 20.0);
  CHECK(best <= 40.0);
  CHECK(std::abs(best - 28.0) <= 4.0);
  CHECK(result.at("n_evals").get<int>() <= 25);

  // Same run again: identical report bytes.
  const fs::path out2 = dir.path() / "result2.json";
  const auto rerun = run_cli("calibrate --spec " + spec_file.string() +
                             " --data " + data.string() + " --out " +
                             out2.string());
  CHECK(rerun.out == run.out);

  // A store id resolves through --store.
  testsupport::TempDir store_dir;
  const std::string store = (store_dir.path() / "store").string();
  REQUIRE(run_cli("ingest --store " + store + " " + data.string())
              .exit_code == 0);
  const auto via_store = run_cli("calibrate --spec " + spec_file.string() +
                                 " --data recorded-0 --store " + store +
                                 " --out " + out2.string());
  CHECK(via_store.exit_code == 0);
  CHECK(via_store.out == run.out);

  CHECK(run_cli("calibrate --spec " + spec_file.string() +
                " --data ghost-0 --out " + out2.string())
            .exit_code == 4);
}

TEST_CASE("sample sweeps and ingests the critical grid points") {
  CliStore fixture;
  aveas::sampler::VariationSpec spec;
  spec.base_scenario_id = "cutin-base-0";
  spec.scenario_type = aveas::sampler::ScenarioType::kLaneChangeCutIn;
  aveas::sampler::VariedAxis gap;
  gap.parameter = aveas::sampler::VariedParameter::kCutInGap;
  gap.range = {{6.0, 16.0}};
  gap.n_steps = 6;
  aveas::sampler::VariedAxis delta;
  delta.parameter = aveas::sampler::VariedParameter::kApproachSpeedDelta;
  delta.values = {8.0};
  spec.varied = {gap, delta};
  const fs::path spec_file = fixture.dir.path() / "variation.json";
  spew(spec_file, spec.to_json().dump());

  const fs::path csv = fixture.dir.path() / "sweep.csv";
  const auto run = run_cli("sample --spec " + spec_file.string() +
                           " --store " + fixture.store + " --threshold 4.0" +
                           " --out " + csv.string());
  REQUIRE(run.exit_code == 0);
  CHECK(run.err.find("swept 6 grid point(s), ingested 2 scenario(s)") !=
        std::string::npos);

  const auto lines = json_lines(run.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].at("id") == "cutin-base-0-cutin-000");
  CHECK(lines[1].at("id") == "cutin-base-0-cutin-001");
  CHECK(lines[0].at("a_req").get<double>() ==
        doctest::Approx(32.0 / 4.5).epsilon(1e-12));

  CHECK(testsupport::matches_golden("cli/sweep.csv", slurp(csv)));

  // The emitted scenarios are queryable and validate.
  const auto sampled = run_cli("query --store " + fixture.store +
                               " --origin sampled --event cut_in");
  CHECK(json_lines(sampled.out).size() == 2);
  const fs::path emitted = fs::path(fixture.store) / "highway" /
                           "cutin-base-0-cutin-000.aveas.json";
  REQUIRE(fs::exists(emitted));
  CHECK(run_cli("validate " + emitted.string()).exit_code == 0);

  // Without a threshold the sweep only reports.
  const fs::path csv2 = fixture.dir.path() / "sweep2.csv";
  const auto dry = run_cli("sample --spec " + spec_file.string() +
                           " --store " + fixture.store + " --out " +
                           csv2.string() + " --threads 4");
  REQUIRE(dry.exit_code == 0);
  CHECK(dry.out.empty());
  CHECK(slurp(csv2) == slurp(csv));
}

}  // TEST_SUITE("cli")
