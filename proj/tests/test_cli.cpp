// Copyright 2026 The vdsim Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vd/records.hpp"
#include "vd/runner.hpp"

using namespace vd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("vdsim_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

#ifdef VDSIM_BINARY
int run_binary(const std::string& args) {
    const std::string cmd = std::string(VDSIM_BINARY) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}
#endif

ExperimentConfig tiny_qaoa_config(const fs::path& out) {
    ExperimentConfig config;
    config.experiment = ExperimentKind::QaoaSweep;
    config.n_instances = 2;
    config.n_vertices = 4;
    config.eps_points = 3;
    config.master_seed = 12345;
    config.output_dir = out.string();
    config.jobs = 2;
    return config;
}

}  // namespace

TEST_CASE("config defaults match the experiment shape") {
    const ExperimentConfig config;
    CHECK(config.n_instances == 30);
    CHECK(config.n_vertices == 6);
    CHECK(config.edge_prob == 0.5);
    CHECK(config.channel == "both");
    CHECK(config.eps_min == 0.0);
    CHECK(config.eps_max == 0.1);
    CHECK(config.eps_points == 21);
    CHECK(config.eta == 0.1);
    CHECK(config.variance_threshold == 1e-3);

    const std::vector<double> grid = config.eps_grid();
    REQUIRE(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 0.1);
    for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] > grid[k - 1]);
}

TEST_CASE("config validation") {
    ExperimentConfig config;
    CHECK_NOTHROW(config.validate());
    config.eps_points = 1;
    CHECK_THROWS_AS(config.validate(), config_error);
    config.eps_points = 21;
    config.channel = "thermal";
    CHECK_THROWS_AS(config.validate(), config_error);
    config.channel = "dephasing";
    config.eps_max = 0.6;
    CHECK_THROWS_AS(config.validate(), config_error);
    config.channel = "depolarizing";
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("config file parsing and manifest round trip") {
    const fs::path dir = temp_dir("config");
    const fs::path path = dir / "run.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "experiment = thermal_sweep\n";
        out << "n_instances = 4   # trailing comment\n";
        out << "eps_max = 0.25\n";
        out << "channel = dephasing\n";
        out << "master_seed = 99\n";
    }
    ExperimentConfig config;
    load_config_file(path.string(), config);
    CHECK(config.experiment == ExperimentKind::ThermalSweep);
    CHECK(config.n_instances == 4);
    CHECK(config.eps_max == 0.25);
    CHECK(config.channel == "dephasing");
    CHECK(config.master_seed == 99);

    // The manifest parses back to the identical configuration.
    std::stringstream manifest;
    write_manifest(manifest, config);
    const fs::path mpath = dir / "manifest.txt";
    std::ofstream(mpath) << manifest.str();
    ExperimentConfig reloaded;
    load_config_file(mpath.string(), reloaded);
    CHECK(reloaded.experiment == config.experiment);
    CHECK(reloaded.n_instances == config.n_instances);
    CHECK(reloaded.eps_max == config.eps_max);
    CHECK(reloaded.master_seed == config.master_seed);

    std::ofstream(path, std::ios::app) << "bogus_key = 3\n";
    ExperimentConfig broken;
    CHECK_THROWS_AS(load_config_file(path.string(), broken), config_error);
    CHECK_THROWS_AS(load_config_file("/nonexistent.cfg", broken), config_error);
    fs::remove_all(dir);
}

TEST_CASE("records CSV round trip is lossless") {
    const fs::path dir = temp_dir("records");
    std::vector<SweepRecord> records(2);
    records[0].instance_id = 0;
    records[0].seed = 0xDEADBEEFULL;
    records[0].channel = ChannelKind::Dephasing;
    records[0].eps = 0.015000000000000003;
    records[0].cost_unmitigated = -2.3456789012345678;
    records[0].cost_mitigated = -2.5;
    records[0].ratio_ideal = 0.91234567890123456;
    records[0].ratio_unmitigated = 0.8;
    records[0].ratio_mitigated = 0.9;
    records[0].min_samples_unmitigated = 123456789;
    records[0].min_samples_mitigated = 42;
    records[0].coherent_mismatch = 1.2345e-7;
    records[0].mismatch_reliable = false;
    records[0].alpha_opt = M_PI / 3.0;
    records[0].beta_opt = 0.1;
    records[1] = records[0];
    records[1].instance_id = 1;
    records[1].channel = ChannelKind::Depolarizing;

    const fs::path path = dir / "records.csv";
    write_records_csv(path.string(), records);
    const std::vector<SweepRecord> loaded = read_records_csv(path.string());
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].eps == records[0].eps);
    CHECK(loaded[0].cost_unmitigated == records[0].cost_unmitigated);
    CHECK(loaded[0].ratio_ideal == records[0].ratio_ideal);
    CHECK(loaded[0].coherent_mismatch == records[0].coherent_mismatch);
    CHECK(loaded[0].alpha_opt == records[0].alpha_opt);
    CHECK(loaded[0].seed == records[0].seed);
    CHECK(loaded[0].mismatch_reliable == false);
    CHECK(loaded[1].channel == ChannelKind::Depolarizing);
    fs::remove_all(dir);
}

TEST_CASE("summarize computes distances and error reduction") {
    std::vector<SweepRecord> records;
    for (int inst = 0; inst < 2; ++inst) {
        SweepRecord base;
        base.instance_id = inst;
        base.channel = ChannelKind::Dephasing;
        base.eps = 0.0;
        base.ratio_ideal = 0.9;
        base.ratio_unmitigated = 0.9;
        base.ratio_mitigated = 0.9;
        records.push_back(base);
        base.eps = 0.1;
        base.ratio_unmitigated = inst == 0 ? 0.7 : 0.8;   // mean dist 0.15
        base.ratio_mitigated = inst == 0 ? 0.85 : 0.875;  // mean dist 0.0375
        records.push_back(base);
    }
    const std::vector<AggregateRow> rows = summarize(records);
    REQUIRE(rows.size() == 2);
    const AggregateRow& zero = rows[0];
    CHECK(zero.eps == 0.0);
    CHECK_FALSE(zero.error_reduction.has_value());
    const AggregateRow& last = rows[1];
    CHECK(last.mean_dist_unmitigated == doctest::Approx(0.15));
    CHECK(last.mean_dist_mitigated == doctest::Approx(0.0375));
    REQUIRE(last.error_reduction.has_value());
    CHECK(*last.error_reduction == doctest::Approx(0.75));

    CHECK_THROWS_AS((void)summarize({}), contract_error);
}

TEST_CASE("runner determinism and manifest reproduction") {
    const fs::path out1 = temp_dir("run1");
    const fs::path out2 = temp_dir("run2");
    const fs::path out3 = temp_dir("run3");

    const ExperimentConfig config1 = tiny_qaoa_config(out1);
    REQUIRE(run(config1) == 0);
    const ExperimentConfig config2 = tiny_qaoa_config(out2);
    REQUIRE(run(config2) == 0);
    CHECK(slurp(out1 / "records.csv") == slurp(out2 / "records.csv"));
    CHECK(slurp(out1 / "aggregate.csv") == slurp(out2 / "aggregate.csv"));

    // Re-running from the persisted manifest reproduces the aggregates.
    ExperimentConfig from_manifest;
    load_config_file((out1 / "manifest.txt").string(), from_manifest);
    from_manifest.output_dir = out3.string();
    REQUIRE(run(from_manifest) == 0);
    CHECK(slurp(out1 / "records.csv") == slurp(out3 / "records.csv"));

    // Outputs exist and the graphs match the records' instance count.
    CHECK(fs::exists(out1 / "graphs" / "instance_0.edgelist"));
    CHECK(fs::exists(out1 / "graphs" / "instance_1.edgelist"));
    const auto records = read_records_csv((out1 / "records.csv").string());
    CHECK(records.size() == 2 * 2 * 3);  // instances x channels x eps points

    fs::remove_all(out1);
    fs::remove_all(out2);
    fs::remove_all(out3);
}

TEST_CASE("run reports config errors with status 2") {
    ExperimentConfig config;
    config.eps_points = 1;
    CHECK(run(config) == 2);
}

#ifdef VDSIM_BINARY

TEST_CASE("binary exit codes") {
    CHECK(run_binary("bogus-command") == 2);
    CHECK(run_binary("qaoa-sweep --eps-points 1") == 2);
    CHECK(run_binary("vd-check --n-qubits 7 --trials 1") == 3);
    const fs::path dir = temp_dir("bin");
    CHECK(run_binary("vd-check --n-qubits 2 --trials 3 --seed 5 --out " + dir.string()) == 0);
    fs::remove_all(dir);
}

TEST_CASE("binary summarize round trip") {
    const fs::path dir = temp_dir("binsum");
    ExperimentConfig config = tiny_qaoa_config(dir / "run");
    config.jobs = 1;
    config.n_instances = 1;
    config.channel = "dephasing";
    REQUIRE(run(config) == 0);
    CHECK(run_binary("summarize --records " + (dir / "run" / "records.csv").string() +
                     " --out " + (dir / "agg").string()) == 0);
    CHECK(slurp(dir / "run" / "aggregate.csv") == slurp(dir / "agg" / "aggregate.csv"));
    fs::remove_all(dir);
}

#endif  // VDSIM_BINARY
