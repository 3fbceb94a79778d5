// SPDX-License-Identifier: Apache-2.0
//
// hdr-ris: tensor-based channel estimation for RIS-assisted MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

using namespace hdr;
using nlohmann::json;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.dims = hdr::test::uniform_dims(2, 4, 4);
    c.snr_grid_db = {0, 10};
    c.n_trials = 12;
    c.seed = 5;
    c.ris_grid = {4, 16};
    return c;
}

std::string csv(const std::vector<CsvRow>& rows)
{
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

} // namespace

TEST_CASE("config JSON round trip")
{
    ExperimentConfig c = small_config();
    c.methods = {Method::LS, Method::HDR};
    c.transmit_power = 2.5;
    c.fixed_params = ChannelParams{{0.1, 1.7}, {-0.2, 1.8}, {0.3, 1.9}, {-0.4, 2.0}};
    const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
    CHECK(back.dims == c.dims);
    CHECK(back.snr_grid_db == c.snr_grid_db);
    CHECK(back.n_trials == c.n_trials);
    CHECK(back.methods == c.methods);
    CHECK(back.seed == c.seed);
    CHECK(back.transmit_power == c.transmit_power);
    CHECK(back.ris_grid == c.ris_grid);
    REQUIRE(back.fixed_params);
    CHECK(back.fixed_params->ue_arrival.elevation == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(back.hash() == c.hash());
}

TEST_CASE("config parsing")
{
    SECTION("defaults")
    {
        const auto c = ExperimentConfig::from_json(json::object());
        CHECK(c.dims == hdr::test::reference_dims());
        CHECK(c.n_trials == 500);
        CHECK(c.methods.size() == 4);
        CHECK_NOTHROW(c.validate());
    }

    SECTION("fields")
    {
        const auto c = ExperimentConfig::from_json(json::parse(R"({
            "dims": {"bs": [2, 4], "ue": [1, 3], "ris": [5, 5], "pilot_length": 8, "training_blocks": 25},
            "snr_grid_db": [-5, 5], "n_trials": 7, "methods": ["KRF"], "seed": 99, "threads": 3,
            "angles_deg": {"bs_departure": [10, 100], "ris_arrival": [0, 90],
                           "ris_departure": [-30, 120], "ue_arrival": [45, 95]}})"));
        CHECK(c.dims.bs == ArrayShape{2, 4});
        CHECK(c.dims.ue == ArrayShape{1, 3});
        CHECK(c.dims.N() == 25);
        CHECK(c.threads == 3);
        CHECK(c.methods == std::vector<Method>{Method::KRF});
        REQUIRE(c.fixed_params);
        CHECK(c.fixed_params->ris_departure.azimuth == Catch::Approx(-std::numbers::pi / 6));
    }

    SECTION("errors")
    {
        CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"snr_grid": [0]})")), ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"methods": ["MMSE"]})")), ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"dims": {"bs": [4]}})")), ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse(R"({"n_trials": "many"})")), ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::from_json(json::parse("[1, 2]")), ConfigError);
        CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/config.json"), std::ios_base::failure);

        ExperimentConfig c;
        c.n_trials = 0;
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c = ExperimentConfig{};
        c.dims.pilot_length = 1;
        CHECK_THROWS_AS(c.validate(), InfeasibleDesignError);
    }

    SECTION("load from disk")
    {
        const auto path = std::filesystem::temp_directory_path() / "hdr_test_config.json";
        {
            std::ofstream out(path);
            out << R"({"n_trials": 3, "seed": 8})";
        }
        const auto c = ExperimentConfig::load(path.string());
        CHECK(c.n_trials == 3);
        CHECK(c.seed == 8);
        {
            std::ofstream out(path);
            out << "{ not json";
        }
        CHECK_THROWS_AS(ExperimentConfig::load(path.string()), ConfigError);
        std::filesystem::remove(path);
    }
}

TEST_CASE("config hash")
{
    const ExperimentConfig a = small_config();
    ExperimentConfig b = a;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.threads = 8;
    b.output_path = "elsewhere.csv";
    CHECK(a.hash() == b.hash());
    b.seed += 1;
    CHECK(a.hash() != b.hash());
}

TEST_CASE("statistics helpers")
{
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK_THROWS(median({}));

    const std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
    CHECK(compensated_mean(xs) == 0.5);

    CHECK(format_number(0.1) == "0.1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("trial streams")
{
    auto a = trial_rng(1, 0), b = trial_rng(1, 0), c = trial_rng(1, 1), d = trial_rng(2, 0);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("parallel_for")
{
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7)
                            throw std::runtime_error("boom");
                    }),
                    std::runtime_error);
}

TEST_CASE("sweeps are identical at any thread count")
{
    ExperimentConfig c = small_config();
    c.threads = 1;
    const std::string one = csv(run_se_sweep(c));
    c.threads = 4;
    CHECK(csv(run_se_sweep(c)) == one);
    c.threads = 0;
    CHECK(csv(run_se_sweep(c)) == one);
    c.threads = 3;
    const std::string nm3 = csv(run_nmse_sweep(c));
    c.threads = 1;
    CHECK(csv(run_nmse_sweep(c)) == nm3);
}

TEST_CASE("sweep rows")
{
    const ExperimentConfig c = small_config();

    SECTION("nmse skips the ideal benchmark")
    {
        const auto rows = run_nmse_sweep(c);
        CHECK(rows.size() == 3 * 2 * 2);
        for (const auto& r : rows) {
            CHECK(r.method != "Ideal");
            CHECK(r.metric == "nmse");
            CHECK((r.stat == "mean" || r.stat == "median"));
            CHECK(r.n_trials == 12);
            CHECK(r.config_hash == c.hash());
            CHECK(r.value >= 0.0);
        }
        ExperimentConfig only_ideal = c;
        only_ideal.methods = {Method::Ideal};
        CHECK_THROWS_AS(run_nmse_sweep(only_ideal), ConfigError);
    }

    SECTION("spectral efficiency")
    {
        const auto rows = run_se_sweep(c);
        CHECK(rows.size() == 4 * 2 * 2);
        CHECK(rows.front().metric == "se_bits_per_hz");
        CHECK(rows.front().snr_db == "0");
    }

    SECTION("complexity")
    {
        const auto rows = run_complexity_sweep(c);
        // 3 methods x 2 grid points x (analytic + measured)
        CHECK(rows.size() == 12);
        for (const auto& r : rows) {
            CHECK(r.snr_db.empty());
            CHECK(r.value > 0.0);
        }
        CHECK(rows.front().stat == "N=4");
        CHECK(rows.back().stat == "N=16");
    }

    SECTION("csv layout")
    {
        const std::string text = csv(run_nmse_sweep(c));
        CHECK(text.rfind("method,snr_db,metric,stat,value,n_trials,config_hash\n", 0) == 0);
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            CHECK(std::count(line.begin(), line.end(), ',') == 6);
    }
}

TEST_CASE("very high SNR drives every estimator to the truth")
{
    ExperimentConfig c;
    c.snr_grid_db = {120};
    c.n_trials = 10;
    c.methods = {Method::HDR, Method::KRF, Method::LS};
    const TrialSamples s = run_trials(c, false);
    for (auto m : c.methods)
        for (double v : s.nmse_of(m, 0))
            CHECK(v < 1e-10);
}

TEST_CASE("fixed angles repeat the same channel")
{
    ExperimentConfig c = small_config();
    c.fixed_params = ChannelParams{};
    c.methods = {Method::LS};
    c.snr_grid_db = {200};
    const TrialSamples s = run_trials(c, true);
    const auto& se = s.se_of(Method::LS, 0);
    for (double v : se)
        CHECK(v == Catch::Approx(se.front()).epsilon(1e-12));
}

TEST_CASE("complexity grid helpers")
{
    CHECK(ris_shape_for(16) == ArrayShape{4, 4});
    CHECK(ris_shape_for(2500) == ArrayShape{50, 50});
    CHECK(ris_shape_for(12) == ArrayShape{3, 4});
    CHECK(ris_shape_for(7) == ArrayShape{1, 7});
    CHECK(measurable(complexity_dims(hdr::test::reference_dims(), 16)));
    CHECK_FALSE(measurable(complexity_dims(hdr::test::reference_dims(), 2500)));
}
