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

// hdrsim: Monte Carlo driver for the HDR / KRF / LS channel estimators.
//
//   hdrsim nmse       --config cfg.json --trials 500 --out nmse.csv
//   hdrsim se         --seed 7 --threads 4
//   hdrsim complexity --out complexity.csv
//   hdrsim validate   --config cfg.json
//
// Exit codes: 0 success, 1 I/O failure, 2 infeasible or invalid configuration.

#include "hdr/experiment.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInfeasible = 2;

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> out;
    std::optional<unsigned> threads;
};

hdr::ExperimentConfig resolve(const Overrides& o)
{
    hdr::ExperimentConfig cfg = o.config_path.empty() ? hdr::ExperimentConfig{} : hdr::ExperimentConfig::load(o.config_path);
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) cfg.n_trials = *o.trials;
    if (o.out) cfg.output_path = *o.out;
    if (o.threads) cfg.threads = *o.threads;
    return cfg;
}

void emit(const hdr::ExperimentConfig& cfg, const std::vector<hdr::CsvRow>& rows)
{
    if (cfg.output_path.empty()) {
        hdr::write_csv(std::cout, rows);
        std::cout.flush();
        if (!std::cout)
            throw std::ios_base::failure("failed writing to stdout");
        return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot open output file '" + cfg.output_path + "'");
    hdr::write_csv(out, rows);
    out.close();
    if (!out)
        throw std::ios_base::failure("failed writing '" + cfg.output_path + "'");
}

int validate(const hdr::ExperimentConfig& cfg)
{
    cfg.validate();
    const hdr::TrainingDesign td = hdr::make_training(cfg.dims);
    const auto& r = td.report();
    nlohmann::json j;
    j["config_hash"] = cfg.hash();
    j["config"] = cfg.to_json();
    j["training"] = {{"row_gram_deviation", r.row_gram_deviation},
                     {"ris_modulus_spread", r.ris_modulus_spread},
                     {"kronecker_residual", r.kronecker_residual},
                     {"ok", r.ok()}};
    std::cout << j.dump(2) << '\n';
    return r.ok() ? 0 : kExitInfeasible;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo simulator for tensor-based RIS channel estimation"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Root RNG seed (u64)");
    app.add_option("--trials", o.trials, "Monte Carlo trials per SNR point")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "Output CSV path (default: stdout)");
    app.add_option("--threads", o.threads, "Worker threads, 0 = all cores");

    auto* nmse = app.add_subcommand("nmse", "NMSE versus SNR for HDR, KRF and LS");
    auto* se = app.add_subcommand("se", "Spectral efficiency versus SNR, with the ideal-CSI benchmark");
    auto* complexity = app.add_subcommand("complexity", "Analytic and measured operation counts versus RIS size");
    auto* check = app.add_subcommand("validate", "Check a configuration and its training design");

    CLI11_PARSE(app, argc, argv);

    try {
        const hdr::ExperimentConfig cfg = resolve(o);
        if (check->parsed())
            return validate(cfg);
        if (nmse->parsed())
            emit(cfg, hdr::run_nmse_sweep(cfg));
        else if (se->parsed())
            emit(cfg, hdr::run_se_sweep(cfg));
        else if (complexity->parsed())
            emit(cfg, hdr::run_complexity_sweep(cfg));
    } catch (const hdr::InfeasibleDesignError& e) {
        std::cerr << "infeasible configuration: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const hdr::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const hdr::DimensionError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
