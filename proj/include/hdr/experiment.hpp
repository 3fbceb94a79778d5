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

#ifndef HDR_EXPERIMENT_HPP
#define HDR_EXPERIMENT_HPP

#include "hdr/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace hdr {

/// Bad or inconsistent experiment configuration (reported like an infeasible design).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    SystemDims dims;
    std::vector<double> snr_grid_db{-15, -10, -5, 0, 5, 10, 15, 20};
    std::size_t n_trials = 500;
    std::vector<Method> methods{Method::HDR, Method::KRF, Method::LS, Method::Ideal};
    std::uint64_t seed = 1;
    double transmit_power = 1.0;
    std::vector<std::size_t> ris_grid{16, 100, 400, 2500};
    std::optional<ChannelParams> fixed_params; // replaces random angle draws
    std::string output_path;                   // empty: stdout
    unsigned threads = 1;                      // 0: hardware concurrency

    [[nodiscard]] bool uses(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

    void validate() const
    {
        if (n_trials == 0)
            throw ConfigError("n_trials must be at least 1");
        if (snr_grid_db.empty())
            throw ConfigError("snr_grid_db must not be empty");
        if (methods.empty())
            throw ConfigError("methods must not be empty");
        if (!(transmit_power > 0.0))
            throw ConfigError("transmit_power must be positive");
        for (auto n : ris_grid)
            if (n == 0)
                throw ConfigError("ris_grid entries must be positive");
        dims.validate();
    }

    /// Everything that influences results. Output path and thread count are
    /// left out: they do not change a single value.
    [[nodiscard]] nlohmann::json to_json() const;

    /// FNV-1a over the canonical JSON dump, as 16 hex digits.
    [[nodiscard]] std::string hash() const
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : to_json().dump()) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig load(const std::string& path);
};

namespace detail {

constexpr double kDeg = std::numbers::pi / 180.0;

inline nlohmann::json direction_to_json(Direction d) { return {d.azimuth / kDeg, d.elevation / kDeg}; }

inline Direction direction_from_json(const nlohmann::json& j, const char* key)
{
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(std::string("angles_deg.") + key + " must be [azimuth_deg, elevation_deg]");
    return {j[0].get<double>() * kDeg, j[1].get<double>() * kDeg};
}

inline ArrayShape shape_from_json(const nlohmann::json& j, const char* key)
{
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(std::string("dims.") + key + " must be [y, z]");
    return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

} // namespace detail

inline nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json j;
    j["dims"] = {{"bs", {dims.bs.y, dims.bs.z}},
                 {"ue", {dims.ue.y, dims.ue.z}},
                 {"ris", {dims.ris.y, dims.ris.z}},
                 {"pilot_length", dims.pilot_length},
                 {"training_blocks", dims.training_blocks}};
    j["snr_grid_db"] = snr_grid_db;
    j["n_trials"] = n_trials;
    auto& ms = j["methods"] = nlohmann::json::array();
    for (auto m : methods)
        ms.push_back(std::string(method_name(m)));
    j["seed"] = seed;
    j["transmit_power"] = transmit_power;
    j["ris_grid"] = ris_grid;
    if (fixed_params) {
        j["angles_deg"] = {{"bs_departure", detail::direction_to_json(fixed_params->bs_departure)},
                           {"ris_arrival", detail::direction_to_json(fixed_params->ris_arrival)},
                           {"ris_departure", detail::direction_to_json(fixed_params->ris_departure)},
                           {"ue_arrival", detail::direction_to_json(fixed_params->ue_arrival)}};
    }
    return j;
}

/// Keys mirror the struct; anything missing keeps its default. Unknown keys are rejected.
inline ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j)
{
    static const std::vector<std::string> known{"dims",    "snr_grid_db",    "n_trials", "methods",    "seed",
                                                "threads", "transmit_power", "ris_grid", "angles_deg", "output_path"};
    if (!j.is_object())
        throw ConfigError("config root must be an object");
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown config key '" + key + "'");

    ExperimentConfig c;
    try {
        if (j.contains("dims")) {
            const auto& d = j["dims"];
            if (d.contains("bs")) c.dims.bs = detail::shape_from_json(d["bs"], "bs");
            if (d.contains("ue")) c.dims.ue = detail::shape_from_json(d["ue"], "ue");
            if (d.contains("ris")) c.dims.ris = detail::shape_from_json(d["ris"], "ris");
            if (d.contains("pilot_length")) c.dims.pilot_length = d["pilot_length"].get<std::size_t>();
            if (d.contains("training_blocks")) c.dims.training_blocks = d["training_blocks"].get<std::size_t>();
        }
        if (j.contains("snr_grid_db")) c.snr_grid_db = j["snr_grid_db"].get<std::vector<double>>();
        if (j.contains("n_trials")) c.n_trials = j["n_trials"].get<std::size_t>();
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j["methods"]) {
                const auto parsed = parse_method(m.get<std::string>());
                if (!parsed)
                    throw ConfigError("unknown method '" + m.get<std::string>() + "'");
                c.methods.push_back(*parsed);
            }
        }
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
        if (j.contains("transmit_power")) c.transmit_power = j["transmit_power"].get<double>();
        if (j.contains("ris_grid")) c.ris_grid = j["ris_grid"].get<std::vector<std::size_t>>();
        if (j.contains("output_path")) c.output_path = j["output_path"].get<std::string>();
        if (j.contains("angles_deg")) {
            const auto& a = j["angles_deg"];
            ChannelParams p;
            p.bs_departure = detail::direction_from_json(a.at("bs_departure"), "bs_departure");
            p.ris_arrival = detail::direction_from_json(a.at("ris_arrival"), "ris_arrival");
            p.ris_departure = detail::direction_from_json(a.at("ris_departure"), "ris_departure");
            p.ue_arrival = detail::direction_from_json(a.at("ue_arrival"), "ue_arrival");
            c.fixed_params = p;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return c;
}

inline ExperimentConfig ExperimentConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::ios_base::failure("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

// ---------------------------------------------------------------------------
// Deterministic parallel execution
// ---------------------------------------------------------------------------

/// Generator for trial `trial`; depends only on (root seed, trial index).
inline std::mt19937_64 trial_rng(std::uint64_t root_seed, std::size_t trial)
{
    const auto t = static_cast<std::uint64_t>(trial);
    std::seed_seq seq{static_cast<std::uint32_t>(root_seed), static_cast<std::uint32_t>(root_seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    return std::mt19937_64(seq);
}

/// Runs body(i) for i in [0, count) on `threads` workers; body must only touch slot i.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

/// Neumaier-compensated mean.
inline double compensated_mean(std::span<const double> xs)
{
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(xs.size());
}

inline double median(std::vector<double> xs)
{
    if (xs.empty())
        throw std::invalid_argument("median of empty sample");
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    const double hi = xs[mid];
    if (xs.size() % 2 == 1)
        return hi;
    const double lo = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Monte Carlo trials
// ---------------------------------------------------------------------------

/// Per-trial samples, indexed [method][snr][trial].
struct TrialSamples {
    std::vector<Method> methods;
    std::vector<double> snr_db;
    std::vector<std::vector<std::vector<double>>> nmse;
    std::vector<std::vector<std::vector<double>>> se;

    [[nodiscard]] std::size_t method_index(Method m) const
    {
        const auto it = std::find(methods.begin(), methods.end(), m);
        if (it == methods.end())
            throw std::out_of_range("TrialSamples: method not run");
        return static_cast<std::size_t>(it - methods.begin());
    }
    [[nodiscard]] const std::vector<double>& nmse_of(Method m, std::size_t snr) const
    {
        return nmse[method_index(m)].at(snr);
    }
    [[nodiscard]] const std::vector<double>& se_of(Method m, std::size_t snr) const
    {
        return se[method_index(m)].at(snr);
    }
};

/// Every trial draws its angles (unless fixed) and one unit-variance noise
/// pattern from its own stream; each SNR point scales that same pattern.
inline TrialSamples run_trials(const ExperimentConfig& cfg, bool with_se)
{
    cfg.validate();
    const TrainingDesign td = make_training(cfg.dims);
    const PermutationPlan plan = build_permutations(cfg.dims);

    TrialSamples out;
    out.methods = cfg.methods;
    out.snr_db = cfg.snr_grid_db;
    const std::size_t nm = cfg.methods.size(), ns = cfg.snr_grid_db.size(), nt = cfg.n_trials;
    out.nmse.assign(nm, std::vector<std::vector<double>>(ns, std::vector<double>(nt, 0.0)));
    out.se = out.nmse;

    parallel_for(nt, cfg.threads, [&](std::size_t trial) {
        auto rng = trial_rng(cfg.seed, trial);
        const ChannelParams params = cfg.fixed_params ? *cfg.fixed_params : sample_params(rng);
        const std::uint64_t noise_seed = rng();
        const ChannelRealization ch = build_channels(cfg.dims, params);

        for (std::size_t s = 0; s < ns; ++s) {
            const double sigma2 = cfg.transmit_power * std::pow(10.0, -cfg.snr_grid_db[s] / 10.0);
            const ObservationTensor obs = simulate_observation(ch, td, sigma2, noise_seed);
            const Matrix filtered = matched_filter(obs, td);
            for (std::size_t mi = 0; mi < nm; ++mi) {
                EstimateSet est;
                switch (cfg.methods[mi]) {
                case Method::HDR: est = hdr_estimate(filtered, plan, cfg.dims); break;
                case Method::KRF: est = krf_estimate(filtered, cfg.dims); break;
                case Method::LS: est = ls_estimate(filtered); break;
                case Method::Ideal: est = ideal_estimate(ch); break;
                }
                out.nmse[mi][s][trial] = nmse(ch.khatri_rao, est.khatri_rao);
                if (with_se)
                    out.se[mi][s][trial] = spectral_efficiency(ch, est, cfg.dims, cfg.transmit_power, sigma2);
            }
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// CSV output: method,snr_db,metric,stat,value,n_trials,config_hash
// ---------------------------------------------------------------------------

struct CsvRow {
    std::string method;
    std::string snr_db; // empty for rows not indexed by SNR
    std::string metric;
    std::string stat;
    double value = 0.0;
    std::size_t n_trials = 0;
    std::string config_hash;
};

inline constexpr std::string_view kCsvHeader = "method,snr_db,metric,stat,value,n_trials,config_hash";

/// Shortest representation that round-trips.
inline std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, std::span<const CsvRow> rows)
{
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.method << ',' << r.snr_db << ',' << r.metric << ',' << r.stat << ',' << format_number(r.value) << ','
           << r.n_trials << ',' << r.config_hash << '\n';
}

namespace detail {

inline void push_stats(std::vector<CsvRow>& rows, Method m, double snr, const char* metric,
                       const std::vector<double>& xs, const std::string& hash)
{
    const std::string name(method_name(m));
    rows.push_back({name, format_number(snr), metric, "mean", compensated_mean(xs), xs.size(), hash});
    rows.push_back({name, format_number(snr), metric, "median", median(xs), xs.size(), hash});
}

} // namespace detail

/// Mean and median NMSE per (method, SNR). The ideal benchmark is skipped.
inline std::vector<CsvRow> run_nmse_sweep(const ExperimentConfig& cfg)
{
    ExperimentConfig run = cfg;
    std::erase(run.methods, Method::Ideal);
    if (run.methods.empty())
        throw ConfigError("nmse sweep needs at least one of HDR, KRF, LS");
    const TrialSamples samples = run_trials(run, false);
    const std::string hash = cfg.hash();
    std::vector<CsvRow> rows;
    for (auto m : run.methods)
        for (std::size_t s = 0; s < run.snr_grid_db.size(); ++s)
            detail::push_stats(rows, m, run.snr_grid_db[s], "nmse", samples.nmse_of(m, s), hash);
    return rows;
}

/// Mean and median spectral efficiency per (method, SNR), Ideal included when configured.
inline std::vector<CsvRow> run_se_sweep(const ExperimentConfig& cfg)
{
    const TrialSamples samples = run_trials(cfg, true);
    const std::string hash = cfg.hash();
    std::vector<CsvRow> rows;
    for (auto m : cfg.methods)
        for (std::size_t s = 0; s < cfg.snr_grid_db.size(); ++s)
            detail::push_stats(rows, m, cfg.snr_grid_db[s], "se_bits_per_hz", samples.se_of(m, s), hash);
    return rows;
}

/// Near-square split of a RIS size: y is the largest divisor not above sqrt(n).
inline ArrayShape ris_shape_for(std::size_t n)
{
    std::size_t y = 1;
    for (std::size_t d = 1; d * d <= n; ++d)
        if (n % d == 0)
            y = d;
    return {y, n / y};
}

/// Dims used at one complexity grid point: RIS resized, T = M and K = N so that TK = MN.
inline SystemDims complexity_dims(const SystemDims& base, std::size_t ris_elements)
{
    SystemDims d = base;
    d.ris = ris_shape_for(ris_elements);
    d.pilot_length = d.M();
    d.training_blocks = d.N();
    return d;
}

// Dense Psi beyond this many entries is not materialised for measured counts.
inline constexpr std::size_t kMaxMeasuredPsiEntries = std::size_t{1} << 22;

inline bool measurable(const SystemDims& d) { return d.M() * d.N() * d.TK() <= kMaxMeasuredPsiEntries; }

/// Analytic counts for every grid point; measured counts where dense Psi fits.
/// The grid point is carried in the stat column as "N=<n>".
inline std::vector<CsvRow> run_complexity_sweep(const ExperimentConfig& cfg)
{
    cfg.validate();
    const std::string hash = cfg.hash();
    std::vector<CsvRow> rows;
    for (auto n : cfg.ris_grid) {
        const SystemDims d = complexity_dims(cfg.dims, n);
        const std::string stat = "N=" + std::to_string(n);
        for (auto m : cfg.methods) {
            if (m == Method::Ideal)
                continue;
            const std::string name(method_name(m));
            rows.push_back({name, "", "flops_analytic", stat, flops_analytic(m, d), 1, hash});
            if (measurable(d))
                rows.push_back({name, "", "flops_measured", stat,
                                static_cast<double>(flops_measured(m, d, cfg.seed)), 1, hash});
        }
    }
    return rows;
}

} // namespace hdr

#endif // HDR_EXPERIMENT_HPP
