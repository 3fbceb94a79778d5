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

#ifndef HDR_ESTIMATORS_HPP
#define HDR_ESTIMATORS_HPP

#include "hdr/hosvd.hpp"
#include "hdr/permutation.hpp"
#include "hdr/training.hpp"

#include <optional>
#include <random>
#include <string_view>

namespace hdr {

// ---------------------------------------------------------------------------
// Observation model
// ---------------------------------------------------------------------------

/// Received pilot blocks, Q x T x K.
struct ObservationTensor {
    ComplexTensor received;
    double noise_variance = 0.0;
    std::uint64_t seed = 0;
};

/// Circularly-symmetric complex Gaussian entries with unit variance.
template <typename Rng>
Vector standard_complex_noise(Index count, Rng& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double s = std::sqrt(0.5);
    Vector v(count);
    for (Index i = 0; i < count; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = cplx(s * re, s * im);
    }
    return v;
}

/// G diag(omega_k) H S for every block k, stacked along the third mode.
inline ComplexTensor noiseless_observation(const ChannelRealization& ch, const TrainingDesign& td)
{
    const Matrix& s = td.pilots();
    const Matrix& omega = td.ris_phases();
    if (ch.bs_ris.cols() != s.rows() || ch.bs_ris.rows() != omega.rows())
        throw DimensionError("simulate_observation: training design does not match channel dimensions");
    const auto q = static_cast<std::size_t>(ch.ris_ue.rows());
    const auto t = static_cast<std::size_t>(s.cols());
    const auto k = static_cast<std::size_t>(omega.cols());
    ComplexTensor x({q, t, k});
    const Matrix hs = ch.bs_ris * s;
    const Index slab = static_cast<Index>(q * t);
    for (Index b = 0; b < omega.cols(); ++b) {
        const Matrix xk = ch.ris_ue * omega.col(b).asDiagonal() * hs;
        x.data().segment(b * slab, slab) = xk.reshaped();
    }
    return x;
}

/// Noise is drawn from a generator seeded with `seed`, so the same seed at
/// different variances gives the same noise pattern up to scale.
inline ObservationTensor simulate_observation(const ChannelRealization& ch, const TrainingDesign& td,
                                              double noise_variance, std::uint64_t seed)
{
    if (noise_variance < 0.0)
        throw std::invalid_argument("simulate_observation: negative noise variance");
    ObservationTensor obs{noiseless_observation(ch, td), noise_variance, seed};
    if (noise_variance > 0.0) {
        std::mt19937_64 rng(seed);
        obs.received.data() += std::sqrt(noise_variance) * standard_complex_noise(obs.received.size(), rng);
    }
    return obs;
}

// ---------------------------------------------------------------------------
// Matched filtering
// ---------------------------------------------------------------------------

/// Filtered Khatri-Rao channel, QM x N: reshape of unfold(X, 0) * Psi^H.
inline Matrix matched_filter(const ObservationTensor& obs, const TrainingDesign& td)
{
    if (!td.report().orthonormal(1e-8))
        throw InfeasibleDesignError("matched_filter: joint training matrix rows are not orthonormal (deviation " +
                                    std::to_string(td.report().row_gram_deviation) + ")");
    const auto& x = obs.received;
    if (x.order() != 3 || x.extent(1) != static_cast<std::size_t>(td.pilots().cols()) ||
        x.extent(2) != static_cast<std::size_t>(td.ris_phases().cols()))
        throw DimensionError("matched_filter: observation shape " + shape_string(x.dims()) +
                             " does not match the training design");
    const Index q = static_cast<Index>(x.extent(0));
    const Index m = td.pilots().rows();
    const Index n = td.ris_phases().rows();
    const Matrix filtered = flops::product(unfold(x, 0), td.joint().adjoint());
    return filtered.reshaped(q * m, n);
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

enum class Method { HDR, KRF, LS, Ideal };

inline std::string_view method_name(Method m)
{
    switch (m) {
    case Method::HDR: return "HDR";
    case Method::KRF: return "KRF";
    case Method::LS: return "LS";
    case Method::Ideal: return "Ideal";
    }
    return "?";
}

inline std::optional<Method> parse_method(std::string_view s)
{
    for (auto m : {Method::HDR, Method::KRF, Method::LS, Method::Ideal})
        if (s == method_name(m))
            return m;
    return std::nullopt;
}

/// The six factor vectors of the HDR tensor, in tensor mode order.
struct ComponentVectors {
    Vector ue_z;  // mode 0
    Vector bs_z;  // mode 1
    Vector ris_z; // mode 2
    Vector ue_y;  // mode 3
    Vector bs_y;  // mode 4
    Vector ris_y; // mode 5

    [[nodiscard]] std::vector<Vector> in_mode_order() const { return {ue_z, bs_z, ris_z, ue_y, bs_y, ris_y}; }
};

struct EstimateSet {
    Method method = Method::LS;
    std::optional<ComponentVectors> components; // HDR and Ideal only
    cplx core{1.0, 0.0};
    Matrix khatri_rao; // reconstructed E, QM x N
};

/// Shape of the HDR tensor: [Q_z, M_z, N_z, Q_y, M_y, N_y].
inline Shape hdr_tensor_shape(const SystemDims& dims)
{
    return {dims.ue.z, dims.bs.z, dims.ris.z, dims.ue.y, dims.bs.y, dims.ris.y};
}

inline void check_filtered_shape(const Matrix& e, const SystemDims& dims, const char* who)
{
    if (e.rows() != static_cast<Index>(dims.Q() * dims.M()) || e.cols() != static_cast<Index>(dims.N()))
        throw DimensionError(std::string(who) + ": expected a " + std::to_string(dims.Q() * dims.M()) + "x" +
                             std::to_string(dims.N()) + " matrix, got " + std::to_string(e.rows()) + "x" +
                             std::to_string(e.cols()));
}

/// Maps core * (w_z o a_z o n_z o w_y o a_y o n_y) back to the QM x N Khatri-Rao layout.
inline Matrix rebuild_khatri_rao(const ComponentVectors& c, cplx core, const PermutationPlan& plan,
                                 const SystemDims& dims)
{
    const auto factors = c.in_mode_order();
    const ComplexTensor z = outer(factors, core);
    if (z.dims() != hdr_tensor_shape(dims))
        throw DimensionError("rebuild_khatri_rao: factor lengths do not match dims");
    const Vector e = plan.shuffle.apply_transpose(z.data());
    return unvec(e, static_cast<Index>(dims.Q() * dims.M()), static_cast<Index>(dims.N()));
}

/// Permutation + tensorisation of the filtered channel.
inline ComplexTensor hdr_tensor(const Matrix& filtered, const PermutationPlan& plan, const SystemDims& dims)
{
    check_filtered_shape(filtered, dims, "hdr_tensor");
    return tensorize(plan.shuffle.apply(vec(filtered)), hdr_tensor_shape(dims));
}

inline EstimateSet hdr_estimate(const Matrix& filtered, const PermutationPlan& plan, const SystemDims& dims,
                                Schedule schedule = Schedule::sequential)
{
    const ComplexTensor z = hdr_tensor(filtered, plan, dims);
    const RankOneFactors f = hosvd_rank1(z, schedule);

    EstimateSet est;
    est.method = Method::HDR;
    est.components = ComponentVectors{f.vectors[0], f.vectors[1], f.vectors[2],
                                      f.vectors[3], f.vectors[4], f.vectors[5]};
    est.core = f.core_scalar;
    est.khatri_rao = rebuild_khatri_rao(*est.components, est.core, plan, dims);
    return est;
}

/// Per-column Khatri-Rao factorisation: column n, read as the Q x M matrix
/// g_n h_n^T, is replaced by its best rank-one approximation.
inline EstimateSet krf_estimate(const Matrix& filtered, const SystemDims& dims)
{
    check_filtered_shape(filtered, dims, "krf_estimate");
    const auto q = static_cast<Index>(dims.Q());
    const auto m = static_cast<Index>(dims.M());
    EstimateSet est;
    est.method = Method::KRF;
    est.khatri_rao.resize(filtered.rows(), filtered.cols());
    for (Index n = 0; n < filtered.cols(); ++n) {
        const Matrix column = unvec(filtered.col(n), q, m);
        const Vector u = dominant_left_singular_vector(column).vector;
        const Matrix projected = flops::product(u, flops::product(u.adjoint(), column));
        est.khatri_rao.col(n) = projected.reshaped();
    }
    return est;
}

inline EstimateSet ls_estimate(const Matrix& filtered)
{
    EstimateSet est;
    est.method = Method::LS;
    est.khatri_rao = filtered;
    return est;
}

/// Ground truth packaged as an estimate, for the ideal-CSI benchmark.
inline EstimateSet ideal_estimate(const ChannelRealization& ch)
{
    EstimateSet est;
    est.method = Method::Ideal;
    est.components = ComponentVectors{ch.ue_z, ch.bs_z, ch.ris_z, ch.ue_y, ch.bs_y, ch.ris_y};
    est.khatri_rao = ch.khatri_rao;
    return est;
}

// ---------------------------------------------------------------------------
// Angle-domain readout
// ---------------------------------------------------------------------------

inline double wrap_to_pi(double a)
{
    using std::numbers::pi;
    a = std::remainder(a, 2.0 * pi);
    return a;
}

/// Frequency mu maximising |v^H steering_1d(L, mu)|^2: grid search, then three
/// Newton steps on the same objective. Result in [-pi, pi].
inline double extract_spatial_frequency(const Vector& v)
{
    using std::numbers::pi;
    if (v.size() < 2)
        throw DimensionError("extract_spatial_frequency: need at least two entries");
    const Index len = v.size();
    const Vector c = v.conjugate();

    // s(mu) = sum_l c_l e^{-j l mu} and its first two derivatives
    auto eval = [&](double mu, cplx& s, cplx& ds, cplx& d2s) {
        s = ds = d2s = 0.0;
        for (Index l = 0; l < len; ++l) {
            const double dl = static_cast<double>(l);
            const cplx term = c(l) * std::polar(1.0, -dl * mu);
            s += term;
            ds += cplx(0.0, -dl) * term;
            d2s += -dl * dl * term;
        }
    };

    const Index grid = std::max<Index>(256, 32 * len);
    double best_mu = -pi, best_val = -1.0;
    cplx s, ds, d2s;
    for (Index g = 0; g < grid; ++g) {
        const double mu = -pi + 2.0 * pi * static_cast<double>(g) / static_cast<double>(grid);
        eval(mu, s, ds, d2s);
        if (std::norm(s) > best_val) {
            best_val = std::norm(s);
            best_mu = mu;
        }
    }
    double mu = best_mu;
    for (int step = 0; step < 3; ++step) {
        eval(mu, s, ds, d2s);
        const double grad = 2.0 * std::real(std::conj(s) * ds);
        const double curv = 2.0 * (std::norm(ds) + std::real(std::conj(s) * d2s));
        if (curv >= 0.0)
            break; // not at a local maximum; keep the grid answer
        mu -= grad / curv;
    }
    return wrap_to_pi(mu);
}

} // namespace hdr

#endif // HDR_ESTIMATORS_HPP
