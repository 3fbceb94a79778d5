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

#ifndef HDR_METRICS_HPP
#define HDR_METRICS_HPP

#include "hdr/estimators.hpp"

#include <cmath>

namespace hdr {

/// ||E - E_hat||_F^2 / ||E||_F^2 for a single trial.
inline double nmse(const Matrix& truth, const Matrix& estimate)
{
    if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols())
        throw DimensionError("nmse: shape mismatch");
    const double ref = truth.squaredNorm();
    if (!(ref > 0.0))
        throw ZeroInputError("nmse: reference channel is zero");
    return (truth - estimate).squaredNorm() / ref;
}

/// Effective RIS vector implied by an estimate. Structured estimates carry it
/// directly; otherwise E_hat ~ (a kron q) n^T, so n is the conjugate of the
/// dominant right singular vector of E_hat.
inline Vector effective_ris_vector(const EstimateSet& est)
{
    if (est.components)
        return kron(est.components->ris_y, est.components->ris_z);
    return dominant_left_singular_vector(est.khatri_rao.adjoint()).vector.conjugate();
}

/// Unit-modulus RIS configuration that co-phases the effective RIS vector.
inline Vector ris_alignment(const Vector& ris)
{
    Vector omega(ris.size());
    for (Index i = 0; i < ris.size(); ++i) {
        const double m = std::abs(ris(i));
        omega(i) = m > 0.0 ? std::conj(ris(i)) / m : cplx(1.0, 0.0);
    }
    return omega;
}

struct Beamformers {
    Vector ris;      // omega
    Vector precoder; // f, unit norm
    Vector combiner; // w, unit norm
};

/// RIS phases, precoder and combiner designed from an estimate: the RIS is
/// co-phased with the estimated effective vector, then f and w are the
/// dominant right/left singular vectors of unvec_{QxM}(E_hat * omega).
inline Beamformers design_beamformers(const EstimateSet& est, const SystemDims& dims)
{
    Beamformers bf;
    bf.ris = ris_alignment(effective_ris_vector(est));
    const Matrix link = unvec(est.khatri_rao * bf.ris, static_cast<Index>(dims.Q()), static_cast<Index>(dims.M()));
    bf.combiner = dominant_left_singular_vector(link).vector;
    bf.precoder = dominant_left_singular_vector(link.adjoint()).vector;
    return bf;
}

/// Achievable rate on the true channel with beamformers designed from `est`:
/// log2(1 + P_T |w^H G diag(omega) H f|^2 / sigma^2).
inline double spectral_efficiency(const ChannelRealization& ch, const EstimateSet& est, const SystemDims& dims,
                                  double transmit_power, double noise_variance)
{
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("spectral_efficiency: noise variance must be positive");
    const Beamformers bf = design_beamformers(est, dims);
    const Matrix link = ch.ris_ue * bf.ris.asDiagonal() * ch.bs_ris;
    const cplx gain = bf.combiner.dot(link * bf.precoder); // dot conjugates the left operand
    return std::log2(1.0 + transmit_power * std::norm(gain) / noise_variance);
}

/// Closed-form rate with perfect CSI: the co-phased rank-one link has gain N sqrt(QM).
inline double ideal_spectral_efficiency(const SystemDims& dims, double transmit_power, double noise_variance)
{
    const double n = static_cast<double>(dims.N());
    return std::log2(1.0 + transmit_power * static_cast<double>(dims.Q() * dims.M()) * n * n / noise_variance);
}

// ---------------------------------------------------------------------------
// Complexity
// ---------------------------------------------------------------------------

/// Leading-order operation counts with unit constants:
///   LS  Q^2 M N T K
///   HDR Q^2 M N T K + Q M N (Q_z + Q_y + M_z + M_y + N_z + N_y)
///   KRF Q^2 M N T K + N^2 Q^2 M^2
inline double flops_analytic(Method method, const SystemDims& dims)
{
    const double q = static_cast<double>(dims.Q()), m = static_cast<double>(dims.M()),
                 n = static_cast<double>(dims.N()), tk = static_cast<double>(dims.TK());
    const double filtering = q * q * m * n * tk;
    switch (method) {
    case Method::LS: return filtering;
    case Method::HDR: {
        const double extents = static_cast<double>(dims.ue.z + dims.ue.y + dims.bs.z + dims.bs.y + dims.ris.z +
                                                   dims.ris.y);
        return filtering + q * m * n * extents;
    }
    case Method::KRF: return filtering + n * n * q * q * m * m;
    case Method::Ideal: break;
    }
    throw std::invalid_argument("flops_analytic: no complexity model for the ideal benchmark");
}

/// Complex MACs counted through the instrumented kernels while running the
/// receiver chain (matched filter plus estimator) on one noiseless trial.
inline std::uint64_t flops_measured(Method method, const SystemDims& dims, std::uint64_t seed = 0)
{
    if (method == Method::Ideal)
        throw std::invalid_argument("flops_measured: the ideal benchmark has no receiver");
    std::mt19937_64 rng(seed);
    const TrainingDesign td = make_training(dims);
    const ChannelRealization ch = build_channels(dims, sample_params(rng));
    const ObservationTensor obs = simulate_observation(ch, td, 0.0, seed);
    const PermutationPlan plan = build_permutations(dims);

    const flops::MacScope scope;
    const Matrix filtered = matched_filter(obs, td);
    switch (method) {
    case Method::HDR: (void)hdr_estimate(filtered, plan, dims); break;
    case Method::KRF: (void)krf_estimate(filtered, dims); break;
    default: (void)ls_estimate(filtered); break;
    }
    return scope.count();
}

} // namespace hdr

#endif // HDR_METRICS_HPP
