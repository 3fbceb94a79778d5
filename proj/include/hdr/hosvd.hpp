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

#ifndef HDR_HOSVD_HPP
#define HDR_HOSVD_HPP

#include "hdr/tensor.hpp"

#include <future>
#include <vector>

namespace hdr {

/// core_scalar * (vectors[0] o ... o vectors[N-1]) with unit-norm vectors.
struct RankOneFactors {
    std::vector<Vector> vectors;
    cplx core_scalar{0.0, 0.0};

    [[nodiscard]] ComplexTensor reconstruct() const { return outer(vectors, core_scalar); }
};

enum class Schedule { sequential, parallel };

/// Z x_0 v0^H x_1 v1^H ... x_{N-1} v_{N-1}^H.
inline cplx contract_all_modes(const ComplexTensor& z, std::span<const Vector> vectors)
{
    if (vectors.size() != z.order())
        throw DimensionError("contract_all_modes: need one vector per mode");
    // The mode being contracted is always the fastest one of what remains.
    Vector rest = z.data();
    for (std::size_t m = 0; m < z.order(); ++m) {
        const auto extent = static_cast<Index>(z.extent(m));
        if (vectors[m].size() != extent)
            throw DimensionError("contract_all_modes: vector length does not match mode " + std::to_string(m));
        const Index remaining = rest.size() / extent;
        const Matrix folded = rest.reshaped(extent, remaining);
        rest = flops::product(vectors[m].adjoint(), folded).transpose();
    }
    return rest(0);
}

/// Dominant left singular vector of one unfolding; one HOSVD subproblem.
inline Vector hosvd_mode_factor(const ComplexTensor& z, std::size_t mode)
{
    return dominant_left_singular_vector(unfold(z, mode)).vector;
}

/// Rank-one truncated HOSVD.
///
/// Each mode factor is the dominant left singular vector of the corresponding
/// unfolding; these subproblems share no state, so `Schedule::parallel` runs
/// them as separate tasks. The amplitude is the full contraction of `z` with
/// the conjugated factors, which is the least-squares optimal scale for the
/// chosen directions.
inline RankOneFactors hosvd_rank1(const ComplexTensor& z, Schedule schedule = Schedule::sequential)
{
    if (z.order() < 2)
        throw DimensionError("hosvd_rank1: tensor order must be at least 2");
    if (z.data().stableNorm() < kZeroNormThreshold)
        throw ZeroInputError("hosvd_rank1: zero tensor");

    RankOneFactors out;
    out.vectors.resize(z.order());
    if (schedule == Schedule::parallel) {
        std::vector<std::future<Vector>> jobs;
        jobs.reserve(z.order());
        for (std::size_t m = 0; m < z.order(); ++m)
            jobs.push_back(std::async(std::launch::async, [&z, m] { return hosvd_mode_factor(z, m); }));
        for (std::size_t m = 0; m < z.order(); ++m)
            out.vectors[m] = jobs[m].get();
    } else {
        for (std::size_t m = 0; m < z.order(); ++m)
            out.vectors[m] = hosvd_mode_factor(z, m);
    }
    out.core_scalar = contract_all_modes(z, out.vectors);
    return out;
}

} // namespace hdr

#endif // HDR_HOSVD_HPP
