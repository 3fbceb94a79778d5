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

#ifndef HDR_CHANNEL_HPP
#define HDR_CHANNEL_HPP

#include "hdr/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hdr {

/// Element counts of a uniform rectangular array in the y-z plane.
struct ArrayShape {
    std::size_t y = 1;
    std::size_t z = 1;

    [[nodiscard]] std::size_t size() const { return y * z; }
    bool operator==(const ArrayShape&) const = default;
};

struct InfeasibleDesignError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SystemDims {
    ArrayShape bs{4, 4};  ///< transmit array (M = bs.size())
    ArrayShape ue{4, 4};  ///< receive array (Q = ue.size())
    ArrayShape ris{4, 4}; ///< reflecting surface (N = ris.size())
    std::size_t pilot_length = 16;    ///< T
    std::size_t training_blocks = 16; ///< K, RIS phase patterns

    [[nodiscard]] std::size_t M() const { return bs.size(); }
    [[nodiscard]] std::size_t Q() const { return ue.size(); }
    [[nodiscard]] std::size_t N() const { return ris.size(); }
    [[nodiscard]] std::size_t TK() const { return pilot_length * training_blocks; }

    bool operator==(const SystemDims&) const = default;

    /// Throws DimensionError on zero extents, InfeasibleDesignError when T*K < M*N.
    void validate() const
    {
        for (auto v : {bs.y, bs.z, ue.y, ue.z, ris.y, ris.z, pilot_length, training_blocks})
            if (v == 0)
                throw DimensionError("SystemDims: all extents must be positive");
        if (TK() < M() * N())
            throw InfeasibleDesignError("joint training requires TK >= MN (TK=" + std::to_string(TK()) +
                                        ", MN=" + std::to_string(M() * N()) + ")");
    }
};

/// Plane-wave direction, radians.
struct Direction {
    double azimuth = 0.0;
    double elevation = std::numbers::pi / 2;
};

/// Phase progression per element along y and z, radians.
struct SpatialFrequency {
    double y = 0.0;
    double z = 0.0;
};

/// Half-wavelength spacing: y-rate pi*sin(el)*sin(az), z-rate pi*cos(el).
inline SpatialFrequency spatial_frequencies(Direction d)
{
    using std::numbers::pi;
    return {pi * std::sin(d.elevation) * std::sin(d.azimuth), pi * std::cos(d.elevation)};
}

struct ChannelParams {
    Direction bs_departure;
    Direction ris_arrival;
    Direction ris_departure;
    Direction ue_arrival;
};

/// Entry l (0-based) is exp(-j*l*freq).
inline Vector steering_1d(std::size_t length, double freq)
{
    if (length == 0)
        throw DimensionError("steering_1d: length must be positive");
    Vector v(static_cast<Index>(length));
    for (Index l = 0; l < v.size(); ++l)
        v(l) = std::polar(1.0, -static_cast<double>(l) * freq);
    return v;
}

/// URA response, y index slowest: steering_1d(y) kron steering_1d(z).
inline Vector steering_2d(ArrayShape shape, SpatialFrequency f)
{
    return kron(steering_1d(shape.y, f.y), steering_1d(shape.z, f.z));
}

/// Ground truth for one link. Channel gain is absorbed, so every steering entry
/// has unit modulus.
struct ChannelRealization {
    // 1-D steering vectors per array and axis
    Vector bs_y, bs_z;                       // a_y, a_z
    Vector ris_arrival_y, ris_arrival_z;     // b_y, b_z
    Vector ris_departure_y, ris_departure_z; // p_y, p_z
    Vector ue_y, ue_z;                       // q_y, q_z (also written w_y, w_z)
    // effective RIS vectors, arrival (.) departure
    Vector ris_y, ris_z;
    // axis factors of the two links
    Matrix bs_ris_y, bs_ris_z; // H_y (N_y x M_y), H_z
    Matrix ris_ue_y, ris_ue_z; // G_y (Q_y x N_y), G_z
    Matrix bs_ris;             // H, N x M
    Matrix ris_ue;             // G, Q x N
    Matrix khatri_rao;         // E = H^T <> G, QM x N

    [[nodiscard]] Vector ris_effective() const { return kron(ris_y, ris_z); }
    [[nodiscard]] Vector bs() const { return kron(bs_y, bs_z); }
    [[nodiscard]] Vector ue() const { return kron(ue_y, ue_z); }
};

inline ChannelRealization build_channels(const SystemDims& dims, const ChannelParams& p)
{
    const auto f_bs = spatial_frequencies(p.bs_departure);
    const auto f_ra = spatial_frequencies(p.ris_arrival);
    const auto f_rd = spatial_frequencies(p.ris_departure);
    const auto f_ue = spatial_frequencies(p.ue_arrival);

    ChannelRealization ch;
    ch.bs_y = steering_1d(dims.bs.y, f_bs.y);
    ch.bs_z = steering_1d(dims.bs.z, f_bs.z);
    ch.ris_arrival_y = steering_1d(dims.ris.y, f_ra.y);
    ch.ris_arrival_z = steering_1d(dims.ris.z, f_ra.z);
    ch.ris_departure_y = steering_1d(dims.ris.y, f_rd.y);
    ch.ris_departure_z = steering_1d(dims.ris.z, f_rd.z);
    ch.ue_y = steering_1d(dims.ue.y, f_ue.y);
    ch.ue_z = steering_1d(dims.ue.z, f_ue.z);

    ch.ris_y = hadamard(ch.ris_arrival_y, ch.ris_departure_y);
    ch.ris_z = hadamard(ch.ris_arrival_z, ch.ris_departure_z);

    ch.bs_ris_y = ch.ris_arrival_y * ch.bs_y.transpose();
    ch.bs_ris_z = ch.ris_arrival_z * ch.bs_z.transpose();
    ch.ris_ue_y = ch.ue_y * ch.ris_departure_y.transpose();
    ch.ris_ue_z = ch.ue_z * ch.ris_departure_z.transpose();

    ch.bs_ris = kron(ch.bs_ris_y, ch.bs_ris_z);
    ch.ris_ue = kron(ch.ris_ue_y, ch.ris_ue_z);
    ch.khatri_rao = khatri_rao(ch.bs_ris.transpose(), ch.ris_ue);
    return ch;
}

/// One sector: azimuths U(-60, 60) deg, elevations U(90, 130) deg, all eight i.i.d.
template <typename Rng>
ChannelParams sample_params(Rng& rng)
{
    constexpr double deg = std::numbers::pi / 180.0;
    std::uniform_real_distribution<double> azimuth(-60.0 * deg, 60.0 * deg);
    std::uniform_real_distribution<double> elevation(90.0 * deg, 130.0 * deg);
    auto draw = [&] {
        Direction d;
        d.azimuth = azimuth(rng);
        d.elevation = elevation(rng);
        return d;
    };
    ChannelParams p;
    p.bs_departure = draw();
    p.ris_arrival = draw();
    p.ris_departure = draw();
    p.ue_arrival = draw();
    return p;
}

} // namespace hdr

#endif // HDR_CHANNEL_HPP
