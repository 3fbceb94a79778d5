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

#ifndef HDR_TRAINING_HPP
#define HDR_TRAINING_HPP

#include "hdr/channel.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace hdr {

struct TrainingReport {
    double row_gram_deviation = 0.0;   ///< max |Psi Psi^H - I|
    double ris_modulus_spread = 0.0;   ///< max |Omega| - min |Omega|
    double kronecker_residual = 0.0;   ///< max |Psi - Omega kron S|

    [[nodiscard]] bool orthonormal(double tol = 1e-10) const { return row_gram_deviation < tol; }
    [[nodiscard]] bool constant_modulus(double tol = 1e-10) const { return ris_modulus_spread < tol; }
    [[nodiscard]] bool kronecker_consistent(double tol = 1e-10) const { return kronecker_residual < tol; }
    [[nodiscard]] bool ok(double tol = 1e-10) const
    {
        return orthonormal(tol) && constant_modulus(tol) && kronecker_consistent(tol);
    }
};

inline TrainingReport validate_training(const Matrix& pilots, const Matrix& ris_phases, const Matrix& joint)
{
    TrainingReport r;
    if (joint.rows() != pilots.rows() * ris_phases.rows() || joint.cols() != pilots.cols() * ris_phases.cols()) {
        r.kronecker_residual = std::numeric_limits<double>::infinity();
    } else {
        r.kronecker_residual = (joint - kron(ris_phases, pilots)).cwiseAbs().maxCoeff();
    }
    // An exact Kronecker structure lets the Gram matrix factor as well.
    const Matrix gram = r.kronecker_residual == 0.0
                            ? kron(Matrix(ris_phases * ris_phases.adjoint()), Matrix(pilots * pilots.adjoint()))
                            : Matrix(joint * joint.adjoint());
    r.row_gram_deviation = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    const auto mod = ris_phases.cwiseAbs();
    r.ris_modulus_spread = mod.maxCoeff() - mod.minCoeff();
    return r;
}

/// Pilot matrix S (M x T), RIS phase matrix Omega (N x K) and the joint
/// training matrix Psi (MN x TK). The validation report is computed once at
/// construction and travels with the matrices.
class TrainingDesign {
  public:
    static TrainingDesign from_parts(Matrix pilots, Matrix ris_phases, Matrix joint)
    {
        TrainingDesign td;
        td.report_ = validate_training(pilots, ris_phases, joint);
        td.pilots_ = std::move(pilots);
        td.ris_phases_ = std::move(ris_phases);
        td.joint_ = std::move(joint);
        return td;
    }

    [[nodiscard]] const Matrix& pilots() const { return pilots_; }
    [[nodiscard]] const Matrix& ris_phases() const { return ris_phases_; }
    [[nodiscard]] const Matrix& joint() const { return joint_; }
    [[nodiscard]] const TrainingReport& report() const { return report_; }

  private:
    TrainingDesign() = default;

    Matrix pilots_;
    Matrix ris_phases_;
    Matrix joint_;
    TrainingReport report_;
};

inline TrainingReport validate_training(const TrainingDesign& td)
{
    return validate_training(td.pilots(), td.ris_phases(), td.joint());
}

/// First `rows` rows of the `points`-point DFT, scaled to unit-norm rows.
inline Matrix truncated_dft(std::size_t rows, std::size_t points)
{
    Matrix f(static_cast<Index>(rows), static_cast<Index>(points));
    const double scale = 1.0 / std::sqrt(static_cast<double>(points));
    for (std::size_t c = 0; c < points; ++c)
        for (std::size_t r = 0; r < rows; ++r) {
            // reduce r*c mod points before converting so large grids keep exact phases
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((r * c) % points) /
                                 static_cast<double>(points);
            f(static_cast<Index>(r), static_cast<Index>(c)) = std::polar(scale, phase);
        }
    return f;
}

/// Joint DFT design with Psi Psi^H = I_MN.
///
/// Psi Psi^H factors as (Omega Omega^H) kron (S S^H), so each factor must have
/// orthonormal rows on its own; this needs T >= M and K >= N, which is
/// stronger than TK >= MN.
inline TrainingDesign make_training(const SystemDims& dims)
{
    dims.validate();
    const std::size_t m = dims.M(), n = dims.N();
    const std::size_t t = dims.pilot_length, k = dims.training_blocks;
    if (t < m || k < n)
        throw InfeasibleDesignError("Kronecker-structured training requires T >= M and K >= N (T=" +
                                    std::to_string(t) + ", M=" + std::to_string(m) + ", K=" + std::to_string(k) +
                                    ", N=" + std::to_string(n) + ")");
    Matrix pilots = truncated_dft(m, t);
    Matrix ris = truncated_dft(n, k);
    Matrix joint = kron(ris, pilots);
    return TrainingDesign::from_parts(std::move(pilots), std::move(ris), std::move(joint));
}

} // namespace hdr

#endif // HDR_TRAINING_HPP
