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

#ifndef HDR_LINALG_HPP
#define HDR_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hdr {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a nonzero input (rank-one fits, NMSE normalisation).
struct ZeroInputError : std::domain_error {
    using std::domain_error::domain_error;
};

// Inputs below this Frobenius norm are treated as exactly zero.
inline constexpr double kZeroNormThreshold = 1e-300;

// ---------------------------------------------------------------------------
// Multiply-accumulate accounting
// ---------------------------------------------------------------------------

namespace flops {

inline std::uint64_t& mac_counter()
{
    thread_local std::uint64_t count = 0;
    return count;
}

inline void add_macs(std::uint64_t n) { mac_counter() += n; }

/// Counts complex MACs issued on the current thread while alive.
class MacScope {
  public:
    MacScope() : start_(mac_counter()) {}
    [[nodiscard]] std::uint64_t count() const { return mac_counter() - start_; }

  private:
    std::uint64_t start_;
};

/// Dense product A*B, charged as rows(A)*cols(A)*cols(B) MACs.
template <typename LhsT, typename RhsT>
Matrix product(const LhsT& lhs, const RhsT& rhs)
{
    if (lhs.cols() != rhs.rows())
        throw DimensionError("flops::product: inner dimensions differ (" + std::to_string(lhs.cols()) + " vs " +
                             std::to_string(rhs.rows()) + ")");
    add_macs(static_cast<std::uint64_t>(lhs.rows()) * static_cast<std::uint64_t>(lhs.cols()) *
             static_cast<std::uint64_t>(rhs.cols()));
    Matrix out = lhs * rhs;
    return out;
}

} // namespace flops

// ---------------------------------------------------------------------------
// Structured products
// ---------------------------------------------------------------------------

/// Kronecker product; entry (ia*rows(B)+ib, ja*cols(B)+jb) = A(ia,ja)*B(ib,jb).
inline Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline Vector kron(const Vector& a, const Vector& b)
{
    Vector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Column-wise Kronecker product.
inline Matrix khatri_rao(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.cols())
        throw DimensionError("khatri_rao: column counts differ (" + std::to_string(a.cols()) + " vs " +
                             std::to_string(b.cols()) + ")");
    Matrix out(a.rows() * b.rows(), a.cols());
    for (Index n = 0; n < a.cols(); ++n)
        for (Index i = 0; i < a.rows(); ++i)
            out.col(n).segment(i * b.rows(), b.rows()) = a(i, n) * b.col(n);
    return out;
}

inline Vector hadamard(const Vector& a, const Vector& b)
{
    if (a.size() != b.size())
        throw DimensionError("hadamard: lengths differ (" + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
    return a.cwiseProduct(b);
}

/// Column-major vectorisation.
inline Vector vec(const Matrix& a) { return a.reshaped(); }

inline Matrix unvec(const Vector& v, Index rows, Index cols)
{
    if (rows * cols != v.size())
        throw DimensionError("unvec: " + std::to_string(v.size()) + " entries cannot form a " +
                             std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
    return v.reshaped(rows, cols);
}

// ---------------------------------------------------------------------------
// Rank-one extraction
// ---------------------------------------------------------------------------

/// Rotates `v` so its largest-modulus entry (first one on ties) is real and positive.
inline void fix_phase(Vector& v)
{
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < v.size(); ++i) {
        const double m = std::abs(v(i));
        if (m > best_abs) {
            best_abs = m;
            best = i;
        }
    }
    if (best_abs > 0.0)
        v *= std::conj(v(best)) / best_abs;
}

struct SingularPair {
    Vector vector; ///< unit norm, phase-fixed
    double value = 0.0;
};

/// Dominant left singular vector and singular value of `m`.
///
/// Works on the smaller Gram matrix (MM^H when m is short-fat, M^H M otherwise).
/// Eigenvalues are ranked descending; near-ties (relative 1e-12) resolve to the
/// lowest eigen-solver column so degenerate spectra give a reproducible answer.
inline SingularPair dominant_left_singular_vector(const Matrix& m)
{
    if (m.size() == 0 || m.stableNorm() < kZeroNormThreshold)
        throw ZeroInputError("dominant_left_singular_vector: zero matrix");

    const bool short_fat = m.rows() <= m.cols();
    const Matrix gram = short_fat ? flops::product(m, m.adjoint()) : flops::product(m.adjoint(), m);

    const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("dominant_left_singular_vector: eigen-decomposition failed");

    const auto& lambda = eig.eigenvalues(); // ascending
    const double top = lambda(lambda.size() - 1);
    Index pick = lambda.size() - 1;
    for (Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) >= top - 1e-12 * std::abs(top)) {
            pick = i;
            break;
        }
    }

    SingularPair out;
    if (short_fat) {
        out.vector = eig.eigenvectors().col(pick);
        out.value = std::sqrt(std::max(lambda(pick), 0.0));
    } else {
        const Vector right = eig.eigenvectors().col(pick);
        flops::add_macs(static_cast<std::uint64_t>(m.rows() * m.cols()));
        out.vector = m * right;
        out.value = out.vector.norm();
        if (out.value < kZeroNormThreshold)
            throw ZeroInputError("dominant_left_singular_vector: degenerate spectrum");
        out.vector /= out.value;
    }
    out.vector.normalize();
    fix_phase(out.vector);
    return out;
}

} // namespace hdr

#endif // HDR_LINALG_HPP
