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

#ifndef HDR_PERMUTATION_HPP
#define HDR_PERMUTATION_HPP

#include "hdr/channel.hpp"

#include <numeric>
#include <vector>

namespace hdr {

/// Permutation matrix stored as a gather map: (P x)[i] = x[source[i]].
class IndexPermutation {
  public:
    IndexPermutation() = default;

    explicit IndexPermutation(std::vector<std::size_t> source) : source_(std::move(source))
    {
        std::vector<bool> seen(source_.size(), false);
        for (auto s : source_) {
            if (s >= source_.size() || seen[s])
                throw DimensionError("IndexPermutation: map is not a bijection");
            seen[s] = true;
        }
    }

    static IndexPermutation identity(std::size_t n)
    {
        std::vector<std::size_t> s(n);
        std::iota(s.begin(), s.end(), std::size_t{0});
        return IndexPermutation(std::move(s));
    }

    [[nodiscard]] std::size_t size() const { return source_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& source() const { return source_; }

    /// P x
    template <typename Derived>
    [[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
    apply(const Eigen::MatrixBase<Derived>& x) const
    {
        check_rows(x.rows());
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> y(x.rows(), x.cols());
        for (std::size_t i = 0; i < source_.size(); ++i)
            y.row(static_cast<Index>(i)) = x.row(static_cast<Index>(source_[i]));
        return y;
    }

    /// P^T x, which is also P^-1 x
    template <typename Derived>
    [[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
    apply_transpose(const Eigen::MatrixBase<Derived>& x) const
    {
        check_rows(x.rows());
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> y(x.rows(), x.cols());
        for (std::size_t i = 0; i < source_.size(); ++i)
            y.row(static_cast<Index>(source_[i])) = x.row(static_cast<Index>(i));
        return y;
    }

    [[nodiscard]] IndexPermutation transpose() const
    {
        std::vector<std::size_t> inv(source_.size());
        for (std::size_t i = 0; i < source_.size(); ++i)
            inv[source_[i]] = i;
        return IndexPermutation(std::move(inv));
    }

    /// Matrix product (*this) * rhs.
    [[nodiscard]] IndexPermutation operator*(const IndexPermutation& rhs) const
    {
        if (rhs.size() != size())
            throw DimensionError("IndexPermutation: size mismatch in product");
        std::vector<std::size_t> s(size());
        for (std::size_t i = 0; i < size(); ++i)
            s[i] = rhs.source_[source_[i]];
        return IndexPermutation(std::move(s));
    }

    /// I_blocks kron P
    [[nodiscard]] IndexPermutation block_diagonal(std::size_t blocks) const
    {
        std::vector<std::size_t> s;
        s.reserve(blocks * size());
        for (std::size_t b = 0; b < blocks; ++b)
            for (auto v : source_)
                s.push_back(b * size() + v);
        return IndexPermutation(std::move(s));
    }

    [[nodiscard]] Eigen::MatrixXd dense() const
    {
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Index>(size()), static_cast<Index>(size()));
        for (std::size_t i = 0; i < size(); ++i)
            p(static_cast<Index>(i), static_cast<Index>(source_[i])) = 1.0;
        return p;
    }

    bool operator==(const IndexPermutation&) const = default;

  private:
    void check_rows(Index rows) const
    {
        if (rows != static_cast<Index>(source_.size()))
            throw DimensionError("IndexPermutation: operand has " + std::to_string(rows) + " rows, expected " +
                                 std::to_string(source_.size()));
    }

    std::vector<std::size_t> source_;
};

/// Sum over (i,j,k,l) of (e_l kron e_j kron e_k kron e_i)(e_l kron e_k kron e_j kron e_i)^T
/// with e_i of length I etc. Exchanges the two middle factors of a
/// four-level Kronecker index: input order (l,k,j,i), output order (l,j,k,i),
/// slowest to fastest.
inline IndexPermutation middle_swap_permutation(std::size_t I, std::size_t J, std::size_t K, std::size_t L)
{
    std::vector<std::size_t> s(I * J * K * L);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t i = 0; i < I; ++i) {
                    const std::size_t out = i + I * (k + K * (j + J * l));
                    const std::size_t in = i + I * (j + J * (k + K * l));
                    s[out] = in;
                }
    return IndexPermutation(std::move(s));
}

/// Row shuffles linking the Khatri-Rao channel to the sixth-order HDR tensor.
struct PermutationPlan {
    /// (A kron B) <> (C kron D) = p1 [(A <> C) kron (B <> D)]
    IndexPermutation p1;
    /// vec(A) kron vec(B) = p2 vec(A kron B)
    IndexPermutation p2;
    /// vec(E) -> z-bar; equals p2 (I_N kron p1^T)
    IndexPermutation shuffle;
};

inline PermutationPlan build_permutations(const SystemDims& dims)
{
    const std::size_t qz = dims.ue.z, qy = dims.ue.y, mz = dims.bs.z, my = dims.bs.y;
    PermutationPlan plan;
    // The middle swap carries Khatri-Rao row order (m_y, m_z, q_y, q_z) into
    // Kronecker order (m_y, q_y, m_z, q_z); p1 is its inverse.
    const IndexPermutation to_kronecker_rows = middle_swap_permutation(qz, qy, mz, my);
    plan.p1 = to_kronecker_rows.transpose();
    plan.p2 = middle_swap_permutation(qz * mz, qy * my, dims.ris.z, dims.ris.y);
    plan.shuffle = plan.p2 * to_kronecker_rows.block_diagonal(dims.N());
    return plan;
}

} // namespace hdr

#endif // HDR_PERMUTATION_HPP
