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

using namespace hdr;
using hdr::test::random_integer_matrix;

namespace {

SystemDims dims_for(std::size_t my, std::size_t mz, std::size_t qy, std::size_t qz, std::size_t ny, std::size_t nz)
{
    SystemDims d;
    d.bs = {my, mz};
    d.ue = {qy, qz};
    d.ris = {ny, nz};
    return d;
}

Vector unit(std::size_t n, std::size_t i)
{
    Vector e = Vector::Zero(static_cast<Index>(n));
    e(static_cast<Index>(i)) = 1.0;
    return e;
}

} // namespace

TEST_CASE("unit extents give identity permutations")
{
    const auto plan = build_permutations(dims_for(1, 1, 1, 1, 1, 1));
    CHECK(plan.p1 == IndexPermutation::identity(1));
    CHECK(plan.p2 == IndexPermutation::identity(1));
    CHECK(plan.shuffle == IndexPermutation::identity(1));
    CHECK(middle_swap_permutation(3, 1, 1, 2) == IndexPermutation::identity(6));
}

TEST_CASE("Khatri-Rao of Kronecker factors, all extents in {1,2,3}")
{
    std::mt19937_64 g(1);
    int cases = 0;
    for (std::size_t my = 1; my <= 3; ++my)
        for (std::size_t mz = 1; mz <= 3; ++mz)
            for (std::size_t qy = 1; qy <= 3; ++qy)
                for (std::size_t qz = 1; qz <= 3; ++qz)
                    for (std::size_t ny = 1; ny <= 3; ++ny)
                        for (std::size_t nz = 1; nz <= 3; ++nz) {
                            const auto plan = build_permutations(dims_for(my, mz, qy, qz, ny, nz));
                            const Matrix a = random_integer_matrix(Index(my), Index(ny), g);
                            const Matrix b = random_integer_matrix(Index(mz), Index(nz), g);
                            const Matrix c = random_integer_matrix(Index(qy), Index(ny), g);
                            const Matrix d = random_integer_matrix(Index(qz), Index(nz), g);
                            const Matrix lhs = khatri_rao(kron(a, b), kron(c, d));
                            const Matrix rhs = plan.p1.apply(kron(Matrix(khatri_rao(a, c)), Matrix(khatri_rao(b, d))));
                            INFO("extents " << my << mz << qy << qz << ny << nz);
                            CHECK(lhs == rhs);
                            ++cases;
                        }
    CHECK(cases == 729);
}

TEST_CASE("vec of a Kronecker product, all extents in {1,2,3}")
{
    std::mt19937_64 g(2);
    for (std::size_t ra = 1; ra <= 3; ++ra)
        for (std::size_t ca = 1; ca <= 3; ++ca)
            for (std::size_t rb = 1; rb <= 3; ++rb)
                for (std::size_t cb = 1; cb <= 3; ++cb) {
                    const Matrix a = random_integer_matrix(Index(ra), Index(ca), g);
                    const Matrix b = random_integer_matrix(Index(rb), Index(cb), g);
                    const IndexPermutation p2 = middle_swap_permutation(rb, ra, cb, ca);
                    INFO("A " << ra << "x" << ca << " B " << rb << "x" << cb);
                    CHECK(kron(vec(a), vec(b)) == p2.apply(vec(kron(a, b))));
                }

    // the plan's p2 is the same operator at the composite extents
    const SystemDims d = dims_for(2, 3, 3, 2, 2, 3);
    const auto plan = build_permutations(d);
    const Matrix a = random_integer_matrix(Index(d.bs.y * d.ue.y), Index(d.ris.y), g);
    const Matrix b = random_integer_matrix(Index(d.bs.z * d.ue.z), Index(d.ris.z), g);
    CHECK(kron(vec(a), vec(b)) == plan.p2.apply(vec(kron(a, b))));
}

TEST_CASE("gather map equals the sum of outer products")
{
    for (auto [I, J, K, L] : {std::array<std::size_t, 4>{2, 3, 2, 2}, {1, 2, 3, 2}, {3, 1, 2, 2}, {2, 2, 2, 2}}) {
        Matrix dense = Matrix::Zero(Index(I * J * K * L), Index(I * J * K * L));
        for (std::size_t i = 0; i < I; ++i)
            for (std::size_t j = 0; j < J; ++j)
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t l = 0; l < L; ++l) {
                        const Vector out = kron(kron(kron(unit(L, l), unit(J, j)), unit(K, k)), unit(I, i));
                        const Vector in = kron(kron(kron(unit(L, l), unit(K, k)), unit(J, j)), unit(I, i));
                        dense += out * in.transpose();
                    }
        CHECK(dense.real() == middle_swap_permutation(I, J, K, L).dense());
        CHECK(dense.imag().isZero());
    }
}

TEST_CASE("composite shuffle")
{
    const SystemDims d = dims_for(2, 3, 3, 2, 2, 3);
    const auto plan = build_permutations(d);
    CHECK(plan.shuffle == plan.p2 * plan.p1.transpose().block_diagonal(d.N()));

    SECTION("inverse")
    {
        const std::size_t n = plan.shuffle.size();
        CHECK(plan.shuffle.transpose() * plan.shuffle == IndexPermutation::identity(n));
        CHECK(plan.shuffle * plan.shuffle.transpose() == IndexPermutation::identity(n));
        const Vector x = hdr::test::random_vector(Index(n));
        CHECK(plan.shuffle.apply_transpose(plan.shuffle.apply(x)) == x);
        const Eigen::MatrixXd pd = plan.shuffle.dense();
        CHECK(pd * pd.transpose() == Eigen::MatrixXd::Identity(Index(n), Index(n)));
    }

    SECTION("maps vec(E) onto the rank-one sixth-order tensor")
    {
        std::mt19937_64 g(8);
        for (int trial = 0; trial < 5; ++trial) {
            const auto ch = build_channels(d, sample_params(g));
            const ComplexTensor z = tensorize(plan.shuffle.apply(vec(ch.khatri_rao)), hdr_tensor_shape(d));
            const std::vector<Vector> f{ch.ue_z, ch.bs_z, ch.ris_z, ch.ue_y, ch.bs_y, ch.ris_y};
            double worst = 0.0;
            hdr::test::for_each_index(z.dims(), [&](const std::vector<std::size_t>& idx) {
                cplx expect = 1.0;
                for (std::size_t m = 0; m < 6; ++m)
                    expect *= f[m](Index(idx[m]));
                worst = std::max(worst, std::abs(hdr::test::entry(z, idx) - expect));
            });
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("reference-size permutations")
{
    const auto plan = build_permutations(hdr::test::reference_dims());
    CHECK(plan.p1.size() == 256);
    CHECK(plan.p2.size() == 4096);
    CHECK(plan.shuffle.size() == 4096);
}

TEST_CASE("IndexPermutation rejects non-bijections")
{
    CHECK_THROWS_AS(IndexPermutation({0, 0}), DimensionError);
    CHECK_THROWS_AS(IndexPermutation({0, 2}), DimensionError);
    const IndexPermutation p({1, 0});
    CHECK_THROWS_AS(p.apply(Vector::Ones(3)), DimensionError);
    CHECK_THROWS_AS(p * IndexPermutation::identity(3), DimensionError);
}
