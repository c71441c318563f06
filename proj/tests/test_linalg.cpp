// SPDX-License-Identifier: Apache-2.0
//
// rismimo - spectral-efficiency analysis for RIS-aided MIMO broadcast channels
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

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace rismimo;
using namespace testutil;

TEST_CASE("orth_projector of a canonical vector zeroes that coordinate")
{
    CVec e1 = CVec::Zero(4);
    e1(0) = 1.0;
    CMat expect = CMat::Identity(4, 4);
    expect(0, 0) = 0.0;
    CHECK(max_abs_diff(linalg::orth_projector(e1), expect) == 0.0);
}

TEST_CASE("orth_projector of the diagonal direction in two dimensions")
{
    CVec b(2);
    b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CMat expect(2, 2);
    expect << 0.5, -0.5, -0.5, 0.5;
    CHECK(max_abs_diff(linalg::orth_projector(b), expect) < 1e-15);
}

TEST_CASE("orth_projector annihilates b and is idempotent")
{
    RngStream rng(1, 0, StreamTag::test);
    for (int t = 0; t < 20; ++t)
    {
        const CVec b = random_unit(rng, 7);
        const CMat P = linalg::orth_projector(b);
        CHECK((P * b).norm() < 1e-12);
        CHECK(max_abs_diff(P * P, P) < 1e-12);
        CHECK(max_abs_diff(P, P.adjoint()) < 1e-15);
    }
}

TEST_CASE("orth_projector rejects unnormalized directions")
{
    CHECK_THROWS_AS(linalg::orth_projector(CVec::Ones(3)), NumericalError);
}

TEST_CASE("range_projector of a single unit row is b b^H")
{
    RngStream rng(2, 0, StreamTag::test);
    const CVec b = random_unit(rng, 5);
    const CMat M = b.adjoint();
    CHECK(max_abs_diff(linalg::range_projector(M), b * b.adjoint()) < 1e-12);
}

TEST_CASE("range_projector of orthonormal rows is M^H M")
{
    RngStream rng(3, 0, StreamTag::test);
    const CMat Q = random_matrix(rng, 6, 3).householderQr().householderQ() * CMat::Identity(6, 3);
    const CMat M = Q.adjoint();
    CHECK(max_abs_diff(linalg::range_projector(M), M.adjoint() * M) < 1e-12);
}

TEST_CASE("range_projector leaves the rows' span fixed")
{
    RngStream rng(4, 0, StreamTag::test);
    const CMat M = random_matrix(rng, 3, 8);
    const CMat P = linalg::range_projector(M);
    CHECK(max_abs_diff(P * M.adjoint(), M.adjoint()) < 1e-10);
    // Oracle: M^H (M M^H)^{-1} M by a generic inverse.
    const CMat direct = M.adjoint() * (M * M.adjoint()).inverse() * M;
    CHECK(max_abs_diff(P, direct) < 1e-10);
}

TEST_CASE("range_projector reports rank deficiency")
{
    CMat M(2, 3);
    M << 1.0, 2.0, 3.0, 2.0, 4.0, 6.0;
    CHECK_THROWS_AS(linalg::range_projector(M), NumericalError);
}

TEST_CASE("gram_block_inverse with decoupled blocks")
{
    const CMat inv = linalg::gram_block_inverse(CMat::Identity(3, 3), CVec::Zero(3), 1.0);
    CHECK(max_abs_diff(inv, CMat::Identity(4, 4)) < 1e-15);
}

TEST_CASE("gram_block_inverse for K = 1 against the 2x2 inverse formula")
{
    CMat C(1, 1);
    C << 2.0;
    CVec d(1);
    d << 1.0;
    // Gram [[2 + 1, 1], [1, 1]] has determinant 2 and inverse [[1, -1], [-1, 3]] / 2.
    CMat expect(2, 2);
    expect << 0.5, -0.5, -0.5, 1.5;
    CHECK(max_abs_diff(linalg::gram_block_inverse(C, d, 1.0), expect) < 1e-14);
}

TEST_CASE("gram_block_inverse matches a generic LU inverse")
{
    RngStream rng(5, 0, StreamTag::test);
    for (int t = 0; t < 50; ++t)
    {
        const CMat C = random_hpd(rng, 3);
        const CVec d = rng.complex_normal_vector(3, 1.0);
        const double g = 0.1 + rng.uniform() * 5.0;
        const CMat G = linalg::assemble_block_gram(C, d, g);
        const CMat generic = Eigen::FullPivLU<CMat>(G).inverse();
        CHECK(max_abs_diff(linalg::gram_block_inverse(C, d, g), generic) <= 1e-10);
    }
}

TEST_CASE("gram_block_inverse preconditions")
{
    CHECK_THROWS_AS(linalg::gram_block_inverse(CMat::Identity(2, 2), CVec::Zero(2), 0.0), NumericalError);
    CMat singular = CMat::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(linalg::gram_block_inverse(singular, CVec::Zero(2), 1.0), NumericalError);
}

TEST_CASE("hermitian_eig sorts descending and reconstructs")
{
    RngStream rng(6, 0, StreamTag::test);
    const CMat A = random_hpd(rng, 5);
    const auto e = linalg::hermitian_eig(A);
    for (int k = 1; k < 5; ++k)
        CHECK(e.values(k - 1) >= e.values(k));
    const CMat R = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    CHECK(max_abs_diff(R, A) < 1e-10);
    CHECK(max_abs_diff(e.vectors.adjoint() * e.vectors, CMat::Identity(5, 5)) < 1e-12);
}

TEST_CASE("thin_svd reconstructs with descending singular values")
{
    RngStream rng(7, 0, StreamTag::test);
    const CMat A = random_matrix(rng, 3, 6);
    const auto s = linalg::thin_svd(A);
    CHECK(s.s(0) >= s.s(1));
    CHECK(s.s(1) >= s.s(2));
    CHECK(max_abs_diff(s.U * s.s.cast<cplx>().asDiagonal() * s.V.adjoint(), A) < 1e-12);
}

TEST_CASE("log2det and inverse quadratic form against direct evaluation")
{
    RngStream rng(8, 0, StreamTag::test);
    const CMat A = random_hpd(rng, 4);
    CHECK(linalg::log2det_hpd(A) == doctest::Approx(std::log2(std::real(A.determinant()))).epsilon(1e-12));
    const CVec x = rng.complex_normal_vector(4, 1.0);
    const double direct = std::real(x.dot(A.inverse() * x));
    CHECK(linalg::inv_quadratic_form(A, x) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(std::isinf(linalg::log2det_hpd(-CMat::Identity(2, 2))));
}

TEST_CASE("hermitian_rcond")
{
    RVec ev(3);
    ev << 4.0, 2.0, 1.0;
    CHECK(linalg::hermitian_rcond(ev) == doctest::Approx(0.25));
    CHECK(linalg::hermitian_rcond(RVec::Zero(3)) == 0.0);
}
