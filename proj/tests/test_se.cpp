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

#include "rismimo/phase.hpp"
#include "rismimo/se.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace rismimo;
using namespace testutil;

namespace
{
    ChannelRealization base(int n_bs, int K, int n_ris, std::uint64_t idx)
    {
        ScenarioConfig cfg;
        cfg.n_bs = n_bs;
        cfg.n_strong = K;
        cfg.n_ris = n_ris;
        cfg.seed = 31;
        return sample_realization(cfg, idx);
    }

    PhaseVector some_phase(int n, std::uint64_t idx)
    {
        RngStream rng(31, idx, StreamTag::phases);
        return random_phases(n, rng);
    }

    CVec unit(int n, int i)
    {
        CVec e = CVec::Zero(n);
        e(i) = 1.0;
        return e;
    }

    // Strong rows e_1..e_K, b = e_NB, weak cascaded h_c = e_1 so that H has orthonormal rows for theta = 1.
    ChannelRealization orthonormal_instance(int n_bs, int K, int n_ris)
    {
        ChannelRealization r = base(n_bs, K, n_ris, 0).with_direction(unit(n_bs, n_bs - 1));
        r.H_d_strong = CMat::Identity(K, n_bs);
        r.H_c.setZero();
        r.H_c(K, 0) = 1.0;
        return r;
    }

    // Relative deviation from a reference value.
    double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}

TEST_CASE("decompose: b orthogonal to the strong rows leaves the Gram matrix unchanged")
{
    ChannelRealization r = base(6, 3, 8, 1);
    r.H_d_strong = r.H_d_strong * linalg::orth_projector(r.b);
    const DecompositionCache c = decompose(r);
    CHECK(max_abs_diff(c.C_s, r.H_d_strong * r.H_d_strong.adjoint()) < 1e-10);
}

TEST_CASE("decompose: zero cascade reduces D theta_bar to H_d b")
{
    ChannelRealization r = base(6, 3, 8, 2);
    r.H_c.setZero();
    const DecompositionCache c = decompose(r);
    const CVec v = c.D * some_phase(8, 2).extended();
    CHECK((v.head(3) - r.H_d_strong * r.b).norm() < 1e-12);
    CHECK(std::abs(v(3)) == 0.0);
}

TEST_CASE("decompose: Gram reconstruction")
{
    for (int i = 0; i < 30; ++i)
    {
        const ChannelRealization r = base(4 + 4 * (i % 3), 1 + 2 * (i % 2), 16, i);
        const PhaseVector ph = some_phase(16, i);
        const DecompositionCache c = decompose(r);
        const int K = r.n_strong();
        const CMat H = r.composite(ph.theta(), true);
        CMat recon = CMat::Zero(K + 1, K + 1);
        recon.topLeftCorner(K, K) = c.C_s;
        const CVec v = c.D * ph.extended();
        recon += v * v.adjoint();
        CHECK(linalg::rel_frobenius(recon, H * H.adjoint()) < 1e-10);
    }
}

TEST_CASE("ZF gains for orthonormal rows are all one")
{
    const ChannelRealization r = orthonormal_instance(5, 3, 4);
    const PhaseVector ph = PhaseVector::ones(4);
    const RVec g = zf_inverted_gains(decompose(r), ph);
    for (int k = 0; k < 4; ++k)
        CHECK(g(k) == doctest::Approx(1.0).epsilon(1e-14));

    const double p = 37.0;
    CHECK(se_zf_exact(decompose(r), ph, p).total == doctest::Approx(4 * std::log2(1 + p)));
    const SEBreakdown dpc = se_dpc_exact(decompose(r), ph, p);
    CHECK(dpc.total == doctest::Approx(4 * std::log2(1 + p)));
    CHECK(dpc.reflect == doctest::Approx(std::log2(1 + p)));
}

TEST_CASE("ZF gains match a generic inverse of the Gram matrix")
{
    for (int i = 0; i < 60; ++i)
    {
        const int nbs = 4 + 4 * (i % 3), K = 1 + 2 * ((i / 3) % 2), nr = 4 << (2 * ((i / 6) % 3));
        const ChannelRealization r = base(nbs, K, nr, 100 + i);
        const PhaseVector ph = some_phase(nr, i);
        const RVec closed = zf_inverted_gains(decompose(r), ph);
        const CMat H = r.composite(ph.theta(), true);
        const CMat Ginv = (H * H.adjoint()).fullPivLu().inverse();
        for (int k = 0; k <= K; ++k)
            CHECK(rel(closed(k), std::real(Ginv(k, k))) <= 1e-10);
    }
}

TEST_CASE("weak ZF gain without strong reflections and b orthogonal to strong rows")
{
    ChannelRealization r = base(6, 2, 8, 3);
    r.H_d_strong = r.H_d_strong * linalg::orth_projector(r.b);
    r.H_c.topRows(2).setZero();
    const PhaseVector ph = some_phase(8, 3);
    const DecompositionCache c = decompose(r);
    CHECK(mitigation(c, ph) < 1e-20);
    CHECK(rel(zf_inverted_gains(c, ph)(2), 1.0 / weak_gain(r.weak_cascaded(), ph)) < 1e-12);
}

TEST_CASE("zero power gives zero SE")
{
    const ChannelRealization r = base(8, 3, 16, 4);
    const PhaseVector ph = some_phase(16, 4);
    const DecompositionCache c = decompose(r);
    CHECK(se_zf_exact(c, ph, 0.0).total == 0.0);
    CHECK(se_dpc_exact(c, ph, 0.0).total == 0.0);
}

TEST_CASE("exact SE against generic evaluations")
{
    for (int i = 0; i < 60; ++i)
    {
        const int nbs = 4 + 4 * (i % 3), K = 1 + 2 * ((i / 3) % 2), nr = 4 << (2 * ((i / 6) % 3));
        const ChannelRealization r = base(nbs, K, nr, 200 + i);
        const PhaseVector ph = some_phase(nr, i);
        const DecompositionCache c = decompose(r);
        const CMat H = r.composite(ph.theta(), true);
        const double p = 2500.0;
        CHECK(rel(se_zf_exact(c, ph, p).total, se_zf_generic(H, p)) <= 1e-10);
        CHECK(rel(se_dpc_exact(c, ph, p).total, se_dpc_logdet(H, p)) <= 1e-10);
        // DPC dominates ZF on every instance.
        CHECK(se_dpc_exact(c, ph, p).total >= se_zf_exact(c, ph, p).total - 1e-12);
    }
}

TEST_CASE("exact and asymptotic SE converge at high power")
{
    const ChannelRealization r = base(12, 3, 64, 5);
    const DecompositionCache c = decompose(r);
    REQUIRE(linalg::hermitian_rcond(c.eig.values) > 1e-3);
    const PhaseVector ph = align_weak_user(r.weak_cascaded());
    const double p = 1e8;
    CHECK(std::abs(se_zf_exact(c, ph, p).total - se_asymptotic(c, ph, p, Precoder::zf).total) < 0.01);
    CHECK(std::abs(se_dpc_exact(c, ph, p).total - se_asymptotic(c, ph, p, Precoder::dpc).total) < 0.01);
}

TEST_CASE("identity C_s gives equal direct parts")
{
    // Strong rows e_1..e_K and b = e_NB make C_s the identity.
    ChannelRealization r = base(5, 3, 8, 6).with_direction(unit(5, 4));
    r.H_d_strong = CMat::Identity(3, 5);
    const DecompositionCache c = decompose(r);
    CHECK(max_abs_diff(c.C_s, CMat::Identity(3, 3)) < 1e-15);
    const PhaseVector ph = some_phase(8, 6);
    const double p = 1e6;
    const double expect = 3 * std::log2(p);
    CHECK(se_asymptotic(c, ph, p, Precoder::zf).direct == doctest::Approx(expect).epsilon(1e-13));
    CHECK(se_asymptotic(c, ph, p, Precoder::dpc).direct == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("asymptotic DPC dominates asymptotic ZF and splits additively")
{
    for (int i = 0; i < 50; ++i)
    {
        const ChannelRealization r = base(8, 3, 16, 300 + i);
        const PhaseVector ph = some_phase(16, i);
        const DecompositionCache c = decompose(r);
        const SEBreakdown z = se_asymptotic(c, ph, 1e4, Precoder::zf);
        const SEBreakdown d = se_asymptotic(c, ph, 1e4, Precoder::dpc);
        CHECK(d.total >= z.total - 1e-12);
        CHECK(z.total == doctest::Approx(z.direct + z.reflect).epsilon(1e-15));
        CHECK(d.total == doctest::Approx(d.direct + d.reflect).epsilon(1e-15));
    }
}

TEST_CASE("orthogonality form of the asymptotic DPC SE")
{
    for (int i = 0; i < 50; ++i)
    {
        const ChannelRealization r = base(4 + 4 * (i % 3), 1 + 2 * (i % 2), 16, 400 + i);
        const PhaseVector ph = some_phase(16, i);
        const DecompositionCache c = decompose(r);
        const FlaggedValue f = se_dpc_orthogonal_form(r, ph, 1e3);
        CHECK_FALSE(f.flagged);
        CHECK(rel(f.value, se_asymptotic(c, ph, 1e3, Precoder::dpc).total) < 1e-10);
    }

    ChannelRealization r = base(6, 2, 8, 7);
    r.H_d_strong = r.H_d_strong * linalg::orth_projector(r.b);
    CHECK(b_perp_energy(r.H_d_strong, r.b) == doctest::Approx(1.0).epsilon(1e-12));

    // b in the row space: the projector annihilates it.
    const CVec in_row = r.H_d_strong.row(0).adjoint();
    const ChannelRealization r2 = r.with_direction(in_row / in_row.norm());
    const FlaggedValue bad = se_dpc_orthogonal_form(r2, some_phase(8, 7), 1e3);
    CHECK(bad.flagged);
    CHECK(std::isinf(bad.value));
    CHECK(bad.value < 0.0);
}

TEST_CASE("gap terms")
{
    for (int i = 0; i < 50; ++i)
    {
        const ChannelRealization r = base(8, 3, 16, 500 + i);
        const PhaseVector ph = some_phase(16, i);
        const DecompositionCache c = decompose(r);
        const GapTerms g = delta_se(c, ph);
        CHECK(g.delta_d >= -1e-12);
        CHECK(g.delta_r >= 0.0);
        const double gap = se_asymptotic(c, ph, 1e5, Precoder::dpc).total - se_asymptotic(c, ph, 1e5, Precoder::zf).total;
        CHECK(std::abs(gap - (g.delta_d + g.delta_r)) < 1e-10);
    }

    // Diagonal C_s: orthogonal strong rows with b orthogonal to them.
    ChannelRealization r = base(5, 3, 8, 8).with_direction(unit(5, 4));
    r.H_d_strong = CMat::Zero(3, 5);
    r.H_d_strong(0, 0) = 2.0;
    r.H_d_strong(1, 1) = cplx(0.3, 0.4);
    r.H_d_strong(2, 2) = 7.0;
    CHECK(std::abs(delta_se(decompose(r), some_phase(8, 8)).delta_d) < 1e-12);
}

TEST_CASE("mitigation without strong reflections")
{
    ChannelRealization r = base(6, 2, 8, 9);
    r.H_d_strong = r.H_d_strong * linalg::orth_projector(r.b);
    const FlaggedValue orth = mitigation_no_reflection(r.H_d_strong, r.b);
    CHECK(orth.value == doctest::Approx(1.0).epsilon(1e-12));

    CMat H1 = CMat::Zero(1, 2);
    H1(0, 0) = 1.0;
    CVec b45(2);
    b45 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(mitigation_no_reflection(H1, b45).value == doctest::Approx(2.0).epsilon(1e-12));

    for (int i = 0; i < 30; ++i)
    {
        ChannelRealization q = base(8, 3, 16, 600 + i);
        q.H_c.topRows(3).setZero();
        const PhaseVector ph = some_phase(16, i);
        const DecompositionCache c = decompose(q);
        // Direct quadratic form with a generic inverse.
        const CVec v = c.D_s * ph.extended();
        const double lhs = 1.0 + std::real(v.dot(c.C_s.fullPivLu().inverse() * v));
        CHECK(rel(lhs, mitigation_no_reflection(q.H_d_strong, q.b).value) < 1e-10);
    }
}

TEST_CASE("phase vectors must be unit modulus")
{
    CVec t = CVec::Ones(3);
    t(1) = 1.1;
    CHECK_THROWS_AS(PhaseVector{t}, std::invalid_argument);
}

TEST_CASE("unreachable weak user")
{
    ChannelRealization r = base(6, 2, 8, 10);
    r.H_c.row(2).setZero();
    const DecompositionCache c = decompose(r);
    CHECK_THROWS_AS(zf_inverted_gains(c, some_phase(8, 10)), NumericalError);
}
