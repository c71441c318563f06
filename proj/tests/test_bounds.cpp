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

#include "rismimo/bounds.hpp"
#include "rismimo/montecarlo.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace rismimo;
using namespace testutil;

namespace
{
    // Independent oracle: 50-term power series of E_1.
    double e1_series50(double x)
    {
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 50; ++k)
        {
            term *= -x / k;
            sum += term / k;
        }
        return -euler_gamma - std::log(x) - sum;
    }

    // Independent oracle: trapezoid rule on int_0^inf e^{-t} / (x + t) dt = e^x E_1(x),
    // with the substitution t = u / (1 - u).
    double e1_scaled_quadrature(double x)
    {
        const int n = 200000;
        double acc = 0.0;
        for (int i = 1; i < n; ++i)
        {
            const double u = double(i) / n;
            const double t = u / (1.0 - u);
            acc += std::exp(-t) / (x + t) / ((1.0 - u) * (1.0 - u));
        }
        return (acc + 0.5 / x) / n;
    }
}

TEST_CASE("E_1 values")
{
    CHECK(exp_integral_e1(1.0) == doctest::Approx(0.2193839).epsilon(1e-7));
    for (double x : {0.01, 0.3, 1.0, 2.0, 3.5})
        CHECK(exp_integral_e1(x) == doctest::Approx(e1_series50(x)).epsilon(1e-12));
    for (double x : {1.5, 4.0, 10.0, 40.0})
        CHECK(exp_integral_e1_scaled(x) == doctest::Approx(e1_scaled_quadrature(x)).epsilon(1e-6));
    // Continuity across the switch between series and continued fraction.
    CHECK(exp_integral_e1(1.0 + 1e-12) == doctest::Approx(exp_integral_e1(1.0)).epsilon(1e-10));
}

TEST_CASE("E_1 limits")
{
    const double x = 1e3;
    CHECK(exp_integral_e1_scaled(x) * x == doctest::Approx(1.0).epsilon(0.002));
    CHECK(std::abs(exp_integral_e1(1e-8) + euler_gamma + std::log(1e-8)) < 1e-7);
    CHECK_THROWS_AS(exp_integral_e1(0.0), std::invalid_argument);
    CHECK_THROWS_AS(exp_integral_e1(-1.0), std::invalid_argument);
}

TEST_CASE("E_1 log-gap bound slack at reference points")
{
    const Lemma1Check one = lemma1_check(1.0);
    CHECK(one.lemma.lhs == doctest::Approx(0.5963).epsilon(1e-4));
    CHECK(one.lemma.rhs == doctest::Approx(std::log1p(std::exp(-euler_gamma))).epsilon(1e-15));
    CHECK(std::abs(one.lemma.rhs - 0.4458) < 5e-4);
    CHECK(one.lemma.slack == doctest::Approx(0.1506).epsilon(1e-3));
    CHECK(one.lemma.satisfied);

    const Lemma1Check tiny = lemma1_check(1e-8);
    CHECK(tiny.lemma.slack > 0.0);
    CHECK(tiny.lemma.slack < 1e-6);

    const Lemma1Check huge = lemma1_check(1e4);
    CHECK(huge.lemma.slack > 0.0);
    CHECK(huge.lemma.slack < 1e-4);
}

TEST_CASE("E_1 log-gap bound on the default grid")
{
    const auto grid = lemma1_grid();
    REQUIRE(grid.size() == 1000);
    CHECK(grid.front().lemma.setting == "x=1e-08");
    for (const auto &c : grid)
    {
        CHECK(c.lemma.satisfied);
        CHECK(c.comparison.satisfied);
    }
}

TEST_CASE("shape of the E_1 log-gap")
{
    const Lemma1Structure s = lemma1_proof_structure();
    CHECK(s.bracket == doctest::Approx(std::exp(-2 * euler_gamma) / (1 - std::exp(-euler_gamma))));
    CHECK(s.bracket == doctest::Approx(0.719).epsilon(5e-4));
    CHECK(s.unimodal);
    CHECK(s.violations == 0);
    CHECK(s.x_max > 0.0);
    CHECK(s.x_max < s.bracket);
    CHECK(s.g_max > s.g_lo);
    CHECK(s.g_max > s.g_hi);
    // Stationarity: neighbours on either side are lower.
    CHECK(lemma1_gap(s.x_max) >= lemma1_gap(s.x_max * 1.001));
    CHECK(lemma1_gap(s.x_max) >= lemma1_gap(s.x_max / 1.001));
}

TEST_CASE("log-expectation of chi-squared with two degrees of freedom")
{
    const double analytic = 1.0 - euler_gamma / std::log(2.0);
    CHECK(std::log2(2.0 * std::exp(-euler_gamma)) == doctest::Approx(analytic).epsilon(1e-14));
    CHECK(analytic == doctest::Approx(0.1673).epsilon(1e-3));

    RngStream rng(1, 0, StreamTag::bound_mc);
    const BoundReport r = chi2_log_expectation_check(rng, 100000);
    CHECK(r.satisfied);
    CHECK(std::abs(r.lhs - analytic) < 0.01);

    // Scaling by alpha shifts the log-expectation by log2(alpha).
    RngStream a(2, 0, StreamTag::test), b(2, 0, StreamTag::test);
    double s1 = 0.0, s8 = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const double z1 = a.normal(), z2 = a.normal();
        const double w1 = b.normal(), w2 = b.normal();
        s1 += std::log2(z1 * z1 + z2 * z2);
        s8 += std::log2(8.0 * (w1 * w1 + w2 * w2));
    }
    CHECK((s8 - s1) / 1000.0 == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("harmonic-arithmetic mean bound")
{
    RngStream rng(3, 0, StreamTag::test);
    const CVec h = rng.complex_normal_vector(5, 1.0);
    CHECK(std::abs(harmonic_mean_bound_check(h, CMat::Identity(5, 5)).slack) < 1e-12);

    const CMat M = random_hpd(rng, 5);
    const auto eig = linalg::hermitian_eig(M);
    CHECK(std::abs(harmonic_mean_bound_check(eig.vectors.col(2), M).slack) < 1e-12);

    for (int t = 0; t < 1000; ++t)
    {
        const int n = 2 + t % 8;
        const BoundReport r = harmonic_mean_bound_check(rng.complex_normal_vector(n, 1.0), random_hpd(rng, n));
        CHECK(r.slack >= -1e-12);
        CHECK(r.satisfied);
    }
}

TEST_CASE("ergodic bound under i.i.d. covariances")
{
    LinkGains g;
    g.direct = RVec::Constant(4, 2.0);
    g.reflect = RVec::Constant(4, 5.0);
    g.bs_ris = 1e-3;
    const CVec a = steering_vector(32, pi / 2.0, SteeringNorm::sqrt_n);
    const CovarianceSet c = build_covariances(g, 3, 8, a);
    RngStream rng(4, 0, StreamTag::test);
    for (int t = 0; t < 20; ++t)
    {
        const CVec th = random_phases(32, rng).theta();
        CHECK(std::real(th.dot(c.R_c[0] * th)) == doctest::Approx(32 * 5.0 * 1e-3 * 8).epsilon(1e-12));
    }

    // K = 1, unit pathlosses: random-phase bound equals log2(N_B p).
    LinkGains u;
    u.direct = RVec::Ones(2);
    u.reflect = RVec::Ones(2);
    u.bs_ris = 1.0;
    CHECK(corollary1_values(u, 1, 6, 16, 100.0).lin_upper == doctest::Approx(std::log2(600.0)));
}

TEST_CASE("closed-form reflective SE values scale with N_R")
{
    LinkGains g;
    g.direct = RVec::LinSpaced(4, 1.0, 4.0);
    g.reflect = RVec::LinSpaced(4, 10.0, 40.0);
    g.bs_ris = 1e-5;
    const auto a16 = corollary1_values(g, 3, 12, 16, 1e3);
    const auto a256 = corollary1_values(g, 3, 12, 256, 1e3);
    CHECK(a16.lin_upper == a256.lin_upper);
    CHECK(corollary1_values(g, 3, 12, 32, 1e3).dpc - a16.dpc == doctest::Approx(1.0));
    const auto b16 = corollary2_values(g, 3, 12, 16, 1e3);
    CHECK(corollary2_values(g, 3, 12, 32, 1e3).dpc - b16.dpc == doctest::Approx(2.0));
    CHECK(b16.lin_upper - a16.lin_upper == doctest::Approx(std::log2(pi * std::exp(euler_gamma) / 4.0 * 16)));
}

TEST_CASE("Monte Carlo reflective SE against the closed forms")
{
    ScenarioConfig cfg;
    cfg.freeze_positions = true;
    cfg.seed = 77;
    const ChannelRealization ref = sample_realization(cfg, 0);
    const auto c1 = corollary1_values(ref.gains, 3, 12, 64, cfg.p_bar());
    const auto c2 = corollary2_values(ref.gains, 3, 12, 64, cfg.p_bar());

    const auto rnd = estimate_reflective_se(cfg, StrategyKind::random, 10000);
    CHECK(rnd.flagged == 0);
    CHECK(rnd.lin_r <= c1.lin_upper);
    CHECK(rnd.lin_r <= rnd.bound);
    CHECK(std::abs(rnd.dpc_r - c1.dpc) < 0.1);
    // With unit-modulus i.i.d. covariances the sampled bound equals the closed form up to MC noise.
    CHECK(std::abs(rnd.bound - c1.lin_upper) < 0.1);

    const auto al = estimate_reflective_se(cfg, StrategyKind::align_weak, 10000);
    CHECK(al.dpc_r >= c2.dpc);
    CHECK(al.lin_r <= c2.lin_upper);
}
