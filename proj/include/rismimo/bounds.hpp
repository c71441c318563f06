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

#ifndef RISMIMO_BOUNDS_HPP
#define RISMIMO_BOUNDS_HPP

#include "rismimo/channel.hpp"
#include "rismimo/rng.hpp"
#include "rismimo/se.hpp"

#include <string>
#include <vector>

namespace rismimo
{
    // Euler-Mascheroni constant.
    inline constexpr double euler_gamma = 0.57721566490153286061;

    // Outcome of one inequality check: satisfied <=> slack > 0 (or >= 0 for bounds
    // that hold with equality in special cases, see each producer).
    struct BoundReport
    {
        std::string name;
        std::string setting;
        double lhs = 0.0;
        double rhs = 0.0;
        double slack = 0.0;
        bool satisfied = false;
    };

    /// Exponential integral E_1(x) = int_x^inf e^-t / t dt for x > 0.
    /// Power series for x <= 1, modified Lentz continued fraction above.
    double exp_integral_e1(double x);

    /// e^x E_1(x), evaluated without overflow for large x.
    double exp_integral_e1_scaled(double x);

    struct Lemma1Check
    {
        BoundReport lemma;      // e^x E_1(x) > ln(1 + e^-gamma / x)
        BoundReport comparison; // ln(1 + e^-gamma / x) > -gamma + ln(1 + 1/x)
    };

    Lemma1Check lemma1_check(double x);

    // Default grid: 1000 log-spaced points on [1e-8, 1e4].
    std::vector<Lemma1Check> lemma1_grid(int points = 1000, double lo = 1e-8, double hi = 1e4);

    // g(x) = E_1(x) - e^-x ln(1 + e^-gamma / x)
    double lemma1_gap(double x);

    struct Lemma1Structure
    {
        double bracket = 0.0;   // e^{-2 gamma} / (1 - e^{-gamma})
        double x_max = 0.0;     // location of the maximum of g
        double g_max = 0.0;
        double g_lo = 0.0;      // g at the left end of the search interval
        double g_hi = 0.0;      // g at the right end
        int grid_points = 0;
        int violations = 0;     // grid steps that break "increasing, then decreasing"
        bool unimodal = false;
    };

    // Locates the maximum of g on (1e-8, 10) over a 10^4-point log grid, refines it
    // with golden-section search and counts monotonicity violations on the grid.
    Lemma1Structure lemma1_proof_structure(int grid_points = 10000);

    // E[log2 xi] for xi ~ chi^2(2) by Monte Carlo against log2(2 e^-gamma).
    // satisfied when the difference is below `tolerance`; slack = tolerance - |diff|.
    BoundReport chi2_log_expectation_check(RngStream &rng, int reps, double tolerance = 0.01);

    // h^H M^{-1} h >= ||h||^4 / (h^H M h) for Hermitian PD M.
    BoundReport harmonic_mean_bound_check(const CVec &h, const CMat &M);

    // One Monte Carlo sample for the ergodic bound on the linear reflective SE.
    struct PhaseSample
    {
        PhaseVector phase;
        CVec h_c_weak;
    };

    // log2(|h_c,K+1^H theta|^2 p_bar / (e^-gamma sum_k theta^H R_c,k theta / tr(R_d,k)))
    double theorem2_bound_term(const PhaseSample &s, const CovarianceSet &covs, double p_bar);

    // Sample mean of theorem2_bound_term over the draws.
    double theorem2_upper_bound(const std::vector<PhaseSample> &draws, const CovarianceSet &covs, double p_bar);

    struct CorollaryValues
    {
        double lin_upper = 0.0;
        double dpc = 0.0; // exact ergodic value (random phases) or lower bound (aligned)
    };

    // Random/statistical phases under i.i.d. Rayleigh fading.
    CorollaryValues corollary1_values(const LinkGains &gains, int n_strong, int n_bs, int n_ris, double p_bar);

    // Weak-user-aligned phases under i.i.d. Rayleigh fading.
    CorollaryValues corollary2_values(const LinkGains &gains, int n_strong, int n_bs, int n_ris, double p_bar);
}

#endif
