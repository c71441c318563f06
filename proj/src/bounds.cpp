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

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rismimo
{
    namespace
    {
        constexpr double eps = 1e-16;

        // sum_{k>=1} (-x)^k / (k k!) for 0 < x <= 1
        double e1_series_tail(double x)
        {
            double term = 1.0; // (-x)^k / k!
            double sum = 0.0;
            for (int k = 1; k < 60; ++k)
            {
                term *= -x / k;
                const double add = term / k;
                sum += add;
                if (std::abs(add) < eps * std::abs(sum))
                    break;
            }
            return sum;
        }

        // e^x E_1(x) for x > 1 by the continued fraction
        // 1/(x+1- 1/(x+3- 4/(x+5- ...))), modified Lentz.
        double e1_scaled_cf(double x)
        {
            constexpr double tiny = 1e-300;
            double b = x + 1.0;
            double c = 1.0 / tiny;
            double d = 1.0 / b;
            double h = d;
            for (int i = 1; i < 10000; ++i)
            {
                const double an = -double(i) * i;
                b += 2.0;
                d = 1.0 / (an * d + b);
                c = b + an / c;
                const double del = c * d;
                h *= del;
                if (std::abs(del - 1.0) < eps)
                    return h;
            }
            throw NumericalError("exp_integral_e1: continued fraction did not converge");
        }

        std::string fmt(double x)
        {
            std::ostringstream os;
            os.precision(9);
            os << x;
            return os.str();
        }
    }

    double exp_integral_e1(double x)
    {
        if (!(x > 0.0))
            throw std::invalid_argument("exp_integral_e1: x must be positive");
        if (x <= 1.0)
            return -euler_gamma - std::log(x) - e1_series_tail(x);
        return std::exp(-x) * e1_scaled_cf(x);
    }

    double exp_integral_e1_scaled(double x)
    {
        if (!(x > 0.0))
            throw std::invalid_argument("exp_integral_e1: x must be positive");
        if (x <= 1.0)
            return std::exp(x) * exp_integral_e1(x);
        return e1_scaled_cf(x);
    }

    Lemma1Check lemma1_check(double x)
    {
        Lemma1Check out;
        const double lhs = exp_integral_e1_scaled(x);
        const double bound = std::log1p(std::exp(-euler_gamma) / x);
        const double older = -euler_gamma + std::log1p(1.0 / x);

        out.lemma = {"lemma1", "x=" + fmt(x), lhs, bound, lhs - bound, lhs - bound > 0.0};
        out.comparison = {"lemma1_vs_constant_offset_bound", "x=" + fmt(x), bound, older, bound - older,
                          bound - older > 0.0};
        return out;
    }

    std::vector<Lemma1Check> lemma1_grid(int points, double lo, double hi)
    {
        if (points < 2 || !(lo > 0.0) || !(hi > lo))
            throw std::invalid_argument("lemma1_grid: need points >= 2 and 0 < lo < hi");
        std::vector<Lemma1Check> out;
        out.reserve(points);
        const double l0 = std::log10(lo), l1 = std::log10(hi);
        for (int i = 0; i < points; ++i)
            out.push_back(lemma1_check(std::pow(10.0, l0 + (l1 - l0) * i / (points - 1))));
        return out;
    }

    double lemma1_gap(double x)
    {
        return exp_integral_e1(x) - std::exp(-x) * std::log1p(std::exp(-euler_gamma) / x);
    }

    Lemma1Structure lemma1_proof_structure(int grid_points)
    {
        constexpr double lo = 1e-8, hi = 10.0;
        Lemma1Structure s;
        s.bracket = std::exp(-2.0 * euler_gamma) / (1.0 - std::exp(-euler_gamma));
        s.grid_points = grid_points;

        std::vector<double> xs(grid_points), gs(grid_points);
        const double l0 = std::log(lo), l1 = std::log(hi);
        int imax = 0;
        for (int i = 0; i < grid_points; ++i)
        {
            xs[i] = std::exp(l0 + (l1 - l0) * i / (grid_points - 1));
            gs[i] = lemma1_gap(xs[i]);
            if (gs[i] > gs[imax])
                imax = i;
        }

        // Differences below the evaluation noise floor are not counted either way.
        constexpr double noise = 1e-14;
        for (int i = 1; i < grid_points; ++i)
        {
            const double d = gs[i] - gs[i - 1];
            if (i <= imax && d < -noise)
                ++s.violations;
            if (i > imax && d > noise)
                ++s.violations;
        }

        // Golden-section refinement in log x between the grid neighbours of the maximum.
        double a = std::log(xs[std::max(imax - 1, 0)]);
        double b = std::log(xs[std::min(imax + 1, grid_points - 1)]);
        const double r = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - r * (b - a), d = a + r * (b - a);
        double fc = lemma1_gap(std::exp(c)), fd = lemma1_gap(std::exp(d));
        for (int it = 0; it < 200 && b - a > 1e-12; ++it)
        {
            if (fc > fd)
            {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = lemma1_gap(std::exp(c));
            }
            else
            {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = lemma1_gap(std::exp(d));
            }
        }
        s.x_max = std::exp(0.5 * (a + b));
        s.g_max = lemma1_gap(s.x_max);
        s.g_lo = gs.front();
        s.g_hi = gs.back();
        s.unimodal = s.violations == 0 && imax > 0 && imax < grid_points - 1;
        return s;
    }

    BoundReport chi2_log_expectation_check(RngStream &rng, int reps, double tolerance)
    {
        if (reps < 1)
            throw std::invalid_argument("chi2_log_expectation_check: reps must be positive");
        double sum = 0.0;
        for (int i = 0; i < reps; ++i)
        {
            const double z1 = rng.normal(), z2 = rng.normal();
            sum += std::log2(z1 * z1 + z2 * z2);
        }
        const double mc = sum / reps;
        const double exact = std::log2(2.0 * std::exp(-euler_gamma));
        const double slack = tolerance - std::abs(mc - exact);
        return {"chi2_log_expectation", "reps=" + std::to_string(reps), mc, exact, slack, slack > 0.0};
    }

    BoundReport harmonic_mean_bound_check(const CVec &h, const CMat &M)
    {
        if (h.norm() == 0.0)
            throw std::invalid_argument("harmonic_mean_bound_check: h must be non-zero");
        const double lhs = linalg::inv_quadratic_form(M, h);
        const double hMh = std::real(h.dot(M * h));
        const double rhs = std::pow(h.squaredNorm(), 2) / hMh;
        const double slack = lhs - rhs;
        return {"harmonic_arithmetic_mean", "n=" + std::to_string(h.size()), lhs, rhs, slack,
                slack >= -1e-12 * std::abs(lhs)};
    }

    double theorem2_bound_term(const PhaseSample &s, const CovarianceSet &covs, double p_bar)
    {
        const int K = static_cast<int>(covs.R_d.size());
        if (static_cast<int>(covs.R_c.size()) < K)
            throw std::invalid_argument("theorem2_bound_term: covariance set incomplete");
        const CVec &t = s.phase.theta();
        double den = 0.0;
        for (int k = 0; k < K; ++k)
            den += std::real(t.dot(covs.R_c[k] * t)) / std::real(covs.R_d[k].trace());
        if (!(den > 0.0))
            throw NumericalError("theorem2_upper_bound: all cascaded covariances vanish");
        const double g = weak_gain(s.h_c_weak, s.phase);
        return std::log2(g * p_bar / (std::exp(-euler_gamma) * den));
    }

    double theorem2_upper_bound(const std::vector<PhaseSample> &draws, const CovarianceSet &covs, double p_bar)
    {
        if (draws.empty())
            throw std::invalid_argument("theorem2_upper_bound: no draws");
        double acc = 0.0;
        for (const auto &s : draws)
            acc += theorem2_bound_term(s, covs, p_bar);
        return acc / double(draws.size());
    }

    namespace
    {
        double strong_ratio_sum(const LinkGains &gains, int n_strong)
        {
            double sum = 0.0;
            for (int k = 0; k < n_strong; ++k)
                sum += gains.reflect(k) / gains.direct(k);
            return sum;
        }
    }

    CorollaryValues corollary1_values(const LinkGains &gains, int n_strong, int n_bs, int n_ris, double p_bar)
    {
        const double Lw = gains.reflect(n_strong);
        CorollaryValues v;
        v.lin_upper = std::log2(n_bs * Lw * p_bar / strong_ratio_sum(gains, n_strong));
        v.dpc = std::log2(std::exp(-euler_gamma) * gains.bs_ris * Lw * n_bs * n_ris * p_bar);
        return v;
    }

    CorollaryValues corollary2_values(const LinkGains &gains, int n_strong, int n_bs, int n_ris, double p_bar)
    {
        const double Lw = gains.reflect(n_strong);
        CorollaryValues v;
        v.lin_upper = std::log2(pi * std::exp(euler_gamma) / 4.0 * n_ris * n_bs * Lw * p_bar /
                                strong_ratio_sum(gains, n_strong));
        v.dpc = std::log2(std::exp(-euler_gamma) * gains.bs_ris * Lw * n_bs * double(n_ris) * n_ris * p_bar);
        return v;
    }
}
