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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rismimo
{
    std::string_view to_string(StrategyKind k)
    {
        switch (k)
        {
        case StrategyKind::random:
            return "random";
        case StrategyKind::statistical:
            return "statistical";
        case StrategyKind::align_weak:
            return "align_weak";
        case StrategyKind::mitigation_aware:
            return "mitigation_aware";
        }
        return "?";
    }

    StrategyKind strategy_from_string(std::string_view s)
    {
        if (s == "random")
            return StrategyKind::random;
        if (s == "statistical")
            return StrategyKind::statistical;
        if (s == "align_weak")
            return StrategyKind::align_weak;
        if (s == "mitigation_aware")
            return StrategyKind::mitigation_aware;
        throw std::invalid_argument("unknown strategy '" + std::string(s) + "'");
    }

    void OptimizerParams::validate() const
    {
        if (max_sweeps < 1)
            throw std::invalid_argument("max_sweeps: must be at least 1");
        if (!(rel_tolerance > 0.0))
            throw std::invalid_argument("rel_tolerance: must be positive");
        if (grid_points < 8)
            throw std::invalid_argument("grid_points: must be at least 8");
    }

    PhaseVector random_phases(int n_ris, RngStream &rng)
    {
        if (n_ris < 1)
            throw std::invalid_argument("random_phases: n_ris must be at least 1");
        RVec phi(n_ris);
        for (int n = 0; n < n_ris; ++n)
            phi(n) = 2.0 * pi * rng.uniform();
        return PhaseVector::from_angles(phi);
    }

    PhaseVector statistical_phases(int n_ris, RngStream &rng) { return random_phases(n_ris, rng); }

    PhaseVector align_weak_user(const CVec &h_c_weak)
    {
        CVec t(h_c_weak.size());
        for (Eigen::Index n = 0; n < t.size(); ++n)
            t(n) = h_c_weak(n) == cplx(0.0, 0.0) ? cplx(1.0, 0.0) : std::polar(1.0, std::arg(h_c_weak(n)));
        return PhaseVector(std::move(t));
    }

    double mitigation_objective(const CVec &h_c_weak, const CMat &M, const PhaseVector &phase)
    {
        const CVec tb = phase.extended();
        const double num = std::norm(h_c_weak.dot(phase.theta()));
        const double den = 1.0 + std::max(0.0, std::real(tb.dot(M * tb)));
        return num / den;
    }

    namespace
    {
        // f(phi) = (A + a1 cos + a2 sin) / (B + b1 cos + b2 sin) on one element.
        struct Ratio1D
        {
            double A, a1, a2, B, b1, b2;

            double operator()(double phi) const
            {
                const double c = std::cos(phi), s = std::sin(phi);
                return (A + a1 * c + a2 * s) / (B + b1 * c + b2 * s);
            }
        };

        double golden_max(const Ratio1D &f, double lo, double hi)
        {
            const double r = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
            double f1 = f(x1), f2 = f(x2);
            for (int it = 0; it < 100 && hi - lo > 1e-13; ++it)
            {
                if (f1 < f2)
                {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + r * (hi - lo);
                    f2 = f(x2);
                }
                else
                {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - r * (hi - lo);
                    f1 = f(x1);
                }
            }
            return f1 > f2 ? x1 : x2;
        }

        double grid_max(const Ratio1D &f, int points)
        {
            const double step = 2.0 * pi / points;
            int best = 0;
            double fbest = f(0.0);
            for (int i = 1; i < points; ++i)
            {
                const double v = f(i * step);
                if (v > fbest)
                {
                    fbest = v;
                    best = i;
                }
            }
            return golden_max(f, (best - 1) * step, (best + 1) * step);
        }

        // Maximizer of the 1-D ratio; `current` is always a candidate.
        double best_angle(const Ratio1D &f, double current, int grid_points)
        {
            // d/dphi of f vanishes where P sin + Q cos + R = 0.
            const double P = f.A * f.b1 - f.B * f.a1;
            const double Q = f.B * f.a2 - f.A * f.b2;
            const double R = f.a2 * f.b1 - f.a1 * f.b2;
            const double rho = std::hypot(P, Q);
            const double scale = std::abs(f.A) * std::hypot(f.b1, f.b2) + std::abs(f.B) * std::hypot(f.a1, f.a2);

            double best = current;
            double fbest = f(current);
            if (rho > 1e-14 * scale && std::abs(R) <= rho * (1.0 + 1e-12))
            {
                const double psi = std::atan2(P, Q);
                const double delta = std::acos(std::clamp(-R / rho, -1.0, 1.0));
                for (double cand : {psi + delta, psi - delta})
                {
                    const double v = f(cand);
                    if (v > fbest)
                    {
                        fbest = v;
                        best = cand;
                    }
                }
                return best;
            }

            const double g = grid_max(f, grid_points);
            return f(g) > fbest ? g : best;
        }
    }

    OptimizerResult optimize_mitigation_aware(const CVec &h, const CMat &M, const PhaseVector &init,
                                              const OptimizerParams &params)
    {
        params.validate();
        const int N = init.size();
        if (h.size() != N || M.rows() != N + 1 || M.cols() != N + 1)
            throw std::invalid_argument("optimize_mitigation_aware: dimension mismatch");

        CVec tb = init.extended();
        OptimizerResult res;
        res.initial_objective = mitigation_objective(h, M, init);
        double f = res.initial_objective;

        for (int sweep = 0; sweep < params.max_sweeps; ++sweep)
        {
            const double f_start = f;
            // Fresh sums at each sweep so incremental updates cannot drift.
            cplx s = h.dot(tb.head(N)); // h^H theta
            CVec w = M * tb;            // M theta_bar
            double quad = std::real(tb.dot(w));

            for (int n = 0; n < N; ++n)
            {
                const cplx tn = tb(n);
                const cplx rn = std::conj(h(n));
                const cplx c = s - rn * tn;
                const double Mnn = std::real(M(n, n));
                const cplx t = w(n) - M(n, n) * tn;
                const double q0 = quad - Mnn - 2.0 * std::real(std::conj(tn) * t);

                const cplx c1 = std::conj(c) * rn;
                const cplx d1 = std::conj(t);
                const Ratio1D fn{std::norm(c) + std::norm(rn), 2.0 * c1.real(), -2.0 * c1.imag(),
                                 1.0 + q0 + Mnn, 2.0 * d1.real(), -2.0 * d1.imag()};

                const double phi = best_angle(fn, std::arg(tn), params.grid_points);
                const cplx tnew = std::polar(1.0, phi);
                const double fnew = fn(phi);
                if (fnew < f * (1.0 - 1e-12))
                    throw std::logic_error("optimize_mitigation_aware: objective decreased");

                if (fnew >= f)
                {
                    tb(n) = tnew;
                    s = c + rn * tnew;
                    w += M.col(n) * (tnew - tn);
                    quad = std::real(tb.dot(w));
                    f = fnew;
                }
                res.trace.push_back(f);
            }
            res.sweeps = sweep + 1;
            if (f - f_start <= params.rel_tolerance * std::abs(f_start))
                break;
        }

        // Renormalize against accumulated rounding in the polar() calls.
        CVec theta = tb.head(N);
        for (int n = 0; n < N; ++n)
            theta(n) /= std::abs(theta(n));
        res.phase = PhaseVector(std::move(theta));
        res.objective = mitigation_objective(h, M, res.phase);
        return res;
    }

    OptimizerResult optimize_mitigation_aware(const DecompositionCache &cache, const PhaseVector &init,
                                              const OptimizerParams &params)
    {
        return optimize_mitigation_aware(cache.weak_cascaded(), mitigation_matrix(cache), init, params);
    }

    PhaseVector select_phases(const StrategySpec &spec, const DecompositionCache &cache, RngStream &rng)
    {
        switch (spec.kind)
        {
        case StrategyKind::random:
            return random_phases(cache.n_ris(), rng);
        case StrategyKind::statistical:
            return statistical_phases(cache.n_ris(), rng);
        case StrategyKind::align_weak:
            return align_weak_user(cache.weak_cascaded());
        case StrategyKind::mitigation_aware:
            return optimize_mitigation_aware(cache, align_weak_user(cache.weak_cascaded()), spec.optimizer).phase;
        }
        throw std::invalid_argument("select_phases: unknown strategy");
    }

    CVec construct_b_orthogonality(const CMat &V_s, const CVec &v_perp, double xi)
    {
        if (V_s.rows() <= V_s.cols())
            throw std::invalid_argument("construct_b_orthogonality: no orthogonal complement (N_B = K)");
        if (v_perp.size() != V_s.rows())
            throw std::invalid_argument("construct_b_orthogonality: dimension mismatch");
        if (!(xi >= 0.0) || !std::isfinite(xi))
            throw std::invalid_argument("construct_b_orthogonality: xi must be non-negative");
        const double np = v_perp.norm();
        if (!(np > 0.0))
            throw std::invalid_argument("construct_b_orthogonality: v_perp is zero");
        if ((V_s.adjoint() * v_perp).norm() > 1e-10 * np)
            throw std::invalid_argument("construct_b_orthogonality: v_perp not orthogonal to range(V_s)");

        const CVec in_range = V_s * CVec::Ones(V_s.cols());
        const CVec bp = in_range / in_range.norm() + xi * v_perp / np;
        return bp / bp.norm();
    }

    CMat row_space_basis(const CMat &H_d_strong) { return linalg::thin_svd(H_d_strong).V; }

    CVec row_space_complement(const CMat &H_d_strong)
    {
        const Eigen::Index K = H_d_strong.rows();
        const Eigen::Index NB = H_d_strong.cols();
        if (NB <= K)
            throw std::invalid_argument("row_space_complement: N_B must exceed K");
        Eigen::JacobiSVD<CMat> svd(H_d_strong, Eigen::ComputeFullV);
        CVec v = svd.matrixV().col(K);
        return v / v.norm();
    }
}
