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

#include "rismimo/se.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rismimo
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        // b^H P^perp b at or below this is treated as b inside range(H_d^{s,H}).
        constexpr double orthogonality_floor = 1e-12;

        void require_compatible(const DecompositionCache &cache, const PhaseVector &phase)
        {
            if (phase.size() != cache.n_ris())
                throw std::invalid_argument("phase vector length does not match N_R");
        }

        void require_nonsingular(const DecompositionCache &cache)
        {
            if (cache.singular)
                throw NumericalError("direct channels rank-deficient after projection");
        }

        double weak_gain_checked(const DecompositionCache &cache, const PhaseVector &phase)
        {
            const double g = weak_gain(cache.weak_cascaded(), phase);
            if (!(g > 0.0))
                throw NumericalError("weak user unreachable");
            return g;
        }
    }

    PhaseVector::PhaseVector(CVec theta) : theta_(std::move(theta))
    {
        for (Eigen::Index n = 0; n < theta_.size(); ++n)
            if (!std::isfinite(std::abs(theta_(n))) || std::abs(std::abs(theta_(n)) - 1.0) > 1e-12)
                throw std::invalid_argument("phase vector entry " + std::to_string(n) + " is not unit-modulus");
    }

    PhaseVector PhaseVector::from_angles(const RVec &phi)
    {
        CVec t(phi.size());
        for (Eigen::Index n = 0; n < phi.size(); ++n)
            t(n) = std::polar(1.0, phi(n));
        return PhaseVector(std::move(t));
    }

    PhaseVector PhaseVector::ones(int n) { return PhaseVector(CVec::Ones(n)); }

    CVec PhaseVector::extended() const
    {
        CVec tb(theta_.size() + 1);
        tb.head(theta_.size()) = theta_;
        tb(theta_.size()) = 1.0;
        return tb;
    }

    std::string_view to_string(Precoder p) { return p == Precoder::zf ? "ZF" : "DPC"; }
    std::string_view to_string(SEMode m) { return m == SEMode::exact ? "exact" : "asymptotic"; }

    CVec DecompositionCache::weak_cascaded() const
    {
        const int K = n_strong();
        return D.row(K).head(n_ris()).adjoint();
    }

    DecompositionCache decompose(const ChannelRealization &real)
    {
        const int K = real.n_strong();
        const int NR = real.n_ris();
        const CMat &Hs = real.H_d_strong;

        DecompositionCache c;
        const CMat Pb = linalg::orth_projector(real.b);
        c.C_s = Hs * Pb * Hs.adjoint();
        c.C_s = 0.5 * (c.C_s + c.C_s.adjoint());

        c.D.resize(K + 1, NR + 1);
        c.D.leftCols(NR) = real.H_c;
        c.D.block(0, NR, K, 1) = Hs * real.b;
        c.D(K, NR) = 0.0;
        c.D_s = c.D.topRows(K);

        c.eig = linalg::hermitian_eig(c.C_s);
        c.singular = linalg::hermitian_rcond(c.eig.values) < 1.0 / linalg::singular_condition;
        if (!c.singular)
        {
            Eigen::LLT<CMat> llt(c.C_s);
            if (llt.info() != Eigen::Success)
                c.singular = true;
            else
            {
                c.C_s_inv = llt.solve(CMat::Identity(K, K));
                c.C_s_inv = 0.5 * (c.C_s_inv + c.C_s_inv.adjoint());
            }
        }

        try
        {
            c.b_proj_perp = b_perp_energy(Hs, real.b);
        }
        catch (const NumericalError &)
        {
            c.b_proj_perp = nan;
        }
        return c;
    }

    double weak_gain(const CVec &h_c_weak, const PhaseVector &phase)
    {
        if (h_c_weak.size() != phase.size())
            throw std::invalid_argument("weak_gain: length mismatch");
        return std::norm(h_c_weak.dot(phase.theta()));
    }

    double mitigation(const DecompositionCache &cache, const PhaseVector &phase)
    {
        require_compatible(cache, phase);
        require_nonsingular(cache);
        const CVec v = cache.D_s * phase.extended();
        return std::max(0.0, std::real(v.dot(cache.C_s_inv * v)));
    }

    CMat mitigation_matrix(const DecompositionCache &cache)
    {
        require_nonsingular(cache);
        CMat M = cache.D_s.adjoint() * cache.C_s_inv * cache.D_s;
        return 0.5 * (M + M.adjoint());
    }

    RVec zf_inverted_gains(const DecompositionCache &cache, const PhaseVector &phase)
    {
        require_compatible(cache, phase);
        const double g = weak_gain_checked(cache, phase);
        require_nonsingular(cache);
        const int K = cache.n_strong();
        RVec out(K + 1);
        for (int k = 0; k < K; ++k)
            out(k) = std::real(cache.C_s_inv(k, k));
        out(K) = (1.0 + mitigation(cache, phase)) / g;
        return out;
    }

    SEBreakdown se_zf_exact(const DecompositionCache &cache, const PhaseVector &phase, double p_bar)
    {
        const RVec gains = zf_inverted_gains(cache, phase);
        const int K = cache.n_strong();
        SEBreakdown se{Precoder::zf, SEMode::exact};
        for (int k = 0; k < K; ++k)
            se.direct += std::log2(1.0 + p_bar / gains(k));
        se.reflect = std::log2(1.0 + p_bar / gains(K));
        se.total = se.direct + se.reflect;
        return se;
    }

    SEBreakdown se_dpc_exact(const DecompositionCache &cache, const PhaseVector &phase, double p_bar)
    {
        require_compatible(cache, phase);
        const double g = weak_gain(cache.weak_cascaded(), phase);
        const CVec v = cache.D_s * phase.extended();
        const int K = cache.n_strong();

        SEBreakdown se{Precoder::dpc, SEMode::exact};
        double inner = 1.0 + g * p_bar;
        for (int k = 0; k < K; ++k)
        {
            const double lambda = std::max(0.0, cache.eig.values(k));
            se.direct += std::log2(1.0 + lambda * p_bar);
            const double proj = std::norm(cache.eig.vectors.col(k).dot(v));
            inner += proj * p_bar / (1.0 + lambda * p_bar);
        }
        se.reflect = std::log2(inner);
        se.total = se.direct + se.reflect;
        return se;
    }

    SEBreakdown se_asymptotic(const DecompositionCache &cache, const PhaseVector &phase, double p_bar,
                              Precoder method)
    {
        require_compatible(cache, phase);
        const int K = cache.n_strong();
        SEBreakdown se{method, SEMode::asymptotic};
        if (method == Precoder::zf)
        {
            const RVec gains = zf_inverted_gains(cache, phase);
            for (int k = 0; k < K; ++k)
                se.direct += std::log2(p_bar / gains(k));
            se.reflect = std::log2(p_bar / gains(K));
        }
        else
        {
            const double g = weak_gain_checked(cache, phase);
            if (cache.singular)
            {
                se.direct = -inf;
                se.flagged = true;
            }
            else
            {
                for (int k = 0; k < K; ++k)
                    se.direct += std::log2(cache.eig.values(k) * p_bar);
            }
            se.reflect = std::log2(g * p_bar);
        }
        se.total = se.direct + se.reflect;
        return se;
    }

    double b_perp_energy(const CMat &H_d_strong, const CVec &b)
    {
        const CMat P = linalg::range_projector(H_d_strong);
        return std::max(0.0, 1.0 - std::real(b.dot(P * b)));
    }

    FlaggedValue se_dpc_orthogonal_form(const ChannelRealization &real, const PhaseVector &phase, double p_bar)
    {
        const double g = weak_gain(real.weak_cascaded(), phase);
        if (!(g > 0.0))
            throw NumericalError("weak user unreachable");
        const CMat &Hs = real.H_d_strong;
        const double bpp = b_perp_energy(Hs, real.b);
        if (bpp <= orthogonality_floor)
            return {-inf, true};
        const CMat gram = Hs * Hs.adjoint() * p_bar;
        return {linalg::log2det_hpd(gram) + std::log2(bpp) + std::log2(g * p_bar), false};
    }

    GapTerms delta_se(const DecompositionCache &cache, const PhaseVector &phase)
    {
        require_compatible(cache, phase);
        require_nonsingular(cache);
        const int K = cache.n_strong();
        GapTerms gap;
        double logdet = 0.0;
        for (int k = 0; k < K; ++k)
            logdet += std::log2(cache.eig.values(k));
        double zf = 0.0;
        for (int k = 0; k < K; ++k)
            zf += std::log2(1.0 / std::real(cache.C_s_inv(k, k)));
        gap.delta_d = logdet - zf;
        gap.delta_r = std::log2(1.0 + mitigation(cache, phase));
        return gap;
    }

    FlaggedValue mitigation_no_reflection(const CMat &H_d_strong, const CVec &b)
    {
        const double bpp = b_perp_energy(H_d_strong, b);
        if (bpp <= orthogonality_floor)
            return {inf, true};
        return {1.0 / bpp, false};
    }

    RVec zf_gains_generic(const CMat &H)
    {
        const CMat G = H * H.adjoint();
        Eigen::FullPivLU<CMat> lu(G);
        if (!lu.isInvertible())
            throw NumericalError("composite channel is rank deficient");
        const CMat Ginv = lu.inverse();
        return Ginv.diagonal().real();
    }

    double se_zf_generic(const CMat &H, double p_bar)
    {
        const RVec gains = zf_gains_generic(H);
        double se = 0.0;
        for (Eigen::Index k = 0; k < gains.size(); ++k)
            se += std::log2(1.0 + p_bar / gains(k));
        return se;
    }

    double se_dpc_logdet(const CMat &H, double p_bar)
    {
        const Eigen::Index n = H.rows();
        return linalg::log2det_hpd(CMat::Identity(n, n) + p_bar * (H * H.adjoint()));
    }

    SEBreakdown se_exact_generic(const ChannelRealization &real, const DecompositionCache &cache,
                                 const PhaseVector &phase, double p_bar, Precoder method)
    {
        require_compatible(cache, phase);
        const CMat H = real.composite(phase.theta(), false);
        const int K = real.n_strong();
        SEBreakdown se{method, SEMode::exact};
        if (method == Precoder::zf)
        {
            const RVec gains = zf_gains_generic(H);
            for (int k = 0; k < K; ++k)
                se.direct += std::log2(1.0 + p_bar / gains(k));
            se.reflect = std::log2(1.0 + p_bar / gains(K));
            se.total = se.direct + se.reflect;
        }
        else
        {
            se.total = se_dpc_logdet(H, p_bar);
            for (int k = 0; k < K; ++k)
                se.direct += std::log2(1.0 + std::max(0.0, cache.eig.values(k)) * p_bar);
            se.reflect = se.total - se.direct;
        }
        return se;
    }
}
