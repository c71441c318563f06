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

#ifndef RISMIMO_SE_HPP
#define RISMIMO_SE_HPP

#include "rismimo/channel.hpp"
#include "rismimo/linalg.hpp"

#include <string_view>

namespace rismimo
{
    // RIS configuration theta with |theta_n| = 1 for every element.
    class PhaseVector
    {
    public:
        PhaseVector() = default;

        // Throws std::invalid_argument if any entry deviates from unit modulus by more than 1e-12.
        explicit PhaseVector(CVec theta);

        static PhaseVector from_angles(const RVec &phi);
        static PhaseVector ones(int n);

        const CVec &theta() const { return theta_; }
        int size() const { return static_cast<int>(theta_.size()); }

        // theta_bar = [theta; 1], length N_R + 1.
        CVec extended() const;

    private:
        CVec theta_;
    };

    enum class Precoder
    {
        zf,
        dpc,
    };

    enum class SEMode
    {
        exact,
        asymptotic,
    };

    std::string_view to_string(Precoder p);
    std::string_view to_string(SEMode m);

    // Sum-SE in bits per channel use, split into the direct (strong users) and
    // reflective (weak user) parts. flagged marks degenerate instances (singular
    // C_s, b inside the strong users' row space); their values may be +-inf or NaN.
    struct SEBreakdown
    {
        Precoder method = Precoder::zf;
        SEMode mode = SEMode::exact;
        double total = 0.0;
        double direct = 0.0;
        double reflect = 0.0;
        bool flagged = false;
    };

    // Structural pieces of H H^H for one realization with the weak user's direct
    // channel idealized to zero:
    //   H H^H = blkdiag(C_s, 0) + D theta_bar theta_bar^H D^H.
    struct DecompositionCache
    {
        CMat C_s;              // K x K, H_d^s P_b^perp H_d^{s,H}
        CMat D;                // (K+1) x (N_R+1), [H_c, H_d b]
        CMat D_s;              // K x (N_R+1), top K rows of D
        linalg::HermitianEig eig; // of C_s
        double b_proj_perp = 0.0; // b^H P^perp_{H_d^{s,H}} b, NaN if H_d^s is rank deficient
        bool singular = false;    // C_s condition number above linalg::singular_condition
        CMat C_s_inv;             // empty when singular

        int n_strong() const { return static_cast<int>(C_s.rows()); }
        int n_ris() const { return static_cast<int>(D.cols()) - 1; }

        // h_c,K+1 as a column (last row of D without the direct entry, conjugated).
        CVec weak_cascaded() const;
    };

    DecompositionCache decompose(const ChannelRealization &real);

    // |h_c,K+1^H theta|^2
    double weak_gain(const CVec &h_c_weak, const PhaseVector &phase);

    // theta_bar^H D_s^H C_s^{-1} D_s theta_bar. Throws NumericalError if C_s is singular.
    double mitigation(const DecompositionCache &cache, const PhaseVector &phase);

    // D_s^H C_s^{-1} D_s, the (N_R+1) x (N_R+1) PSD matrix of the mitigation quadratic form.
    CMat mitigation_matrix(const DecompositionCache &cache);

    // e_k^T (H H^H)^{-1} e_k for k = 1..K+1 using the block structure.
    RVec zf_inverted_gains(const DecompositionCache &cache, const PhaseVector &phase);

    SEBreakdown se_zf_exact(const DecompositionCache &cache, const PhaseVector &phase, double p_bar);
    SEBreakdown se_dpc_exact(const DecompositionCache &cache, const PhaseVector &phase, double p_bar);

    // High-SNR expressions. A singular C_s throws for ZF and yields a flagged
    // result with direct = -inf for DPC.
    SEBreakdown se_asymptotic(const DecompositionCache &cache, const PhaseVector &phase, double p_bar,
                              Precoder method);

    struct FlaggedValue
    {
        double value = 0.0;
        bool flagged = false;
    };

    // log2 det(H_d^s H_d^{s,H} p_bar) + log2(b^H P^perp b) + log2(|h_c,K+1^H theta|^2 p_bar).
    FlaggedValue se_dpc_orthogonal_form(const ChannelRealization &real, const PhaseVector &phase, double p_bar);

    // b^H P^perp_{H_d^{s,H}} b; throws NumericalError("rank deficient") for rank-deficient H_d^s.
    double b_perp_energy(const CMat &H_d_strong, const CVec &b);

    struct GapTerms
    {
        double delta_d = 0.0;
        double delta_r = 0.0;
    };

    // DPC minus ZF at high SNR, split into the direct and reflective parts.
    GapTerms delta_se(const DecompositionCache &cache, const PhaseVector &phase);

    // 1 / (b^H P^perp b): the value of 1 + mitigation when H_c^s theta = 0.
    // Flagged with +inf when b lies in the strong users' row space.
    FlaggedValue mitigation_no_reflection(const CMat &H_d_strong, const CVec &b);

    // Generic evaluations on an arbitrary composite channel (no structure assumed).
    RVec zf_gains_generic(const CMat &H);
    double se_zf_generic(const CMat &H, double p_bar);
    double se_dpc_logdet(const CMat &H, double p_bar);

    // Exact SE on the realization's actual (attenuated) weak-user channel using the
    // generic formulas. The direct part is the strong users' terms (ZF) or
    // sum_k log2(1 + lambda_k p_bar) over the eigenvalues of C_s (DPC).
    SEBreakdown se_exact_generic(const ChannelRealization &real, const DecompositionCache &cache,
                                 const PhaseVector &phase, double p_bar, Precoder method);
}

#endif
