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

#ifndef RISMIMO_PHASE_HPP
#define RISMIMO_PHASE_HPP

#include "rismimo/rng.hpp"
#include "rismimo/se.hpp"

#include <string_view>
#include <vector>

namespace rismimo
{
    enum class StrategyKind
    {
        random,
        statistical,
        align_weak,
        mitigation_aware,
    };

    std::string_view to_string(StrategyKind k);
    StrategyKind strategy_from_string(std::string_view s);

    struct OptimizerParams
    {
        int max_sweeps = 100;
        double rel_tolerance = 1e-8;
        int grid_points = 1024;
        bool operator==(const OptimizerParams &) const = default;
        void validate() const;
    };

    struct StrategySpec
    {
        StrategyKind kind = StrategyKind::align_weak;
        OptimizerParams optimizer;
        bool operator==(const StrategySpec &) const = default;
    };

    // Independent uniform phases on [0, 2 pi).
    PhaseVector random_phases(int n_ris, RngStream &rng);

    // Statistical-CSI phases. Under i.i.d. Rayleigh fading every unit-modulus
    // configuration has the same statistics, so this draws random phases.
    PhaseVector statistical_phases(int n_ris, RngStream &rng);

    // theta_n = exp(j arg h_c,n), maximizing |h_c^H theta|^2. Zero entries get phase 0.
    PhaseVector align_weak_user(const CVec &h_c_weak);

    // |h^H theta|^2 / (1 + theta_bar^H M theta_bar), with M the mitigation matrix.
    // This is 2^(reflective ZF SE) / p_bar at high SNR.
    double mitigation_objective(const CVec &h_c_weak, const CMat &M, const PhaseVector &phase);

    struct OptimizerResult
    {
        PhaseVector phase;
        double objective = 0.0;
        double initial_objective = 0.0;
        int sweeps = 0;
        std::vector<double> trace; // objective after every element update
    };

    // Element-wise ascent on mitigation_objective, elements visited in index order.
    // Each 1-D subproblem (A + 2Re(c e^{j phi})) / (B + 2Re(d e^{j phi})) is solved from
    // its stationary-point equation; a grid search with golden-section refinement
    // takes over when that equation is degenerate. The objective never decreases.
    OptimizerResult optimize_mitigation_aware(const DecompositionCache &cache, const PhaseVector &init,
                                              const OptimizerParams &params = {});

    // Same ascent on explicit (h_c_weak, M); used by the cache overload.
    OptimizerResult optimize_mitigation_aware(const CVec &h_c_weak, const CMat &M, const PhaseVector &init,
                                              const OptimizerParams &params = {});

    // Phase selection for one realization. Random and statistical kinds draw from rng.
    PhaseVector select_phases(const StrategySpec &spec, const DecompositionCache &cache, RngStream &rng);

    // b = b'/||b'|| with b' = V_s 1/||V_s 1|| + xi v_perp/||v_perp||, so that
    // b^H P^perp b = xi^2 / (1 + xi^2). V_s is N_B x K with orthonormal columns.
    CVec construct_b_orthogonality(const CMat &V_s, const CVec &v_perp, double xi);

    // Right singular vectors of H_d^s (N_B x K) and one unit vector orthogonal to them.
    CMat row_space_basis(const CMat &H_d_strong);
    CVec row_space_complement(const CMat &H_d_strong);
}

#endif
