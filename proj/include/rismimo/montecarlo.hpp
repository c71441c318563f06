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

#ifndef RISMIMO_MONTECARLO_HPP
#define RISMIMO_MONTECARLO_HPP

#include "rismimo/channel.hpp"
#include "rismimo/phase.hpp"
#include "rismimo/se.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace rismimo
{
    enum class SweepVariable
    {
        ptx_dbm,
        n_bs,
        n_ris,
        xi,
    };

    std::string_view to_string(SweepVariable v);
    SweepVariable sweep_variable_from_string(std::string_view s);

    struct MethodSpec
    {
        Precoder precoder = Precoder::zf;
        StrategySpec strategy;
        SEMode mode = SEMode::exact;
        bool operator==(const MethodSpec &) const = default;
    };

    struct SweepPlan
    {
        std::string name = "sweep";
        SweepVariable variable = SweepVariable::ptx_dbm;
        std::vector<double> values = {40.0};
        std::vector<MethodSpec> methods = {MethodSpec{}};
        int reps = 200;
        ScenarioConfig base_cfg;
        int workers = 1; // 0 selects the hardware concurrency

        bool operator==(const SweepPlan &) const = default;
        void validate() const;
    };

    // Scenario for one sweep point.
    ScenarioConfig apply_sweep_value(const ScenarioConfig &base, SweepVariable var, double value);

    struct SweepRow
    {
        double value = 0.0;
        MethodSpec method;
        double se_mean = 0.0;
        double se_std = 0.0;
        double se_d_mean = 0.0;
        double se_r_mean = 0.0;
        int reps = 0;    // instances that entered the means
        int flagged = 0; // excluded degenerate instances
    };

    struct SweepResult
    {
        std::string name;
        SweepVariable variable = SweepVariable::ptx_dbm;
        std::vector<SweepRow> rows; // value-major, methods in plan order
    };

    // Per-instance outcome of one method on one realization.
    struct InstanceSE
    {
        SEBreakdown se;
        bool flagged = false;
    };

    // Realization `rep` of `cfg`, with b replaced by the orthogonality construction
    // when cfg.xi is set.
    ChannelRealization draw_instance(const ScenarioConfig &cfg, std::uint64_t rep);

    // SE of every method on one shared realization; random phases come from the
    // (seed, rep, phases) substream, restarted for each method.
    std::vector<InstanceSE> evaluate_methods(const ScenarioConfig &cfg, const ChannelRealization &real,
                                             std::uint64_t rep, const std::vector<MethodSpec> &methods);

    // Replications run on `plan.workers` threads; results are collected by index
    // and reduced serially, so the output does not depend on the worker count.
    // Throws std::runtime_error when more than half the instances of any row are flagged.
    SweepResult run_sweep(const SweepPlan &plan);

    // Monte Carlo means of the reflective parts at high SNR together with the
    // ergodic upper bound on the linear one.
    struct ReflectiveEstimate
    {
        double lin_r = 0.0;   // E[log2(g p / (1 + mitigation))]
        double dpc_r = 0.0;   // E[log2(g p)]
        double bound = 0.0;   // E[log2(g p / (e^-gamma sum_k theta^H R_c,k theta / tr R_d,k))]
        int reps = 0;
        int flagged = 0;
    };

    ReflectiveEstimate estimate_reflective_se(const ScenarioConfig &cfg, StrategyKind strategy, int reps,
                                              int workers = 0);

    // Mean over reps of [direct-only DPC SE with P split over K users] minus
    // [SE_DPC,d with the scenario's split], both in high-SNR form, with b built
    // from `xi`. Approaches K log2((K+1)/K) for large xi under the K+1 split.
    double fig3_offset_check(const ScenarioConfig &cfg, double xi, int reps, int workers = 0);

    // Preset plans for figures 2 to 5 on top of `base`.
    SweepPlan figure_plan(int figure, const ScenarioConfig &base);
}

#endif
