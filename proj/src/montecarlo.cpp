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

#include "rismimo/montecarlo.hpp"

#include "rismimo/bounds.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rismimo
{
    namespace
    {
        int resolve_workers(int workers)
        {
            if (workers > 0)
                return workers;
            const unsigned hc = std::thread::hardware_concurrency();
            return hc == 0 ? 1 : static_cast<int>(hc);
        }

        // Runs body(i) for i in [0, n) on up to `workers` threads.
        template <class Body>
        void parallel_for(std::size_t n, int workers, Body body)
        {
            const int nt = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1));
            if (nt <= 1)
            {
                for (std::size_t i = 0; i < n; ++i)
                    body(i);
                return;
            }
            std::atomic<std::size_t> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;
            std::vector<std::thread> pool;
            pool.reserve(nt);
            for (int t = 0; t < nt; ++t)
                pool.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++)
                    {
                        try
                        {
                            body(i);
                        }
                        catch (...)
                        {
                            std::lock_guard lock(error_mutex);
                            if (!error)
                                error = std::current_exception();
                            next = n;
                        }
                    }
                });
            for (auto &th : pool)
                th.join();
            if (error)
                std::rethrow_exception(error);
        }

        bool is_integral_variable(SweepVariable v) { return v == SweepVariable::n_bs || v == SweepVariable::n_ris; }
    }

    std::string_view to_string(SweepVariable v)
    {
        switch (v)
        {
        case SweepVariable::ptx_dbm:
            return "ptx_dbm";
        case SweepVariable::n_bs:
            return "n_bs";
        case SweepVariable::n_ris:
            return "n_ris";
        case SweepVariable::xi:
            return "xi";
        }
        return "?";
    }

    SweepVariable sweep_variable_from_string(std::string_view s)
    {
        for (auto v : {SweepVariable::ptx_dbm, SweepVariable::n_bs, SweepVariable::n_ris, SweepVariable::xi})
            if (s == to_string(v))
                return v;
        throw std::invalid_argument("unknown sweep variable '" + std::string(s) + "'");
    }

    ScenarioConfig apply_sweep_value(const ScenarioConfig &base, SweepVariable var, double value)
    {
        ScenarioConfig cfg = base;
        switch (var)
        {
        case SweepVariable::ptx_dbm:
            cfg.ptx_dbm = value;
            break;
        case SweepVariable::n_bs:
            cfg.n_bs = static_cast<int>(std::lround(value));
            break;
        case SweepVariable::n_ris:
            cfg.n_ris = static_cast<int>(std::lround(value));
            break;
        case SweepVariable::xi:
            cfg.xi = value;
            break;
        }
        return cfg;
    }

    void SweepPlan::validate() const
    {
        if (values.empty())
            throw std::invalid_argument("values: sweep needs at least one value");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1]))
                throw std::invalid_argument("values: must be strictly increasing");
        if (is_integral_variable(variable))
            for (double v : values)
                if (v != std::round(v))
                    throw std::invalid_argument("values: " + std::string(to_string(variable)) + " needs integers");
        if (methods.empty())
            throw std::invalid_argument("methods: sweep needs at least one method");
        for (const auto &m : methods)
            m.strategy.optimizer.validate();
        if (reps < 1)
            throw std::invalid_argument("reps: must be at least 1");
        if (workers < 0)
            throw std::invalid_argument("workers: must be non-negative");
        for (double v : values)
            apply_sweep_value(base_cfg, variable, v).validate();
    }

    ChannelRealization draw_instance(const ScenarioConfig &cfg, std::uint64_t rep)
    {
        ChannelRealization real = sample_realization(cfg, rep);
        if (cfg.xi)
        {
            const CMat &Hs = real.H_d_strong;
            real = real.with_direction(construct_b_orthogonality(row_space_basis(Hs), row_space_complement(Hs), *cfg.xi));
        }
        return real;
    }

    std::vector<InstanceSE> evaluate_methods(const ScenarioConfig &cfg, const ChannelRealization &real,
                                             std::uint64_t rep, const std::vector<MethodSpec> &methods)
    {
        const DecompositionCache cache = decompose(real);
        const double p_bar = cfg.p_bar();
        std::vector<InstanceSE> out(methods.size());
        for (std::size_t m = 0; m < methods.size(); ++m)
        {
            const MethodSpec &spec = methods[m];
            try
            {
                RngStream rng(cfg.seed, rep, StreamTag::phases);
                const PhaseVector phase = select_phases(spec.strategy, cache, rng);
                out[m].se = spec.mode == SEMode::exact ? se_exact_generic(real, cache, phase, p_bar, spec.precoder)
                                                       : se_asymptotic(cache, phase, p_bar, spec.precoder);
                out[m].flagged = out[m].se.flagged || !std::isfinite(out[m].se.total);
            }
            catch (const NumericalError &)
            {
                out[m].flagged = true;
            }
        }
        return out;
    }

    SweepResult run_sweep(const SweepPlan &plan)
    {
        plan.validate();
        const std::size_t nv = plan.values.size();
        const std::size_t nr = static_cast<std::size_t>(plan.reps);
        const std::size_t nm = plan.methods.size();

        std::vector<ScenarioConfig> cfgs;
        for (double v : plan.values)
            cfgs.push_back(apply_sweep_value(plan.base_cfg, plan.variable, v));

        // Slot (v, r) holds all methods for that realization.
        std::vector<std::vector<InstanceSE>> slots(nv * nr);
        parallel_for(nv * nr, plan.workers, [&](std::size_t i) {
            const std::size_t v = i / nr, r = i % nr;
            const ChannelRealization real = draw_instance(cfgs[v], r);
            slots[i] = evaluate_methods(cfgs[v], real, r, plan.methods);
        });

        SweepResult res{plan.name, plan.variable, {}};
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t m = 0; m < nm; ++m)
            {
                SweepRow row;
                row.value = plan.values[v];
                row.method = plan.methods[m];
                double sum = 0.0, sum_d = 0.0, sum_r = 0.0;
                for (std::size_t r = 0; r < nr; ++r)
                {
                    const InstanceSE &x = slots[v * nr + r][m];
                    if (x.flagged)
                    {
                        ++row.flagged;
                        continue;
                    }
                    ++row.reps;
                    sum += x.se.total;
                    sum_d += x.se.direct;
                    sum_r += x.se.reflect;
                }
                if (2 * row.flagged > plan.reps)
                {
                    std::ostringstream os;
                    os << "sweep '" << plan.name << "': " << row.flagged << " of " << plan.reps
                       << " instances flagged at " << to_string(plan.variable) << " = " << row.value << " ("
                       << to_string(row.method.precoder) << ", " << to_string(row.method.strategy.kind) << ", "
                       << to_string(row.method.mode) << ")";
                    throw std::runtime_error(os.str());
                }
                row.se_mean = sum / row.reps;
                row.se_d_mean = sum_d / row.reps;
                row.se_r_mean = sum_r / row.reps;
                double ss = 0.0;
                for (std::size_t r = 0; r < nr; ++r)
                {
                    const InstanceSE &x = slots[v * nr + r][m];
                    if (!x.flagged)
                        ss += (x.se.total - row.se_mean) * (x.se.total - row.se_mean);
                }
                row.se_std = row.reps > 1 ? std::sqrt(ss / (row.reps - 1)) : 0.0;
                res.rows.push_back(row);
            }
        return res;
    }

    ReflectiveEstimate estimate_reflective_se(const ScenarioConfig &cfg, StrategyKind strategy, int reps,
                                              int workers)
    {
        cfg.validate();
        if (reps < 1)
            throw std::invalid_argument("reps: must be at least 1");
        struct Sample
        {
            double lin = 0.0, dpc = 0.0, bound = 0.0;
            bool flagged = false;
        };
        const double p_bar = cfg.p_bar();
        const StrategySpec spec{strategy, {}};
        // With frozen positions every realization shares the same covariances.
        std::optional<CovarianceSet> frozen;
        if (cfg.freeze_positions)
        {
            const ChannelRealization ref = sample_realization(cfg, 0);
            frozen = build_covariances(ref.gains, ref.n_strong(), ref.n_bs(), ref.a);
        }
        std::vector<Sample> samples(reps);
        parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t r) {
            Sample &s = samples[r];
            try
            {
                const ChannelRealization real = draw_instance(cfg, r);
                const DecompositionCache cache = decompose(real);
                RngStream rng(cfg.seed, r, StreamTag::phases);
                const PhaseVector phase = select_phases(spec, cache, rng);
                const double g = weak_gain(cache.weak_cascaded(), phase);
                if (!(g > 0.0))
                    throw NumericalError("weak user unreachable");
                s.dpc = std::log2(g * p_bar);
                s.lin = s.dpc - std::log2(1.0 + mitigation(cache, phase));
                if (frozen)
                    s.bound = theorem2_bound_term({phase, cache.weak_cascaded()}, *frozen, p_bar);
                else
                    s.bound = theorem2_bound_term({phase, cache.weak_cascaded()},
                                                  build_covariances(real.gains, real.n_strong(), real.n_bs(), real.a),
                                                  p_bar);
            }
            catch (const NumericalError &)
            {
                s.flagged = true;
            }
        });

        ReflectiveEstimate est;
        for (const Sample &s : samples)
        {
            if (s.flagged)
            {
                ++est.flagged;
                continue;
            }
            ++est.reps;
            est.lin_r += s.lin;
            est.dpc_r += s.dpc;
            est.bound += s.bound;
        }
        if (2 * est.flagged > reps)
            throw std::runtime_error("estimate_reflective_se: more than half the instances flagged");
        est.lin_r /= est.reps;
        est.dpc_r /= est.reps;
        est.bound /= est.reps;
        return est;
    }

    double fig3_offset_check(const ScenarioConfig &cfg, double xi, int reps, int workers)
    {
        ScenarioConfig c = cfg;
        c.xi = xi;
        c.validate();
        if (reps < 1)
            throw std::invalid_argument("reps: must be at least 1");
        const int K = c.n_strong;
        const double p_split = c.p_bar();
        const double p_direct = ScenarioConfig::p_bar_for(c.ptx_dbm, K, PowerSplit::strong_users);

        std::vector<double> gap(reps);
        std::vector<char> ok(reps, 0);
        parallel_for(static_cast<std::size_t>(reps), workers, [&](std::size_t r) {
            const ChannelRealization real = draw_instance(c, r);
            const DecompositionCache cache = decompose(real);
            if (cache.singular)
                return;
            double se_d = 0.0;
            for (int k = 0; k < K; ++k)
                se_d += std::log2(cache.eig.values(k) * p_split);
            const CMat &Hs = real.H_d_strong;
            const double direct_only = linalg::log2det_hpd(Hs * Hs.adjoint() * p_direct);
            gap[r] = direct_only - se_d;
            ok[r] = 1;
        });

        double sum = 0.0;
        int n = 0;
        for (int r = 0; r < reps; ++r)
            if (ok[r])
            {
                sum += gap[r];
                ++n;
            }
        if (2 * n < reps)
            throw std::runtime_error("fig3_offset_check: more than half the instances flagged");
        return sum / n;
    }

    SweepPlan figure_plan(int figure, const ScenarioConfig &base)
    {
        auto method = [](Precoder p, StrategyKind k, SEMode m) { return MethodSpec{p, StrategySpec{k, {}}, m}; };
        SweepPlan plan;
        plan.base_cfg = base;
        plan.reps = 200;
        plan.methods.clear();
        switch (figure)
        {
        case 2:
            plan.name = "figure2";
            plan.variable = SweepVariable::ptx_dbm;
            plan.values = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
            for (auto k : {StrategyKind::align_weak, StrategyKind::mitigation_aware})
                for (auto p : {Precoder::zf, Precoder::dpc})
                    for (auto m : {SEMode::exact, SEMode::asymptotic})
                        plan.methods.push_back(method(p, k, m));
            break;
        case 3:
            plan.name = "figure3";
            plan.base_cfg.n_bs = 4;
            plan.variable = SweepVariable::xi;
            plan.values.clear();
            for (int e = -3; e <= 3; ++e)
                for (double mant : {1.0, std::sqrt(10.0)})
                    if (e < 3 || mant == 1.0)
                        plan.values.push_back(mant * std::pow(10.0, e));
            for (auto p : {Precoder::zf, Precoder::dpc})
                plan.methods.push_back(method(p, StrategyKind::align_weak, SEMode::asymptotic));
            break;
        case 4:
            plan.name = "figure4";
            plan.base_cfg.n_bs = 6;
            plan.variable = SweepVariable::n_ris;
            plan.values = {16, 32, 64, 128, 256};
            for (auto k : {StrategyKind::align_weak, StrategyKind::mitigation_aware})
                for (auto p : {Precoder::zf, Precoder::dpc})
                    plan.methods.push_back(method(p, k, SEMode::exact));
            break;
        case 5:
            plan.name = "figure5";
            plan.base_cfg.direct_extra_loss_db = base.direct_extra_loss_db + 20.0;
            plan.variable = SweepVariable::n_ris;
            plan.values = {16, 32, 64, 128, 256};
            for (auto k : {StrategyKind::random, StrategyKind::align_weak})
                for (auto p : {Precoder::zf, Precoder::dpc})
                    plan.methods.push_back(method(p, k, SEMode::asymptotic));
            break;
        default:
            throw std::invalid_argument("figure: expected 2, 3, 4 or 5");
        }
        return plan;
    }
}
