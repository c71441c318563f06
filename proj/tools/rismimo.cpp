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

// Command-line front end: sweep, bounds, figure <2|3|4|5>.

#include "rismimo/bounds.hpp"
#include "rismimo/io.hpp"
#include "rismimo/montecarlo.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace rismimo;

namespace
{
    struct Options
    {
        std::string config_path;
        std::string out_dir = ".";
        std::optional<std::uint64_t> seed;
        std::optional<int> reps;
        std::optional<int> workers;
    };

    std::string read_file(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot read config '" + path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    ParsedConfig load(const Options &opt)
    {
        ParsedConfig cfg = parse_config(opt.config_path.empty() ? std::string() : read_file(opt.config_path));
        if (opt.seed)
            cfg.scenario.seed = *opt.seed;
        if (opt.reps)
            cfg.plan.reps = *opt.reps;
        if (opt.workers)
            cfg.plan.workers = *opt.workers;
        cfg.plan.base_cfg = cfg.scenario;
        return cfg;
    }

    // Writes the effective config, the CSV and the manifest; file names carry the hash prefix.
    void publish(const Options &opt, const ParsedConfig &cfg, const std::string &name, const std::string &csv)
    {
        fs::create_directories(opt.out_dir);
        const std::string ini = serialize_config(cfg);
        const std::string hash = git_blob_hash(ini);
        const std::string stem = name + "-" + hash.substr(0, 8);
        const fs::path dir(opt.out_dir);

        write_text_file(dir / (stem + ".ini"), ini);
        write_text_file(dir / (stem + ".csv"), csv);
        RunManifest m{opt.config_path, opt.out_dir, name, hash, cfg.scenario.seed, utc_timestamp(),
                      {stem + ".ini", stem + ".csv"}};
        write_manifest(m, dir / (stem + ".manifest.json"));
        std::cout << (dir / (stem + ".csv")).string() << "\n";
    }

    int run_sweep_cmd(const Options &opt)
    {
        const ParsedConfig cfg = load(opt);
        const SweepResult res = run_sweep(cfg.plan);
        publish(opt, cfg, cfg.plan.name, sweep_csv(res));
        return 0;
    }

    int run_figure_cmd(const Options &opt, int figure)
    {
        ParsedConfig cfg = load(opt);
        SweepPlan plan = figure_plan(figure, cfg.scenario);
        if (opt.reps)
            plan.reps = *opt.reps;
        plan.workers = cfg.plan.workers;
        cfg.plan = plan;
        const SweepResult res = run_sweep(plan);
        publish(opt, cfg, plan.name, sweep_csv(res));
        return 0;
    }

    int run_bounds_cmd(const Options &opt)
    {
        const ParsedConfig cfg = load(opt);
        const std::uint64_t seed = cfg.scenario.seed;
        const int reps = opt.reps.value_or(2000);

        std::vector<BoundReport> grid, summary;
        for (const auto &c : lemma1_grid())
        {
            grid.push_back(c.lemma);
            summary.push_back(c.comparison);
        }

        const Lemma1Structure st = lemma1_proof_structure();
        summary.push_back({"lemma1_gap_unimodal", "grid=" + std::to_string(st.grid_points), double(st.violations),
                           0.0, -double(st.violations), st.unimodal});
        summary.push_back({"lemma1_gap_argmax", "bracket=" + format_number(st.bracket), st.x_max,
                           st.bracket + 1e-3, st.bracket + 1e-3 - st.x_max, st.x_max < st.bracket + 1e-3});

        RngStream chi_rng(seed, 0, StreamTag::bound_mc);
        summary.push_back(chi2_log_expectation_check(chi_rng, 100000));

        RngStream hm_rng(seed, 1, StreamTag::bound_mc);
        for (int i = 0; i < 10; ++i)
        {
            const int n = 2 + i;
            const CMat A = [&] {
                CMat X(n, n);
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c)
                        X(r, c) = hm_rng.complex_normal(1.0);
                return X;
            }();
            const CMat M = A * A.adjoint() + 0.1 * CMat::Identity(n, n);
            summary.push_back(harmonic_mean_bound_check(hm_rng.complex_normal_vector(n, 1.0), M));
        }

        // Ergodic bounds on the linear reflective SE for frozen users.
        ScenarioConfig sc = cfg.scenario;
        sc.freeze_positions = true;
        const ChannelRealization ref = sample_realization(sc, 0);
        const double p_bar = sc.p_bar();
        const int K = sc.n_strong;
        const auto c1 = corollary1_values(ref.gains, K, sc.n_bs, sc.n_ris, p_bar);
        const auto c2 = corollary2_values(ref.gains, K, sc.n_bs, sc.n_ris, p_bar);
        const auto rnd = estimate_reflective_se(sc, StrategyKind::random, reps, cfg.plan.workers);
        const auto al = estimate_reflective_se(sc, StrategyKind::align_weak, reps, cfg.plan.workers);
        const std::string setting = "n_ris=" + std::to_string(sc.n_ris) + " reps=" + std::to_string(reps);
        summary.push_back({"lin_r_random_below_ergodic_bound", setting, rnd.lin_r, c1.lin_upper,
                           c1.lin_upper - rnd.lin_r, rnd.lin_r <= c1.lin_upper});
        summary.push_back({"lin_r_aligned_below_ergodic_bound", setting, al.lin_r, c2.lin_upper,
                           c2.lin_upper - al.lin_r, al.lin_r <= c2.lin_upper});
        summary.push_back({"dpc_r_aligned_above_lower_bound", setting, al.dpc_r, c2.dpc, al.dpc_r - c2.dpc,
                           al.dpc_r >= c2.dpc});

        fs::create_directories(opt.out_dir);
        const fs::path dir(opt.out_dir);
        const std::string hash = git_blob_hash(serialize_config(cfg));
        const std::string tag = hash.substr(0, 8);
        const bool ok_grid = emit_bound_report(grid, dir / ("lemma1_grid-" + tag + ".csv"));
        const bool ok_sum = emit_bound_report(summary, dir / ("bounds_summary-" + tag + ".csv"));
        RunManifest m{opt.config_path, opt.out_dir, "bounds", hash, seed, utc_timestamp(),
                      {"lemma1_grid-" + tag + ".csv", "bounds_summary-" + tag + ".csv"}};
        write_manifest(m, dir / ("bounds-" + tag + ".manifest.json"));

        int violated = 0;
        for (const auto *list : {&grid, &summary})
            for (const auto &b : *list)
                if (!b.satisfied)
                {
                    ++violated;
                    std::cerr << "violated: " << b.name << " " << b.setting << "\n";
                }
        std::cout << grid.size() + summary.size() << " checks, " << violated << " violated\n";
        return ok_grid && ok_sum ? 0 : 1;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Spectral-efficiency analysis for RIS-aided MIMO broadcast channels"};
    app.require_subcommand(1);
    Options opt;
    int figure = 0;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", opt.config_path, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out_dir, "Output directory");
        sub->add_option("--seed", opt.seed, "Seed, overrides the config");
        sub->add_option("--reps", opt.reps, "Replications, overrides the config")->check(CLI::PositiveNumber);
        sub->add_option("--workers", opt.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };
    CLI::App *sweep = app.add_subcommand("sweep", "Run the sweep described by the config");
    CLI::App *bounds = app.add_subcommand("bounds", "Evaluate the analytical bounds");
    CLI::App *fig = app.add_subcommand("figure", "Run a preset figure sweep");
    fig->add_option("number", figure, "Figure number")->required()->check(CLI::IsMember({2, 3, 4, 5}));
    for (auto *sub : {sweep, bounds, fig})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (sweep->parsed())
            return run_sweep_cmd(opt);
        if (bounds->parsed())
            return run_bounds_cmd(opt);
        return run_figure_cmd(opt, figure);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
