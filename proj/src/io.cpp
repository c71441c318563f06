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

#include "rismimo/io.hpp"

#include <json.hpp>
#include <openssl/sha.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace rismimo
{
    ConfigError::ConfigError(int line, const std::string &key, const std::string &msg)
        : std::invalid_argument("line " + std::to_string(line) + ": " + key + ": " + msg), line_(line), key_(key)
    {
    }

    namespace
    {
        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        std::vector<std::string> split_list(const std::string &s)
        {
            std::vector<std::string> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ','))
                out.push_back(trim(item));
            return out;
        }

        double to_double(const std::string &s)
        {
            double v = 0.0;
            const char *first = s.data();
            const char *last = s.data() + s.size();
            if (!s.empty() && *first == '+')
                ++first;
            const auto [p, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || p != last || s.empty())
                throw std::invalid_argument("expected a number, got '" + s + "'");
            return v;
        }

        template <class Int>
        Int to_integer(const std::string &s)
        {
            Int v{};
            const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size() || s.empty())
                throw std::invalid_argument("expected an integer, got '" + s + "'");
            return v;
        }

        bool to_bool(const std::string &s)
        {
            if (s == "true" || s == "1" || s == "yes")
                return true;
            if (s == "false" || s == "0" || s == "no")
                return false;
            throw std::invalid_argument("expected true or false, got '" + s + "'");
        }

        std::vector<double> to_doubles(const std::string &s, std::size_t expected = 0)
        {
            std::vector<double> out;
            for (const auto &item : split_list(s))
                out.push_back(to_double(item));
            if (expected && out.size() != expected)
                throw std::invalid_argument("expected " + std::to_string(expected) + " comma-separated values");
            return out;
        }

        Vec3 to_vec3(const std::string &s)
        {
            const auto v = to_doubles(s, 3);
            return {v[0], v[1], v[2]};
        }

        PathlossModel to_pathloss(const std::string &s)
        {
            const auto v = to_doubles(s, 2);
            return {v[0], v[1]};
        }

        Precoder to_precoder(const std::string &s)
        {
            if (s == "zf" || s == "ZF")
                return Precoder::zf;
            if (s == "dpc" || s == "DPC")
                return Precoder::dpc;
            throw std::invalid_argument("unknown precoder '" + s + "'");
        }

        SEMode to_mode(const std::string &s)
        {
            if (s == "exact")
                return SEMode::exact;
            if (s == "asymptotic")
                return SEMode::asymptotic;
            throw std::invalid_argument("unknown mode '" + s + "'");
        }

        std::string num17(double x)
        {
            if (std::isinf(x))
                return x > 0 ? "inf" : "-inf";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        template <class T>
        std::string join(const std::vector<T> &xs, const std::function<std::string(const T &)> &f)
        {
            std::string out;
            for (std::size_t i = 0; i < xs.size(); ++i)
                out += (i ? ", " : "") + f(xs[i]);
            return out;
        }

        template <class T>
        void push_unique(std::vector<T> &xs, const T &x)
        {
            if (std::find(xs.begin(), xs.end(), x) == xs.end())
                xs.push_back(x);
        }

        using Setter = std::function<void(const std::string &)>;
    }

    ParsedConfig parse_config(const std::string &text)
    {
        ParsedConfig out;
        ScenarioConfig &sc = out.scenario;
        SweepPlan &plan = out.plan;

        std::vector<Precoder> precoders = {Precoder::zf, Precoder::dpc};
        std::vector<SEMode> modes = {SEMode::exact};
        std::vector<StrategyKind> kinds = {StrategyKind::align_weak};
        OptimizerParams opt;

        const std::map<std::string, std::map<std::string, Setter>> table = {
            {"scenario",
             {
                 {"n_bs", [&](const std::string &v) { sc.n_bs = to_integer<int>(v); }},
                 {"n_ris", [&](const std::string &v) { sc.n_ris = to_integer<int>(v); }},
                 {"n_strong", [&](const std::string &v) { sc.n_strong = to_integer<int>(v); }},
                 {"bs_pos", [&](const std::string &v) { sc.bs_pos = to_vec3(v); }},
                 {"ris_pos", [&](const std::string &v) { sc.ris_pos = to_vec3(v); }},
                 {"user_center", [&](const std::string &v) { sc.user_center = to_vec3(v); }},
                 {"user_radius", [&](const std::string &v) { sc.user_radius = to_double(v); }},
                 {"ptx_dbm", [&](const std::string &v) { sc.ptx_dbm = to_double(v); }},
                 {"noise_dbm", [&](const std::string &v) { sc.noise_dbm = to_double(v); }},
                 {"weak_extra_loss_db", [&](const std::string &v) { sc.weak_extra_loss_db = to_double(v); }},
                 {"direct_extra_loss_db", [&](const std::string &v) { sc.direct_extra_loss_db = to_double(v); }},
                 {"pl_direct", [&](const std::string &v) { sc.pl_direct = to_pathloss(v); }},
                 {"pl_ris_user", [&](const std::string &v) { sc.pl_ris_user = to_pathloss(v); }},
                 {"pl_los", [&](const std::string &v) { sc.pl_los = to_pathloss(v); }},
                 {"aoa", [&](const std::string &v) { sc.aoa = to_double(v); }},
                 {"aod", [&](const std::string &v) { sc.aod = to_double(v); }},
                 {"seed", [&](const std::string &v) { sc.seed = to_integer<std::uint64_t>(v); }},
                 {"freeze_positions", [&](const std::string &v) { sc.freeze_positions = to_bool(v); }},
                 {"power_split",
                  [&](const std::string &v) {
                      if (v == "all_users")
                          sc.power_split = PowerSplit::all_users;
                      else if (v == "strong_users")
                          sc.power_split = PowerSplit::strong_users;
                      else
                          throw std::invalid_argument("expected all_users or strong_users");
                  }},
                 {"xi",
                  [&](const std::string &v) {
                      if (v == "none")
                          sc.xi.reset();
                      else
                          sc.xi = to_double(v);
                  }},
             }},
            {"sweep",
             {
                 {"name", [&](const std::string &v) { plan.name = v; }},
                 {"variable", [&](const std::string &v) { plan.variable = sweep_variable_from_string(v); }},
                 {"values", [&](const std::string &v) { plan.values = to_doubles(v); }},
                 {"reps", [&](const std::string &v) { plan.reps = to_integer<int>(v); }},
                 {"workers", [&](const std::string &v) { plan.workers = to_integer<int>(v); }},
                 {"precoders",
                  [&](const std::string &v) {
                      precoders.clear();
                      for (const auto &s : split_list(v))
                          push_unique(precoders, to_precoder(s));
                  }},
                 {"modes",
                  [&](const std::string &v) {
                      modes.clear();
                      for (const auto &s : split_list(v))
                          push_unique(modes, to_mode(s));
                  }},
             }},
            {"strategy",
             {
                 {"kinds",
                  [&](const std::string &v) {
                      kinds.clear();
                      for (const auto &s : split_list(v))
                          push_unique(kinds, strategy_from_string(s));
                  }},
                 {"max_sweeps", [&](const std::string &v) { opt.max_sweeps = to_integer<int>(v); }},
                 {"rel_tolerance", [&](const std::string &v) { opt.rel_tolerance = to_double(v); }},
                 {"grid_points", [&](const std::string &v) { opt.grid_points = to_integer<int>(v); }},
             }},
        };

        std::map<std::string, int> key_line;
        std::string section;
        std::istringstream in(text);
        std::string raw;
        int lineno = 0;
        while (std::getline(in, raw))
        {
            ++lineno;
            const auto hash = raw.find_first_of("#;");
            const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (line.empty())
                continue;
            if (line.front() == '[')
            {
                if (line.back() != ']')
                    throw ConfigError(lineno, line, "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!table.count(section))
                    throw ConfigError(lineno, section, "unknown section");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(lineno, line, "expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (section.empty())
                throw ConfigError(lineno, key, "key outside of a section");
            const auto &keys = table.at(section);
            const auto it = keys.find(key);
            if (it == keys.end())
                throw ConfigError(lineno, key, "unknown key in [" + section + "]");
            if (key_line.count(key))
                throw ConfigError(lineno, key, "duplicate key (first on line " + std::to_string(key_line[key]) + ")");
            key_line[key] = lineno;
            try
            {
                it->second(value);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(lineno, key, e.what());
            }
        }

        plan.methods.clear();
        for (auto p : precoders)
            for (auto k : kinds)
                for (auto m : modes)
                    plan.methods.push_back({p, {k, opt}, m});
        plan.base_cfg = sc;

        // Range and feasibility checks report "key: message"; attach the line.
        auto rethrow = [&](const std::invalid_argument &e) {
            const std::string what = e.what();
            const auto colon = what.find(": ");
            const std::string key = colon == std::string::npos ? "config" : what.substr(0, colon);
            const std::string msg = colon == std::string::npos ? what : what.substr(colon + 2);
            const auto it = key_line.find(key);
            throw ConfigError(it == key_line.end() ? 0 : it->second, key, msg);
        };
        try
        {
            sc.validate();
            plan.validate();
        }
        catch (const std::invalid_argument &e)
        {
            rethrow(e);
        }
        return out;
    }

    std::string serialize_config(const ParsedConfig &cfg)
    {
        const ScenarioConfig &s = cfg.scenario;
        const SweepPlan &p = cfg.plan;
        std::ostringstream os;
        auto vec3 = [](const Vec3 &v) { return num17(v[0]) + ", " + num17(v[1]) + ", " + num17(v[2]); };
        auto pl = [](const PathlossModel &m) { return num17(m.alpha) + ", " + num17(m.beta); };

        os << "[scenario]\n";
        os << "n_bs = " << s.n_bs << "\n";
        os << "n_ris = " << s.n_ris << "\n";
        os << "n_strong = " << s.n_strong << "\n";
        os << "bs_pos = " << vec3(s.bs_pos) << "\n";
        os << "ris_pos = " << vec3(s.ris_pos) << "\n";
        os << "user_center = " << vec3(s.user_center) << "\n";
        os << "user_radius = " << num17(s.user_radius) << "\n";
        os << "ptx_dbm = " << num17(s.ptx_dbm) << "\n";
        os << "noise_dbm = " << num17(s.noise_dbm) << "\n";
        os << "weak_extra_loss_db = " << num17(s.weak_extra_loss_db) << "\n";
        os << "direct_extra_loss_db = " << num17(s.direct_extra_loss_db) << "\n";
        os << "pl_direct = " << pl(s.pl_direct) << "\n";
        os << "pl_ris_user = " << pl(s.pl_ris_user) << "\n";
        os << "pl_los = " << pl(s.pl_los) << "\n";
        os << "aoa = " << num17(s.aoa) << "\n";
        os << "aod = " << num17(s.aod) << "\n";
        os << "seed = " << s.seed << "\n";
        os << "freeze_positions = " << (s.freeze_positions ? "true" : "false") << "\n";
        os << "power_split = " << (s.power_split == PowerSplit::all_users ? "all_users" : "strong_users") << "\n";
        os << "xi = " << (s.xi ? num17(*s.xi) : std::string("none")) << "\n";

        std::vector<Precoder> precoders;
        std::vector<StrategyKind> kinds;
        std::vector<SEMode> modes;
        for (const auto &m : p.methods)
        {
            push_unique(precoders, m.precoder);
            push_unique(kinds, m.strategy.kind);
            push_unique(modes, m.mode);
        }
        const OptimizerParams opt = p.methods.empty() ? OptimizerParams{} : p.methods.front().strategy.optimizer;

        os << "\n[sweep]\n";
        os << "name = " << p.name << "\n";
        os << "variable = " << to_string(p.variable) << "\n";
        os << "values = " << join<double>(p.values, num17) << "\n";
        os << "reps = " << p.reps << "\n";
        os << "workers = " << p.workers << "\n";
        os << "precoders = "
           << join<Precoder>(precoders, [](const Precoder &x) { return x == Precoder::zf ? "zf" : "dpc"; }) << "\n";
        os << "modes = " << join<SEMode>(modes, [](const SEMode &x) { return std::string(to_string(x)); }) << "\n";

        os << "\n[strategy]\n";
        os << "kinds = " << join<StrategyKind>(kinds, [](const StrategyKind &x) { return std::string(to_string(x)); })
           << "\n";
        os << "max_sweeps = " << opt.max_sweeps << "\n";
        os << "rel_tolerance = " << num17(opt.rel_tolerance) << "\n";
        os << "grid_points = " << opt.grid_points << "\n";
        return os.str();
    }

    std::string git_blob_hash(const std::string &content)
    {
        const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
        unsigned char digest[SHA_DIGEST_LENGTH];
        SHA1(reinterpret_cast<const unsigned char *>(blob.data()), blob.size(), digest);
        static const char *hex = "0123456789abcdef";
        std::string out;
        for (unsigned char c : digest)
        {
            out += hex[c >> 4];
            out += hex[c & 15];
        }
        return out;
    }

    std::string format_number(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.9g", x);
        return buf;
    }

    std::string sweep_csv(const SweepResult &result)
    {
        std::string out = std::string(sweep_csv_header) + "\n";
        for (const auto &r : result.rows)
        {
            out += std::string(to_string(result.variable)) + "," + format_number(r.value) + "," +
                   std::string(to_string(r.method.precoder)) + "," + std::string(to_string(r.method.strategy.kind)) +
                   "," + std::string(to_string(r.method.mode)) + "," + format_number(r.se_mean) + "," +
                   format_number(r.se_std) + "," + format_number(r.se_d_mean) + "," + format_number(r.se_r_mean) +
                   "," + std::to_string(r.reps) + "," + std::to_string(r.flagged) + "\n";
        }
        return out;
    }

    std::string bound_csv(const std::vector<BoundReport> &reports)
    {
        std::string out = std::string(bound_csv_header) + "\n";
        for (const auto &b : reports)
            out += b.name + "," + b.setting + "," + format_number(b.lhs) + "," + format_number(b.rhs) + "," +
                   format_number(b.slack) + "," + (b.satisfied ? "true" : "false") + "\n";
        return out;
    }

    void write_text_file(const std::filesystem::path &path, const std::string &content)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        f << content;
        f.close();
        if (!f)
            throw std::runtime_error("write to '" + path.string() + "' failed");
    }

    void emit_csv(const SweepResult &result, const std::filesystem::path &path)
    {
        write_text_file(path, sweep_csv(result));
    }

    bool emit_bound_report(const std::vector<BoundReport> &reports, const std::filesystem::path &path)
    {
        if (reports.empty())
            throw std::invalid_argument("emit_bound_report: empty report list");
        write_text_file(path, bound_csv(reports));
        for (const auto &b : reports)
            if (!b.satisfied)
                return false;
        return true;
    }

    std::string manifest_json(const RunManifest &m)
    {
        nlohmann::ordered_json j;
        j["config_path"] = m.config_path;
        j["output_dir"] = m.output_dir;
        j["sweep_name"] = m.sweep_name;
        j["config_hash"] = m.config_hash;
        j["seed"] = m.seed;
        j["timestamp"] = m.timestamp;
        j["outputs"] = m.outputs;
        return j.dump(2) + "\n";
    }

    void write_manifest(const RunManifest &m, const std::filesystem::path &path)
    {
        write_text_file(path, manifest_json(m));
    }

    std::string utc_timestamp()
    {
        const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }
}
