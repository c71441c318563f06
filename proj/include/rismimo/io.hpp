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

#ifndef RISMIMO_IO_HPP
#define RISMIMO_IO_HPP

#include "rismimo/bounds.hpp"
#include "rismimo/montecarlo.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace rismimo
{
    // Parse failure; what() reads "line N: key: message" (line 0 when the key was
    // not present in the text and the failing value is a default).
    class ConfigError : public std::invalid_argument
    {
    public:
        ConfigError(int line, const std::string &key, const std::string &msg);
        int line() const { return line_; }
        const std::string &key() const { return key_; }

    private:
        int line_;
        std::string key_;
    };

    struct ParsedConfig
    {
        ScenarioConfig scenario;
        SweepPlan plan; // plan.base_cfg == scenario
        bool operator==(const ParsedConfig &) const = default;
    };

    // INI text with sections [scenario], [sweep], [strategy]; '#' and ';' start
    // comments. Omitted keys keep their defaults; unknown keys are errors.
    //
    // [scenario] n_bs n_ris n_strong bs_pos ris_pos user_center user_radius ptx_dbm
    //            noise_dbm weak_extra_loss_db direct_extra_loss_db pl_direct
    //            pl_ris_user pl_los aoa aod seed freeze_positions power_split xi
    // [sweep]    name variable values reps workers precoders modes
    // [strategy] kinds max_sweeps rel_tolerance grid_points
    //
    // Vectors are comma separated. Methods are all combinations of precoders x
    // kinds x modes, in that nesting order.
    ParsedConfig parse_config(const std::string &text);

    // Writes every key; parse_config(serialize_config(c)) == c.
    std::string serialize_config(const ParsedConfig &cfg);

    // Git-style blob hash: SHA-1 over "blob <size>\0" followed by the content.
    std::string git_blob_hash(const std::string &content);

    inline const char *sweep_csv_header =
        "sweep_var,value,precoder,strategy,mode,se_mean,se_std,se_d_mean,se_r_mean,reps,flagged";
    inline const char *bound_csv_header = "bound_name,x_or_setting,lhs,rhs,slack,satisfied";

    // Numbers with 9 significant digits.
    std::string format_number(double x);

    std::string sweep_csv(const SweepResult &result);
    std::string bound_csv(const std::vector<BoundReport> &reports);

    // Throws std::runtime_error when the file cannot be written.
    void write_text_file(const std::filesystem::path &path, const std::string &content);

    void emit_csv(const SweepResult &result, const std::filesystem::path &path);

    // Returns true when every report is satisfied. Throws on an empty list.
    bool emit_bound_report(const std::vector<BoundReport> &reports, const std::filesystem::path &path);

    struct RunManifest
    {
        std::string config_path;
        std::string output_dir;
        std::string sweep_name;
        std::string config_hash;
        std::uint64_t seed = 0;
        std::string timestamp; // UTC, ISO 8601
        std::vector<std::string> outputs;
    };

    std::string manifest_json(const RunManifest &m);
    void write_manifest(const RunManifest &m, const std::filesystem::path &path);

    std::string utc_timestamp();
}

#endif
