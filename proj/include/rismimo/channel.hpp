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

#ifndef RISMIMO_CHANNEL_HPP
#define RISMIMO_CHANNEL_HPP

#include "rismimo/linalg.hpp"
#include "rismimo/rng.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace rismimo
{
    inline constexpr double pi = 3.14159265358979323846;

    using Vec3 = std::array<double, 3>;

    // Log-distance pathloss L_dB = alpha + beta * log10(d / m).
    struct PathlossModel
    {
        double alpha = 0.0;
        double beta = 0.0;
        bool operator==(const PathlossModel &) const = default;
    };

    // How the total transmit power is split into the per-user power p_bar.
    enum class PowerSplit
    {
        all_users,    // p_bar = P_Tx / (K + 1)
        strong_users, // p_bar = P_Tx / K
    };

    struct ScenarioConfig
    {
        int n_bs = 12;    // BS antennas N_B
        int n_ris = 64;   // RIS elements N_R
        int n_strong = 3; // strong users K; the weak user is index K

        Vec3 bs_pos = {0.0, 0.0, 10.0};
        Vec3 ris_pos = {100.0, 0.0, 10.0};
        Vec3 user_center = {95.0, 10.0, 1.5};
        double user_radius = 5.0;

        double ptx_dbm = 40.0;
        double noise_dbm = -110.0;
        double weak_extra_loss_db = 60.0;  // may be +inf: weak direct channel exactly zero
        double direct_extra_loss_db = 0.0; // applied to every direct BS-user link

        PathlossModel pl_direct = {35.1, 36.7};
        PathlossModel pl_ris_user = {37.51, 22.0};
        PathlossModel pl_los = {30.0, 22.0};

        double aoa = pi / 2.0; // RIS-side steering angle
        double aod = pi / 2.0; // BS-side steering angle

        std::uint64_t seed = 1;
        bool freeze_positions = false;
        PowerSplit power_split = PowerSplit::all_users;

        // When set, the BS-RIS direction b is replaced per realization by the
        // orthogonality construction with this xi.
        std::optional<double> xi;

        bool operator==(const ScenarioConfig &) const = default;

        // Throws std::invalid_argument naming the offending field.
        void validate() const;

        // Per-user power in noise-normalized units (channels are divided by sigma).
        double p_bar() const;
        static double p_bar_for(double ptx_dbm, int n_strong, PowerSplit split);

        // Noise power in mW.
        double noise_mw() const;
    };

    // Linear pathloss of all links for one user placement, already divided by the
    // noise power (so a channel with this variance has unit-noise SNR scaling).
    struct LinkGains
    {
        RVec direct;  // K+1 entries, includes the extra direct/weak-user losses
        RVec reflect; // K+1 entries, RIS-user links
        double bs_ris = 0.0; // L_G, physical (not noise-normalized)
    };

    // One draw of every channel. Row conventions follow the stacked-matrix form:
    // row k of H_d_strong is h_d,k^H, row k of H_r is h_r,k^H, row k of H_c is h_c,k^H.
    struct ChannelRealization
    {
        CMat H_d_strong; // K x N_B
        CVec h_d_weak;   // N_B, the column h_d,K+1 (attenuated, zero if the extra loss is infinite)
        CMat H_r;        // (K+1) x N_R
        CVec a;          // N_R, ||a||^2 = N_R
        CVec b;          // N_B, ||b|| = 1
        double L_G = 0.0;
        CMat H_c; // (K+1) x N_R, H_c row k = sqrt(L_G N_B) h_r,k^H diag(a)
        LinkGains gains;
        std::vector<Vec3> user_pos;

        int n_strong() const { return static_cast<int>(H_d_strong.rows()); }
        int n_bs() const { return static_cast<int>(H_d_strong.cols()); }
        int n_ris() const { return static_cast<int>(H_r.cols()); }

        // Column vector h_c,k (so that h_c,k^H theta = cascaded(k).dot(theta)).
        CVec cascaded(int k) const { return H_c.row(k).adjoint(); }
        CVec weak_cascaded() const { return cascaded(n_strong()); }

        // Stacked direct channels H_d, (K+1) x N_B; ideal_weak zeroes the last row.
        CMat direct_matrix(bool ideal_weak) const;

        // Composite channel H = H_d + H_c theta b^H.
        CMat composite(const CVec &theta, bool ideal_weak) const;

        // Copy with a different BS-RIS direction; H_c does not depend on b.
        ChannelRealization with_direction(const CVec &new_b) const;

        // Checks the stored invariants (norms of a and b, cascaded-channel consistency).
        void validate() const;
    };

    // Covariances of the Rayleigh channels in noise-normalized units.
    struct CovarianceSet
    {
        std::vector<CMat> R_d; // K direct-channel covariances (N_B x N_B)
        std::vector<CMat> R_r; // K+1 RIS-user covariances (N_R x N_R)
        std::vector<CMat> R_c; // K+1 cascaded covariances diag(a*) R_r diag(a) L_G N_B
    };

    enum class SteeringNorm
    {
        unit,   // ||v|| = 1
        sqrt_n, // ||v||^2 = n
    };

    double pathloss_db(const PathlossModel &model, double distance_m);
    double db_to_linear(double db);
    double distance(const Vec3 &p, const Vec3 &q);

    // Half-wavelength ULA response exp(j pi m cos(angle)), m = 0..n-1.
    CVec steering_vector(int n, double angle, SteeringNorm norm);

    // Uniform placement in the horizontal disk around cfg.user_center.
    std::vector<Vec3> place_users(const ScenarioConfig &cfg, RngStream &rng);

    LinkGains link_gains(const ScenarioConfig &cfg, const std::vector<Vec3> &user_pos);

    ChannelRealization sample_realization(const ScenarioConfig &cfg, RngStream &channel_rng,
                                          const std::vector<Vec3> &user_pos);

    // Draws realization `index` of the scenario: positions from the positions
    // substream (index 0 when cfg.freeze_positions), fading from the channel substream.
    ChannelRealization sample_realization(const ScenarioConfig &cfg, std::uint64_t index);

    // Cascaded matrix with row k = sqrt(L_G N_B) h_r,k^H diag(a).
    CMat cascade(const CMat &H_r, const CVec &a, double L_G, int n_bs);

    CovarianceSet build_covariances(const LinkGains &gains, int n_strong, int n_bs, const CVec &a);
}

#endif
