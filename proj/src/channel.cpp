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

#include "rismimo/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rismimo
{
    void ScenarioConfig::validate() const
    {
        auto fail = [](const std::string &key, const std::string &msg)
        { throw std::invalid_argument(key + ": " + msg); };

        if (n_strong < 1)
            fail("n_strong", "must be at least 1");
        if (n_bs < n_strong + 1)
            fail("n_bs", "zero-forcing needs n_bs >= n_strong + 1 (got n_bs = " + std::to_string(n_bs) +
                             ", n_strong = " + std::to_string(n_strong) + ")");
        if (n_ris < 1)
            fail("n_ris", "must be at least 1");
        if (!(user_radius > 0.0) || !std::isfinite(user_radius))
            fail("user_radius", "must be positive");
        if (!std::isfinite(ptx_dbm))
            fail("ptx_dbm", "must be finite");
        if (!std::isfinite(noise_dbm))
            fail("noise_dbm", "must be finite");
        if (std::isnan(weak_extra_loss_db) || weak_extra_loss_db < 0.0)
            fail("weak_extra_loss_db", "must be non-negative");
        if (!std::isfinite(direct_extra_loss_db) || direct_extra_loss_db < 0.0)
            fail("direct_extra_loss_db", "must be non-negative and finite");
        if (xi && (!std::isfinite(*xi) || *xi < 0.0))
            fail("xi", "must be non-negative and finite");
        for (const auto &p : {bs_pos, ris_pos, user_center})
            for (double c : p)
                if (!std::isfinite(c))
                    fail("position", "non-finite coordinate");
    }

    double ScenarioConfig::p_bar_for(double ptx_dbm, int n_strong, PowerSplit split)
    {
        const double users = split == PowerSplit::all_users ? n_strong + 1.0 : double(n_strong);
        return db_to_linear(ptx_dbm) / users;
    }

    double ScenarioConfig::p_bar() const { return p_bar_for(ptx_dbm, n_strong, power_split); }

    double ScenarioConfig::noise_mw() const { return db_to_linear(noise_dbm); }

    double pathloss_db(const PathlossModel &model, double distance_m)
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("pathloss_db: distance must be positive");
        return model.alpha + model.beta * std::log10(distance_m);
    }

    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    double distance(const Vec3 &p, const Vec3 &q)
    {
        const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
        return std::sqrt(dx * dx + dy * dy + dz * dz);
    }

    CVec steering_vector(int n, double angle, SteeringNorm norm)
    {
        if (n < 1)
            throw std::invalid_argument("steering_vector: n must be at least 1");
        CVec v(n);
        const double c = std::cos(angle);
        for (int m = 0; m < n; ++m)
            v(m) = std::polar(1.0, pi * m * c);
        if (norm == SteeringNorm::unit)
            v /= std::sqrt(double(n));
        return v;
    }

    std::vector<Vec3> place_users(const ScenarioConfig &cfg, RngStream &rng)
    {
        std::vector<Vec3> pos(cfg.n_strong + 1);
        for (auto &p : pos)
        {
            const double r = cfg.user_radius * std::sqrt(rng.uniform());
            const double phi = 2.0 * pi * rng.uniform();
            p = {cfg.user_center[0] + r * std::cos(phi), cfg.user_center[1] + r * std::sin(phi), cfg.user_center[2]};
        }
        return pos;
    }

    LinkGains link_gains(const ScenarioConfig &cfg, const std::vector<Vec3> &user_pos)
    {
        const int users = cfg.n_strong + 1;
        if (static_cast<int>(user_pos.size()) != users)
            throw std::invalid_argument("link_gains: expected one position per user");

        const double noise = cfg.noise_mw();
        LinkGains g;
        g.direct.resize(users);
        g.reflect.resize(users);
        for (int k = 0; k < users; ++k)
        {
            double loss = pathloss_db(cfg.pl_direct, distance(cfg.bs_pos, user_pos[k])) + cfg.direct_extra_loss_db;
            if (k == cfg.n_strong)
                loss += cfg.weak_extra_loss_db;
            g.direct(k) = std::isinf(loss) ? 0.0 : db_to_linear(-loss) / noise;
            g.reflect(k) = db_to_linear(-pathloss_db(cfg.pl_ris_user, distance(cfg.ris_pos, user_pos[k]))) / noise;
        }
        g.bs_ris = db_to_linear(-pathloss_db(cfg.pl_los, distance(cfg.bs_pos, cfg.ris_pos)));
        return g;
    }

    CMat cascade(const CMat &H_r, const CVec &a, double L_G, int n_bs)
    {
        return std::sqrt(L_G * n_bs) * (H_r * a.asDiagonal());
    }

    ChannelRealization sample_realization(const ScenarioConfig &cfg, RngStream &rng, const std::vector<Vec3> &user_pos)
    {
        cfg.validate();
        const int K = cfg.n_strong;
        ChannelRealization r;
        r.user_pos = user_pos;
        r.gains = link_gains(cfg, user_pos);
        r.L_G = r.gains.bs_ris;

        r.H_d_strong.resize(K, cfg.n_bs);
        for (int k = 0; k < K; ++k)
            r.H_d_strong.row(k) = rng.complex_normal_vector(cfg.n_bs, r.gains.direct(k)).transpose();

        // Always consume the weak user's draws so the stream layout does not depend
        // on the attenuation value.
        r.h_d_weak = rng.complex_normal_vector(cfg.n_bs, 1.0) * std::sqrt(r.gains.direct(K));

        r.H_r.resize(K + 1, cfg.n_ris);
        for (int k = 0; k <= K; ++k)
            r.H_r.row(k) = rng.complex_normal_vector(cfg.n_ris, r.gains.reflect(k)).transpose();

        r.a = steering_vector(cfg.n_ris, cfg.aoa, SteeringNorm::sqrt_n);
        r.b = steering_vector(cfg.n_bs, cfg.aod, SteeringNorm::unit);
        r.H_c = cascade(r.H_r, r.a, r.L_G, cfg.n_bs);
        return r;
    }

    ChannelRealization sample_realization(const ScenarioConfig &cfg, std::uint64_t index)
    {
        RngStream pos_rng(cfg.seed, cfg.freeze_positions ? 0 : index, StreamTag::positions);
        RngStream ch_rng(cfg.seed, index, StreamTag::channel);
        const auto pos = place_users(cfg, pos_rng);
        return sample_realization(cfg, ch_rng, pos);
    }

    CMat ChannelRealization::direct_matrix(bool ideal_weak) const
    {
        const int K = n_strong();
        CMat H(K + 1, n_bs());
        H.topRows(K) = H_d_strong;
        if (ideal_weak)
            H.row(K).setZero();
        else
            H.row(K) = h_d_weak.adjoint();
        return H;
    }

    CMat ChannelRealization::composite(const CVec &theta, bool ideal_weak) const
    {
        if (theta.size() != n_ris())
            throw std::invalid_argument("composite: phase vector has wrong length");
        return direct_matrix(ideal_weak) + (H_c * theta) * b.adjoint();
    }

    ChannelRealization ChannelRealization::with_direction(const CVec &new_b) const
    {
        if (new_b.size() != n_bs())
            throw std::invalid_argument("with_direction: wrong length");
        if (std::abs(new_b.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("unnormalized direction");
        ChannelRealization out = *this;
        out.b = new_b;
        return out;
    }

    void ChannelRealization::validate() const
    {
        linalg::require_finite(H_d_strong, "H_d_strong");
        linalg::require_finite(h_d_weak, "h_d_weak");
        linalg::require_finite(H_r, "H_r");
        linalg::require_finite(H_c, "H_c");
        if (std::abs(b.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("realization: ||b|| != 1");
        if (std::abs(a.squaredNorm() - double(a.size())) > 1e-9)
            throw std::invalid_argument("realization: ||a||^2 != N_R");
        const CMat expect = cascade(H_r, a, L_G, n_bs());
        if ((expect - H_c).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, expect.cwiseAbs().maxCoeff()))
            throw std::invalid_argument("realization: H_c inconsistent with H_r, a, L_G");
    }

    CovarianceSet build_covariances(const LinkGains &gains, int n_strong, int n_bs, const CVec &a)
    {
        const Eigen::Index n_ris = a.size();
        CovarianceSet cov;
        for (int k = 0; k < n_strong; ++k)
            cov.R_d.push_back(gains.direct(k) * CMat::Identity(n_bs, n_bs));
        const CVec ac = a.conjugate();
        for (int k = 0; k <= n_strong; ++k)
        {
            cov.R_r.push_back(gains.reflect(k) * CMat::Identity(n_ris, n_ris));
            cov.R_c.push_back(ac.asDiagonal() * cov.R_r.back() * a.asDiagonal() * (gains.bs_ris * n_bs));
        }
        return cov;
    }
}
