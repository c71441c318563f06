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

#include "rismimo/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace rismimo::linalg
{
    namespace
    {
        // Rotate each column so that its largest-magnitude entry is real positive.
        void fix_column_phases(CMat &V)
        {
            for (Eigen::Index c = 0; c < V.cols(); ++c)
            {
                Eigen::Index imax = 0;
                double amax = -1.0;
                for (Eigen::Index r = 0; r < V.rows(); ++r)
                {
                    const double a = std::abs(V(r, c));
                    if (a > amax * (1.0 + 1e-12))
                    {
                        amax = a;
                        imax = r;
                    }
                }
                if (amax > 0.0)
                {
                    const cplx rot = std::conj(V(imax, c)) / amax;
                    V.col(c) *= rot;
                    V(imax, c) = cplx(std::abs(V(imax, c)), 0.0);
                }
            }
        }
    }

    void require_finite(const CMat &A, const std::string &what)
    {
        if (!A.allFinite())
            throw std::invalid_argument(what + ": non-finite entry");
    }

    void require_finite(const CVec &v, const std::string &what)
    {
        if (!v.allFinite())
            throw std::invalid_argument(what + ": non-finite entry");
    }

    HermitianEig hermitian_eig(const CMat &A)
    {
        if (A.rows() != A.cols())
            throw std::invalid_argument("hermitian_eig: matrix must be square");
        require_finite(A, "hermitian_eig");

        // Symmetrize to remove round-off asymmetry before the solver reads the lower triangle.
        const CMat Ah = 0.5 * (A + A.adjoint());
        Eigen::SelfAdjointEigenSolver<CMat> es(Ah);
        if (es.info() != Eigen::Success)
            throw NumericalError("hermitian_eig: eigensolver did not converge");

        const Eigen::Index n = A.rows();
        HermitianEig out;
        out.values.resize(n);
        out.vectors.resize(n, n);
        for (Eigen::Index k = 0; k < n; ++k)
        {
            out.values(k) = es.eigenvalues()(n - 1 - k);
            out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
        }
        fix_column_phases(out.vectors);
        return out;
    }

    ThinSVD thin_svd(const CMat &A)
    {
        require_finite(A, "thin_svd");
        Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        ThinSVD out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

        // Same phase convention as hermitian_eig, applied to V and mirrored on U
        // so that U diag(s) V^H is unchanged.
        for (Eigen::Index c = 0; c < out.V.cols(); ++c)
        {
            Eigen::Index imax = 0;
            out.V.col(c).cwiseAbs().maxCoeff(&imax);
            const double a = std::abs(out.V(imax, c));
            if (a > 0.0)
            {
                const cplx rot = std::conj(out.V(imax, c)) / a;
                out.V.col(c) *= rot;
                out.U.col(c) *= rot;
            }
        }
        return out;
    }

    CMat orth_projector(const CVec &b)
    {
        require_finite(b, "orth_projector");
        if (std::abs(b.norm() - 1.0) > 1e-12)
            throw NumericalError("unnormalized direction");
        const Eigen::Index n = b.size();
        return CMat::Identity(n, n) - b * b.adjoint();
    }

    CMat range_projector(const CMat &M)
    {
        require_finite(M, "range_projector");
        if (M.rows() == 0 || M.rows() > M.cols())
            throw NumericalError("rank deficient");
        Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeThinV);
        const RVec &s = svd.singularValues();
        if (s(0) == 0.0 || s(s.size() - 1) <= rank_tolerance * s(0))
            throw NumericalError("rank deficient");
        const CMat &V = svd.matrixV();
        CMat P = V * V.adjoint();
        return 0.5 * (P + P.adjoint());
    }

    CMat gram_block_inverse(const CMat &C_s, const CVec &d_s, double g)
    {
        if (!(g > 0.0))
            throw NumericalError("weak user unreachable");
        const Eigen::Index K = C_s.rows();
        if (C_s.cols() != K || d_s.size() != K)
            throw std::invalid_argument("gram_block_inverse: dimension mismatch");
        require_finite(C_s, "gram_block_inverse");
        require_finite(d_s, "gram_block_inverse");

        Eigen::LLT<CMat> llt(0.5 * (C_s + C_s.adjoint()));
        if (llt.info() != Eigen::Success)
            throw NumericalError("direct channels rank-deficient after projection");

        const CMat Cinv = llt.solve(CMat::Identity(K, K));
        const CVec Cinv_d = llt.solve(d_s);
        const double q = std::real(d_s.dot(Cinv_d)); // d_s^H C_s^{-1} d_s

        CMat out(K + 1, K + 1);
        out.topLeftCorner(K, K) = 0.5 * (Cinv + Cinv.adjoint());
        out.topRightCorner(K, 1) = -Cinv_d / g;
        out.bottomLeftCorner(1, K) = -Cinv_d.adjoint() / g;
        out(K, K) = cplx((1.0 + q / g) / g, 0.0);
        return out;
    }

    CMat assemble_block_gram(const CMat &C_s, const CVec &d_s, double g)
    {
        const Eigen::Index K = C_s.rows();
        CMat G(K + 1, K + 1);
        G.topLeftCorner(K, K) = C_s + d_s * d_s.adjoint() / g;
        G.topRightCorner(K, 1) = d_s;
        G.bottomLeftCorner(1, K) = d_s.adjoint();
        G(K, K) = cplx(g, 0.0);
        return G;
    }

    double hermitian_rcond(const RVec &ev)
    {
        if (ev.size() == 0)
            return 1.0;
        const double hi = ev.maxCoeff();
        const double lo = ev.minCoeff();
        if (hi <= 0.0)
            return 0.0;
        return std::max(lo, 0.0) / hi;
    }

    double log2det_hpd(const CMat &A)
    {
        Eigen::LLT<CMat> llt(0.5 * (A + A.adjoint()));
        if (llt.info() != Eigen::Success)
            return -std::numeric_limits<double>::infinity();
        double acc = 0.0;
        const CMat &L = llt.matrixLLT();
        for (Eigen::Index i = 0; i < L.rows(); ++i)
            acc += 2.0 * std::log2(std::real(L(i, i)));
        return acc;
    }

    double inv_quadratic_form(const CMat &A, const CVec &x)
    {
        Eigen::LLT<CMat> llt(0.5 * (A + A.adjoint()));
        if (llt.info() != Eigen::Success)
            throw NumericalError("inv_quadratic_form: matrix not positive definite");
        return std::real(x.dot(llt.solve(x)));
    }

    double rel_frobenius(const CMat &A, const CMat &B)
    {
        const double nb = B.norm();
        const double d = (A - B).norm();
        return nb > 0.0 ? d / nb : d;
    }
}
