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

#ifndef RISMIMO_LINALG_HPP
#define RISMIMO_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace rismimo
{
    using cplx = std::complex<double>;
    using CMat = Eigen::MatrixXcd;
    using CVec = Eigen::VectorXcd;
    using RVec = Eigen::VectorXd;

    // Raised when an input violates a numerical precondition (unnormalized
    // direction, rank deficiency, unreachable weak user, ...).
    class NumericalError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    namespace linalg
    {
        // Singular values below this fraction of the largest are treated as zero.
        inline constexpr double rank_tolerance = 1e-10;

        // Condition number above which C_s is considered singular.
        inline constexpr double singular_condition = 1e12;

        // Throws std::invalid_argument if any entry is NaN or Inf.
        void require_finite(const CMat &A, const std::string &what);
        void require_finite(const CVec &v, const std::string &what);

        // Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
        // The phase of every eigenvector is fixed so that its largest-magnitude
        // entry is real and positive (first such entry on ties).
        struct HermitianEig
        {
            RVec values;  // descending
            CMat vectors; // orthonormal columns, vectors.col(k) <-> values(k)
        };

        HermitianEig hermitian_eig(const CMat &A);

        // Thin SVD A = U diag(s) V^H with s descending, phase fixed on V as for
        // hermitian_eig.
        struct ThinSVD
        {
            CMat U;
            RVec s;
            CMat V;
        };

        ThinSVD thin_svd(const CMat &A);

        // P = I - b b^H for a unit-norm b (tolerance 1e-12 on the norm).
        CMat orth_projector(const CVec &b);

        // P = M^H (M M^H)^{-1} M, the projector onto range(M^H).
        // Requires full row rank (smallest singular value > rank_tolerance * largest).
        CMat range_projector(const CMat &M);

        // Closed-form inverse of the (K+1)x(K+1) Hermitian matrix
        //
        //     [ C_s + d_s d_s^H / g   d_s ]
        //     [ d_s^H                 g   ]
        //
        // which is the channel Gram matrix H H^H when d_s = D_s theta_bar (h_c,K+1^H theta)^*
        // and g = |h_c,K+1^H theta|^2. C_s must be positive definite and g > 0.
        CMat gram_block_inverse(const CMat &C_s, const CVec &d_s, double g);

        // Assembles the Gram matrix that gram_block_inverse inverts.
        CMat assemble_block_gram(const CMat &C_s, const CVec &d_s, double g);

        // Reciprocal condition estimate from the eigenvalues of a Hermitian PSD matrix:
        // lambda_min / lambda_max (0 for the zero matrix).
        double hermitian_rcond(const RVec &eigenvalues_desc);

        // log2 det(A) for Hermitian PD A via Cholesky; -inf if A is not PD.
        double log2det_hpd(const CMat &A);

        // Quadratic form x^H A^{-1} x for Hermitian PD A.
        double inv_quadratic_form(const CMat &A, const CVec &x);

        // Frobenius-relative difference ||A - B||_F / ||B||_F (absolute if B = 0).
        double rel_frobenius(const CMat &A, const CMat &B);
    }
}

#endif
