// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qsd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Largest entrywise modulus of a complex matrix.
double max_abs(const CMatrix &m);

/// N pure states described only through their Gram matrix
/// G(j, l) = <psi_j|psi_l> and their prior probabilities.
///
/// Instances are always valid: Hermitian within 1e-12, unit diagonal within
/// 1e-12, smallest eigenvalue >= -1e-10, priors nonnegative and summing to 1
/// within 1e-12.
class Ensemble {
   public:
    /// Validates and takes ownership. Throws qsd::Error on any violation.
    static Ensemble from_gram(CMatrix gram, RVector priors);

    int size() const {
        return static_cast<int>(gram_.rows());
    }
    const CMatrix &gram() const {
        return gram_;
    }
    const RVector &priors() const {
        return priors_;
    }
    bool has_equal_priors(double tol = 1e-12) const;

   private:
    Ensemble(CMatrix gram, RVector priors) : gram_(std::move(gram)), priors_(std::move(priors)) {}

    CMatrix gram_;
    RVector priors_;
};

/// Two states with the given overlap <psi_1|psi_2> and priors (eta1, 1 - eta1).
Ensemble gram_binary(Complex overlap, double eta1);

/// N states with all pairwise overlaps equal to the real number s, equal priors.
/// Valid for -1/(n-1) <= s <= 1; the lower edge is rank n-1.
Ensemble gram_symmetric(int n, double s);

/// N phase-shift-keyed coherent states |e^{2 pi i j/N} alpha>, |alpha|^2 = alpha_sq,
/// equal priors. G(j, l) = exp(-alpha_sq (1 - w^(l-j))), w = e^{2 pi i/N}.
Ensemble gram_psk(int n, double alpha_sq);

struct SpectralFactor {
    int rank = 0;
    /// N x rank with factor * factor^dagger = G. When G has full rank this is
    /// the Hermitian square root itself, otherwise basis * sqrt(eigenvalues).
    CMatrix factor;
    /// Principal PSD square root S with S * S = G.
    CMatrix sqrt;
    /// N x rank orthonormal eigenvectors spanning the support of G.
    CMatrix basis;
    /// All N eigenvalues, ascending, clamped at zero.
    RVector eigenvalues;

    /// Row-orthonormal rank x N matrix V0 with factor * V0 = sqrt.
    CMatrix sqrt_isometry() const;
};

SpectralFactor spectral_factor(const CMatrix &gram, double rank_tol = 1e-12);
SpectralFactor spectral_factor(const Ensemble &ensemble, double rank_tol = 1e-12);

/// Eigenvalues of the Hermitian circulant matrix with the given first row,
/// lambda_k = sum_m row[m] e^{-2 pi i k m / N}, in index order k = 0..N-1.
RVector circulant_eigenvalues(const CVector &first_row);

}  // namespace qsd
