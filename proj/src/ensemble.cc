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

#include "qsd/ensemble.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qsd/error.h"

namespace qsd {

namespace {

constexpr double kStructureTol = 1e-12;
constexpr double kNegativeEigenTol = 1e-10;

std::string describe(const char *what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (" << value << ")";
    return os.str();
}

}  // namespace

double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Ensemble Ensemble::from_gram(CMatrix gram, RVector priors) {
    const auto n = gram.rows();
    if (n < 1 || gram.cols() != n) {
        throw Error(ErrorCode::invalid_input, "Gram matrix must be square and non-empty");
    }
    if (priors.size() != n) {
        throw Error(ErrorCode::invalid_input, "priors length does not match the Gram matrix");
    }
    if (!gram.allFinite() || !priors.allFinite()) {
        throw Error(ErrorCode::invalid_input, "non-finite entry in ensemble");
    }
    double herm = max_abs(gram - gram.adjoint());
    if (herm > kStructureTol) {
        throw Error(ErrorCode::invalid_input, describe("Gram matrix is not Hermitian", herm));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(gram(j, j) - 1.0) > kStructureTol) {
            throw Error(ErrorCode::invalid_input, describe("Gram diagonal is not 1", std::abs(gram(j, j))));
        }
    }
    // Symmetrize away sub-tolerance asymmetry so later eigensolves see an exact Hermitian matrix.
    gram = (0.5 * (gram + gram.adjoint())).eval();
    for (Eigen::Index j = 0; j < n; ++j) {
        gram(j, j) = 1.0;
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::numerical_error, "eigendecomposition of the Gram matrix failed");
    }
    double lambda_min = eig.eigenvalues()(0);
    if (lambda_min < -kNegativeEigenTol) {
        throw Error(ErrorCode::not_positive_semidefinite, describe("smallest Gram eigenvalue", lambda_min));
    }

    if ((priors.array() < 0.0).any()) {
        throw Error(ErrorCode::invalid_prior, "negative prior probability");
    }
    if (std::abs(priors.sum() - 1.0) > kStructureTol) {
        throw Error(ErrorCode::invalid_prior, describe("priors do not sum to 1", priors.sum()));
    }
    return Ensemble(std::move(gram), std::move(priors));
}

bool Ensemble::has_equal_priors(double tol) const {
    const double uniform = 1.0 / size();
    return ((priors_.array() - uniform).abs() <= tol).all();
}

Ensemble gram_binary(Complex overlap, double eta1) {
    if (!std::isfinite(overlap.real()) || !std::isfinite(overlap.imag()) || std::abs(overlap) > 1.0 + kStructureTol) {
        throw Error(ErrorCode::invalid_overlap, describe("|overlap| must not exceed 1", std::abs(overlap)));
    }
    if (!(eta1 >= 0.0 && eta1 <= 1.0)) {
        throw Error(ErrorCode::invalid_prior, describe("eta1 must lie in [0, 1]", eta1));
    }
    CMatrix gram(2, 2);
    gram << 1.0, overlap, std::conj(overlap), 1.0;
    RVector priors(2);
    priors << eta1, 1.0 - eta1;
    return Ensemble::from_gram(std::move(gram), std::move(priors));
}

Ensemble gram_symmetric(int n, double s) {
    if (n < 2) {
        throw Error(ErrorCode::invalid_input, "symmetric ensembles need n >= 2");
    }
    const double lower = -1.0 / (n - 1);
    if (!(s >= lower - kStructureTol && s <= 1.0 + kStructureTol)) {
        throw Error(ErrorCode::not_positive_semidefinite, describe("overlap outside [-1/(n-1), 1]", s));
    }
    CMatrix gram = CMatrix::Constant(n, n, Complex(s, 0.0));
    gram.diagonal().setOnes();
    return Ensemble::from_gram(std::move(gram), RVector::Constant(n, 1.0 / n));
}

Ensemble gram_psk(int n, double alpha_sq) {
    if (n < 2) {
        throw Error(ErrorCode::invalid_input, "PSK ensembles need n >= 2");
    }
    if (!(alpha_sq >= 0.0) || !std::isfinite(alpha_sq)) {
        throw Error(ErrorCode::invalid_intensity, describe("alpha_sq must be finite and >= 0", alpha_sq));
    }
    CMatrix gram(n, n);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            int shift = ((l - j) % n + n) % n;
            Complex w = std::polar(1.0, 2.0 * std::numbers::pi * shift / n);
            gram(j, l) = std::exp(-alpha_sq * (1.0 - w));
        }
        gram(j, j) = 1.0;
    }
    return Ensemble::from_gram(std::move(gram), RVector::Constant(n, 1.0 / n));
}

CMatrix SpectralFactor::sqrt_isometry() const {
    if (rank == factor.rows()) {
        return CMatrix::Identity(rank, rank);
    }
    return basis.adjoint();
}

SpectralFactor spectral_factor(const CMatrix &gram, double rank_tol) {
    const auto n = gram.rows();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::numerical_error, "eigendecomposition of the Gram matrix failed");
    }
    RVector lambda = eig.eigenvalues();
    if (lambda(0) < -kNegativeEigenTol) {
        throw Error(ErrorCode::not_positive_semidefinite, describe("smallest Gram eigenvalue", lambda(0)));
    }
    lambda = lambda.cwiseMax(0.0);
    const CMatrix &q = eig.eigenvectors();
    const double cutoff = rank_tol * lambda(n - 1);

    SpectralFactor out;
    out.eigenvalues = lambda;
    // Eigenvalues at or below the cutoff are roundoff; their square roots
    // (~1e-8 for 1e-16) would otherwise leak into the principal root.
    RVector root = (lambda.array() > cutoff).select(lambda.cwiseSqrt(), 0.0);
    out.sqrt = q * root.asDiagonal() * q.adjoint();

    // Eigenvalues are ascending, so the support is a trailing block.
    Eigen::Index first = 0;
    while (first < n && lambda(first) <= cutoff) {
        ++first;
    }
    out.rank = static_cast<int>(n - first);
    out.basis = q.rightCols(out.rank);
    if (out.rank == n) {
        out.factor = out.sqrt;
    } else {
        out.factor = out.basis * root.tail(out.rank).asDiagonal();
    }
    return out;
}

SpectralFactor spectral_factor(const Ensemble &ensemble, double rank_tol) {
    return spectral_factor(ensemble.gram(), rank_tol);
}

RVector circulant_eigenvalues(const CVector &first_row) {
    const auto n = first_row.size();
    RVector out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (Eigen::Index m = 0; m < n; ++m) {
            double turn = static_cast<double>((k * m) % n) / static_cast<double>(n);
            acc += first_row(m) * std::polar(1.0, -2.0 * std::numbers::pi * turn);
        }
        if (std::abs(acc.imag()) > 1e-8) {
            throw Error(ErrorCode::not_circulant_hermitian, describe("complex circulant eigenvalue", acc.imag()));
        }
        if (acc.real() < -kNegativeEigenTol) {
            throw Error(ErrorCode::not_positive_semidefinite, describe("negative circulant eigenvalue", acc.real()));
        }
        out(k) = std::max(acc.real(), 0.0);
    }
    return out;
}

}  // namespace qsd
