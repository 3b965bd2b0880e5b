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

#include "qsd/coupling.h"

#include <cmath>

#include "qsd/closed_form.h"
#include "qsd/error.h"

namespace qsd {

CouplingMatrix::CouplingMatrix(CMatrix amplitudes, Ensemble ensemble)
    : c_(std::move(amplitudes)), ensemble_(std::move(ensemble)) {
    if (c_.rows() != ensemble_.size() || c_.cols() != ensemble_.size()) {
        throw Error(ErrorCode::invalid_coupling, "coupling must be N x N for an N-state ensemble");
    }
    if (!c_.allFinite()) {
        throw Error(ErrorCode::invalid_coupling, "non-finite coupling amplitude");
    }
}

double CouplingMatrix::row_norm_residual() const {
    return (c_.rowwise().squaredNorm().array() - 1.0).abs().maxCoeff();
}

double success_probability(const CouplingMatrix &coupling) {
    return coupling.ensemble().priors().dot(coupling.amplitudes().diagonal().cwiseAbs2());
}

double feasibility_residual(const CouplingMatrix &coupling) {
    const CMatrix &c = coupling.amplitudes();
    return max_abs(c * c.adjoint() - coupling.ensemble().gram());
}

CouplingMatrix binary_optimal_coupling(double eta1, Complex overlap) {
    const BinarySolution sol = binary_individual_errors(eta1, overlap);
    Ensemble ensemble = gram_binary(overlap, eta1);
    const Complex phase = std::abs(overlap) > 0.0 ? std::conj(overlap / std::abs(overlap)) : Complex(1.0);
    CMatrix c(2, 2);
    c(0, 0) = std::sqrt(1.0 - sol.r1);
    c(0, 1) = std::sqrt(sol.r1);
    c(1, 0) = phase * std::sqrt(sol.r2);
    c(1, 1) = phase * std::sqrt(1.0 - sol.r2);
    return CouplingMatrix(std::move(c), std::move(ensemble));
}

CouplingMatrix symmetric_optimal_coupling(int n, double s) {
    Ensemble ensemble = gram_symmetric(n, s);
    // C = x I + y (J - I) is feasible iff x - y = sqrt(1 - s) and
    // x + (n-1) y = sqrt(1 + (n-1) s); y changes sign with s.
    const double m = n - 1;
    const double a = std::sqrt(std::max(1.0 + m * s, 0.0));
    const double b = std::sqrt(std::max(1.0 - s, 0.0));
    const double diag = (a + m * b) / n;
    const double off = (a - b) / n;
    CMatrix c = CMatrix::Constant(n, n, Complex(off));
    c.diagonal().setConstant(Complex(diag));
    return CouplingMatrix(std::move(c), std::move(ensemble));
}

CouplingMatrix coupling_from_unitary(const Ensemble &ensemble, const SpectralFactor &factor, const CMatrix &v) {
    const int n = ensemble.size();
    if (v.rows() != factor.rank || v.cols() != n) {
        throw Error(ErrorCode::invalid_isometry, "isometry must be rank x N");
    }
    const double ortho = max_abs(v * v.adjoint() - CMatrix::Identity(factor.rank, factor.rank));
    if (ortho > 1e-8) {
        throw Error(ErrorCode::invalid_isometry, "isometry rows are not orthonormal");
    }
    return CouplingMatrix(factor.factor * v, ensemble);
}

CouplingMatrix coupling_from_unitary(const Ensemble &ensemble, const CMatrix &v, double rank_tol) {
    return coupling_from_unitary(ensemble, spectral_factor(ensemble, rank_tol), v);
}

CouplingMatrix srm_coupling(const Ensemble &ensemble, double rank_tol) {
    const SpectralFactor factor = spectral_factor(ensemble, rank_tol);
    return coupling_from_unitary(ensemble, factor, factor.sqrt_isometry());
}

}  // namespace qsd
