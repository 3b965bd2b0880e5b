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

// Reference computations used only by the tests. They deliberately avoid the
// library's own formulas: states are realised as explicit kets, operators are
// diagonalised directly, and optima are found by brute-force search.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "qsd/ensemble.h"
#include "qsd/simulate.h"

namespace qsd::oracle {

/// Columns are kets whose Gram matrix is `gram` (Cholesky-free: uses the
/// eigendecomposition so that rank-deficient Gram matrices work too).
inline CMatrix kets_from_gram(const CMatrix &gram) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
    const RVector lam = eig.eigenvalues().cwiseMax(0.0);
    return lam.cwiseSqrt().asDiagonal() * eig.eigenvectors().adjoint();
}

/// Minimum error for two pure states from the trace norm of
/// eta1 |psi1><psi1| - eta2 |psi2><psi2|.
inline double helstrom_trace_norm(double eta1, Complex overlap) {
    CMatrix kets(2, 2);
    kets << 1.0, overlap, 0.0, std::sqrt(std::max(0.0, 1.0 - std::norm(overlap)));
    const CVector a = kets.col(0), b = kets.col(1);
    const CMatrix gamma = eta1 * a * a.adjoint() - (1.0 - eta1) * b * b.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(gamma);
    return 0.5 * (1.0 - eig.eigenvalues().cwiseAbs().sum());
}

/// Brute-force minimum of eta1 r1 + eta2 r2 subject to the inner-product
/// preservation constraint, parametrised as r1 = sin^2(x), r2 = sin^2(t - x)
/// with sin t = |s|. Coarse grid, then golden-section refinement.
struct BinaryOptimum {
    double p_error;
    double r1;
    double r2;
};

inline BinaryOptimum binary_brute_force(double eta1, double s) {
    const double t = std::asin(std::min(1.0, std::abs(s)));
    auto f = [&](double x) {
        return eta1 * std::pow(std::sin(x), 2) + (1.0 - eta1) * std::pow(std::sin(t - x), 2);
    };
    const int grid = 2000;
    int best = 0;
    for (int i = 1; i <= grid; ++i) {
        if (f(t * i / grid) < f(t * best / grid)) best = i;
    }
    double lo = t * std::max(0, best - 1) / grid, hi = t * std::min(grid, best + 1) / grid;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
        if (f(m1) < f(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double x = 0.5 * (lo + hi);
    return {f(x), std::pow(std::sin(x), 2), std::pow(std::sin(t - x), 2)};
}

/// Square-root measurement error built from explicit kets and the operator
/// rho = sum_j eta_j |psi_j><psi_j| on their span (full-rank Gram only).
inline double srm_error_explicit(const Ensemble &e) {
    const CMatrix kets = kets_from_gram(e.gram());
    const int n = e.size();
    CMatrix rho = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) rho += e.priors()(j) * kets.col(j) * kets.col(j).adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho);
    const CMatrix rho_inv_sqrt =
        eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
    double success = 0.0;
    for (int j = 0; j < n; ++j) {
        const CVector mu = e.priors()(j) > 0 ? CVector(std::sqrt(e.priors()(j)) * rho_inv_sqrt * kets.col(j))
                                             : CVector::Zero(n);
        success += e.priors()(j) * std::norm(mu.dot(kets.col(j)));
    }
    return 1.0 - success;
}

/// Random Gram matrix of n unit vectors in C^dim with random priors.
inline Ensemble random_ensemble(int n, int dim, std::mt19937_64 &rng, bool equal_priors = false) {
    std::normal_distribution<double> normal;
    CMatrix kets(dim, n);
    for (int j = 0; j < n; ++j) {
        for (int d = 0; d < dim; ++d) kets(d, j) = Complex(normal(rng), normal(rng));
        kets.col(j).normalize();
    }
    RVector priors(n);
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    for (int j = 0; j < n; ++j) priors(j) = equal_priors ? 1.0 : unif(rng);
    priors /= priors.sum();
    return Ensemble::from_gram(kets.adjoint() * kets, priors);
}

/// Uniformly drawn first-stage parameters that preserve the overlap s:
/// r1, r2 uniform (rejecting pairs that cannot reach s), t1 uniform over its
/// admissible interval, t2 solved from the preservation constraint.
inline TwoStageParams sample_two_stage(double s, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
        TwoStageParams p;
        p.r1 = unif(rng);
        p.r2 = unif(rng);
        const double a = std::sqrt((1.0 - p.r1) * p.r2);
        const double b = std::sqrt(p.r1 * (1.0 - p.r2));
        if (a + b < s || a <= 1e-9 || b <= 1e-9) {
            continue;
        }
        const double lo = std::max(-1.0, (s - b) / a);
        const double hi = std::min(1.0, (s + b) / a);
        p.t1 = lo + (hi - lo) * unif(rng);
        p.t2 = std::clamp((s - a * p.t1) / b, -1.0, 1.0);
        if (two_stage_preservation_residual(s, p) <= 1e-12) {
            return p;
        }
    }
}

}  // namespace qsd::oracle
