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

#include <cstdint>
#include <optional>
#include <vector>

#include "qsd/coupling.h"

namespace qsd {

struct SolverConfig {
    int max_iters = 2000;
    double grad_tol = 1e-10;
    double step_init = 0.1;
    int restarts = 8;
    std::uint64_t seed = 0;
    double rank_tol = 1e-12;
    /// 0 selects resolve_workers(0). The result does not depend on it.
    int threads = 0;

    /// Throws invalid-config unless every field is positive.
    void validate() const;
};

struct OptimizeResult {
    std::optional<CouplingMatrix> coupling;
    double p_error = 1.0;
    /// Accepted objective values of the winning restart, starting point first.
    std::vector<double> objective_trace;
    int restarts_used = 0;
    int best_restart = 0;
    int iterations = 0;
    double gradient_norm = 0.0;
    bool converged = false;
};

/// sum_j eta_j |(B V)_jj|^2.
double coupling_objective(const RVector &priors, const CMatrix &factor, const CMatrix &v);

/// Gradient of coupling_objective with respect to V in the real inner product
/// Re tr(A^dagger B), treating V as unconstrained: 2 B^dagger diag(eta_j c_jj).
CMatrix euclidean_gradient(const RVector &priors, const CMatrix &factor, const CMatrix &v);

/// Riemannian gradient on the row-orthonormal manifold.
CMatrix objective_gradient(const RVector &priors, const CMatrix &factor, const CMatrix &v);
CMatrix objective_gradient(const Ensemble &ensemble, const CMatrix &v, double rank_tol = 1e-12);

/// Maximises the success probability over all couplings C = B V by projected
/// gradient ascent with backtracking and polar retraction. Restart 0 starts
/// from the square-root-measurement coupling, the rest from seeded random
/// points; the best restart wins, lowest index on ties within 1e-12.
OptimizeResult optimize_general(const Ensemble &ensemble, const SolverConfig &config = {});

}  // namespace qsd
