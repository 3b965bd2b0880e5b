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

#include "qsd/optimizer.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "qsd/closed_form.h"
#include "qsd/error.h"
#include "qsd/psk.h"
#include "qsd/stiefel.h"

namespace qsd {
namespace {

/// Central finite difference of the objective along the curve R(V, t xi).
double directional_fd(const Ensemble &e, const SpectralFactor &f, const CMatrix &v, const CMatrix &xi, double h) {
    const double plus = coupling_objective(e.priors(), f.factor, stiefel::retract(v, xi, h));
    const double minus = coupling_objective(e.priors(), f.factor, stiefel::retract(v, xi, -h));
    return (plus - minus) / (2.0 * h);
}

TEST(Stiefel, RetractionStaysOnManifold) {
    Engine rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const int r = 1 + trial % 4, n = r + trial % 3;
        const CMatrix v = stiefel::random_point(r, n, rng);
        EXPECT_LE(max_abs(v * v.adjoint() - CMatrix::Identity(r, r)), 1e-12);
        const CMatrix xi = stiefel::project_tangent(v, stiefel::random_point(r, n, rng));
        // Tangent condition: V xi^dagger + xi V^dagger = 0.
        EXPECT_LE(max_abs(v * xi.adjoint() + xi * v.adjoint()), 1e-12);
        const CMatrix w = stiefel::retract(v, xi, 0.7);
        EXPECT_LE(max_abs(w * w.adjoint() - CMatrix::Identity(r, r)), 1e-12);
    }
}

TEST(ObjectiveGradient, FiniteDifferences) {
    std::mt19937_64 gen(100);
    Engine rng(100);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        const Ensemble e = oracle::random_ensemble(n, 1 + trial % n, gen);
        const SpectralFactor f = spectral_factor(e);
        const CMatrix v = stiefel::random_point(f.rank, n, rng);
        const CMatrix grad = objective_gradient(e, v);
        // Directional derivatives along each real / imaginary coordinate, projected onto the tangent space.
        for (int a = 0; a < f.rank; ++a) {
            for (int b = 0; b < n; ++b) {
                for (Complex unit : {Complex(1, 0), Complex(0, 1)}) {
                    CMatrix z = CMatrix::Zero(f.rank, n);
                    z(a, b) = unit;
                    const CMatrix xi = stiefel::project_tangent(v, z);
                    const double analytic = stiefel::inner(grad, xi);
                    const double numeric = directional_fd(e, f, v, xi, 1e-6);
                    const double scale = std::max(1e-3, std::abs(analytic));
                    worst = std::max(worst, std::abs(analytic - numeric) / scale);
                }
            }
        }
    }
    EXPECT_LT(worst, 1e-5);
}

TEST(ObjectiveGradient, VanishesAtBinaryOptimum) {
    const Ensemble e = gram_binary(0.6, 0.25);
    const OptimizeResult r = optimize_general(e);
    ASSERT_TRUE(r.converged);
    // Recover V from the optimal coupling: C = S V for a full-rank Gram.
    const SpectralFactor f = spectral_factor(e);
    const CMatrix v = f.sqrt.inverse() * r.coupling->amplitudes();
    EXPECT_LE(objective_gradient(e, v).norm(), 1e-8);
}

TEST(OptimizeGeneral, BinaryUnequalPriors) {
    const OptimizeResult r = optimize_general(gram_binary(0.6, 0.25));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.p_error, 0.5 * (1.0 - std::sqrt(0.73)), 1e-7);
    EXPECT_LE(feasibility_residual(*r.coupling), 1e-8);
}

TEST(OptimizeGeneral, SymmetricFourStates) {
    const OptimizeResult r = optimize_general(gram_symmetric(4, 0.5));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.p_error, symmetric_min_error(4, 0.5), 1e-6);
}

TEST(OptimizeGeneral, IdentityGramIsImmediate) {
    const Ensemble e = Ensemble::from_gram(CMatrix::Identity(3, 3), RVector::Constant(3, 1.0 / 3));
    SolverConfig config;
    config.restarts = 1;
    const OptimizeResult r = optimize_general(e, config);
    EXPECT_NEAR(r.p_error, 0.0, 1e-15);
    EXPECT_LE(r.iterations, 1);
    EXPECT_TRUE(r.converged);
}

TEST(OptimizeGeneral, RankOneGram) {
    const OptimizeResult r = optimize_general(gram_psk(3, 0.0));
    EXPECT_NEAR(r.p_error, 2.0 / 3.0, 1e-12);
    EXPECT_LE(feasibility_residual(*r.coupling), 1e-8);
}

TEST(OptimizeGeneral, RandomBinaryAgainstHelstrom) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double eta1 = 0.02 + 0.96 * unif(rng);
        const Complex overlap = std::polar(0.98 * unif(rng), 6.283185307179586 * unif(rng));
        const OptimizeResult r = optimize_general(gram_binary(overlap, eta1));
        EXPECT_NEAR(r.p_error, helstrom_bound(eta1, overlap), 1e-7);
        EXPECT_LE(feasibility_residual(*r.coupling), 1e-8);
    }
}

TEST(OptimizeGeneral, PskCrossCheck) {
    const OptimizeResult r = optimize_general(gram_psk(4, 0.25));
    EXPECT_NEAR(r.p_error, psk_solve(4, 0.25).p_error, 1e-6);
}

TEST(OptimizeGeneral, TraceIsMonotone) {
    std::mt19937_64 gen(4);
    const Ensemble e = oracle::random_ensemble(5, 5, gen);
    SolverConfig config;
    config.restarts = 1;
    const OptimizeResult r = optimize_general(e, config);
    ASSERT_FALSE(r.objective_trace.empty());
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
        const double f = r.objective_trace[i - 1];
        EXPECT_GE(r.objective_trace[i], f - 16 * 2.220446049250313e-16 * (1.0 + std::abs(f)));
    }
}

TEST(OptimizeGeneral, DeterministicAcrossThreadCounts) {
    std::mt19937_64 gen(12);
    const Ensemble e = oracle::random_ensemble(4, 4, gen);
    SolverConfig config;
    config.seed = 99;
    config.threads = 1;
    const OptimizeResult a = optimize_general(e, config);
    config.threads = 4;
    const OptimizeResult b = optimize_general(e, config);
    EXPECT_EQ(a.p_error, b.p_error);
    EXPECT_EQ(a.best_restart, b.best_restart);
    EXPECT_EQ(a.objective_trace, b.objective_trace);
    EXPECT_EQ(max_abs(a.coupling->amplitudes() - b.coupling->amplitudes()), 0.0);
}

TEST(OptimizeGeneral, NonConvergenceIsReported) {
    std::mt19937_64 gen(13);
    const Ensemble e = oracle::random_ensemble(5, 5, gen);
    SolverConfig config;
    config.max_iters = 1;
    config.restarts = 1;
    const OptimizeResult r = optimize_general(e, config);
    EXPECT_FALSE(r.converged);
    ASSERT_TRUE(r.coupling.has_value());
    EXPECT_LE(feasibility_residual(*r.coupling), 1e-8);
}

TEST(SolverConfig, Validation) {
    SolverConfig config;
    EXPECT_NO_THROW(config.validate());
    config.restarts = 0;
    EXPECT_THROW(config.validate(), Error);
    config = {};
    config.grad_tol = -1.0;
    EXPECT_THROW(config.validate(), Error);
}

}  // namespace
}  // namespace qsd
