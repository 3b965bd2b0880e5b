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
#include <limits>

#include "qsd/error.h"
#include "qsd/random.h"
#include "qsd/stiefel.h"

namespace qsd {

namespace {

constexpr double kTieTol = 1e-12;
constexpr int kMaxHalvings = 60;
constexpr double kStepGrowthCap = 64.0;
// Resolution of the objective: a few ulps of a sum of N terms of size <= 1.
constexpr double kObjectiveNoise = 16.0 * std::numeric_limits<double>::epsilon();

/// (B V)_jj.
Complex diagonal_entry(const CMatrix &factor, const CMatrix &v, Eigen::Index j) {
    return factor.row(j).transpose().cwiseProduct(v.col(j)).sum();
}

struct RestartOutcome {
    CMatrix v;
    double objective = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    std::vector<double> trace;
};

RestartOutcome ascend(const RVector &priors, const CMatrix &factor, CMatrix v, const SolverConfig &config) {
    RestartOutcome out;
    double f = coupling_objective(priors, factor, v);
    CMatrix grad = objective_gradient(priors, factor, v);
    double gnorm = grad.norm();
    out.trace.push_back(f);

    // Trial steps start from step_init and grow by 2x after each accepted step
    // (capped); every rejected trial halves.
    const double step_cap = kStepGrowthCap * config.step_init;
    double trial_step = config.step_init;
    for (int it = 0; it < config.max_iters && gnorm > config.grad_tol; ++it) {
        const double noise = kObjectiveNoise * (1.0 + std::abs(f));
        double step = trial_step;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
            CMatrix trial = stiefel::retract(v, grad, step);
            const double f_trial = coupling_objective(priors, factor, trial);
            if (f_trial < f - noise) {
                continue;
            }
            CMatrix g_trial = objective_gradient(priors, factor, trial);
            const double gn_trial = g_trial.norm();
            // Inside the rounding band of f, progress is judged on the gradient.
            if (f_trial > f + noise || gn_trial < gnorm) {
                v = std::move(trial);
                f = f_trial;
                grad = std::move(g_trial);
                gnorm = gn_trial;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }
        trial_step = std::min(2.0 * step, step_cap);
        out.trace.push_back(f);
        ++out.iterations;
    }
    out.v = std::move(v);
    out.objective = f;
    out.gradient_norm = gnorm;
    return out;
}

}  // namespace

void SolverConfig::validate() const {
    if (max_iters <= 0 || !(grad_tol > 0.0) || !(step_init > 0.0) || restarts < 1 || !(rank_tol > 0.0) ||
        threads < 0) {
        throw Error(ErrorCode::invalid_config, "solver settings must be positive and restarts >= 1");
    }
}

double coupling_objective(const RVector &priors, const CMatrix &factor, const CMatrix &v) {
    double f = 0.0;
    for (Eigen::Index j = 0; j < priors.size(); ++j) {
        const Complex cjj = diagonal_entry(factor, v, j);
        f += priors(j) * std::norm(cjj);
    }
    return f;
}

CMatrix euclidean_gradient(const RVector &priors, const CMatrix &factor, const CMatrix &v) {
    const Eigen::Index n = priors.size();
    CVector weighted(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex cjj = diagonal_entry(factor, v, j);
        weighted(j) = 2.0 * priors(j) * cjj;
    }
    return factor.adjoint() * weighted.asDiagonal();
}

CMatrix objective_gradient(const RVector &priors, const CMatrix &factor, const CMatrix &v) {
    return stiefel::project_tangent(v, euclidean_gradient(priors, factor, v));
}

CMatrix objective_gradient(const Ensemble &ensemble, const CMatrix &v, double rank_tol) {
    const SpectralFactor factor = spectral_factor(ensemble, rank_tol);
    if (v.rows() != factor.rank || v.cols() != ensemble.size()) {
        throw Error(ErrorCode::invalid_isometry, "isometry must be rank x N");
    }
    return objective_gradient(ensemble.priors(), factor.factor, v);
}

OptimizeResult optimize_general(const Ensemble &ensemble, const SolverConfig &config) {
    config.validate();
    const SpectralFactor factor = spectral_factor(ensemble, config.rank_tol);
    const int n = ensemble.size();
    const RVector &priors = ensemble.priors();

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
    parallel_for(config.restarts, resolve_workers(config.threads), [&](int index) {
        CMatrix start;
        if (index == 0) {
            start = factor.sqrt_isometry();
        } else {
            Engine rng(derive_seed(config.seed, static_cast<std::uint64_t>(index)));
            start = stiefel::random_point(factor.rank, n, rng);
        }
        outcomes[static_cast<std::size_t>(index)] = ascend(priors, factor.factor, std::move(start), config);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < outcomes.size(); ++i) {
        if (outcomes[i].objective > outcomes[best].objective + kTieTol) {
            best = i;
        }
    }
    RestartOutcome &win = outcomes[best];

    OptimizeResult result;
    result.coupling.emplace(factor.factor * win.v, ensemble);
    result.p_error = 1.0 - success_probability(*result.coupling);
    result.objective_trace = std::move(win.trace);
    result.restarts_used = config.restarts;
    result.best_restart = static_cast<int>(best);
    result.iterations = win.iterations;
    result.gradient_norm = win.gradient_norm;
    result.converged = win.gradient_norm <= config.grad_tol;
    return result;
}

}  // namespace qsd
