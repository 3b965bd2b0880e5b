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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit status if
// any criterion fails. Every check is computed against an independent route
// (closed forms, explicit oracles or finite differences) and timed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "qsd/closed_form.h"
#include "qsd/coupling.h"
#include "qsd/dilation.h"
#include "qsd/optimizer.h"
#include "qsd/psk.h"
#include "qsd/simulate.h"
#include "qsd/stiefel.h"

namespace qsd {
namespace {

constexpr double kTwoPi = 6.283185307179586;

struct Verdict {
    bool passed = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            passed = false;
            detail << " [failed: " << what << "]";
        }
    }
};

using Clock = std::chrono::steady_clock;

bool run_criterion(int id, const char *title, double budget_seconds, const std::function<void(Verdict &)> &body) {
    Verdict v;
    const auto start = Clock::now();
    try {
        body(v);
    } catch (const std::exception &e) {
        v.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    v.require(seconds < budget_seconds, "runtime budget");
    std::printf("%s  criterion %d: %s (%.2f s / %.0f s)%s\n", v.passed ? "PASS" : "FAIL", id, title, seconds,
                budget_seconds, v.detail.str().c_str());
    std::fflush(stdout);
    return v.passed;
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

void binary_closed_form(Verdict &v) {
    double worst_bound = 0.0, worst_constraint = 0.0;
    for (int i = 1; i <= 19; ++i) {
        const double eta1 = 0.05 * i;
        for (int k = 0; k <= 99; ++k) {
            const double s = 0.01 * k;
            const BinarySolution b = binary_individual_errors(eta1, s);
            const double average = eta1 * b.r1 + (1.0 - eta1) * b.r2;
            worst_bound = std::max(worst_bound, std::abs(average - helstrom_bound(eta1, s)));
            worst_constraint = std::max(
                worst_constraint, std::abs(s - std::sqrt((1.0 - b.r1) * b.r2) - std::sqrt((1.0 - b.r2) * b.r1)));
        }
    }
    v.detail << " max|avg-bound|=" << sci(worst_bound) << " max constraint residual=" << sci(worst_constraint);
    v.require(worst_bound <= 1e-12, "average vs bound");
    v.require(worst_constraint <= 1e-10, "preservation constraint");
}

void symmetric_srm(Verdict &v) {
    double worst_general = 0.0, worst_circulant = 0.0, worst_binary = 0.0;
    for (int n = 2; n <= 6; ++n) {
        const double lo = -1.0 / (n - 1);
        for (int i = 1; i <= 50; ++i) {
            const double s = lo + (1.0 - lo) * i / 51.0;
            const Ensemble e = gram_symmetric(n, s);
            const double closed = symmetric_min_error(n, s);
            worst_general = std::max(worst_general, std::abs(closed - srm_error_general(e)));
            worst_circulant = std::max(worst_circulant, std::abs(closed - srm_error_circulant(e)));
            if (n == 2) {
                worst_binary = std::max(worst_binary, std::abs(closed - helstrom_bound(0.5, std::abs(s))));
            }
        }
    }
    v.detail << " general=" << sci(worst_general) << " circulant=" << sci(worst_circulant)
             << " N=2 vs bound=" << sci(worst_binary);
    v.require(worst_general <= 1e-9, "general SRM");
    v.require(worst_circulant <= 1e-9, "circulant SRM");
    v.require(worst_binary <= 1e-12, "N=2 reduction");
}

void general_optimizer(Verdict &v) {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_binary = 0.0, worst_symmetric = 0.0, worst_feasibility = 0.0;
    int not_converged = 0;
    for (int i = 0; i < 50; ++i) {
        const double eta1 = 0.01 + 0.98 * unif(rng);
        const Complex overlap = std::polar(0.99 * unif(rng), kTwoPi * unif(rng));
        const OptimizeResult r = optimize_general(gram_binary(overlap, eta1));
        worst_binary = std::max(worst_binary, std::abs(r.p_error - helstrom_bound(eta1, overlap)));
        worst_feasibility = std::max(worst_feasibility, feasibility_residual(*r.coupling));
        not_converged += r.converged ? 0 : 1;
    }
    for (int i = 0; i < 30; ++i) {
        const int n = 2 + static_cast<int>(unif(rng) * 5.0);
        const double lo = -1.0 / (n - 1);
        const double s = lo + (1.0 - lo) * unif(rng);
        const OptimizeResult r = optimize_general(gram_symmetric(n, s));
        worst_symmetric = std::max(worst_symmetric, std::abs(r.p_error - symmetric_min_error(n, s)));
        worst_feasibility = std::max(worst_feasibility, feasibility_residual(*r.coupling));
        not_converged += r.converged ? 0 : 1;
    }
    v.detail << " binary=" << sci(worst_binary) << " symmetric=" << sci(worst_symmetric)
             << " feasibility=" << sci(worst_feasibility) << " unconverged=" << not_converged;
    v.require(worst_binary <= 1e-7, "binary optimum");
    v.require(worst_symmetric <= 1e-6, "symmetric optimum");
    v.require(worst_feasibility <= 1e-8, "feasibility");
}

void psk_structured(Verdict &v) {
    double worst_oracle = 0.0, worst_limit = 0.0;
    bool monotone = true;
    for (int n : {3, 4}) {
        double previous = 2.0;
        for (int i = 0; i < 40; ++i) {
            const double a = 0.05 + (2.0 - 0.05) * i / 39.0;
            const double value = psk_solve(n, a).p_error;
            worst_oracle = std::max(worst_oracle, std::abs(value - srm_error_circulant(gram_psk(n, a))));
            monotone = monotone && value <= previous;
            previous = value;
        }
        worst_limit = std::max(worst_limit, std::abs(psk_solve(n, 1e-6).p_error - (1.0 - 1.0 / n)));
    }
    v.detail << " max|psk-srm|=" << sci(worst_oracle) << " monotone=" << (monotone ? "yes" : "no")
             << " max|P(1e-6)-(1-1/N)|=" << sci(worst_limit);
    v.require(worst_oracle <= 1e-8, "oracle agreement");
    v.require(monotone, "monotone in intensity");
    v.require(worst_limit <= 1e-6, "small-intensity limit within 1e-6");
}

void dilation_round_trip(Verdict &v) {
    std::mt19937_64 gen(5150);
    Engine rng(5150);
    double unitarity = 0.0, mapped = 0.0, probability = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const Ensemble e = oracle::random_ensemble(n, 1 + (trial / 5) % n, gen);
        const SpectralFactor f = spectral_factor(e);
        const CouplingMatrix c = coupling_from_unitary(e, f, stiefel::random_point(f.rank, n, rng));
        const DilationModel d = build_dilation(c);
        const DilationCheck check = check_dilation(d, e);
        unitarity = std::max(unitarity, check.unitarity);
        mapped = std::max(mapped, check.mapped);
        probability =
            std::max(probability, (outcome_probabilities(d) - c.outcome_probabilities()).cwiseAbs().maxCoeff());
    }
    v.detail << " unitarity=" << sci(unitarity) << " mapped=" << sci(mapped) << " probabilities=" << sci(probability);
    v.require(unitarity <= 1e-10, "unitarity");
    v.require(mapped <= 1e-10, "mapped vectors");
    v.require(probability <= 1e-10, "outcome probabilities");
}

void monte_carlo(Verdict &v) {
    const std::vector<std::pair<const char *, CouplingMatrix>> cases{
        {"binary", binary_optimal_coupling(0.5, 0.6)},
        {"symmetric", symmetric_optimal_coupling(3, 0.5)},
        {"psk", psk_solve(3, 0.5).coupling.value()},
    };
    const double analytic[] = {helstrom_bound(0.5, 0.6), symmetric_min_error(3, 0.5),
                               srm_error_circulant(gram_psk(3, 0.5))};
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const SimulationReport one = run_monte_carlo(cases[i].second, 1000000, 2026, 1);
        const double sigma = std::sqrt(analytic[i] * (1.0 - analytic[i]) / 1e6);
        const double z = (one.empirical_error - analytic[i]) / sigma;
        v.detail << " " << cases[i].first << " z=" << sci(z);
        v.require(std::abs(z) <= 4.0, std::string(cases[i].first) + " within 4 sigma");
        for (int workers : {2, 8}) {
            const SimulationReport many = run_monte_carlo(cases[i].second, 1000000, 2026, workers);
            v.require(many.counts == one.counts, std::string(cases[i].first) + " reproducible with " +
                                                     std::to_string(workers) + " workers");
        }
    }
}

void sequential_floor(Verdict &v) {
    std::mt19937_64 rng(777);
    double worst_gap = 1.0, endpoint = 0.0;
    for (auto [eta1, s] : {std::pair{0.5, 0.6}, std::pair{0.3, 0.4}}) {
        const double floor = helstrom_bound(eta1, s);
        for (int i = 0; i < 10000; ++i) {
            const TwoStageResult r = two_stage_binary(eta1, s, oracle::sample_two_stage(s, rng));
            worst_gap = std::min(worst_gap, r.combined_error - floor);
        }
        // Shared post-state endpoint: the optimal single-stage measurement, t1 = t2 = 1.
        const BinarySolution b = binary_individual_errors(eta1, s);
        endpoint = std::max(endpoint, std::abs(two_stage_binary(eta1, s, {b.r1, b.r2, 1.0, 1.0}).combined_error - floor));
        // Uninformative first stage: everything is deferred to the second stage.
        endpoint = std::max(endpoint, std::abs(two_stage_binary(eta1, s, {0.0, 1.0, s, 1.0}).combined_error - floor));
    }
    v.detail << " min(combined-bound)=" << sci(worst_gap) << " endpoint deviation=" << sci(endpoint);
    v.require(worst_gap >= -1e-10, "floor");
    v.require(endpoint <= 1e-10, "endpoints attain the bound");
}

void gradient_check(Verdict &v) {
    std::mt19937_64 gen(31337);
    Engine rng(31337);
    const double h = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        const Ensemble e = oracle::random_ensemble(n, n, gen);
        const SpectralFactor f = spectral_factor(e);
        const CMatrix v0 = stiefel::random_point(f.rank, n, rng);
        const CMatrix grad = objective_gradient(e, v0);
        std::vector<double> analytic, numeric;
        for (int a = 0; a < f.rank; ++a) {
            for (int b = 0; b < n; ++b) {
                for (Complex unit : {Complex(1, 0), Complex(0, 1)}) {
                    CMatrix z = CMatrix::Zero(f.rank, n);
                    z(a, b) = unit;
                    const CMatrix xi = stiefel::project_tangent(v0, z);
                    analytic.push_back(stiefel::inner(grad, xi));
                    const double plus = coupling_objective(e.priors(), f.factor, stiefel::retract(v0, xi, h));
                    const double minus = coupling_objective(e.priors(), f.factor, stiefel::retract(v0, xi, -h));
                    numeric.push_back((plus - minus) / (2.0 * h));
                }
            }
        }
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
            scale = std::max(scale, std::abs(analytic[i]));
        }
        worst = std::max(worst, diff / scale);
    }
    v.detail << " max relative error=" << sci(worst);
    v.require(worst < 1e-5, "relative error");
}

}  // namespace
}  // namespace qsd

int main() {
    using namespace qsd;
    int failures = 0;
    failures += !run_criterion(1, "binary closed form on the prior x overlap grid", 1.0, binary_closed_form);
    failures += !run_criterion(2, "symmetric closed form vs square-root measurement", 5.0, symmetric_srm);
    failures += !run_criterion(3, "general optimizer vs closed forms", 60.0, general_optimizer);
    failures += !run_criterion(4, "structured PSK solver vs circulant oracle", 30.0, psk_structured);
    failures += !run_criterion(5, "dilation of random feasible couplings", 30.0, dilation_round_trip);
    failures += !run_criterion(6, "Monte Carlo accuracy and reproducibility", 30.0, monte_carlo);
    failures += !run_criterion(7, "two-stage sequential floor", 10.0, sequential_floor);
    failures += !run_criterion(8, "Riemannian gradient vs finite differences", 10.0, gradient_check);
    std::printf("%d of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
