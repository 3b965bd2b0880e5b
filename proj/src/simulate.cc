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

#include "qsd/simulate.h"

#include <cmath>
#include <sstream>

#include "qsd/closed_form.h"
#include "qsd/dilation.h"
#include "qsd/error.h"
#include "qsd/random.h"

namespace qsd {

namespace {

/// Index of the first cumulative bin exceeding u; the last bin absorbs the
/// rounding remainder.
int sample_index(const std::vector<double> &cumulative, double u) {
    const int last = static_cast<int>(cumulative.size()) - 1;
    for (int i = 0; i < last; ++i) {
        if (u < cumulative[static_cast<std::size_t>(i)]) {
            return i;
        }
    }
    return last;
}

std::vector<double> cumulative_of(const RVector &weights) {
    std::vector<double> out(static_cast<std::size_t>(weights.size()));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        acc += weights(i);
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

}  // namespace

double SimulationReport::z_score() const {
    const double diff = empirical_error - analytic_error;
    if (std_error == 0.0) {
        return diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    }
    return diff / std_error;
}

SimulationReport run_monte_carlo(const CouplingMatrix &coupling, std::int64_t shots, std::uint64_t seed,
                                 int workers) {
    if (shots < 1) {
        throw Error(ErrorCode::invalid_input, "shots must be >= 1");
    }
    const RMatrix probs = coupling.outcome_probabilities();
    const double row_residual = (probs.rowwise().sum().array() - 1.0).abs().maxCoeff();
    if (row_residual > 1e-8) {
        std::ostringstream os;
        os << "outcome probabilities deviate from 1 by " << row_residual;
        throw Error(ErrorCode::invalid_coupling, os.str());
    }
    const int n = coupling.size();
    const auto start = std::chrono::steady_clock::now();

    const std::vector<double> prior_cdf = cumulative_of(coupling.ensemble().priors());
    std::vector<std::vector<double>> row_cdf;
    row_cdf.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        row_cdf.push_back(cumulative_of(probs.row(j).transpose()));
    }

    using Counts = std::vector<std::int64_t>;
    const std::int64_t chunks = (shots + kShotsPerChunk - 1) / kShotsPerChunk;
    std::vector<Counts> chunk_counts(static_cast<std::size_t>(chunks));
    parallel_for(static_cast<int>(chunks), resolve_workers(workers), [&](int c) {
        Counts local(static_cast<std::size_t>(n) * n, 0);
        Engine rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        const std::int64_t begin = c * kShotsPerChunk;
        const std::int64_t end = std::min(shots, begin + kShotsPerChunk);
        for (std::int64_t shot = begin; shot < end; ++shot) {
            const int j = sample_index(prior_cdf, uniform01(rng));
            const int k = sample_index(row_cdf[static_cast<std::size_t>(j)], uniform01(rng));
            ++local[static_cast<std::size_t>(j * n + k)];
        }
        chunk_counts[static_cast<std::size_t>(c)] = std::move(local);
    });

    SimulationReport report;
    report.shots = shots;
    report.seed = seed;
    report.counts.assign(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (const Counts &local : chunk_counts) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                report.counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] +=
                    local[static_cast<std::size_t>(j * n + k)];
            }
        }
    }
    std::int64_t correct = 0;
    for (int j = 0; j < n; ++j) {
        correct += report.counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    }
    report.empirical_error = 1.0 - static_cast<double>(correct) / static_cast<double>(shots);
    report.analytic_error = 1.0 - success_probability(coupling);
    const double p = std::clamp(report.analytic_error, 0.0, 1.0);
    report.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    report.elapsed = std::chrono::steady_clock::now() - start;
    return report;
}

double verify_against_dilation(const CouplingMatrix &coupling) {
    const DilationModel model = build_dilation(coupling);
    const double deviation = (outcome_probabilities(model) - coupling.outcome_probabilities()).cwiseAbs().maxCoeff();
    if (deviation > 1e-10) {
        std::ostringstream os;
        os << "dilation outcome distribution deviates from |c_jk|^2 by " << deviation;
        throw Error(ErrorCode::invalid_coupling, os.str());
    }
    return deviation;
}

double two_stage_preservation_residual(double s, const TwoStageParams &params) {
    const double a = std::sqrt(std::max((1.0 - params.r1) * params.r2, 0.0));
    const double b = std::sqrt(std::max(params.r1 * (1.0 - params.r2), 0.0));
    return std::abs(a * params.t1 + b * params.t2 - s);
}

TwoStageResult two_stage_binary(double eta1, double s, const TwoStageParams &params) {
    if (!(eta1 >= 0.0 && eta1 <= 1.0)) {
        throw Error(ErrorCode::invalid_prior, "eta1 must lie in [0, 1]");
    }
    if (!(s >= 0.0 && s <= 1.0)) {
        throw Error(ErrorCode::invalid_overlap, "s must lie in [0, 1]");
    }
    const bool in_range = params.r1 >= 0.0 && params.r1 <= 1.0 && params.r2 >= 0.0 && params.r2 <= 1.0 &&
                          std::abs(params.t1) <= 1.0 && std::abs(params.t2) <= 1.0;
    const double residual = two_stage_preservation_residual(s, params);
    if (!in_range || residual > 1e-10) {
        std::ostringstream os;
        os << "first stage does not preserve the overlap (residual " << residual << ")";
        throw Error(ErrorCode::infeasible_sequential, os.str());
    }

    const double eta2 = 1.0 - eta1;
    TwoStageResult out;
    out.first_stage_error = eta1 * params.r1 + eta2 * params.r2;

    const double joint[2][2] = {{eta1 * (1.0 - params.r1), eta2 * params.r2},
                                {eta1 * params.r1, eta2 * (1.0 - params.r2)}};
    const double overlaps[2] = {std::abs(params.t1), std::abs(params.t2)};
    for (int k = 0; k < 2; ++k) {
        ConditionalEnsemble &branch = out.conditionals[static_cast<std::size_t>(k)];
        branch.probability = joint[k][0] + joint[k][1];
        branch.overlap = overlaps[k];
        if (branch.probability > 0.0) {
            branch.eta1 = joint[k][0] / branch.probability;
            branch.helstrom = helstrom_bound(branch.eta1, branch.overlap);
        }
        out.combined_error += branch.probability * branch.helstrom;
    }
    return out;
}

}  // namespace qsd
