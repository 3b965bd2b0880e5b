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

#include <array>
#include <chrono>
#include <cstdint>
#include <vector>

#include "qsd/coupling.h"

namespace qsd {

/// Shots per independently seeded chunk.
inline constexpr std::int64_t kShotsPerChunk = 65536;

struct SimulationReport {
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    /// counts[j][k]: input j prepared, ancilla outcome k observed.
    std::vector<std::vector<std::int64_t>> counts;
    double empirical_error = 0.0;
    double analytic_error = 0.0;
    /// sqrt(P (1 - P) / shots) with P the analytic error.
    double std_error = 0.0;
    std::chrono::duration<double> elapsed{0.0};

    /// (empirical - analytic) / std_error; 0 when both agree exactly.
    double z_score() const;
};

/// Samples prepare -> couple -> measure ancilla -> guess. Chunk c uses an
/// engine seeded by derive_seed(seed, c), so counts are identical for every
/// worker count.
SimulationReport run_monte_carlo(const CouplingMatrix &coupling, std::int64_t shots, std::uint64_t seed,
                                 int workers = 0);

/// Recomputes the outcome distribution from an explicit dilation and returns
/// the largest deviation from |c_jk|^2. Throws invalid-coupling above 1e-10.
double verify_against_dilation(const CouplingMatrix &coupling);

/// Two-outcome first stage with input-dependent post-measurement states.
/// t1 = <phi_1|phi_2> after outcome 1, t2 after outcome 2 (real).
struct TwoStageParams {
    double r1 = 0.0;
    double r2 = 0.0;
    double t1 = 1.0;
    double t2 = 1.0;
};

struct ConditionalEnsemble {
    double probability = 0.0;  ///< P(outcome)
    double eta1 = 0.0;         ///< posterior of input 1
    double overlap = 0.0;      ///< |t|
    double helstrom = 0.0;     ///< second-stage error on this branch
};

struct TwoStageResult {
    double first_stage_error = 0.0;
    std::array<ConditionalEnsemble, 2> conditionals{};
    double combined_error = 0.0;
};

/// Residual of sqrt((1-r1) r2) t1 + sqrt(r1 (1-r2)) t2 = s.
double two_stage_preservation_residual(double s, const TwoStageParams &params);

/// Stage 1 guesses by the ancilla outcome; stage 2 applies the Helstrom
/// measurement to whichever conditional ensemble was produced. Throws
/// infeasible-sequential when the parameters do not preserve the overlap.
TwoStageResult two_stage_binary(double eta1, double s, const TwoStageParams &params);

}  // namespace qsd
