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

#include <optional>

#include "qsd/coupling.h"

namespace qsd {

/// Parameters of the symmetric circulant couplings for phase-shift-keyed
/// signals. Row 1 of the coupling (in ket convention) is
///   N = 3: (sqrt(p), sqrt(r) e^{i theta1}, sqrt(r) e^{-i theta1})
///   N = 4: (sqrt(p), sqrt(r) e^{i theta1}, sqrt(r') e^{i theta2}, sqrt(r) e^{-i theta1})
/// and later rows are cyclic shifts.
struct PskParams {
    double p = 0.0;
    double r = 0.0;
    double r_prime = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    /// sqrt(r) cos(theta1) and sqrt(r) sin(theta1).
    double u = 0.0;
    double v = 0.0;
};

struct PskSolution {
    int n = 0;
    double alpha_sq = 0.0;
    PskParams params;
    double p_error = 1.0;
    std::optional<CouplingMatrix> coupling;
    /// Largest residual of the constraint system at the returned point.
    double constraint_residual = 0.0;
    /// Outer points (N = 4) at which no admissible root was found.
    int skipped_points = 0;
};

/// Three-state PSK: maximise p subject to p + 2(u^2 + v^2) = 1 and
///   2 sqrt(p) u + u^2 - v^2 = Re s,   -2 sqrt(p) v + 2 u v = Im s,
/// s = <psi_1|psi_2> = e^{-3a/2} e^{i sqrt(3) a/2}. Throws no-solution.
PskSolution psk3_solve(double alpha_sq);

/// Four-state PSK: maximise p over (p, r, r', theta1, theta2) subject to
///   p + 2r + r' = 1,
///   2 sqrt(pr) e^{-i theta1} + 2 sqrt(r r') e^{i theta1} cos(theta2) = <psi_1|psi_2>,
///   2 sqrt(p r') cos(theta2) + 2 r cos(2 theta1) = e^{-2a}.
/// theta2 is scanned as the free coordinate; the remaining four unknowns are
/// found by root solving at each point. Throws no-solution.
PskSolution psk4_solve(double alpha_sq);

/// Dispatches on n (3 or 4).
PskSolution psk_solve(int n, double alpha_sq);

/// Coupling matrix for the given parameters in the C C^dagger = G convention
/// (the complex conjugate of the ket-convention matrix above).
CMatrix psk_coupling_amplitudes(int n, const PskParams &params);

}  // namespace qsd
