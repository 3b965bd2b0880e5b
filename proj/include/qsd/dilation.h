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

#include <vector>

#include "qsd/coupling.h"

namespace qsd {

/// Explicit finite-dimensional realisation of a coupling on system (x) ancilla.
///
/// Joint basis index is system * N + ancilla. State coordinates are rows of the
/// spectral factor, so sum_m x_jm conj(x_lm) = G(j, l); with that pairing the
/// joint unitary maps x_j (x) e_0 to sum_k c_jk (e_k (x) e_k), i.e. the
/// post-measurement system state for outcome k is e_k for every input.
struct DilationModel {
    int system_dim = 0;
    int ancilla_dim = 0;
    int ancilla_init_index = 0;
    /// Row j holds the coordinates of the j-th input state.
    CMatrix state_coords;
    CMatrix joint_unitary;
    /// Column k is the post-measurement system state phi_k.
    CMatrix post_states;
    CMatrix amplitudes;

    /// system (x) ancilla product vector in the joint space.
    CVector embed(const CVector &system, int ancilla_index) const;
    /// U (x_j (x) e_init).
    CVector evolve_input(int input) const;
};

/// Completes the coupling to a full joint unitary. Throws infeasible-coupling
/// when C C^dagger differs from G by more than 1e-8.
DilationModel build_dilation(const CouplingMatrix &coupling, double rank_tol = 1e-12);

struct DilationCheck {
    double unitarity = 0.0;    ///< max |U^dagger U - I|
    double mapped = 0.0;       ///< max |U(x_j (x) e_0) - sum_k c_jk phi_k (x) e_k|
    double gram = 0.0;         ///< max |<x_j, x_l> - G(j, l)|
    double probability = 0.0;  ///< max |P(k|j) from U - |c_jk|^2|

    bool passed(double tol = 1e-10) const {
        return unitarity <= tol && mapped <= tol && gram <= tol && probability <= tol;
    }
};

DilationCheck check_dilation(const DilationModel &dilation, const Ensemble &ensemble);

/// Outcome probabilities P(k|j) obtained by projecting U(x_j (x) e_0) onto the
/// ancilla basis.
RMatrix outcome_probabilities(const DilationModel &dilation);

struct ConditionalState {
    CVector state;
    double probability = 0.0;
};

/// Normalised system state after ancilla outcome k given input j, and P(k|j).
ConditionalState post_measurement_state(const DilationModel &dilation, int input, int outcome);

/// |<a, b>|^2 for unit vectors.
double fidelity(const CVector &a, const CVector &b);

}  // namespace qsd
