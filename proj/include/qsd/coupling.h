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

#include "qsd/ensemble.h"

namespace qsd {

/// Ancilla-coupling amplitudes: entry (j, k) is the amplitude of finding the
/// ancilla in |k> when the system was prepared in |psi_j>.
///
/// Amplitudes pair with the Gram matrix through C C^dagger = G. In ket
/// language this is the expansion of the complex-conjugate ensemble, which
/// has the same discrimination statistics; see dilation.h for how the joint
/// unitary realises it.
class CouplingMatrix {
   public:
    CouplingMatrix(CMatrix amplitudes, Ensemble ensemble);

    int size() const {
        return static_cast<int>(c_.rows());
    }
    const CMatrix &amplitudes() const {
        return c_;
    }
    const Ensemble &ensemble() const {
        return ensemble_;
    }
    /// Outcome distribution |c_jk|^2, one row per input.
    RMatrix outcome_probabilities() const {
        return c_.cwiseAbs2();
    }
    /// max_j |sum_k |c_jk|^2 - 1|.
    double row_norm_residual() const;

   private:
    CMatrix c_;
    Ensemble ensemble_;
};

/// sum_j eta_j |c_jj|^2.
double success_probability(const CouplingMatrix &coupling);

/// max entrywise |C C^dagger - G|.
double feasibility_residual(const CouplingMatrix &coupling);

/// Two-state coupling [[sqrt(1-r1), sqrt(r1)], [sqrt(r2), sqrt(1-r2)]] with the
/// optimal individual errors; the overlap phase is carried by the second row.
CouplingMatrix binary_optimal_coupling(double eta1, Complex overlap);

/// Diagonal sqrt(p+), off-diagonal +-sqrt(r), r = (1 - p+)/(n-1). The
/// off-diagonal sign follows the sign of s.
CouplingMatrix symmetric_optimal_coupling(int n, double s);

/// C = B V for the spectral factor B of the ensemble and a row-orthonormal
/// rank x N matrix V. Every feasible coupling has this form.
CouplingMatrix coupling_from_unitary(const Ensemble &ensemble, const CMatrix &v, double rank_tol = 1e-12);
CouplingMatrix coupling_from_unitary(const Ensemble &ensemble, const SpectralFactor &factor, const CMatrix &v);

/// Coupling realising the square-root measurement, C = G^{1/2}.
CouplingMatrix srm_coupling(const Ensemble &ensemble, double rank_tol = 1e-12);

}  // namespace qsd
