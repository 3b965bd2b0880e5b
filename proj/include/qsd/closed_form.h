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

/// Minimum average error for two pure states:
/// 1/2 (1 - sqrt(1 - 4 eta1 eta2 |<psi_1|psi_2>|^2)).
double helstrom_bound(double eta1, Complex overlap);

struct BinarySolution {
    double p_error = 0.0;
    /// Probability of guessing 2 when 1 was sent, and vice versa.
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Optimal individual error probabilities of the binary ancilla coupling,
/// r_{1,2} = 1/2 (1 - (1 - 2 eta_{2,1} s^2) / sqrt(1 - 4 eta1 eta2 s^2)), s = |overlap|.
/// At the single degenerate point eta1 = 1/2, s = 1 both are 1/2.
BinarySolution binary_individual_errors(double eta1, Complex overlap);

/// Minimum error for n equiprobable states with common real overlap s:
/// 1 - [sqrt(1 + s(n-1)) + (n-1) sqrt(1-s)]^2 / n^2.
double symmetric_min_error(int n, double s);

struct QuadraticRoots {
    double p_plus = 0.0;
    double p_minus = 0.0;
};

/// Both roots p of s = 2 sqrt(p r) + (n-2) r, r = (1-p)/(n-1).
QuadraticRoots symmetric_p_quadratic(int n, double s);

/// Square-root-measurement error 1 - (1/N) sum_j |(G^{1/2})_jj|^2.
/// Equal priors only.
double srm_error_general(const Ensemble &ensemble);

/// Square-root-measurement error for circulant Gram matrices through the
/// DFT spectrum: 1 - [(1/N) sum_k sqrt(lambda_k)]^2. Equal priors only.
double srm_error_circulant(const Ensemble &ensemble);

}  // namespace qsd
