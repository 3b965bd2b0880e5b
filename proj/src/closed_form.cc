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

#include "qsd/closed_form.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsd/error.h"

namespace qsd {

namespace {

void check_binary_inputs(double eta1, Complex overlap) {
    if (!(eta1 >= 0.0 && eta1 <= 1.0)) {
        throw Error(ErrorCode::invalid_prior, "eta1 must lie in [0, 1]");
    }
    if (!(std::abs(overlap) <= 1.0 + 1e-12)) {
        throw Error(ErrorCode::invalid_overlap, "|overlap| must not exceed 1");
    }
}

void check_symmetric_inputs(int n, double s) {
    if (n < 2) {
        throw Error(ErrorCode::invalid_input, "symmetric ensembles need n >= 2");
    }
    if (!(s >= -1.0 / (n - 1) - 1e-12 && s <= 1.0 + 1e-12)) {
        std::ostringstream os;
        os << "overlap " << s << " outside [-1/(n-1), 1]";
        throw Error(ErrorCode::invalid_overlap, os.str());
    }
}

double clamp01(double x) {
    return std::clamp(x, 0.0, 1.0);
}

void require_equal_priors(const Ensemble &ensemble) {
    if (!ensemble.has_equal_priors()) {
        throw Error(ErrorCode::unsupported_priors, "square-root measurement oracle requires equal priors");
    }
}

}  // namespace

double helstrom_bound(double eta1, Complex overlap) {
    check_binary_inputs(eta1, overlap);
    const double eta2 = 1.0 - eta1;
    const double arg = 1.0 - 4.0 * eta1 * eta2 * std::norm(overlap);
    if (arg < -1e-12) {
        throw Error(ErrorCode::invalid_input, "negative discriminant in the Helstrom bound");
    }
    return 0.5 * (1.0 - std::sqrt(std::max(arg, 0.0)));
}

BinarySolution binary_individual_errors(double eta1, Complex overlap) {
    check_binary_inputs(eta1, overlap);
    const double eta2 = 1.0 - eta1;
    const double s2 = std::min(std::norm(overlap), 1.0);
    const double root = std::sqrt(std::max(1.0 - 4.0 * eta1 * eta2 * s2, 0.0));

    BinarySolution out;
    if (root == 0.0) {
        out.r1 = out.r2 = 0.5;
    } else {
        out.r1 = clamp01(0.5 * (1.0 - (1.0 - 2.0 * eta2 * s2) / root));
        out.r2 = clamp01(0.5 * (1.0 - (1.0 - 2.0 * eta1 * s2) / root));
    }
    out.p_error = eta1 * out.r1 + eta2 * out.r2;
    return out;
}

double symmetric_min_error(int n, double s) {
    check_symmetric_inputs(n, s);
    const double m = n - 1;
    const double a = std::sqrt(std::max(1.0 + s * m, 0.0));
    const double b = std::sqrt(std::max(1.0 - s, 0.0));
    const double amp = (a + m * b) / n;
    return 1.0 - amp * amp;
}

QuadraticRoots symmetric_p_quadratic(int n, double s) {
    check_symmetric_inputs(n, s);
    const double m = n - 1;
    const double a = std::sqrt(std::max(1.0 + s * m, 0.0));
    const double b = std::sqrt(std::max(1.0 - s, 0.0));
    const double plus = (a + m * b) / n;
    const double minus = (a - m * b) / n;
    return {plus * plus, minus * minus};
}

double srm_error_general(const Ensemble &ensemble) {
    require_equal_priors(ensemble);
    // <mu_j|psi_j> = (G^{1/2})_jj; the principal root acts as the pseudo-inverse
    // square root on the support when G is rank deficient.
    const SpectralFactor factor = spectral_factor(ensemble);
    const double success = factor.sqrt.diagonal().cwiseAbs2().mean();
    return 1.0 - success;
}

double srm_error_circulant(const Ensemble &ensemble) {
    require_equal_priors(ensemble);
    const CMatrix &gram = ensemble.gram();
    const int n = ensemble.size();
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            if (std::abs(gram(j, l) - gram(0, (l - j + n) % n)) > 1e-10) {
                throw Error(ErrorCode::not_circulant, "Gram matrix is not circulant");
            }
        }
    }
    const RVector lambda = circulant_eigenvalues(gram.row(0).transpose());
    // Same relative rank cutoff as spectral_factor: sub-tolerance eigenvalues are DFT roundoff.
    const double cutoff = 1e-12 * lambda.maxCoeff();
    const double amp = (lambda.array() > cutoff).select(lambda.cwiseSqrt(), 0.0).sum() / n;
    return 1.0 - amp * amp;
}

}  // namespace qsd
