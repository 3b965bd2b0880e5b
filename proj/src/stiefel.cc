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

#include "qsd/stiefel.h"

namespace qsd::stiefel {

double inner(const CMatrix &a, const CMatrix &b) {
    return (a.conjugate().cwiseProduct(b)).sum().real();
}

CMatrix project_tangent(const CMatrix &v, const CMatrix &z) {
    const CMatrix zv = z * v.adjoint();
    return z - 0.5 * (zv + zv.adjoint()) * v;
}

CMatrix retract(const CMatrix &v, const CMatrix &xi, double step) {
    const CMatrix y = v + step * xi;
    Eigen::JacobiSVD<CMatrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix random_point(int rows, int cols, Engine &rng) {
    CMatrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const double re = standard_normal(rng);
            const double im = standard_normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return retract(g, CMatrix::Zero(rows, cols), 0.0);
}

}  // namespace qsd::stiefel
