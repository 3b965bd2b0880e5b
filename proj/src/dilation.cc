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

#include "qsd/dilation.h"

#include <sstream>

#include "qsd/error.h"

namespace qsd {

namespace {

constexpr double kFeasibilityTol = 1e-8;
constexpr double kZeroProbability = 1e-20;

/// Columns of `mapped` are orthonormal; returns a unitary whose leading columns
/// are `mapped` and whose remaining columns come from standard basis vectors,
/// taken greedily by largest residual after projection (lowest index on ties).
CMatrix complete_basis(const CMatrix &mapped) {
    const auto dim = mapped.rows();
    const auto have = mapped.cols();
    CMatrix out(dim, dim);
    out.leftCols(have) = mapped;

    CMatrix residual = CMatrix::Identity(dim, dim) - mapped * mapped.adjoint();
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    for (auto col = have; col < dim; ++col) {
        Eigen::Index pick = -1;
        double best = -1.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (used[static_cast<std::size_t>(i)]) {
                continue;
            }
            double norm = residual.col(i).norm();
            if (norm > best) {
                best = norm;
                pick = i;
            }
        }
        used[static_cast<std::size_t>(pick)] = true;
        CVector q = residual.col(pick);
        // Second Gram-Schmidt pass against everything accepted so far.
        auto basis = out.leftCols(col);
        q -= basis * (basis.adjoint() * q);
        q.normalize();
        out.col(col) = q;
        residual -= q * (q.adjoint() * residual);
    }
    return out;
}

/// Nearest matrix with orthonormal columns (polar factor).
CMatrix orthonormalize_columns(const CMatrix &m) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

CVector target_vector(const CMatrix &amplitudes, int input) {
    const auto n = amplitudes.cols();
    CVector y = CVector::Zero(n * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        y(k * n + k) = amplitudes(input, k);
    }
    return y;
}

}  // namespace

CVector DilationModel::embed(const CVector &system, int ancilla_index) const {
    CVector out = CVector::Zero(static_cast<Eigen::Index>(system_dim) * ancilla_dim);
    for (int m = 0; m < system_dim; ++m) {
        out(m * ancilla_dim + ancilla_index) = system(m);
    }
    return out;
}

CVector DilationModel::evolve_input(int input) const {
    return joint_unitary * embed(state_coords.row(input).transpose(), ancilla_init_index);
}

DilationModel build_dilation(const CouplingMatrix &coupling, double rank_tol) {
    const double residual = feasibility_residual(coupling);
    if (residual > kFeasibilityTol) {
        std::ostringstream os;
        os << "C C^dagger differs from the Gram matrix by " << residual;
        throw Error(ErrorCode::infeasible_coupling, os.str());
    }
    const Ensemble &ensemble = coupling.ensemble();
    const int n = ensemble.size();
    const SpectralFactor factor = spectral_factor(ensemble, rank_tol);
    const int rank = factor.rank;

    DilationModel model;
    model.system_dim = n;
    model.ancilla_dim = n;
    model.ancilla_init_index = 0;
    model.amplitudes = coupling.amplitudes();
    model.post_states = CMatrix::Identity(n, n);
    model.state_coords = CMatrix::Zero(n, n);
    model.state_coords.leftCols(rank) = factor.factor;

    // Images z_m of the input basis vectors e_m (x) e_0 (m < rank) solve
    // sum_m x_jm z_m = y_j, i.e. B Z^T = Y^T with B of full column rank.
    const int dim = n * n;
    CMatrix targets(dim, n);
    for (int j = 0; j < n; ++j) {
        targets.col(j) = target_vector(model.amplitudes, j);
    }
    CMatrix images = factor.factor.colPivHouseholderQr().solve(targets.transpose()).transpose();
    images = orthonormalize_columns(images);

    const CMatrix outputs = complete_basis(images);
    CMatrix inputs = CMatrix::Zero(dim, dim);
    int next = 0;
    for (int m = 0; m < rank; ++m) {
        inputs(m * n + model.ancilla_init_index, next++) = 1.0;
    }
    for (int i = 0; i < dim; ++i) {
        const bool is_input = (i % n == model.ancilla_init_index) && (i / n) < rank;
        if (!is_input) {
            inputs(i, next++) = 1.0;
        }
    }
    model.joint_unitary = outputs * inputs.adjoint();
    return model;
}

DilationCheck check_dilation(const DilationModel &dilation, const Ensemble &ensemble) {
    const auto dim = dilation.joint_unitary.rows();
    DilationCheck check;
    check.unitarity =
        max_abs(dilation.joint_unitary.adjoint() * dilation.joint_unitary - CMatrix::Identity(dim, dim));
    check.gram = max_abs(dilation.state_coords * dilation.state_coords.adjoint() - ensemble.gram());
    for (int j = 0; j < dilation.system_dim; ++j) {
        const CVector out = dilation.evolve_input(j);
        CVector expected = CVector::Zero(dim);
        for (int k = 0; k < dilation.ancilla_dim; ++k) {
            expected += dilation.amplitudes(j, k) * dilation.embed(dilation.post_states.col(k), k);
        }
        check.mapped = std::max(check.mapped, max_abs(out - expected));
    }
    check.probability = (outcome_probabilities(dilation) - dilation.amplitudes.cwiseAbs2()).cwiseAbs().maxCoeff();
    return check;
}

RMatrix outcome_probabilities(const DilationModel &dilation) {
    const int n = dilation.system_dim;
    const int d = dilation.ancilla_dim;
    RMatrix probs = RMatrix::Zero(n, d);
    for (int j = 0; j < n; ++j) {
        const CVector out = dilation.evolve_input(j);
        for (int m = 0; m < n; ++m) {
            for (int k = 0; k < d; ++k) {
                probs(j, k) += std::norm(out(m * d + k));
            }
        }
    }
    return probs;
}

ConditionalState post_measurement_state(const DilationModel &dilation, int input, int outcome) {
    const int n = dilation.system_dim;
    const int d = dilation.ancilla_dim;
    if (input < 0 || input >= n || outcome < 0 || outcome >= d) {
        throw Error(ErrorCode::invalid_input, "input or outcome index out of range");
    }
    const CVector out = dilation.evolve_input(input);
    CVector system(n);
    for (int m = 0; m < n; ++m) {
        system(m) = out(m * d + outcome);
    }
    ConditionalState result;
    result.probability = system.squaredNorm();
    if (result.probability <= kZeroProbability) {
        throw Error(ErrorCode::undefined_conditional, "outcome has zero probability for this input");
    }
    result.state = system / std::sqrt(result.probability);
    return result;
}

double fidelity(const CVector &a, const CVector &b) {
    return std::norm(a.dot(b));
}

}  // namespace qsd
