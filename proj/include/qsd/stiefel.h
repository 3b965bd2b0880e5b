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
#include "qsd/random.h"

// Manifold of complex r x N matrices with orthonormal rows (V V^dagger = I),
// with the embedded metric <A, B> = Re tr(A^dagger B).
namespace qsd::stiefel {

/// Re tr(A^dagger B).
double inner(const CMatrix &a, const CMatrix &b);

/// Orthogonal projection of an ambient direction onto the tangent space at v:
/// Z - 1/2 (Z V^dagger + V Z^dagger) V.
CMatrix project_tangent(const CMatrix &v, const CMatrix &z);

/// Polar retraction: row re-orthonormalisation of v + step * xi.
CMatrix retract(const CMatrix &v, const CMatrix &xi, double step);

/// Haar-like random point from complex Gaussian entries.
CMatrix random_point(int rows, int cols, Engine &rng);

}  // namespace qsd::stiefel
