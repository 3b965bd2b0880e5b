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

#include "qsd/error.h"

namespace qsd {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_overlap:
            return "invalid-overlap";
        case ErrorCode::invalid_prior:
            return "invalid-prior";
        case ErrorCode::not_positive_semidefinite:
            return "not-positive-semidefinite";
        case ErrorCode::invalid_intensity:
            return "invalid-intensity";
        case ErrorCode::invalid_input:
            return "invalid-input";
        case ErrorCode::numerical_error:
            return "numerical-error";
        case ErrorCode::not_circulant_hermitian:
            return "not-circulant-hermitian";
        case ErrorCode::not_circulant:
            return "not-circulant";
        case ErrorCode::unsupported_priors:
            return "unsupported-priors";
        case ErrorCode::invalid_isometry:
            return "invalid-isometry";
        case ErrorCode::infeasible_coupling:
            return "infeasible-coupling";
        case ErrorCode::undefined_conditional:
            return "undefined-conditional";
        case ErrorCode::no_solution:
            return "no-solution";
        case ErrorCode::invalid_coupling:
            return "invalid-coupling";
        case ErrorCode::infeasible_sequential:
            return "infeasible-sequential";
        case ErrorCode::invalid_config:
            return "invalid-config";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace qsd
