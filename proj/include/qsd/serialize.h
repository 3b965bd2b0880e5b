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

#include <string>

#include <json.hpp>

#include "qsd/coupling.h"
#include "qsd/dilation.h"
#include "qsd/optimizer.h"
#include "qsd/psk.h"
#include "qsd/simulate.h"

namespace qsd {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Complex complex_from_json(const Json &j);

Json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const Json &j);

/// Accepts the four ensemble forms:
///   {"kind":"binary","overlap":{"re":..,"im":..},"eta1":..}
///   {"kind":"symmetric","n":..,"s":..}
///   {"kind":"psk","n":..,"alpha_sq":..}
///   {"kind":"gram","matrix":[[{"re":..,"im":..},..],..],"priors":[..]}
/// Malformed documents raise qsd::Error(invalid-input).
Ensemble ensemble_from_json(const Json &j);
/// Always emits the "gram" form.
Json ensemble_to_json(const Ensemble &ensemble);

/// {"n":N,"amplitudes":[[{"re","im"}..]..]}
Json coupling_to_json(const CouplingMatrix &coupling);
CouplingMatrix coupling_from_json(const Json &j, const Ensemble &ensemble);

Json config_to_json(const SolverConfig &config);
/// Overrides only the fields present in `j`.
SolverConfig config_from_json(const Json &j, SolverConfig base = {});

Json report_to_json(const SimulationReport &report, bool include_elapsed = false);
Json dilation_check_to_json(const DilationCheck &check);
Json psk_params_to_json(const PskParams &params);

/// Serialises with every floating-point value printed at 17 significant digits.
std::string dump_json(const Json &j, int indent = 2);

/// Parses a document given inline (leading '{') or as a file path. File errors
/// raise std::ios_base::failure, parse errors qsd::Error(invalid-input).
Json load_json_argument(const std::string &text_or_path);

}  // namespace qsd
