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

#include "qsd/serialize.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsd/error.h"

namespace qsd {

namespace {

template <class Fn>
auto guarded(const char *what, Fn &&fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::invalid_input, std::string(what) + ": " + e.what());
    }
}

int get_int(const Json &j, const char *key) {
    const Json &v = j.at(key);
    if (!v.is_number_integer()) {
        throw Error(ErrorCode::invalid_input, std::string("\"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

double get_double(const Json &j, const char *key) {
    const Json &v = j.at(key);
    if (!v.is_number()) {
        throw Error(ErrorCode::invalid_input, std::string("\"") + key + "\" must be a number");
    }
    return v.get<double>();
}

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string out(buf);
    if (out.find_first_of(".eE") == std::string::npos) {
        out += ".0";
    }
    return out;
}

void write(std::ostream &os, const Json &j, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char *nl = indent > 0 ? "\n" : "";
    const char *sep = indent > 0 ? ": " : ":";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (const auto &[key, value] : j.items()) {
                if (!first) {
                    os << ',' << nl;
                }
                first = false;
                os << pad << Json(key).dump() << sep;
                write(os, value, indent, depth + 1);
            }
            os << nl << close_pad << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << '[' << nl;
            bool first = true;
            for (const auto &value : j) {
                if (!first) {
                    os << ',' << nl;
                }
                first = false;
                os << pad;
                write(os, value, indent, depth + 1);
            }
            os << nl << close_pad << ']';
            return;
        }
        case Json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        default:
            os << j.dump();
            return;
    }
}

}  // namespace

Json to_json(Complex z) {
    return Json{{"re", z.real()}, {"im", z.imag()}};
}

Complex complex_from_json(const Json &j) {
    return guarded("complex number", [&] {
        if (!j.is_object()) {
            throw Error(ErrorCode::invalid_input, "complex numbers are objects {\"re\", \"im\"}");
        }
        const double im = j.contains("im") ? get_double(j, "im") : 0.0;
        return Complex(get_double(j, "re"), im);
    });
}

Json matrix_to_json(const CMatrix &m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(to_json(m(i, k)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const Json &j) {
    return guarded("matrix", [&] {
        if (!j.is_array() || j.empty()) {
            throw Error(ErrorCode::invalid_input, "matrix must be a non-empty array of rows");
        }
        const auto rows = static_cast<Eigen::Index>(j.size());
        const auto cols = static_cast<Eigen::Index>(j.at(0).size());
        CMatrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const Json &row = j.at(static_cast<std::size_t>(i));
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
                throw Error(ErrorCode::invalid_input, "matrix rows must have equal length");
            }
            for (Eigen::Index k = 0; k < cols; ++k) {
                m(i, k) = complex_from_json(row.at(static_cast<std::size_t>(k)));
            }
        }
        return m;
    });
}

Ensemble ensemble_from_json(const Json &j) {
    return guarded("ensemble", [&] {
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
            throw Error(ErrorCode::invalid_input, "ensemble needs a string \"kind\"");
        }
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "binary") {
            return gram_binary(complex_from_json(j.at("overlap")), get_double(j, "eta1"));
        }
        if (kind == "symmetric") {
            return gram_symmetric(get_int(j, "n"), get_double(j, "s"));
        }
        if (kind == "psk") {
            return gram_psk(get_int(j, "n"), get_double(j, "alpha_sq"));
        }
        if (kind == "gram") {
            CMatrix gram = matrix_from_json(j.at("matrix"));
            const Json &pj = j.at("priors");
            if (!pj.is_array()) {
                throw Error(ErrorCode::invalid_input, "\"priors\" must be an array");
            }
            RVector priors(static_cast<Eigen::Index>(pj.size()));
            for (std::size_t i = 0; i < pj.size(); ++i) {
                if (!pj[i].is_number()) {
                    throw Error(ErrorCode::invalid_input, "priors must be numbers");
                }
                priors(static_cast<Eigen::Index>(i)) = pj[i].get<double>();
            }
            return Ensemble::from_gram(std::move(gram), std::move(priors));
        }
        throw Error(ErrorCode::invalid_input, "unknown ensemble kind \"" + kind + "\"");
    });
}

Json ensemble_to_json(const Ensemble &ensemble) {
    Json priors = Json::array();
    for (Eigen::Index i = 0; i < ensemble.priors().size(); ++i) {
        priors.push_back(ensemble.priors()(i));
    }
    return Json{{"kind", "gram"}, {"matrix", matrix_to_json(ensemble.gram())}, {"priors", std::move(priors)}};
}

Json coupling_to_json(const CouplingMatrix &coupling) {
    return Json{{"n", coupling.size()}, {"amplitudes", matrix_to_json(coupling.amplitudes())}};
}

CouplingMatrix coupling_from_json(const Json &j, const Ensemble &ensemble) {
    return guarded("coupling", [&] {
        if (!j.is_object() || !j.contains("amplitudes")) {
            throw Error(ErrorCode::invalid_input, "coupling needs \"amplitudes\"");
        }
        return CouplingMatrix(matrix_from_json(j.at("amplitudes")), ensemble);
    });
}

Json config_to_json(const SolverConfig &config) {
    return Json{{"max_iters", config.max_iters}, {"grad_tol", config.grad_tol}, {"step_init", config.step_init},
                {"restarts", config.restarts},   {"seed", config.seed},         {"rank_tol", config.rank_tol}};
}

SolverConfig config_from_json(const Json &j, SolverConfig base) {
    return guarded("solver config", [&] {
        if (!j.is_object()) {
            throw Error(ErrorCode::invalid_input, "solver config must be an object");
        }
        for (const auto &[key, value] : j.items()) {
            if (key == "max_iters") {
                base.max_iters = get_int(j, "max_iters");
            } else if (key == "grad_tol") {
                base.grad_tol = get_double(j, "grad_tol");
            } else if (key == "step_init") {
                base.step_init = get_double(j, "step_init");
            } else if (key == "restarts") {
                base.restarts = get_int(j, "restarts");
            } else if (key == "seed") {
                if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
                    throw Error(ErrorCode::invalid_input, "\"seed\" must be a nonnegative integer");
                }
                base.seed = value.get<std::uint64_t>();
            } else if (key == "rank_tol") {
                base.rank_tol = get_double(j, "rank_tol");
            } else {
                throw Error(ErrorCode::invalid_input, "unknown solver setting \"" + key + "\"");
            }
        }
        base.validate();
        return base;
    });
}

Json report_to_json(const SimulationReport &report, bool include_elapsed) {
    Json j{{"shots", report.shots},
           {"seed", report.seed},
           {"counts", report.counts},
           {"empirical_error", report.empirical_error},
           {"analytic_error", report.analytic_error},
           {"std_error", report.std_error},
           {"z_score", report.z_score()}};
    if (include_elapsed) {
        j["elapsed_seconds"] = report.elapsed.count();
    }
    return j;
}

Json dilation_check_to_json(const DilationCheck &check) {
    return Json{{"unitarity_residual", check.unitarity},
                {"mapped_residual", check.mapped},
                {"gram_residual", check.gram},
                {"probability_residual", check.probability},
                {"passed", check.passed()}};
}

Json psk_params_to_json(const PskParams &params) {
    return Json{{"p", params.p},           {"r", params.r}, {"r_prime", params.r_prime},
                {"theta1", params.theta1}, {"theta2", params.theta2}, {"u", params.u},
                {"v", params.v}};
}

std::string dump_json(const Json &j, int indent) {
    std::ostringstream os;
    write(os, j, indent, 0);
    return os.str();
}

Json load_json_argument(const std::string &text_or_path) {
    std::string text = text_or_path;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
        std::ifstream in(text_or_path);
        if (!in) {
            throw std::ios_base::failure("cannot open " + text_or_path);
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::invalid_input, std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace qsd
