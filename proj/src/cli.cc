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

#include "qsd/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qsd/closed_form.h"
#include "qsd/dilation.h"
#include "qsd/error.h"
#include "qsd/optimizer.h"
#include "qsd/psk.h"
#include "qsd/serialize.h"
#include "qsd/simulate.h"

namespace qsd::cli {

namespace {

/// Raised for results that are valid JSON but signal a numerical failure.
struct NoConvergence {
    Json payload;
    std::string message;
};

std::string csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_cell(const std::optional<double> &x) {
    return x ? csv_number(*x) : std::string();
}

struct EnsembleInput {
    Json document;
    Ensemble ensemble;
};

EnsembleInput read_ensemble(const std::string &arg) {
    Json doc = load_json_argument(arg);
    Ensemble ensemble = ensemble_from_json(doc);
    return {std::move(doc), std::move(ensemble)};
}

/// Best known coupling for an ensemble: closed forms where they exist, the
/// structured PSK solvers for n = 3, 4, the general optimiser otherwise.
CouplingMatrix optimal_coupling(const EnsembleInput &input, const SolverConfig &config) {
    const Json &doc = input.document;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "binary") {
        const Complex overlap = complex_from_json(doc.at("overlap"));
        return binary_optimal_coupling(doc.at("eta1").get<double>(), overlap);
    }
    if (kind == "symmetric") {
        return symmetric_optimal_coupling(doc.at("n").get<int>(), doc.at("s").get<double>());
    }
    if (kind == "psk") {
        const int n = doc.at("n").get<int>();
        if (n == 3 || n == 4) {
            return *psk_solve(n, doc.at("alpha_sq").get<double>()).coupling;
        }
    }
    OptimizeResult result = optimize_general(input.ensemble, config);
    if (!result.converged) {
        throw NoConvergence{Json{{"p_error", result.p_error}, {"gradient_norm", result.gradient_norm}},
                            "optimizer did not reach the gradient tolerance"};
    }
    return *result.coupling;
}

CouplingMatrix select_coupling(const EnsembleInput &input, const std::string &choice, const SolverConfig &config) {
    if (choice == "optimal") {
        return optimal_coupling(input, config);
    }
    if (choice == "srm") {
        return srm_coupling(input.ensemble, config.rank_tol);
    }
    return coupling_from_json(load_json_argument(choice), input.ensemble);
}

void emit(std::ostream &out, const Json &j) {
    out << dump_json(j) << '\n';
}

// ---- subcommands ------------------------------------------------------------

struct BoundArgs {
    double eta1 = 0.0;
    double overlap_re = 0.0;
    double overlap_im = 0.0;
};

int cmd_bound(const BoundArgs &a, std::ostream &out) {
    const Complex overlap(a.overlap_re, a.overlap_im);
    const BinarySolution sol = binary_individual_errors(a.eta1, overlap);
    emit(out, Json{{"p_error", helstrom_bound(a.eta1, overlap)}, {"r1", sol.r1}, {"r2", sol.r2}});
    return kOk;
}

struct SymmetricArgs {
    int n = 0;
    double s = 0.0;
    bool emit_coupling = false;
};

int cmd_symmetric(const SymmetricArgs &a, std::ostream &out) {
    const QuadraticRoots roots = symmetric_p_quadratic(a.n, a.s);
    Json j{{"n", a.n},
           {"s", a.s},
           {"p_error", symmetric_min_error(a.n, a.s)},
           {"p_plus", roots.p_plus},
           {"p_minus", roots.p_minus},
           {"srm_error", srm_error_general(gram_symmetric(a.n, a.s))}};
    if (a.emit_coupling) {
        j["coupling"] = coupling_to_json(symmetric_optimal_coupling(a.n, a.s));
    }
    emit(out, j);
    return kOk;
}

struct PskArgs {
    int n = 0;
    double alpha_sq = 0.0;
    bool emit_coupling = false;
};

int cmd_psk(const PskArgs &a, std::ostream &out) {
    const PskSolution sol = psk_solve(a.n, a.alpha_sq);
    Json j{{"n", a.n},
           {"alpha_sq", a.alpha_sq},
           {"p_error", sol.p_error},
           {"srm_error", srm_error_circulant(gram_psk(a.n, a.alpha_sq))},
           {"params", psk_params_to_json(sol.params)},
           {"constraint_residual", sol.constraint_residual},
           {"feasibility_residual", feasibility_residual(*sol.coupling)},
           {"skipped_points", sol.skipped_points}};
    if (a.emit_coupling) {
        j["coupling"] = coupling_to_json(*sol.coupling);
    }
    emit(out, j);
    return kOk;
}

struct SolverArgs {
    std::string config_path;
    int max_iters = 0;
    double grad_tol = 0.0;
    double step_init = 0.0;
    int restarts = 0;
    std::uint64_t seed = 0;
    double rank_tol = 0.0;
    int threads = 0;
    CLI::Option *max_iters_opt = nullptr;
    CLI::Option *grad_tol_opt = nullptr;
    CLI::Option *step_init_opt = nullptr;
    CLI::Option *restarts_opt = nullptr;
    CLI::Option *seed_opt = nullptr;
    CLI::Option *rank_tol_opt = nullptr;

    void attach(CLI::App *cmd) {
        cmd->add_option("--config", config_path, "JSON file with solver settings");
        max_iters_opt = cmd->add_option("--max-iters", max_iters, "iterations per restart");
        grad_tol_opt = cmd->add_option("--grad-tol", grad_tol, "Riemannian gradient tolerance");
        step_init_opt = cmd->add_option("--step-init", step_init, "initial line-search step");
        restarts_opt = cmd->add_option("--restarts", restarts, "number of restarts");
        seed_opt = cmd->add_option("--seed", seed, "master seed");
        rank_tol_opt = cmd->add_option("--rank-tol", rank_tol, "relative eigenvalue cutoff");
        cmd->add_option("--threads", threads, "worker threads (0: QSD_THREADS / hardware)");
    }

    static bool given(const CLI::Option *opt) { return opt != nullptr && opt->count() > 0; }

    /// Defaults, then the --config file, then individual flags.
    SolverConfig resolve() const {
        SolverConfig config;
        if (!config_path.empty()) {
            config = config_from_json(load_json_argument(config_path), config);
        }
        if (given(max_iters_opt)) config.max_iters = max_iters;
        if (given(grad_tol_opt)) config.grad_tol = grad_tol;
        if (given(step_init_opt)) config.step_init = step_init;
        if (given(restarts_opt)) config.restarts = restarts;
        if (given(seed_opt)) config.seed = seed;
        if (given(rank_tol_opt)) config.rank_tol = rank_tol;
        config.threads = threads;
        config.validate();
        return config;
    }
};

struct OptimizeArgs {
    std::string ensemble;
    bool emit_coupling = false;
    bool show_config = false;
    bool emit_trace = false;
    SolverArgs solver;
};

int cmd_optimize(const OptimizeArgs &a, std::ostream &out) {
    const SolverConfig config = a.solver.resolve();
    if (a.show_config) {
        emit(out, config_to_json(config));
        return kOk;
    }
    if (a.ensemble.empty()) {
        throw Error(ErrorCode::invalid_input, "--ensemble is required");
    }
    const EnsembleInput input = read_ensemble(a.ensemble);
    const OptimizeResult result = optimize_general(input.ensemble, config);
    Json j{{"p_error", result.p_error},
           {"converged", result.converged},
           {"gradient_norm", result.gradient_norm},
           {"iterations", result.iterations},
           {"restarts_used", result.restarts_used},
           {"best_restart", result.best_restart},
           {"feasibility_residual", feasibility_residual(*result.coupling)},
           {"config", config_to_json(config)}};
    if (a.emit_trace) {
        j["objective_trace"] = result.objective_trace;
    }
    if (a.emit_coupling) {
        j["coupling"] = coupling_to_json(*result.coupling);
    }
    if (!result.converged) {
        throw NoConvergence{j, "optimizer did not reach the gradient tolerance"};
    }
    emit(out, j);
    return kOk;
}

struct SimulateArgs {
    std::string ensemble;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    std::string coupling = "optimal";
    std::string counts_csv;
    bool emit_coupling = false;
    bool timing = false;
    SolverArgs solver;
};

int cmd_simulate(const SimulateArgs &a, std::ostream &out) {
    const SolverConfig config = a.solver.resolve();
    const EnsembleInput input = read_ensemble(a.ensemble);
    const CouplingMatrix coupling = select_coupling(input, a.coupling, config);
    const double dilation_deviation = verify_against_dilation(coupling);
    const SimulationReport report = run_monte_carlo(coupling, a.shots, a.seed, config.threads);

    if (!a.counts_csv.empty()) {
        std::ofstream csv(a.counts_csv);
        if (!csv) {
            throw std::ios_base::failure("cannot write " + a.counts_csv);
        }
        csv << "input,outcome,count\n";
        for (std::size_t j = 0; j < report.counts.size(); ++j) {
            for (std::size_t k = 0; k < report.counts[j].size(); ++k) {
                csv << j << ',' << k << ',' << report.counts[j][k] << '\n';
            }
        }
        if (!csv) {
            throw std::ios_base::failure("cannot write " + a.counts_csv);
        }
    }

    Json j = report_to_json(report, a.timing);
    j["dilation_deviation"] = dilation_deviation;
    if (a.emit_coupling) {
        j["coupling"] = coupling_to_json(coupling);
    }
    emit(out, j);
    return kOk;
}

struct DilationArgs {
    std::string ensemble;
    std::string coupling = "optimal";
    bool check = false;
    bool emit_unitary = false;
    SolverArgs solver;
};

int cmd_dilation(const DilationArgs &a, std::ostream &out, std::ostream &err) {
    const SolverConfig config = a.solver.resolve();
    const EnsembleInput input = read_ensemble(a.ensemble);
    const CouplingMatrix coupling = select_coupling(input, a.coupling, config);
    const DilationModel model = build_dilation(coupling, config.rank_tol);
    const DilationCheck check = check_dilation(model, input.ensemble);

    Json j{{"system_dim", model.system_dim},
           {"ancilla_dim", model.ancilla_dim},
           {"ancilla_init_index", model.ancilla_init_index},
           {"check", dilation_check_to_json(check)}};
    if (a.emit_unitary) {
        j["state_coords"] = matrix_to_json(model.state_coords);
        j["joint_unitary"] = matrix_to_json(model.joint_unitary);
    }
    emit(out, j);
    if (a.check && !check.passed()) {
        err << "qsd: dilation invariants violated\n";
        return kNoConvergence;
    }
    return kOk;
}

struct SweepArgs {
    std::string family;
    std::vector<int> n_list;
    std::string axis;
    double min = 0.0;
    double max = 0.0;
    int steps = 0;
    std::vector<std::string> outputs{"closed_form", "srm_oracle"};
    std::string out_path;
    double fixed_s = 0.0;
    double fixed_eta1 = 0.5;
    SolverArgs solver;
};

struct SweepRow {
    std::optional<double> closed;
    std::optional<double> srm;
    std::optional<double> opt;
};

int cmd_sweep(const SweepArgs &a, std::ostream &out, std::ostream &err) {
    const SolverConfig config = a.solver.resolve();
    if (a.steps < 2) {
        throw Error(ErrorCode::invalid_input, "--steps must be >= 2");
    }
    if (!(a.min < a.max)) {
        throw Error(ErrorCode::invalid_input, "--min must be smaller than --max");
    }
    const bool axis_ok = (a.family == "symmetric" && a.axis == "s") || (a.family == "psk" && a.axis == "alpha_sq") ||
                         (a.family == "binary" && (a.axis == "eta1" || a.axis == "s"));
    if (!axis_ok) {
        throw Error(ErrorCode::invalid_input, "axis \"" + a.axis + "\" is not valid for family \"" + a.family + "\"");
    }
    bool want_closed = false, want_srm = false, want_opt = false;
    for (const std::string &o : a.outputs) {
        if (o == "closed_form") {
            want_closed = true;
        } else if (o == "srm_oracle") {
            want_srm = true;
        } else if (o == "optimizer") {
            want_opt = true;
        } else {
            throw Error(ErrorCode::invalid_input, "unknown output \"" + o + "\"");
        }
    }
    std::vector<int> n_list = a.n_list;
    if (a.family == "binary") {
        n_list = {2};
    }
    if (n_list.empty()) {
        throw Error(ErrorCode::invalid_input, "--n is required for this family");
    }

    bool all_converged = true;
    auto optimize = [&](const Ensemble &e) {
        const OptimizeResult r = optimize_general(e, config);
        all_converged = all_converged && r.converged;
        return r.p_error;
    };

    std::ostringstream csv;
    csv << "family,n,axis,value,p_err_closed,p_err_srm,p_err_opt\n";
    for (int n : n_list) {
        for (int i = 0; i < a.steps; ++i) {
            const double x = i == a.steps - 1 ? a.max : a.min + (a.max - a.min) * i / (a.steps - 1);
            SweepRow row;
            if (a.family == "symmetric") {
                const Ensemble e = gram_symmetric(n, x);
                if (want_closed) row.closed = symmetric_min_error(n, x);
                if (want_srm) row.srm = srm_error_general(e);
                if (want_opt) row.opt = optimize(e);
            } else if (a.family == "psk") {
                const Ensemble e = gram_psk(n, x);
                if (want_closed && n == 2) row.closed = helstrom_bound(0.5, e.gram()(0, 1));
                if (want_srm) row.srm = srm_error_circulant(e);
                if (want_opt) row.opt = (n == 3 || n == 4) ? psk_solve(n, x).p_error : optimize(e);
            } else {
                const double eta1 = a.axis == "eta1" ? x : a.fixed_eta1;
                const double s = a.axis == "s" ? x : a.fixed_s;
                const Ensemble e = gram_binary(s, eta1);
                if (want_closed) row.closed = helstrom_bound(eta1, s);
                if (want_srm && e.has_equal_priors()) row.srm = srm_error_general(e);
                if (want_opt) row.opt = optimize(e);
            }
            csv << a.family << ',' << n << ',' << a.axis << ',' << csv_number(x) << ',' << csv_cell(row.closed)
                << ',' << csv_cell(row.srm) << ',' << csv_cell(row.opt) << '\n';
        }
    }

    if (a.out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(a.out_path);
        if (!file) {
            throw std::ios_base::failure("cannot write " + a.out_path);
        }
        file << csv.str();
        if (!file) {
            throw std::ios_base::failure("cannot write " + a.out_path);
        }
    }
    if (!all_converged) {
        err << "qsd: optimizer did not reach the gradient tolerance on every point\n";
        return kNoConvergence;
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Minimum-error discrimination of pure states through ancilla couplings", "qsd"};
    app.require_subcommand(1);

    BoundArgs bound;
    auto *bound_cmd = app.add_subcommand("bound", "Helstrom bound and optimal individual errors for two states");
    bound_cmd->add_option("--eta1", bound.eta1, "prior of the first state")->required();
    bound_cmd->add_option("--overlap-re", bound.overlap_re, "Re <psi_1|psi_2>")->required();
    bound_cmd->add_option("--overlap-im", bound.overlap_im, "Im <psi_1|psi_2>");

    SymmetricArgs symmetric;
    auto *sym_cmd = app.add_subcommand("symmetric", "N equiprobable states with a common real overlap");
    sym_cmd->add_option("--n", symmetric.n, "number of states")->required();
    sym_cmd->add_option("--s", symmetric.s, "pairwise overlap")->required();
    sym_cmd->add_flag("--emit-coupling", symmetric.emit_coupling, "include the optimal coupling");

    PskArgs psk;
    auto *psk_cmd = app.add_subcommand("psk", "phase-shift-keyed coherent states, structured solver");
    psk_cmd->add_option("--n", psk.n, "number of states (3 or 4)")->required()->check(CLI::IsMember({3, 4}));
    psk_cmd->add_option("--alpha-sq", psk.alpha_sq, "mean photon number |alpha|^2")->required();
    psk_cmd->add_flag("--emit-coupling", psk.emit_coupling, "include the coupling matrix");

    OptimizeArgs optimize;
    auto *opt_cmd = app.add_subcommand("optimize", "numerical optimum over all feasible couplings");
    opt_cmd->add_option("--ensemble", optimize.ensemble, "ensemble JSON (inline or file)");
    opt_cmd->add_flag("--emit-coupling", optimize.emit_coupling, "include the coupling matrix");
    opt_cmd->add_flag("--emit-trace", optimize.emit_trace, "include the objective trace of the winning restart");
    opt_cmd->add_flag("--show-config", optimize.show_config, "print the effective solver settings and exit");
    optimize.solver.attach(opt_cmd);

    SimulateArgs simulate;
    auto *sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of the measurement protocol");
    sim_cmd->add_option("--ensemble", simulate.ensemble, "ensemble JSON (inline or file)")->required();
    sim_cmd->add_option("--shots", simulate.shots, "number of shots")->required();
    sim_cmd->add_option("--seed", simulate.seed, "master seed");
    sim_cmd->add_option("--coupling", simulate.coupling, "optimal | srm | coupling JSON (inline or file)");
    sim_cmd->add_option("--counts-csv", simulate.counts_csv, "write counts as input,outcome,count");
    sim_cmd->add_flag("--emit-coupling", simulate.emit_coupling, "include the coupling matrix");
    sim_cmd->add_flag("--timing", simulate.timing, "include wall-clock time (output no longer reproducible)");
    // The solver keeps its own seed (from --config) so that --seed only drives sampling.
    sim_cmd->add_option("--threads", simulate.solver.threads, "worker threads (0: QSD_THREADS / hardware)");
    sim_cmd->add_option("--config", simulate.solver.config_path, "JSON file with solver settings");

    DilationArgs dilation;
    auto *dil_cmd = app.add_subcommand("dilation", "explicit joint unitary for a coupling");
    dil_cmd->add_option("--ensemble", dilation.ensemble, "ensemble JSON (inline or file)")->required();
    dil_cmd->add_option("--coupling", dilation.coupling, "optimal | srm | coupling JSON (inline or file)");
    dil_cmd->add_flag("--check", dilation.check, "exit non-zero unless every invariant holds within 1e-10");
    dil_cmd->add_flag("--emit-unitary", dilation.emit_unitary, "include coordinates and the joint unitary");
    dilation.solver.attach(dil_cmd);

    SweepArgs sweep;
    auto *sweep_cmd = app.add_subcommand("sweep", "CSV curves of minimum error versus a parameter");
    sweep_cmd->add_option("--family", sweep.family, "symmetric | psk | binary")
        ->required()
        ->check(CLI::IsMember({"symmetric", "psk", "binary"}));
    sweep_cmd->add_option("--n", sweep.n_list, "comma-separated state counts")->delimiter(',');
    sweep_cmd->add_option("--axis", sweep.axis, "s | alpha_sq | eta1")->required();
    sweep_cmd->add_option("--min", sweep.min, "first axis value")->required();
    sweep_cmd->add_option("--max", sweep.max, "last axis value")->required();
    sweep_cmd->add_option("--steps", sweep.steps, "number of axis points")->required();
    sweep_cmd->add_option("--outputs", sweep.outputs, "closed_form,srm_oracle,optimizer")->delimiter(',');
    sweep_cmd->add_option("--out", sweep.out_path, "CSV path (default: stdout)");
    sweep_cmd->add_option("--s", sweep.fixed_s, "binary family: overlap when sweeping eta1");
    sweep_cmd->add_option("--eta1", sweep.fixed_eta1, "binary family: prior when sweeping s");
    sweep.solver.attach(sweep_cmd);

    std::vector<const char *> argv{"qsd"};
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*bound_cmd) return cmd_bound(bound, out);
        if (*sym_cmd) return cmd_symmetric(symmetric, out);
        if (*psk_cmd) return cmd_psk(psk, out);
        if (*opt_cmd) return cmd_optimize(optimize, out);
        if (*sim_cmd) return cmd_simulate(simulate, out);
        if (*dil_cmd) return cmd_dilation(dilation, out, err);
        if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    } catch (const NoConvergence &nc) {
        emit(out, nc.payload);
        err << "qsd: " << nc.message << '\n';
        return kNoConvergence;
    } catch (const Error &e) {
        err << "qsd: " << e.what() << '\n';
        return e.code() == ErrorCode::no_solution ? kNoConvergence : kUsage;
    } catch (const std::ios_base::failure &e) {
        err << "qsd: " << e.what() << '\n';
        return kIo;
    }
    return kUsage;
}

}  // namespace qsd::cli
