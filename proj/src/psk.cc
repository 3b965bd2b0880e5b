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

#include "qsd/psk.h"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsd/error.h"

namespace qsd {

namespace {

template <int K>
using Vec = Eigen::Matrix<double, K, 1>;
template <int K>
using Mat = Eigen::Matrix<double, K, K>;

constexpr double kRootTol = 1e-15;
constexpr double kSignTol = 1e-12;

/// Damped Newton iteration; returns the root when the residual falls below
/// kRootTol, nothing otherwise.
template <int K, class Residual, class Jacobian>
std::optional<Vec<K>> newton(const Residual &residual, const Jacobian &jacobian, Vec<K> x) {
    Vec<K> r = residual(x);
    double norm = r.norm();
    for (int it = 0; it < 200 && norm >= kRootTol; ++it) {
        const Vec<K> dx = jacobian(x).colPivHouseholderQr().solve(-r);
        if (!dx.allFinite()) {
            return std::nullopt;
        }
        bool moved = false;
        for (double t = 1.0; t > 1e-10; t *= 0.5) {
            const Vec<K> xn = x + t * dx;
            const Vec<K> rn = residual(xn);
            if (rn.norm() < (1.0 - 1e-4 * t) * norm) {
                x = xn;
                r = rn;
                norm = rn.norm();
                moved = true;
                break;
            }
        }
        if (!moved) {
            break;
        }
    }
    if (norm >= kRootTol) {
        return std::nullopt;
    }
    return x;
}

double wrap_angle(double theta) {
    return std::remainder(theta, 2.0 * std::numbers::pi);
}

// ---- three states ---------------------------------------------------------

struct Psk3System {
    Complex s;

    // x = (sqrt(p), u, v)
    Vec<3> residual(const Vec<3> &x) const {
        const double w = x(0), u = x(1), v = x(2);
        return {w * w + 2.0 * (u * u + v * v) - 1.0,
                2.0 * w * u + u * u - v * v - s.real(),
                -2.0 * w * v + 2.0 * u * v - s.imag()};
    }
    Mat<3> jacobian(const Vec<3> &x) const {
        const double w = x(0), u = x(1), v = x(2);
        Mat<3> j;
        j << 2.0 * w, 4.0 * u, 4.0 * v,
             2.0 * u, 2.0 * w + 2.0 * u, -2.0 * v,
             -2.0 * v, 2.0 * v, -2.0 * w + 2.0 * u;
        return j;
    }
};

// ---- four states ----------------------------------------------------------

struct Psk4System {
    Complex near;    // <psi_1|psi_2>
    double across;   // <psi_1|psi_3>
    double cos2;     // cos(theta2), fixed by the outer scan

    // x = (sqrt(p), sqrt(r), sqrt(r'), theta1)
    Vec<4> residual(const Vec<4> &x) const {
        const double w = x(0), a = x(1), b = x(2), t = x(3);
        const double c = std::cos(t), sn = std::sin(t);
        return {w * w + 2.0 * a * a + b * b - 1.0,
                2.0 * w * a * c + 2.0 * a * b * cos2 * c - near.real(),
                -2.0 * w * a * sn + 2.0 * a * b * cos2 * sn - near.imag(),
                2.0 * w * b * cos2 + 2.0 * a * a * std::cos(2.0 * t) - across};
    }
    Mat<4> jacobian(const Vec<4> &x) const {
        const double w = x(0), a = x(1), b = x(2), t = x(3);
        const double c = std::cos(t), sn = std::sin(t);
        Mat<4> j;
        j << 2.0 * w, 4.0 * a, 2.0 * b, 0.0,
             2.0 * a * c, 2.0 * w * c + 2.0 * b * cos2 * c, 2.0 * a * cos2 * c,
                 -2.0 * w * a * sn - 2.0 * a * b * cos2 * sn,
             -2.0 * a * sn, -2.0 * w * sn + 2.0 * b * cos2 * sn, 2.0 * a * cos2 * sn,
                 -2.0 * w * a * c + 2.0 * a * b * cos2 * c,
             2.0 * b * cos2, 4.0 * a * std::cos(2.0 * t), 2.0 * w * cos2, -4.0 * a * a * std::sin(2.0 * t);
        return j;
    }
};

struct Psk4Candidate {
    double theta2 = 0.0;
    Vec<4> x = Vec<4>::Zero();
    bool found = false;
};

/// Best admissible root (largest sqrt(p) >= 0) at a fixed theta2.
Psk4Candidate best_root_at(const Complex &near, double across, double theta2) {
    const Psk4System sys{near, across, std::cos(theta2)};
    auto res = [&](const Vec<4> &x) { return sys.residual(x); };
    auto jac = [&](const Vec<4> &x) { return sys.jacobian(x); };

    Psk4Candidate best;
    best.theta2 = theta2;
    for (double w : {0.3, 0.6, 0.9}) {
        for (double a : {0.15, 0.45}) {
            for (double b : {0.15, 0.45}) {
                for (double t : {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5}) {
                    const auto root = newton<4>(res, jac, Vec<4>(w, a, b, t));
                    if (!root || (*root)(0) < -kSignTol) {
                        continue;
                    }
                    if (!best.found || (*root)(0) > best.x(0)) {
                        best.x = *root;
                        best.found = true;
                    }
                }
            }
        }
    }
    return best;
}

double psk4_max_residual(const Complex &near, double across, double theta2, const Vec<4> &x) {
    return Psk4System{near, across, std::cos(theta2)}.residual(x).cwiseAbs().maxCoeff();
}

void check_intensity(double alpha_sq) {
    if (!(alpha_sq >= 0.0) || !std::isfinite(alpha_sq)) {
        throw Error(ErrorCode::invalid_intensity, "alpha_sq must be finite and >= 0");
    }
}

void finish(PskSolution &sol, const Ensemble &ensemble) {
    sol.coupling.emplace(psk_coupling_amplitudes(sol.n, sol.params), ensemble);
    const double residual = feasibility_residual(*sol.coupling);
    if (residual > 1e-8) {
        std::ostringstream os;
        os << "structured coupling violates C C^dagger = G by " << residual;
        throw Error(ErrorCode::no_solution, os.str());
    }
    sol.p_error = 1.0 - sol.params.p;
}

}  // namespace

CMatrix psk_coupling_amplitudes(int n, const PskParams &params) {
    if (n != 3 && n != 4) {
        throw Error(ErrorCode::invalid_input, "structured PSK couplings exist for n = 3 and n = 4");
    }
    std::array<Complex, 4> row{};
    row[0] = std::sqrt(std::max(params.p, 0.0));
    row[1] = std::polar(std::sqrt(std::max(params.r, 0.0)), params.theta1);
    row[static_cast<std::size_t>(n - 1)] = std::polar(std::sqrt(std::max(params.r, 0.0)), -params.theta1);
    if (n == 4) {
        row[2] = std::polar(std::sqrt(std::max(params.r_prime, 0.0)), params.theta2);
    }
    CMatrix c(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            c(j, k) = std::conj(row[static_cast<std::size_t>((k - j + n) % n)]);
        }
    }
    return c;
}

PskSolution psk3_solve(double alpha_sq) {
    check_intensity(alpha_sq);
    const Ensemble ensemble = gram_psk(3, alpha_sq);
    const Psk3System sys{ensemble.gram()(0, 1)};
    auto res = [&](const Vec<3> &x) { return sys.residual(x); };
    auto jac = [&](const Vec<3> &x) { return sys.jacobian(x); };

    std::optional<Vec<3>> best;
    for (double w : {0.2, 0.45, 0.7, 0.95}) {
        for (double u : {-0.6, -0.2, 0.2, 0.6}) {
            for (double v : {-0.6, -0.2, 0.2, 0.6}) {
                const auto root = newton<3>(res, jac, Vec<3>(w, u, v));
                if (!root || (*root)(0) < -kSignTol) {
                    continue;
                }
                if (!best || (*root)(0) > (*best)(0)) {
                    best = root;
                }
            }
        }
    }
    if (!best) {
        throw Error(ErrorCode::no_solution, "no admissible root of the three-state constraint system");
    }

    PskSolution sol;
    sol.n = 3;
    sol.alpha_sq = alpha_sq;
    const double w = std::max((*best)(0), 0.0);
    sol.params.u = (*best)(1);
    sol.params.v = (*best)(2);
    sol.params.p = w * w;
    sol.params.r = sol.params.u * sol.params.u + sol.params.v * sol.params.v;
    sol.params.theta1 = std::atan2(sol.params.v, sol.params.u);
    sol.constraint_residual = sys.residual(*best).cwiseAbs().maxCoeff();
    finish(sol, ensemble);
    return sol;
}

PskSolution psk4_solve(double alpha_sq) {
    check_intensity(alpha_sq);
    const Ensemble ensemble = gram_psk(4, alpha_sq);
    const Complex near = ensemble.gram()(0, 1);
    const double across = ensemble.gram()(0, 2).real();

    PskSolution sol;
    sol.n = 4;
    sol.alpha_sq = alpha_sq;

    Psk4Candidate best;
    auto consider = [&](double theta2) {
        Psk4Candidate cand = best_root_at(near, across, theta2);
        if (!cand.found) {
            ++sol.skipped_points;
            return -1.0;
        }
        if (!best.found || cand.x(0) > best.x(0)) {
            best = cand;
        }
        return cand.x(0);
    };

    constexpr int kGrid = 16;
    const double h = std::numbers::pi / kGrid;
    int grid_best = -1;
    double grid_value = -1.0;
    for (int i = 0; i <= kGrid; ++i) {
        const double value = consider(i * h);
        if (value > grid_value) {
            grid_value = value;
            grid_best = i;
        }
    }
    if (!best.found) {
        throw Error(ErrorCode::no_solution, "no admissible root of the four-state constraint system");
    }

    // Golden-section refinement inside the bracketing grid cells.
    double lo = std::max(grid_best - 1, 0) * h;
    double hi = std::min(grid_best + 1, kGrid) * h;
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = consider(x1);
    double f2 = consider(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = consider(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = consider(x2);
        }
    }

    // Canonical signs: sqrt(r), sqrt(r') >= 0 with the sign moved into the phases.
    Vec<4> x = best.x;
    double theta2 = best.theta2;
    sol.constraint_residual = psk4_max_residual(near, across, theta2, x);
    if (x(1) < 0.0) {
        x(1) = -x(1);
        x(3) += std::numbers::pi;
    }
    if (x(2) < 0.0) {
        x(2) = -x(2);
        theta2 += std::numbers::pi;
    }
    const double w = std::max(x(0), 0.0);
    sol.params.p = w * w;
    sol.params.r = x(1) * x(1);
    sol.params.r_prime = x(2) * x(2);
    sol.params.theta1 = wrap_angle(x(3));
    sol.params.theta2 = wrap_angle(theta2);
    sol.params.u = x(1) * std::cos(sol.params.theta1);
    sol.params.v = x(1) * std::sin(sol.params.theta1);
    finish(sol, ensemble);
    return sol;
}

PskSolution psk_solve(int n, double alpha_sq) {
    switch (n) {
        case 3:
            return psk3_solve(alpha_sq);
        case 4:
            return psk4_solve(alpha_sq);
        default:
            throw Error(ErrorCode::invalid_input, "structured PSK solver supports n = 3 and n = 4");
    }
}

}  // namespace qsd
