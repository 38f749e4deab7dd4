#pragma once

#include "andersolve/problem.hpp"
#include "andersolve/steppers.hpp"

namespace andersolve {

/// Discretized Chandrasekhar H-equation
///   H_i - (1 - (omega_bar / 2N) sum_j mu_i H_j / (mu_i + mu_j))^{-1} = 0
/// on composite midpoint nodes mu_i = (i - 1/2) / N. Singular (2-regular)
/// at omega_bar = 1, nonsingular for omega_bar < 1.
struct ChandrasekharConfig {
    double omega_bar = 1.0;
    int nodes_n = 1000;
};

NonlinearProblem chandrasekhar(const ChandrasekharConfig& cfg);

/// Beh1..Beh4 nonlinear least-squares benchmarks bundled with their
/// starting point and damping schedule; all terminate on ||f'^T f||.
struct BehProblem {
    NonlinearProblem problem;
    Vector x0;
    MuSchedule default_mu;
};

BehProblem beh_problem(int id);

/// Null/range projections and the root of the 2-D singular toy problem.
struct SingularToyDiagnostics {
    std::function<Vector(const Vector&)> null_projection;
    std::function<Vector(const Vector&)> range_projection;
    Vector known_root;
};

/// f(x) = (x1^2, x2): root at the origin, f'(0) = diag(0, 1), null space
/// along e1. Newton contracts the null error by exactly 1/2 per step.
struct SingularToy {
    NonlinearProblem problem;
    SingularToyDiagnostics diagnostics;
};

SingularToy singular_toy();

} // namespace andersolve
