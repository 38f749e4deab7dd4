#pragma once

#include <functional>
#include <string>

#include "andersolve/numerics.hpp"

namespace andersolve {

/// Evaluation contract for a root-finding problem f(x) = 0.
///
/// When jacobian is empty a forward-difference approximation is used.
/// gradient_norm_termination selects ||f'(x)^T f(x)|| instead of ||f(x)||
/// as the stopping metric; least-squares style problems whose residual
/// minimum is nonzero need the gradient test.
struct NonlinearProblem {
    Eigen::Index dimension = 0;
    std::function<Vector(const Vector&)> residual;
    std::function<Matrix(const Vector&)> jacobian;
    bool gradient_norm_termination = false;
    std::string name = "problem";
};

/// Default forward-difference step: sqrt(eps) * max(1, ||x||_inf).
double default_fd_step(const Vector& x);

/// Forward-difference Jacobian; column j is (f(x + h e_j) - f(x)) / h.
Matrix fd_jacobian(const NonlinearProblem& p, const Vector& x, double h);
Matrix fd_jacobian(const NonlinearProblem& p, const Vector& x);

/// Analytic Jacobian when available, finite differences otherwise.
Matrix eval_jacobian(const NonlinearProblem& p, const Vector& x);

/// Stopping metric at x given the residual and Jacobian there.
double termination_metric(const NonlinearProblem& p, const Vector& f, const Matrix& J);

bool is_orthogonal(const Matrix& M, double tol = 1e-12);

/// base problem seen through f(x) = U^T F(V x); iterates map as y = V x.
struct TransformedProblem {
    NonlinearProblem problem;
    Matrix U;
    Matrix V;
};

/// Wrap base with orthogonal factors U, V. Throws NotOrthogonalError when
/// either factor fails the orthogonality check at orth_tol.
TransformedProblem transform(const NonlinearProblem& base, const Matrix& U, const Matrix& V,
                             double orth_tol = 1e-12);

} // namespace andersolve
