#include "andersolve/problem.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace andersolve {

double default_fd_step(const Vector& x) {
    const double eps = std::numeric_limits<double>::epsilon();
    const double xinf = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
    return std::sqrt(eps) * std::max(1.0, xinf);
}

Matrix fd_jacobian(const NonlinearProblem& p, const Vector& x, double h) {
    if (h <= 0.0) {
        throw InvalidInputError("fd_jacobian: step must be positive");
    }
    const Vector f0 = p.residual(x);
    Matrix J(f0.size(), x.size());
    Vector xp = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        xp[j] = x[j] + h;
        J.col(j) = (p.residual(xp) - f0) / h;
        xp[j] = x[j];
    }
    return J;
}

Matrix fd_jacobian(const NonlinearProblem& p, const Vector& x) {
    return fd_jacobian(p, x, default_fd_step(x));
}

Matrix eval_jacobian(const NonlinearProblem& p, const Vector& x) {
    return p.jacobian ? p.jacobian(x) : fd_jacobian(p, x);
}

double termination_metric(const NonlinearProblem& p, const Vector& f, const Matrix& J) {
    return p.gradient_norm_termination ? (J.transpose() * f).norm() : f.norm();
}

bool is_orthogonal(const Matrix& M, double tol) {
    if (M.rows() != M.cols()) {
        return false;
    }
    Matrix gram = M.transpose() * M;
    gram.diagonal().array() -= 1.0;
    return gram.cwiseAbs().maxCoeff() <= tol;
}

TransformedProblem transform(const NonlinearProblem& base, const Matrix& U, const Matrix& V,
                             double orth_tol) {
    if (U.rows() != base.dimension || V.rows() != base.dimension) {
        throw InvalidInputError("transform: factors not conformal with the problem");
    }
    if (!is_orthogonal(U, orth_tol) || !is_orthogonal(V, orth_tol)) {
        throw NotOrthogonalError("transform: factor fails the orthogonality check");
    }

    TransformedProblem out;
    out.U = U;
    out.V = V;
    out.problem.dimension = base.dimension;
    out.problem.gradient_norm_termination = base.gradient_norm_termination;
    out.problem.name = base.name + "-transformed";
    out.problem.residual = [base_res = base.residual, U, V](const Vector& x) {
        return Vector(U.transpose() * base_res(V * x));
    };
    if (base.jacobian) {
        out.problem.jacobian = [base_jac = base.jacobian, U, V](const Vector& x) {
            return Matrix(U.transpose() * base_jac(V * x) * V);
        };
    }
    return out;
}

} // namespace andersolve
