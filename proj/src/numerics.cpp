#include "andersolve/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace andersolve {

Vector lu_solve(const Matrix& A, const Vector& b, double pivot_rel_tol) {
    if (A.rows() != A.cols()) {
        throw InvalidInputError("lu_solve: matrix must be square");
    }
    if (A.rows() != b.size()) {
        throw InvalidInputError("lu_solve: right-hand side not conformal");
    }
    Eigen::PartialPivLU<Matrix> lu(A);
    // The diagonal of U holds the pivots actually used by the elimination.
    const double scale = A.cwiseAbs().maxCoeff();
    const double threshold = pivot_rel_tol * scale;
    const auto pivots = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < pivots.size(); ++i) {
        if (!(std::abs(pivots[i]) >= threshold) || scale == 0.0) {
            throw SingularMatrixError("lu_solve: pivot below relative threshold");
        }
    }
    return lu.solve(b);
}

Vector least_squares(const Matrix& F, const Vector& w, double rank_rel_tol) {
    const Eigen::Index m = F.cols();
    if (m == 0) {
        throw EmptyWindowError("least_squares: no columns");
    }
    if (F.rows() < m) {
        throw InvalidInputError("least_squares: system is underdetermined");
    }
    if (F.rows() != w.size()) {
        throw InvalidInputError("least_squares: right-hand side not conformal");
    }
    Eigen::HouseholderQR<Matrix> qr(F);
    const Matrix& qrm = qr.matrixQR();

    // Columns are processed in the stored order (newest first). Once a
    // diagonal of R falls below the relative threshold, that column and
    // everything after it is dropped and the matching gamma entries stay 0.
    Eigen::Index rank = m;
    double dmax = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        const double d = std::abs(qrm(j, j));
        dmax = std::max(dmax, d);
        if (dmax == 0.0 || d < rank_rel_tol * dmax) {
            rank = j;
            break;
        }
    }

    Vector gamma = Vector::Zero(m);
    if (rank > 0) {
        Vector qtw = w;
        qtw.applyOnTheLeft(qr.householderQ().transpose());
        gamma.head(rank) = qrm.topLeftCorner(rank, rank)
                               .triangularView<Eigen::Upper>()
                               .solve(qtw.head(rank));
    }
    return gamma;
}

namespace {

std::pair<Vector, double> gmres_impl(const LinearOperator& apply, Eigen::Index n,
                                     const Vector& b, double rel_tol, int max_iter) {
    if (rel_tol < 0.0 || rel_tol >= 1.0) {
        throw InvalidInputError("gmres_solve: rel_tol must lie in [0, 1)");
    }
    if (max_iter < 1) {
        throw InvalidInputError("gmres_solve: max_iter must be positive");
    }
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        return {Vector::Zero(n), 0.0};
    }
    const double target = rel_tol * bnorm;
    max_iter = static_cast<int>(std::min<Eigen::Index>(max_iter, n));

    // Modified Gram-Schmidt Arnoldi with Givens rotations on H.
    Matrix basis(n, max_iter + 1);
    Matrix hess = Matrix::Zero(max_iter + 1, max_iter);
    Vector g = Vector::Zero(max_iter + 1);
    std::vector<double> cs(max_iter), sn(max_iter);

    basis.col(0) = b / bnorm;
    g[0] = bnorm;

    Vector best_x = Vector::Zero(n);
    double best_res = bnorm;

    auto assemble = [&](int j) {
        // x = V_j y with H(0:j,0:j) y = g(0:j)
        Vector y = hess.topLeftCorner(j + 1, j + 1)
                       .triangularView<Eigen::Upper>()
                       .solve(g.head(j + 1));
        return Vector(basis.leftCols(j + 1) * y);
    };

    int steps = 0;
    for (int j = 0; j < max_iter; ++j) {
        steps = j + 1;
        Vector v = apply(basis.col(j));
        for (int i = 0; i <= j; ++i) {
            hess(i, j) = basis.col(i).dot(v);
            v.noalias() -= hess(i, j) * basis.col(i);
        }
        hess(j + 1, j) = v.norm();
        const bool breakdown = hess(j + 1, j) <= 1e-300;
        if (!breakdown) {
            basis.col(j + 1) = v / hess(j + 1, j);
        }

        for (int i = 0; i < j; ++i) {
            const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
            hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
            hess(i, j) = t;
        }
        const double denom = std::hypot(hess(j, j), hess(j + 1, j));
        if (denom == 0.0) {
            break;
        }
        cs[j] = hess(j, j) / denom;
        sn[j] = hess(j + 1, j) / denom;
        hess(j, j) = denom;
        hess(j + 1, j) = 0.0;
        g[j + 1] = -sn[j] * g[j];
        g[j] = cs[j] * g[j];

        const double est = std::abs(g[j + 1]);
        if (est <= target || breakdown || j == max_iter - 1) {
            // Trust only the true residual of the assembled iterate.
            Vector x = assemble(j);
            const double res = (b - apply(x)).norm();
            if (res < best_res) {
                best_res = res;
                best_x = std::move(x);
            }
            if (best_res <= target) {
                return {best_x, best_res / bnorm};
            }
            if (breakdown) {
                break;
            }
        }
    }
    throw GmresNoConvergence("gmres_solve: tolerance not reached", best_x, best_res / bnorm,
                             steps);
}

} // namespace

std::pair<Vector, double> gmres_solve(const LinearOperator& apply, Eigen::Index n,
                                      const Vector& b, double rel_tol, int max_iter) {
    return gmres_impl(apply, n, b, rel_tol, max_iter);
}

std::pair<Vector, double> gmres_solve(const Matrix& A, const Vector& b, double rel_tol,
                                      int max_iter) {
    if (A.rows() != A.cols()) {
        throw InvalidInputError("gmres_solve: matrix must be square");
    }
    if (A.rows() != b.size()) {
        throw InvalidInputError("gmres_solve: right-hand side not conformal");
    }
    return gmres_impl([&A](const Vector& v) { return Vector(A * v); }, A.rows(), b, rel_tol,
                      max_iter);
}

} // namespace andersolve
