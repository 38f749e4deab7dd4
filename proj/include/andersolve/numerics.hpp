#pragma once

#include <Eigen/Core>
#include <functional>
#include <utility>

#include "andersolve/errors.hpp"

namespace andersolve {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative pivot threshold below which an LU factor is declared singular.
inline constexpr double kLuPivotRelTol = 1e-14;
/// Relative diagonal threshold for dropping dependent least-squares columns.
inline constexpr double kQrRankRelTol = 1e-12;
/// Hard cap on Krylov iterations for the non-restarted GMRES.
inline constexpr int kGmresMaxIterCap = 200;

/// Iteration budget for gmres_solve on an n-dimensional system: min(n, cap).
inline int gmres_iteration_cap(Eigen::Index n) {
    return static_cast<int>(n < kGmresMaxIterCap ? n : kGmresMaxIterCap);
}

/// Solve A d = b by LU with partial pivoting.
///
/// Throws SingularMatrixError when any pivot magnitude drops below
/// pivot_rel_tol * max|A_ij|.
Vector lu_solve(const Matrix& A, const Vector& b, double pivot_rel_tol = kLuPivotRelTol);

/// Minimize ||w - F gamma|| over gamma by unpivoted Householder QR.
///
/// Columns are processed in the given order (Anderson windows store newest
/// first). When a diagonal of R falls below rank_rel_tol times the largest
/// diagonal seen so far, that column and everything after it is dropped and
/// the corresponding gamma entries are zero.
Vector least_squares(const Matrix& F, const Vector& w, double rank_rel_tol = kQrRankRelTol);

/// Matrix-free operand for gmres_solve.
using LinearOperator = std::function<Vector(const Vector&)>;

/// Thrown when GMRES stalls; carries the best iterate so the caller can
/// still accept it.
class GmresNoConvergence : public SolverError {
public:
    GmresNoConvergence(std::string msg, Vector best, double achieved_rel, int iters)
        : SolverError(std::move(msg)),
          best_x(std::move(best)),
          achieved(achieved_rel),
          iterations(iters) {}

    Vector best_x;
    double achieved = 0.0;
    int iterations = 0;
};

/// Full (non-restarted) GMRES with zero initial guess.
///
/// Returns (d, achieved) where achieved = ||b - A d|| / ||b|| is the true
/// relative residual of the returned iterate, guaranteed <= rel_tol on
/// success. Throws GmresNoConvergence after max_iter Krylov steps.
std::pair<Vector, double> gmres_solve(const LinearOperator& apply, Eigen::Index n,
                                      const Vector& b, double rel_tol, int max_iter);

std::pair<Vector, double> gmres_solve(const Matrix& A, const Vector& b, double rel_tol,
                                      int max_iter);

} // namespace andersolve
