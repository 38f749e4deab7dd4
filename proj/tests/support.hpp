#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>

#include "andersolve/problem.hpp"

namespace andersolve::testing {

// Deterministic helpers shared by the unit and acceptance suites. All
// randomness flows through mt19937_64 with explicit seeds and the 53-bit
// mantissa draw, so expected values frozen here stay stable.

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double gaussian(std::mt19937_64& rng) {
    double u = uniform01(rng);
    while (u == 0.0) {
        u = uniform01(rng);
    }
    const double v = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double lo = -1.0,
                            double hi = 1.0) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = uniform(rng, lo, hi);
    }
    return x;
}

inline Matrix random_gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows,
                                     Eigen::Index cols) {
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            M(i, j) = gaussian(rng);
        }
    }
    return M;
}

inline Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(random_gaussian_matrix(rng, n, n));
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (R(j, j) < 0.0) {
            Q.col(j) = -Q.col(j);
        }
    }
    return Q;
}

/// Dense matrix with prescribed condition number (log-uniform spectrum).
inline Matrix random_conditioned(std::mt19937_64& rng, Eigen::Index n, double cond) {
    const Matrix U = random_orthogonal(rng, n);
    const Matrix V = random_orthogonal(rng, n);
    Vector sv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        sv[i] = std::pow(cond, -t);
    }
    return U * sv.asDiagonal() * V.transpose();
}

/// f(x) = x^2 - 4 as a 1-D root-finding problem (root at 2).
inline NonlinearProblem scalar_quadratic() {
    NonlinearProblem p;
    p.dimension = 1;
    p.name = "scalar-quadratic";
    p.residual = [](const Vector& x) { return Vector{{x[0] * x[0] - 4.0}}; };
    p.jacobian = [](const Vector& x) { return Matrix{{2.0 * x[0]}}; };
    return p;
}

/// Smooth nonsingular 5-D test problem with diagonally dominant Jacobian.
inline NonlinearProblem smooth_5d() {
    static constexpr int n = 5;
    NonlinearProblem p;
    p.dimension = n;
    p.name = "smooth-5d";
    p.residual = [](const Vector& x) {
        Vector f(n);
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            f[i] = 3.0 * x[i] + x[i] * x[i] * x[i] + 0.5 * std::sin(x[j]) - 0.2 * (i + 1);
        }
        return f;
    };
    p.jacobian = [](const Vector& x) {
        Matrix J = Matrix::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            const int j = (i + 1) % n;
            J(i, i) = 3.0 + 3.0 * x[i] * x[i];
            J(i, j) += 0.5 * std::cos(x[j]);
        }
        return J;
    };
    return p;
}

} // namespace andersolve::testing
