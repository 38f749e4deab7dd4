#include "andersolve/problems.hpp"

#include <cmath>
#include <memory>

namespace andersolve {

NonlinearProblem chandrasekhar(const ChandrasekharConfig& cfg) {
    if (!(cfg.omega_bar > 0.0 && cfg.omega_bar <= 1.0)) {
        throw ConfigError("chandrasekhar: omega_bar must lie in (0, 1]");
    }
    if (cfg.nodes_n < 2) {
        throw ConfigError("chandrasekhar: at least 2 nodes required");
    }
    const Eigen::Index n = cfg.nodes_n;

    // Midpoint nodes mu_i = (i - 1/2)/N with equal weights 1/N; the kernel
    // K_ij = (omega/2N) mu_i / (mu_i + mu_j) is fixed for the whole solve.
    Vector mu(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        mu[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    }
    auto kernel = std::make_shared<Matrix>(n, n);
    const double c = cfg.omega_bar / (2.0 * static_cast<double>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            (*kernel)(i, j) = c * mu[i] / (mu[i] + mu[j]);
        }
    }

    NonlinearProblem p;
    p.dimension = n;
    p.name = "chandrasekhar";
    p.gradient_norm_termination = false;
    p.residual = [kernel](const Vector& H) {
        // f_i = H_i - 1/(1 - S_i); a vanishing 1 - S_i yields a non-finite
        // entry which the driver reports as an evaluation failure.
        Vector S = (*kernel) * H;
        return Vector(H.array() - (1.0 - S.array()).inverse());
    };
    p.jacobian = [kernel](const Vector& H) {
        Vector S = (*kernel) * H;
        Vector d = (1.0 - S.array()).square().inverse();
        Matrix J = -(*kernel);
        J.array().colwise() *= d.array();
        J.diagonal().array() += 1.0;
        return J;
    };
    return p;
}

namespace {

NonlinearProblem make_beh(int id) {
    NonlinearProblem p;
    p.dimension = 2;
    p.gradient_norm_termination = true;
    switch (id) {
    case 1:
        p.name = "beh1";
        p.residual = [](const Vector& x) {
            const double s = x[0] * x[0] + x[1] * x[1];
            return Vector{{s - 1.0, s - 9.0}};
        };
        p.jacobian = [](const Vector& x) {
            Matrix J(2, 2);
            J << 2.0 * x[0], 2.0 * x[1], 2.0 * x[0], 2.0 * x[1];
            return J;
        };
        break;
    case 2:
        p.name = "beh2";
        p.residual = [](const Vector& x) {
            const double c = x[0] * x[0] * x[0];
            return Vector{{c - x[0] * x[1] + 1.0, c + x[0] * x[1] + 1.0}};
        };
        p.jacobian = [](const Vector& x) {
            const double q = 3.0 * x[0] * x[0];
            Matrix J(2, 2);
            J << q - x[1], -x[0], q + x[1], x[0];
            return J;
        };
        break;
    case 3:
        p.name = "beh3";
        p.residual = [](const Vector& x) {
            const double c = std::cos(x[0]);
            const double s = std::sin(x[0]);
            return Vector{{c / 9.0 - x[1] * s, s / 9.0 + x[1] * c}};
        };
        p.jacobian = [](const Vector& x) {
            const double c = std::cos(x[0]);
            const double s = std::sin(x[0]);
            Matrix J(2, 2);
            J << -s / 9.0 - x[1] * c, -s, c / 9.0 - x[1] * s, c;
            return J;
        };
        break;
    case 4:
        p.name = "beh4";
        p.residual = [](const Vector& x) {
            const double q = x[0] * x[0];
            return Vector{{x[1] - q - 1.0, x[1] + q + 1.0}};
        };
        p.jacobian = [](const Vector& x) {
            Matrix J(2, 2);
            J << -2.0 * x[0], 1.0, 2.0 * x[0], 1.0;
            return J;
        };
        break;
    default:
        throw ConfigError("beh_problem: id must be 1..4");
    }
    return p;
}

} // namespace

BehProblem beh_problem(int id) {
    BehProblem out;
    out.problem = make_beh(id);
    switch (id) {
    case 1:
        out.x0 = Vector{{0.0, std::sqrt(5.0) + 0.03}};
        out.default_mu = {MuKind::gradient_norm, 0.0};
        break;
    case 2:
        out.x0 = Vector{{0.008, 2.0}};
        out.default_mu = {MuKind::gradient_norm, 0.0};
        break;
    case 3:
        out.x0 = Vector{{M_PI, 0.001}};
        out.default_mu = {MuKind::constant, 0.2};
        break;
    case 4:
        out.x0 = Vector{{0.01, 0.0}};
        out.default_mu = {MuKind::constant, 5.0};
        break;
    default:
        throw ConfigError("beh_problem: id must be 1..4");
    }
    return out;
}

SingularToy singular_toy() {
    SingularToy toy;
    toy.problem.dimension = 2;
    toy.problem.name = "toy-singular";
    toy.problem.residual = [](const Vector& x) { return Vector{{x[0] * x[0], x[1]}}; };
    toy.problem.jacobian = [](const Vector& x) {
        Matrix J(2, 2);
        J << 2.0 * x[0], 0.0, 0.0, 1.0;
        return J;
    };
    toy.diagnostics.known_root = Vector::Zero(2);
    toy.diagnostics.null_projection = [](const Vector& e) { return Vector{{e[0], 0.0}}; };
    toy.diagnostics.range_projection = [](const Vector& e) { return Vector{{0.0, e[1]}}; };
    return toy;
}

} // namespace andersolve
