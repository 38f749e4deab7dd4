#include "andersolve/steppers.hpp"

#include <algorithm>
#include <cmath>

namespace andersolve {

namespace {

void validate(const ForcingConfig& cfg) {
    const bool ok = cfg.gamma_ew > 0.0 && cfg.gamma_ew <= 1.0 && cfg.alpha > 1.0 &&
                    cfg.alpha <= 2.0 && cfg.eta0 > 0.0 && cfg.eta0 < 1.0 && cfg.eta_max > 0.0 &&
                    cfg.eta_max < 1.0;
    if (!ok) {
        throw ConfigError("forcing parameters outside their stated ranges");
    }
}

Matrix damped_normal_matrix(const Matrix& J, double mu) {
    Matrix N = Matrix::Zero(J.cols(), J.cols());
    N.selfadjointView<Eigen::Lower>().rankUpdate(J.transpose());
    Matrix full = N.selfadjointView<Eigen::Lower>();
    full.diagonal().array() += mu;
    return full;
}

} // namespace

double forcing_eta(const ForcingState& st, double fnorm, const ForcingConfig& cfg) {
    validate(cfg);
    if (!st.has_prev) {
        return cfg.eta0;
    }
    if (st.fnorm_prev <= 0.0) {
        throw InvalidInputError("forcing_eta: previous residual norm must be positive");
    }
    double eta = cfg.gamma_ew * std::pow(fnorm / st.fnorm_prev, cfg.alpha);
    if (cfg.safeguard) {
        const double carry = cfg.gamma_ew * std::pow(st.eta_prev, cfg.alpha);
        if (carry > 0.1) {
            eta = std::max(eta, carry);
        }
    }
    return std::clamp(eta, 0.0, cfg.eta_max);
}

void advance_forcing(ForcingState& st, double fnorm, double eta) {
    st.has_prev = true;
    st.fnorm_prev = fnorm;
    st.eta_prev = eta;
}

double mu_value(const MuSchedule& mu, double fnorm, double gradnorm) {
    switch (mu.kind) {
    case MuKind::scaled_residual_sq:
        return mu.value * fnorm * fnorm;
    case MuKind::gradient_norm:
        return gradnorm;
    case MuKind::constant:
        return mu.value;
    }
    throw ConfigError("mu_value: unknown schedule");
}

StepResult newton_step(const Matrix& J, const Vector& f) {
    StepResult out;
    out.w = lu_solve(J, -f);
    out.linear_residual = (J * out.w + f).norm();
    return out;
}

StepResult newton_step(const NonlinearProblem& p, const Vector& x) {
    return newton_step(eval_jacobian(p, x), p.residual(x));
}

StepResult inexact_newton_step(const Matrix& J, const Vector& f, ForcingState& history,
                               const ForcingConfig& cfg, int max_krylov) {
    const double fnorm = f.norm();
    const double eta = forcing_eta(history, fnorm, cfg);
    auto [w, achieved] = gmres_solve(J, -f, eta, max_krylov);
    advance_forcing(history, fnorm, eta);
    StepResult out;
    out.w = std::move(w);
    out.eta_used = eta;
    out.linear_residual = achieved * fnorm;
    return out;
}

StepResult inexact_newton_step(const NonlinearProblem& p, const Vector& x, ForcingState& history,
                               const ForcingConfig& cfg) {
    return inexact_newton_step(eval_jacobian(p, x), p.residual(x), history, cfg,
                               gmres_iteration_cap(p.dimension));
}

StepResult lm_step(const Matrix& J, const Vector& f, const MuSchedule& mu) {
    const Vector grad = J.transpose() * f;
    const double mu_k = mu_value(mu, f.norm(), grad.norm());
    const Matrix N = damped_normal_matrix(J, mu_k);
    StepResult out;
    try {
        out.w = lu_solve(N, -grad);
    } catch (const SingularMatrixError&) {
        if (mu_k < 1e-30) {
            throw DegenerateDampingError("lm_step: damping vanished on a singular normal matrix");
        }
        throw;
    }
    out.mu_used = mu_k;
    out.linear_residual = (N * out.w + grad).norm();
    return out;
}

StepResult lm_step(const NonlinearProblem& p, const Vector& x, const MuSchedule& mu) {
    return lm_step(eval_jacobian(p, x), p.residual(x), mu);
}

StepResult inexact_lm_step(const Matrix& J, const Vector& f, const MuSchedule& mu,
                           ForcingState& history, const ForcingConfig& cfg, int max_krylov) {
    const Vector grad = J.transpose() * f;
    const double fnorm = f.norm();
    const double mu_k = mu_value(mu, fnorm, grad.norm());
    const double eta = forcing_eta(history, fnorm, cfg);
    // Damped normal operator applied matrix-free; forming J^T J is never needed.
    LinearOperator apply = [&J, mu_k](const Vector& v) {
        return Vector(J.transpose() * (J * v) + mu_k * v);
    };
    auto [w, achieved] = gmres_solve(apply, J.cols(), -grad, eta, max_krylov);
    advance_forcing(history, fnorm, eta);
    StepResult out;
    out.w = std::move(w);
    out.mu_used = mu_k;
    out.eta_used = eta;
    out.linear_residual = achieved * grad.norm();
    return out;
}

StepResult inexact_lm_step(const NonlinearProblem& p, const Vector& x, const MuSchedule& mu,
                           ForcingState& history, const ForcingConfig& cfg) {
    return inexact_lm_step(eval_jacobian(p, x), p.residual(x), mu, history, cfg,
                           gmres_iteration_cap(p.dimension));
}

StepResult take_step(const StepperConfig& cfg, const Matrix& J, const Vector& f,
                     ForcingState& history, int max_krylov) {
    switch (cfg.kind) {
    case StepperKind::newton:
        return newton_step(J, f);
    case StepperKind::inexact_newton:
        return inexact_newton_step(J, f, history, cfg.forcing, max_krylov);
    case StepperKind::lm:
        return lm_step(J, f, cfg.mu);
    case StepperKind::inexact_lm:
        return inexact_lm_step(J, f, cfg.mu, history, cfg.forcing, max_krylov);
    }
    throw ConfigError("take_step: unknown stepper kind");
}

} // namespace andersolve
