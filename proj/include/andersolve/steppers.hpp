#pragma once

#include "andersolve/numerics.hpp"
#include "andersolve/problem.hpp"

namespace andersolve {

enum class StepperKind { newton, inexact_newton, lm, inexact_lm };

enum class MuKind { scaled_residual_sq, gradient_norm, constant };

/// Levenberg-Marquardt damping schedule. value is mu0 for
/// scaled_residual_sq (mu_k = mu0 ||f||^2) and c for constant; it is
/// ignored by gradient_norm (mu_k = ||f'^T f||).
struct MuSchedule {
    MuKind kind = MuKind::scaled_residual_sq;
    double value = 1.0;
};

/// Eisenstat-Walker choice-2 forcing constants. The safeguard clause
/// eta_k = max(eta_k, gamma_ew * eta_{k-1}^alpha), applied when the bound
/// exceeds 0.1, can be switched off.
struct ForcingConfig {
    double gamma_ew = 0.9;
    double alpha = 2.0;
    double eta0 = 0.5;
    double eta_max = 0.9;
    bool safeguard = true;
};

struct StepperConfig {
    StepperKind kind = StepperKind::newton;
    MuSchedule mu{};
    ForcingConfig forcing{};
};

/// Un-accelerated update w for one iteration, plus what produced it.
struct StepResult {
    Vector w;
    double mu_used = 0.0;
    double eta_used = 0.0;
    double linear_residual = 0.0;
};

/// Rolling state the forcing-term recursion needs between iterations.
struct ForcingState {
    bool has_prev = false;
    double eta_prev = 0.0;
    double fnorm_prev = 0.0;
};

/// Forcing term for the current iteration given ||f(x_k)||; does not
/// advance the state.
double forcing_eta(const ForcingState& st, double fnorm, const ForcingConfig& cfg);

/// Record eta and ||f|| as the previous iteration's values.
void advance_forcing(ForcingState& st, double fnorm, double eta);

double mu_value(const MuSchedule& mu, double fnorm, double gradnorm);

StepResult newton_step(const Matrix& J, const Vector& f);
StepResult newton_step(const NonlinearProblem& p, const Vector& x);

StepResult inexact_newton_step(const Matrix& J, const Vector& f, ForcingState& history,
                               const ForcingConfig& cfg, int max_krylov);
StepResult inexact_newton_step(const NonlinearProblem& p, const Vector& x, ForcingState& history,
                               const ForcingConfig& cfg);

StepResult lm_step(const Matrix& J, const Vector& f, const MuSchedule& mu);
StepResult lm_step(const NonlinearProblem& p, const Vector& x, const MuSchedule& mu);

StepResult inexact_lm_step(const Matrix& J, const Vector& f, const MuSchedule& mu,
                           ForcingState& history, const ForcingConfig& cfg, int max_krylov);
StepResult inexact_lm_step(const NonlinearProblem& p, const Vector& x, const MuSchedule& mu,
                           ForcingState& history, const ForcingConfig& cfg);

/// Dispatch on cfg.kind using a residual/Jacobian pair already evaluated
/// at the current iterate.
StepResult take_step(const StepperConfig& cfg, const Matrix& J, const Vector& f,
                     ForcingState& history, int max_krylov);

} // namespace andersolve
