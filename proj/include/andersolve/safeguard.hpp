#pragma once

#include "andersolve/numerics.hpp"

namespace andersolve {

enum class SafeguardBranch { zero_out, scaled, pass_through };

const char* to_string(SafeguardBranch b);

/// Outcome of the adaptive gamma-safeguarding decision together with the
/// quantities that produced it. beta = r_eff * eta^(p-1) with
/// r_eff = min(eta, r); p = 2 recovers the plain beta = r_eff * eta rule.
struct SafeguardDecision {
    double lambda = 0.0;
    SafeguardBranch branch = SafeguardBranch::zero_out;
    double eta = 0.0;
    double r_eff = 0.0;
    double beta = 0.0;
    double gamma_in = 0.0;
    double p_exponent = 2.0;
};

/// Adaptive gamma-safeguarding:
///   eta = w_next_norm / w_prev_norm, r_eff = min(eta, r),
///   beta = r_eff * eta^(p-1),
///   gamma == 0 or gamma >= 1          -> lambda = 0
///   |gamma| / |1 - gamma| > beta      -> lambda = beta / (gamma (beta + sign gamma))
///   otherwise                         -> lambda = 1
///
/// r = 0 is allowed and forces beta = 0, so any nonzero gamma is scaled
/// all the way to the plain step. Throws InvalidInputError when
/// w_prev_norm <= 0, r is outside [0, 1], or p < 2.
SafeguardDecision gamma_safeguard(double gamma, double w_next_norm, double w_prev_norm,
                                  double r, double p = 2.0);

/// x_{k+1} = x_k + w_next - lambda * gamma * (x_k - x_prev + w_next - w_prev).
Vector safeguarded_combine(const Vector& x, const Vector& x_prev, const Vector& w_next,
                           const Vector& w_prev, double gamma, double lambda);

enum class SafeguardModeKind { off, preasymptotic, asymptotic };

/// How safeguarding enters a solve. off runs plain AA(m); preasymptotic
/// runs safeguarded depth-1 AA from the start (depth must be 1);
/// asymptotic runs AA(m) until the monitored norm first drops below tau,
/// then latches to safeguarded depth-1 AA for the rest of the solve.
/// The monitored norm is ||w_{k+1}|| by default, ||f(x_k)|| when
/// switch_on_residual is set.
struct SafeguardMode {
    SafeguardModeKind kind = SafeguardModeKind::off;
    double tau = 0.1;
    double r = 0.9;
    double p_exponent = 2.0;
    bool switch_on_residual = false;
};

enum class Regime { pnm_only, aa_m, safeguarded_aa1 };

const char* to_string(Regime r);

/// Per-solve regime selector; the asymptotic switch never reverts.
class SafeguardController {
public:
    SafeguardController(const SafeguardMode& mode, int aa_depth);

    /// Regime for the step whose norm was just computed.
    Regime update(double w_next_norm, double residual_norm);

    bool latched() const { return latched_; }
    const SafeguardMode& mode() const { return mode_; }

private:
    SafeguardMode mode_;
    int depth_ = 0;
    bool latched_ = false;
};

} // namespace andersolve
