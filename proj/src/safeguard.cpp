#include "andersolve/safeguard.hpp"

#include <cassert>
#include <cmath>

namespace andersolve {

const char* to_string(SafeguardBranch b) {
    switch (b) {
    case SafeguardBranch::zero_out:
        return "zero_out";
    case SafeguardBranch::scaled:
        return "scaled";
    case SafeguardBranch::pass_through:
        return "pass_through";
    }
    return "unknown";
}

const char* to_string(Regime r) {
    switch (r) {
    case Regime::pnm_only:
        return "pnm_only";
    case Regime::aa_m:
        return "aa_m";
    case Regime::safeguarded_aa1:
        return "safeguarded_aa1";
    }
    return "unknown";
}

SafeguardDecision gamma_safeguard(double gamma, double w_next_norm, double w_prev_norm,
                                  double r, double p) {
    if (!(w_prev_norm > 0.0)) {
        throw InvalidInputError("gamma_safeguard: previous step norm must be positive");
    }
    if (!(w_next_norm >= 0.0) || !std::isfinite(w_next_norm) || !std::isfinite(gamma)) {
        throw InvalidInputError("gamma_safeguard: non-finite input");
    }
    if (!(r >= 0.0 && r <= 1.0)) {
        throw InvalidInputError("gamma_safeguard: r must lie in [0, 1]");
    }
    if (!(p >= 2.0)) {
        throw InvalidInputError("gamma_safeguard: exponent must be at least 2");
    }

    SafeguardDecision d;
    d.gamma_in = gamma;
    d.p_exponent = p;
    d.eta = w_next_norm / w_prev_norm;
    d.r_eff = std::min(d.eta, r);
    d.beta = d.r_eff * std::pow(d.eta, p - 1.0);

    if (gamma == 0.0 || gamma >= 1.0) {
        d.lambda = 0.0;
        d.branch = SafeguardBranch::zero_out;
    } else if (std::abs(gamma) / std::abs(1.0 - gamma) > d.beta) {
        assert(gamma != 0.0);
        const double sign = gamma > 0.0 ? 1.0 : -1.0;
        d.lambda = d.beta / (gamma * (d.beta + sign));
        d.branch = SafeguardBranch::scaled;
    } else {
        d.lambda = 1.0;
        d.branch = SafeguardBranch::pass_through;
    }
    return d;
}

Vector safeguarded_combine(const Vector& x, const Vector& x_prev, const Vector& w_next,
                           const Vector& w_prev, double gamma, double lambda) {
    return x + w_next - lambda * gamma * (x - x_prev + w_next - w_prev);
}

SafeguardController::SafeguardController(const SafeguardMode& mode, int aa_depth)
    : mode_(mode), depth_(aa_depth) {
    if (aa_depth < 0) {
        throw ConfigError("SafeguardController: depth must be nonnegative");
    }
    if (mode.kind == SafeguardModeKind::preasymptotic && aa_depth != 1) {
        throw ConfigError("preasymptotic safeguarding requires depth m = 1");
    }
    if (mode.kind == SafeguardModeKind::asymptotic && !(mode.tau > 0.0)) {
        throw ConfigError("asymptotic safeguarding requires tau > 0");
    }
}

Regime SafeguardController::update(double w_next_norm, double residual_norm) {
    switch (mode_.kind) {
    case SafeguardModeKind::off:
        return depth_ == 0 ? Regime::pnm_only : Regime::aa_m;
    case SafeguardModeKind::preasymptotic:
        return Regime::safeguarded_aa1;
    case SafeguardModeKind::asymptotic: {
        const double monitored = mode_.switch_on_residual ? residual_norm : w_next_norm;
        if (!latched_ && monitored < mode_.tau) {
            latched_ = true;
        }
        if (latched_) {
            return Regime::safeguarded_aa1;
        }
        return depth_ == 0 ? Regime::pnm_only : Regime::aa_m;
    }
    }
    throw ConfigError("SafeguardController: unknown mode");
}

} // namespace andersolve
