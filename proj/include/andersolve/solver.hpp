#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "andersolve/anderson.hpp"
#include "andersolve/problem.hpp"
#include "andersolve/safeguard.hpp"
#include "andersolve/steppers.hpp"

namespace andersolve {

enum class SolveStatus { converged, max_iter_failure, linear_solve_failure, evaluation_failure };

const char* to_string(SolveStatus s);

struct SolveConfig {
    StepperConfig stepper{};
    int aa_depth_m = 0;
    SafeguardMode safeguard{};
    double tol = 1e-8;
    int max_iter = 100;
    std::uint64_t seed = 0;
};

/// Everything observable about accepted update k: norms at x_k, the step
/// that produced x_{k+1}, and the extrapolation quantities. theta is the
/// gain of the step actually taken and reads 1.0 where acceleration was
/// inactive; gamma holds the depth-1 scalar or the coefficient norm for
/// deeper windows.
struct IterationTrace {
    int k = 0;
    double residual_norm = 0.0;
    double grad_norm = 0.0;
    double step_norm = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double theta = 1.0;
    Regime regime = Regime::pnm_only;
    double mu_used = 0.0;
    std::optional<SafeguardBranch> branch;
};

struct RunRecord {
    SolveConfig config{};
    std::vector<IterationTrace> traces;
    SolveStatus status = SolveStatus::max_iter_failure;
    int iterations = 0;
    double final_metric = 0.0;
    /// x_0 through the final iterate, in order.
    std::vector<Vector> iterates;
};

/// Run one solve. Termination is checked on x_k before the step is taken,
/// so `iterations` counts accepted updates; the first iteration always
/// takes the plain step x_1 = x_0 + w_1. Stepper and evaluation failures
/// are recorded in the status, never thrown.
RunRecord solve(const NonlinearProblem& p, const Vector& x0, const SolveConfig& cfg);

/// Least-squares slope of log e_{k+1} vs log e_k over the last `tail`
/// consecutive error pairs, errors measured against the final iterate.
/// Throws InsufficientHistoryError when the record did not converge or is
/// too short to fit a slope.
double observed_order(const RunRecord& record, int tail = 3);

/// Per-iteration trace with header k,residual,grad_norm,step_norm,eta,gamma,lambda,theta,regime,mu.
void write_trace_csv(std::ostream& os, const RunRecord& record);
void write_trace_csv(const std::string& path, const RunRecord& record);

} // namespace andersolve
