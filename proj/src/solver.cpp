#include "andersolve/solver.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace andersolve {

const char* to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::converged:
        return "converged";
    case SolveStatus::max_iter_failure:
        return "max_iter_failure";
    case SolveStatus::linear_solve_failure:
        return "linear_solve_failure";
    case SolveStatus::evaluation_failure:
        return "evaluation_failure";
    }
    return "unknown";
}

RunRecord solve(const NonlinearProblem& p, const Vector& x0, const SolveConfig& cfg) {
    if (!p.residual) {
        throw ConfigError("solve: problem has no residual");
    }
    if (x0.size() != p.dimension) {
        throw InvalidInputError("solve: x0 not conformal with the problem");
    }
    if (!(cfg.tol > 0.0)) {
        throw ConfigError("solve: tolerance must be positive");
    }
    if (cfg.max_iter < 0) {
        throw ConfigError("solve: max_iter must be nonnegative");
    }

    SafeguardController controller(cfg.safeguard, cfg.aa_depth_m);
    AndersonWindow window(cfg.aa_depth_m);
    ForcingState forcing;
    const int max_krylov = gmres_iteration_cap(p.dimension);

    RunRecord rec;
    rec.config = cfg;
    rec.status = SolveStatus::max_iter_failure;

    Vector x = x0;
    Vector x_prev;
    Vector w_prev;
    rec.iterates.push_back(x);

    for (int k = 0;; ++k) {
        Vector f;
        Matrix J;
        try {
            f = p.residual(x);
            if (f.size() != p.dimension || !f.allFinite()) {
                throw SolverError("non-finite residual");
            }
            J = eval_jacobian(p, x);
            if (J.rows() != p.dimension || J.cols() != p.dimension || !J.allFinite()) {
                throw SolverError("non-finite Jacobian");
            }
        } catch (const std::exception&) {
            rec.status = SolveStatus::evaluation_failure;
            rec.iterations = k;
            rec.final_metric = std::numeric_limits<double>::quiet_NaN();
            return rec;
        }

        const double residual_norm = f.norm();
        const double grad_norm = (J.transpose() * f).norm();
        const double metric = p.gradient_norm_termination ? grad_norm : residual_norm;

        if (metric < cfg.tol) {
            rec.status = SolveStatus::converged;
            rec.iterations = k;
            rec.final_metric = metric;
            return rec;
        }
        if (k >= cfg.max_iter) {
            rec.status = SolveStatus::max_iter_failure;
            rec.iterations = k;
            rec.final_metric = metric;
            return rec;
        }

        StepResult step;
        try {
            step = take_step(cfg.stepper, J, f, forcing, max_krylov);
            if (!step.w.allFinite()) {
                throw SolverError("non-finite step");
            }
        } catch (const std::exception&) {
            rec.status = SolveStatus::linear_solve_failure;
            rec.iterations = k;
            rec.final_metric = metric;
            return rec;
        }

        const double step_norm = step.w.norm();
        const Regime regime = controller.update(step_norm, residual_norm);

        IterationTrace tr;
        tr.k = k;
        tr.residual_norm = residual_norm;
        tr.grad_norm = grad_norm;
        tr.step_norm = step_norm;
        tr.eta = step.eta_used;
        tr.mu_used = step.mu_used;
        tr.regime = regime;

        Vector x_next;
        if (k == 0 || regime == Regime::pnm_only || step_norm == 0.0) {
            x_next = x + step.w;
        } else if (regime == Regime::aa_m) {
            window.push(step.w - w_prev, x - x_prev);
            auto [gamma, theta] = solve_gamma(window, step.w);
            x_next = combine(x, step.w, window, gamma);
            tr.gamma = window.size() == 1 ? gamma[0] : gamma.norm();
            tr.theta = theta;
            tr.lambda = 1.0;
        } else {
            double gamma1 = 0.0;
            try {
                gamma1 = depth1_gamma(step.w, w_prev);
            } catch (const DegenerateDifferenceError&) {
                gamma1 = 0.0;
            }
            const double w_prev_norm = w_prev.norm();
            if (w_prev_norm == 0.0) {
                x_next = x + step.w;
            } else {
                const SafeguardDecision dec = gamma_safeguard(gamma1, step_norm, w_prev_norm,
                                                              cfg.safeguard.r,
                                                              cfg.safeguard.p_exponent);
                x_next = safeguarded_combine(x, x_prev, step.w, w_prev, gamma1, dec.lambda);
                tr.gamma = gamma1;
                tr.lambda = dec.lambda;
                tr.branch = dec.branch;
                tr.theta = (step.w - (dec.lambda * gamma1) * (step.w - w_prev)).norm() / step_norm;
            }
        }

        rec.traces.push_back(tr);
        x_prev = std::move(x);
        w_prev = std::move(step.w);
        x = std::move(x_next);
        rec.iterates.push_back(x);
    }
}

double observed_order(const RunRecord& record, int tail) {
    if (tail < 1) {
        throw InvalidInputError("observed_order: tail must be positive");
    }
    if (record.status != SolveStatus::converged) {
        throw InsufficientHistoryError("observed_order: run did not converge");
    }
    if (record.iterations < tail + 2 || record.iterates.size() < 3) {
        throw InsufficientHistoryError("observed_order: too few iterations");
    }

    const Vector& ref = record.iterates.back();
    const std::size_t last = record.iterates.size() - 1;
    std::vector<double> err(last);
    for (std::size_t k = 0; k < last; ++k) {
        err[k] = (record.iterates[k] - ref).norm();
    }

    std::vector<std::pair<double, double>> pts;
    for (std::size_t k = 0; k + 1 < last; ++k) {
        if (err[k] > 0.0 && err[k + 1] > 0.0) {
            pts.emplace_back(std::log(err[k]), std::log(err[k + 1]));
        }
    }
    if (pts.size() < 2) {
        throw InsufficientHistoryError("observed_order: not enough usable error pairs");
    }
    const std::size_t use = std::min<std::size_t>(static_cast<std::size_t>(tail), pts.size());
    const std::size_t begin = pts.size() - use;

    double mx = 0.0, my = 0.0;
    for (std::size_t i = begin; i < pts.size(); ++i) {
        mx += pts[i].first;
        my += pts[i].second;
    }
    mx /= static_cast<double>(use);
    my /= static_cast<double>(use);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = begin; i < pts.size(); ++i) {
        const double dx = pts[i].first - mx;
        sxx += dx * dx;
        sxy += dx * (pts[i].second - my);
    }
    if (sxx == 0.0) {
        throw InsufficientHistoryError("observed_order: errors do not decrease");
    }
    return sxy / sxx;
}

void write_trace_csv(std::ostream& os, const RunRecord& record) {
    os << "k,residual,grad_norm,step_norm,eta,gamma,lambda,theta,regime,mu\n";
    char buf[512];
    for (const auto& t : record.traces) {
        std::snprintf(buf, sizeof(buf),
                      "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g\n", t.k,
                      t.residual_norm, t.grad_norm, t.step_norm, t.eta, t.gamma, t.lambda,
                      t.theta, to_string(t.regime), t.mu_used);
        os << buf;
    }
}

void write_trace_csv(const std::string& path, const RunRecord& record) {
    std::ofstream os(path);
    if (!os) {
        throw InvalidInputError("write_trace_csv: cannot open " + path);
    }
    write_trace_csv(os, record);
}

} // namespace andersolve
