#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "andersolve/bench.hpp"

namespace py = pybind11;
using namespace andersolve;

namespace {

std::string mu_to_string(const MuSchedule& mu) {
    std::ostringstream os;
    switch (mu.kind) {
    case MuKind::scaled_residual_sq:
        os << "scaled:" << mu.value;
        break;
    case MuKind::gradient_norm:
        os << "gradnorm";
        break;
    case MuKind::constant:
        os << "constant:" << mu.value;
        break;
    }
    return os.str();
}

SolveConfig make_config(const std::string& solver, const std::string& mu, int aa_depth,
                        const std::string& safeguard, double tau, double r, double p, double tol,
                        int max_iter, std::uint64_t seed, bool switch_on_residual) {
    SolveConfig cfg;
    cfg.stepper.kind = parse_stepper_kind(solver);
    cfg.stepper.mu = parse_mu_schedule(mu);
    cfg.aa_depth_m = aa_depth;
    cfg.safeguard.kind = parse_safeguard_kind(safeguard);
    cfg.safeguard.tau = tau;
    cfg.safeguard.r = r;
    cfg.safeguard.p_exponent = p;
    cfg.safeguard.switch_on_residual = switch_on_residual;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.seed = seed;
    return cfg;
}

std::string record_trace_csv(const RunRecord& rec) {
    std::ostringstream os;
    write_trace_csv(os, rec);
    return os.str();
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Anderson-accelerated perturbed Newton solvers";

    py::register_exception<SolverError>(m, "SolverError");

    py::class_<NonlinearProblem>(m, "NonlinearProblem")
        .def_readonly("dimension", &NonlinearProblem::dimension)
        .def_readonly("name", &NonlinearProblem::name)
        .def_readonly("gradient_norm_termination", &NonlinearProblem::gradient_norm_termination)
        .def("residual", [](const NonlinearProblem& p, const Vector& x) { return p.residual(x); })
        .def("jacobian",
             [](const NonlinearProblem& p, const Vector& x) { return eval_jacobian(p, x); });

    py::class_<SolveConfig>(m, "SolveConfig")
        .def_property_readonly("label", &variant_label)
        .def_readwrite("tol", &SolveConfig::tol)
        .def_readwrite("max_iter", &SolveConfig::max_iter)
        .def_readwrite("aa_depth_m", &SolveConfig::aa_depth_m)
        .def_readwrite("seed", &SolveConfig::seed)
        .def("__repr__",
             [](const SolveConfig& cfg) { return "<SolveConfig " + variant_label(cfg) + ">"; });

    py::class_<IterationTrace>(m, "IterationTrace")
        .def_readonly("k", &IterationTrace::k)
        .def_readonly("residual_norm", &IterationTrace::residual_norm)
        .def_readonly("grad_norm", &IterationTrace::grad_norm)
        .def_readonly("step_norm", &IterationTrace::step_norm)
        .def_readonly("eta", &IterationTrace::eta)
        .def_readonly("gamma", &IterationTrace::gamma)
        .def_readonly("lambda_", &IterationTrace::lambda)
        .def_readonly("theta", &IterationTrace::theta)
        .def_readonly("mu_used", &IterationTrace::mu_used)
        .def_property_readonly("regime",
                               [](const IterationTrace& t) { return to_string(t.regime); });

    py::class_<RunRecord>(m, "RunRecord")
        .def_property_readonly("status", [](const RunRecord& r) { return to_string(r.status); })
        .def_property_readonly(
            "converged", [](const RunRecord& r) { return r.status == SolveStatus::converged; })
        .def_readonly("iterations", &RunRecord::iterations)
        .def_readonly("final_metric", &RunRecord::final_metric)
        .def_readonly("iterates", &RunRecord::iterates)
        .def_readonly("traces", &RunRecord::traces)
        .def("trace_csv", &record_trace_csv)
        .def("__repr__", [](const RunRecord& r) {
            std::ostringstream os;
            os << "<RunRecord " << to_string(r.status) << " iterations=" << r.iterations
               << " final_metric=" << r.final_metric << ">";
            return os.str();
        });

    py::class_<SafeguardDecision>(m, "SafeguardDecision")
        .def_readonly("lambda_", &SafeguardDecision::lambda)
        .def_readonly("eta", &SafeguardDecision::eta)
        .def_readonly("r_eff", &SafeguardDecision::r_eff)
        .def_readonly("beta", &SafeguardDecision::beta)
        .def_readonly("gamma_in", &SafeguardDecision::gamma_in)
        .def_property_readonly("branch",
                               [](const SafeguardDecision& d) { return to_string(d.branch); });

    py::class_<TrialSummary>(m, "TrialSummary")
        .def_readonly("label", &TrialSummary::label)
        .def_readonly("trials", &TrialSummary::trials)
        .def_readonly("failures", &TrialSummary::failures)
        .def_readonly("mean_iterations", &TrialSummary::mean_iterations)
        .def_readonly("mean_final_residual", &TrialSummary::mean_final_residual)
        .def("__repr__", [](const TrialSummary& t) {
            std::ostringstream os;
            os << "<TrialSummary " << t.label << " mean_iters=" << t.mean_iterations
               << " failures=" << t.failures << "/" << t.trials << ">";
            return os.str();
        });

    m.def("make_config", &make_config, py::arg("solver") = "newton", py::arg("mu") = "scaled:1",
          py::arg("aa_depth") = 0, py::arg("safeguard") = "off", py::arg("tau") = 0.1,
          py::arg("r") = 0.9, py::arg("p") = 2.0, py::arg("tol") = 1e-8,
          py::arg("max_iter") = 100, py::arg("seed") = 0, py::arg("switch_on_residual") = false);

    m.def(
        "chandrasekhar", [](double omega, int nodes) { return chandrasekhar({omega, nodes}); },
        py::arg("omega") = 1.0, py::arg("nodes") = 1000);

    m.def("beh_problem", [](int id) {
        const BehProblem beh = beh_problem(id);
        return py::make_tuple(beh.problem, beh.x0, mu_to_string(beh.default_mu));
    });

    m.def("singular_toy", []() {
        const SingularToy toy = singular_toy();
        return py::make_tuple(toy.problem, toy.diagnostics.known_root);
    });

    m.def("solve", &solve, py::arg("problem"), py::arg("x0"), py::arg("config"));

    m.def("observed_order", &observed_order, py::arg("record"), py::arg("tail") = 3);

    m.def("gamma_safeguard", &gamma_safeguard, py::arg("gamma"), py::arg("w_next_norm"),
          py::arg("w_prev_norm"), py::arg("r") = 0.9, py::arg("p") = 2.0);

    m.def("random_x0", &random_x0, py::arg("n"), py::arg("seed"));

    m.def(
        "run_suite",
        [](const std::string& name, int trials, std::uint64_t seed) {
            py::gil_scoped_release release;
            return run_suite(preset_suite(name, trials, seed));
        },
        py::arg("name"), py::arg("trials") = 50, py::arg("seed") = 12345);

    m.def("preset_suite_names", &preset_suite_names);
}
