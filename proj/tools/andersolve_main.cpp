#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "andersolve/bench.hpp"

namespace {

using namespace andersolve;

struct CommonOpts {
    std::string problem = "chandrasekhar";
    double omega = 1.0;
    int nodes = 1000;
    std::string solver = "newton";
    std::string mu;
    int aa_depth = 0;
    std::string safeguard = "off";
    double tau = 0.1;
    double r = 0.9;
    double p = 2.0;
    double tol = 1e-8;
    int max_iter = 100;
    std::uint64_t seed = 12345;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--problem", o.problem, "chandrasekhar|beh1|beh2|beh3|beh4|toy-singular");
    cmd->add_option("--omega", o.omega, "Chandrasekhar omega-bar parameter");
    cmd->add_option("--nodes", o.nodes, "Chandrasekhar discretization nodes");
    cmd->add_option("--solver", o.solver, "newton|inewton|lm|ilm");
    cmd->add_option("--mu", o.mu, "LM damping: scaled:<mu0>|gradnorm|constant:<c>");
    cmd->add_option("--aa-depth", o.aa_depth, "Anderson depth m (0 disables)");
    cmd->add_option("--safeguard", o.safeguard, "off|pre|asym");
    cmd->add_option("--tau", o.tau, "asymptotic switch threshold");
    cmd->add_option("--r", o.r, "safeguarding parameter r in [0,1]");
    cmd->add_option("--p", o.p, "safeguarding exponent p >= 2");
    cmd->add_option("--tol", o.tol, "termination tolerance");
    cmd->add_option("--max-iter", o.max_iter, "iteration cap");
    cmd->add_option("--seed", o.seed, "RNG seed for random starting vectors");
}

ProblemSpec problem_spec(const CommonOpts& o) {
    return {parse_problem_kind(o.problem), o.omega, o.nodes};
}

SolveConfig solve_config(const CommonOpts& o, const ProblemInstance& inst) {
    SolveConfig cfg;
    cfg.stepper.kind = parse_stepper_kind(o.solver);
    cfg.stepper.mu = o.mu.empty() ? inst.default_mu : parse_mu_schedule(o.mu);
    cfg.aa_depth_m = o.aa_depth;
    cfg.safeguard.kind = parse_safeguard_kind(o.safeguard);
    cfg.safeguard.tau = o.tau;
    cfg.safeguard.r = o.r;
    cfg.safeguard.p_exponent = o.p;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.seed = o.seed;
    return cfg;
}

std::string describe_problem(const CommonOpts& o) {
    if (o.problem == "chandrasekhar") {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "chandrasekhar(omega=%g,N=%d)", o.omega, o.nodes);
        return buf;
    }
    return o.problem;
}

void print_table(const std::vector<TrialSummary>& rows) {
    std::printf("%-24s %8s %9s %12s %14s\n", "algorithm", "trials", "failures", "mean_iters",
                "mean_resid");
    for (const auto& r : rows) {
        std::printf("%-24s %8d %9d %12.4g %14.4g\n", r.label.c_str(), r.trials, r.failures,
                    r.mean_iterations, r.mean_final_residual);
    }
}

int run_solve(const CommonOpts& o, bool seeded, const std::string& out) {
    const ProblemInstance inst = make_problem(problem_spec(o));
    const SolveConfig cfg = solve_config(o, inst);
    const Vector x0 = (seeded && inst.randomized_x0)
                          ? random_x0(inst.problem.dimension, o.seed)
                          : inst.default_x0;
    const RunRecord rec = solve(inst.problem, x0, cfg);
    std::printf("problem=%s algorithm=%s status=%s iterations=%d final_metric=%.6g\n",
                describe_problem(o).c_str(), variant_label(cfg).c_str(), to_string(rec.status),
                rec.iterations, rec.final_metric);
    if (!out.empty()) {
        write_trace_csv(out, rec);
        std::printf("trace written to %s\n", out.c_str());
    }
    return 0;
}

int run_suite_cmd(const CommonOpts& o, const std::string& name, int trials,
                  const std::string& out, const std::string& format) {
    SuiteSpec spec;
    if (!name.empty()) {
        spec = preset_suite(name, trials, o.seed);
        spec.problem.omega = o.omega;
        spec.problem.nodes = o.nodes;
        if (name == "table3") {
            spec.problem.omega = 0.8;
        }
    } else {
        spec.name = "custom";
        spec.problem = problem_spec(o);
        spec.trials = trials;
        spec.seed = o.seed;
        const ProblemInstance inst = make_problem(spec.problem);
        spec.variants.push_back(make_variant(solve_config(o, inst)));
    }
    const auto rows = run_suite(spec);
    print_table(rows);
    if (!out.empty()) {
        if (format == "json") {
            write_summary_json(out, spec, rows);
        } else {
            write_summary_csv(out, rows);
        }
        std::printf("summary written to %s\n", out.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anderson-accelerated perturbed Newton benchmark harness"};
    app.require_subcommand(1);
    app.footer("ANDERSOLVE_THREADS caps the suite worker pool.");

    CommonOpts solve_opts;
    std::string solve_out;
    CLI::App* solve_cmd = app.add_subcommand("solve", "run one solve and emit its trace");
    add_common_flags(solve_cmd, solve_opts);
    CLI::Option* seed_opt = solve_cmd->get_option("--seed");
    solve_cmd->add_option("--out", solve_out, "trace CSV path");

    CommonOpts suite_opts;
    std::string suite_name;
    std::string suite_out;
    std::string suite_format = "csv";
    int trials = 50;
    CLI::App* suite_cmd = app.add_subcommand("suite", "run a multi-trial benchmark suite");
    add_common_flags(suite_cmd, suite_opts);
    suite_cmd->add_option("--name", suite_name, "preset: table1|table2|table3|beh4");
    suite_cmd->add_option("--trials", trials, "number of seeded trials");
    suite_cmd->add_option("--out", suite_out, "summary output path");
    suite_cmd->add_option("--format", suite_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) {
            return run_solve(solve_opts, seed_opt->count() > 0, solve_out);
        }
        return run_suite_cmd(suite_opts, suite_name, trials, suite_out, suite_format);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
