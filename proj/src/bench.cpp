#include "andersolve/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace andersolve {

ProblemKind parse_problem_kind(std::string_view name) {
    if (name == "chandrasekhar") return ProblemKind::chandrasekhar;
    if (name == "beh1") return ProblemKind::beh1;
    if (name == "beh2") return ProblemKind::beh2;
    if (name == "beh3") return ProblemKind::beh3;
    if (name == "beh4") return ProblemKind::beh4;
    if (name == "toy-singular") return ProblemKind::toy_singular;
    throw ConfigError("unknown problem: " + std::string(name));
}

const char* to_string(ProblemKind k) {
    switch (k) {
    case ProblemKind::chandrasekhar:
        return "chandrasekhar";
    case ProblemKind::beh1:
        return "beh1";
    case ProblemKind::beh2:
        return "beh2";
    case ProblemKind::beh3:
        return "beh3";
    case ProblemKind::beh4:
        return "beh4";
    case ProblemKind::toy_singular:
        return "toy-singular";
    }
    return "unknown";
}

StepperKind parse_stepper_kind(std::string_view s) {
    if (s == "newton") return StepperKind::newton;
    if (s == "inewton") return StepperKind::inexact_newton;
    if (s == "lm") return StepperKind::lm;
    if (s == "ilm") return StepperKind::inexact_lm;
    throw ConfigError("unknown solver: " + std::string(s));
}

MuSchedule parse_mu_schedule(std::string_view s) {
    auto parse_value = [&](std::string_view text) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(std::string(text), &used);
        } catch (const std::exception&) {
            throw ConfigError("bad mu value: " + std::string(s));
        }
        if (used != text.size() || !(v > 0.0)) {
            throw ConfigError("bad mu value: " + std::string(s));
        }
        return v;
    };
    if (s == "gradnorm") {
        return {MuKind::gradient_norm, 0.0};
    }
    if (s.rfind("scaled:", 0) == 0) {
        return {MuKind::scaled_residual_sq, parse_value(s.substr(7))};
    }
    if (s.rfind("constant:", 0) == 0) {
        return {MuKind::constant, parse_value(s.substr(9))};
    }
    throw ConfigError("unknown mu schedule: " + std::string(s));
}

SafeguardModeKind parse_safeguard_kind(std::string_view s) {
    if (s == "off") return SafeguardModeKind::off;
    if (s == "pre") return SafeguardModeKind::preasymptotic;
    if (s == "asym") return SafeguardModeKind::asymptotic;
    throw ConfigError("unknown safeguard mode: " + std::string(s));
}

ProblemInstance make_problem(const ProblemSpec& spec) {
    ProblemInstance inst;
    switch (spec.kind) {
    case ProblemKind::chandrasekhar: {
        inst.problem = chandrasekhar({spec.omega, spec.nodes});
        inst.default_x0 = Vector::Ones(spec.nodes);
        // Damping tracks the L2(0,1) norm of the discretized residual.
        inst.default_mu = {MuKind::scaled_residual_sq, 1.0 / spec.nodes};
        inst.randomized_x0 = true;
        break;
    }
    case ProblemKind::beh1:
    case ProblemKind::beh2:
    case ProblemKind::beh3:
    case ProblemKind::beh4: {
        const int id = 1 + static_cast<int>(spec.kind) - static_cast<int>(ProblemKind::beh1);
        BehProblem beh = beh_problem(id);
        inst.problem = std::move(beh.problem);
        inst.default_x0 = std::move(beh.x0);
        inst.default_mu = beh.default_mu;
        inst.randomized_x0 = false;
        break;
    }
    case ProblemKind::toy_singular: {
        SingularToy toy = singular_toy();
        inst.problem = std::move(toy.problem);
        inst.default_x0 = Vector{{1.0, 0.0}};
        inst.default_mu = {MuKind::scaled_residual_sq, 1.0};
        inst.randomized_x0 = false;
        break;
    }
    }
    return inst;
}

Vector random_x0(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // 53-bit mantissa draw in [0, 1); avoids distribution objects whose
        // output is implementation defined.
        x[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
    return x;
}

Vector trial_x0(const ProblemInstance& inst, std::uint64_t suite_seed, int trial) {
    if (!inst.randomized_x0) {
        return inst.default_x0;
    }
    return random_x0(inst.problem.dimension, suite_seed ^ static_cast<std::uint64_t>(trial));
}

namespace {

std::string format_r(double r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", r);
    return buf;
}

} // namespace

std::string variant_label(const SolveConfig& cfg) {
    std::string base;
    switch (cfg.stepper.kind) {
    case StepperKind::newton:
        base = "Newt";
        break;
    case StepperKind::inexact_newton:
        base = "inNewt";
        break;
    case StepperKind::lm:
        base = "LM";
        break;
    case StepperKind::inexact_lm:
        base = "inLM";
        break;
    }
    if (cfg.aa_depth_m == 0 && cfg.safeguard.kind == SafeguardModeKind::off) {
        return base;
    }
    std::string label = "AA" + base + "(" + std::to_string(cfg.aa_depth_m);
    if (cfg.safeguard.kind != SafeguardModeKind::off) {
        label = "γ" + label + "," + format_r(cfg.safeguard.r);
    }
    label += ")";
    return label;
}

SuiteVariant make_variant(const SolveConfig& cfg) {
    return {variant_label(cfg), cfg};
}

int worker_count(int trials) {
    int workers = 0;
    if (const char* env = std::getenv("ANDERSOLVE_THREADS")) {
        workers = std::atoi(env);
    }
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
    }
    if (workers <= 0) {
        workers = 1;
    }
    return std::min(workers, std::max(trials, 1));
}

std::vector<TrialSummary> run_suite(const SuiteSpec& spec) {
    if (spec.variants.empty()) {
        throw ConfigError("run_suite: variant list is empty");
    }
    if (spec.trials < 1) {
        throw ConfigError("run_suite: trials must be positive");
    }
    const ProblemInstance inst = make_problem(spec.problem);
    const int nv = static_cast<int>(spec.variants.size());

    struct Cell {
        SolveStatus status = SolveStatus::max_iter_failure;
        int iterations = 0;
        double final_metric = 0.0;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(spec.trials) * nv);

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= spec.trials) {
                return;
            }
            try {
                const Vector x0 = trial_x0(inst, spec.seed, t);
                for (int v = 0; v < nv; ++v) {
                    SolveConfig cfg = spec.variants[static_cast<std::size_t>(v)].config;
                    cfg.seed = spec.seed ^ static_cast<std::uint64_t>(t);
                    const RunRecord rec = solve(inst.problem, x0, cfg);
                    Cell& c = cells[static_cast<std::size_t>(t) * nv + v];
                    c.status = rec.status;
                    c.iterations = rec.iterations;
                    c.final_metric = rec.final_metric;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    const int workers = worker_count(spec.trials);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    std::vector<TrialSummary> rows;
    rows.reserve(static_cast<std::size_t>(nv));
    for (int v = 0; v < nv; ++v) {
        TrialSummary row;
        row.label = spec.variants[static_cast<std::size_t>(v)].label;
        row.trials = spec.trials;
        double iter_sum = 0.0;
        double resid_sum = 0.0;
        int converged = 0;
        for (int t = 0; t < spec.trials; ++t) {
            const Cell& c = cells[static_cast<std::size_t>(t) * nv + v];
            if (c.status == SolveStatus::converged) {
                ++converged;
                iter_sum += c.iterations;
                resid_sum += c.final_metric;
            } else {
                ++row.failures;
            }
        }
        if (converged > 0) {
            row.mean_iterations = iter_sum / converged;
            row.mean_final_residual = resid_sum / converged;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

SolveConfig newton_cfg(int depth, SafeguardModeKind sg, double r = 0.9, double tau = 0.1) {
    SolveConfig cfg;
    cfg.stepper.kind = StepperKind::newton;
    cfg.aa_depth_m = depth;
    cfg.safeguard.kind = sg;
    cfg.safeguard.r = r;
    cfg.safeguard.tau = tau;
    return cfg;
}

SolveConfig lm_cfg(const MuSchedule& mu, int depth, SafeguardModeKind sg, double r = 0.9,
                   double tau = 0.1) {
    SolveConfig cfg = newton_cfg(depth, sg, r, tau);
    cfg.stepper.kind = StepperKind::lm;
    cfg.stepper.mu = mu;
    return cfg;
}

} // namespace

std::vector<std::string> preset_suite_names() {
    return {"table1", "table2", "table3", "beh4"};
}

SuiteSpec preset_suite(std::string_view name, int trials, std::uint64_t seed) {
    SuiteSpec spec;
    spec.name = std::string(name);
    spec.trials = trials;
    spec.seed = seed;
    const auto off = SafeguardModeKind::off;
    // Depth-1 safeguarded rows keep Algorithm-5 safeguarding on for the
    // whole solve; deeper windows switch asymptotically at tau = 0.1.
    auto sg_kind = [](int m) {
        return m == 1 ? SafeguardModeKind::preasymptotic : SafeguardModeKind::asymptotic;
    };

    if (name == "table1" || name == "table3") {
        spec.problem = {ProblemKind::chandrasekhar, name == "table1" ? 1.0 : 0.8, 1000};
        spec.variants.push_back(make_variant(newton_cfg(0, off)));
        for (int m : {1, 5, 10, 50}) {
            spec.variants.push_back(make_variant(newton_cfg(m, off)));
            spec.variants.push_back(make_variant(newton_cfg(m, sg_kind(m))));
        }
        return spec;
    }
    if (name == "table2") {
        spec.problem = {ProblemKind::chandrasekhar, 1.0, 1000};
        const MuSchedule mu{MuKind::scaled_residual_sq, 1.0 / 1000};
        spec.variants.push_back(make_variant(lm_cfg(mu, 0, off)));
        for (int m : {1, 5, 10, 50}) {
            spec.variants.push_back(make_variant(lm_cfg(mu, m, off)));
            spec.variants.push_back(make_variant(lm_cfg(mu, m, sg_kind(m))));
        }
        return spec;
    }
    if (name == "beh4") {
        spec.problem = {ProblemKind::beh4, 1.0, 2};
        spec.trials = 1;
        const MuSchedule grad{MuKind::gradient_norm, 0.0};
        const MuSchedule five{MuKind::constant, 5.0};
        spec.variants.push_back(make_variant(lm_cfg(grad, 0, off)));
        spec.variants.push_back(make_variant(lm_cfg(grad, 1, off)));
        SuiteVariant lm5 = make_variant(lm_cfg(five, 0, off));
        lm5.label += "[mu=5]";
        spec.variants.push_back(std::move(lm5));
        SuiteVariant aalm5 = make_variant(lm_cfg(five, 1, off));
        aalm5.label += "[mu=5]";
        spec.variants.push_back(std::move(aalm5));
        return spec;
    }
    throw ConfigError("unknown suite preset: " + std::string(name));
}

void write_summary_csv(std::ostream& os, const std::vector<TrialSummary>& rows) {
    os << "label,trials,failures,mean_iters,mean_resid\n";
    char buf[256];
    for (const auto& r : rows) {
        std::string quoted = "\"";
        for (char ch : r.label) {
            quoted += ch;
            if (ch == '"') {
                quoted += '"';
            }
        }
        quoted += '"';
        std::snprintf(buf, sizeof(buf), ",%d,%d,%.17g,%.17g\n", r.trials, r.failures,
                      r.mean_iterations, r.mean_final_residual);
        os << quoted << buf;
    }
}

void write_summary_csv(const std::string& path, const std::vector<TrialSummary>& rows) {
    std::ofstream os(path);
    if (!os) {
        throw InvalidInputError("write_summary_csv: cannot open " + path);
    }
    write_summary_csv(os, rows);
}

std::vector<TrialSummary> read_summary_csv(std::istream& is) {
    std::vector<TrialSummary> rows;
    std::string line;
    if (!std::getline(is, line)) {
        throw InvalidInputError("read_summary_csv: empty input");
    }
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        TrialSummary row;
        std::size_t pos = 0;
        if (line[0] == '"') {
            pos = 1;
            while (pos < line.size()) {
                if (line[pos] == '"') {
                    if (pos + 1 < line.size() && line[pos + 1] == '"') {
                        row.label += '"';
                        pos += 2;
                        continue;
                    }
                    ++pos;
                    break;
                }
                row.label += line[pos++];
            }
        } else {
            pos = line.find(',');
            row.label = line.substr(0, pos);
        }
        if (pos >= line.size() || line[pos] != ',') {
            throw InvalidInputError("read_summary_csv: malformed row");
        }
        std::istringstream rest(line.substr(pos + 1));
        char comma = 0;
        rest >> row.trials >> comma >> row.failures >> comma >> row.mean_iterations >> comma >>
            row.mean_final_residual;
        if (rest.fail()) {
            throw InvalidInputError("read_summary_csv: malformed numeric fields");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TrialSummary> read_summary_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw InvalidInputError("read_summary_csv: cannot open " + path);
    }
    return read_summary_csv(is);
}

void write_summary_json(std::ostream& os, const SuiteSpec& spec,
                        const std::vector<TrialSummary>& rows) {
    nlohmann::json doc;
    doc["suite"] = spec.name;
    doc["seed"] = spec.seed;
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        doc["rows"].push_back({{"label", r.label},
                               {"trials", r.trials},
                               {"failures", r.failures},
                               {"mean_iters", r.mean_iterations},
                               {"mean_resid", r.mean_final_residual}});
    }
    os << doc.dump(2) << "\n";
}

void write_summary_json(const std::string& path, const SuiteSpec& spec,
                        const std::vector<TrialSummary>& rows) {
    std::ofstream os(path);
    if (!os) {
        throw InvalidInputError("write_summary_json: cannot open " + path);
    }
    write_summary_json(os, spec, rows);
}

} // namespace andersolve
