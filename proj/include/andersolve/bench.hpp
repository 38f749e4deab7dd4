#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "andersolve/problems.hpp"
#include "andersolve/solver.hpp"

namespace andersolve {

enum class ProblemKind { chandrasekhar, beh1, beh2, beh3, beh4, toy_singular };

ProblemKind parse_problem_kind(std::string_view name);
const char* to_string(ProblemKind k);

/// CLI spellings: newton | inewton | lm | ilm.
StepperKind parse_stepper_kind(std::string_view s);
/// CLI spellings: scaled:<mu0> | gradnorm | constant:<c>.
MuSchedule parse_mu_schedule(std::string_view s);
/// CLI spellings: off | pre | asym.
SafeguardModeKind parse_safeguard_kind(std::string_view s);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::chandrasekhar;
    double omega = 1.0;
    int nodes = 1000;
};

/// A constructed problem with its canonical start, default damping
/// schedule, and whether benchmark trials draw x0 at random.
struct ProblemInstance {
    NonlinearProblem problem;
    Vector default_x0;
    MuSchedule default_mu;
    bool randomized_x0 = false;
};

ProblemInstance make_problem(const ProblemSpec& spec);

/// Benchmark initial guess: entries i.i.d. uniform on [0, 1) from a
/// seeded mt19937_64 (53-bit mantissa draw, platform independent).
Vector random_x0(Eigen::Index n, std::uint64_t seed);

/// Initial guess for trial t of a suite: the canonical x0 for problems
/// with a pinned start, otherwise random_x0 with seed suite_seed ^ t.
Vector trial_x0(const ProblemInstance& inst, std::uint64_t suite_seed, int trial);

struct SuiteVariant {
    std::string label;
    SolveConfig config;
};

struct SuiteSpec {
    std::string name = "suite";
    ProblemSpec problem{};
    std::vector<SuiteVariant> variants;
    int trials = 50;
    std::uint64_t seed = 12345;
};

/// One output row: means are over converged trials only, failures are
/// counted separately.
struct TrialSummary {
    std::string label;
    int trials = 0;
    int failures = 0;
    double mean_iterations = 0.0;
    double mean_final_residual = 0.0;
};

/// Conventional label for a configuration, e.g. Newt, AALM(5),
/// γAANewt(1,0.9), inNewt, γAAinLM(10,0.9).
std::string variant_label(const SolveConfig& cfg);

SuiteVariant make_variant(const SolveConfig& cfg);

/// Worker count for suite execution: ANDERSOLVE_THREADS when set,
/// otherwise hardware concurrency, never more than `trials`.
int worker_count(int trials);

/// Run every variant over `trials` seeded starting points. Trials execute
/// in a worker pool and are collected by trial index, so results are
/// independent of scheduling order.
std::vector<TrialSummary> run_suite(const SuiteSpec& spec);

/// Built-in suites: table1, table2, table3, beh4.
SuiteSpec preset_suite(std::string_view name, int trials = 50, std::uint64_t seed = 12345);
std::vector<std::string> preset_suite_names();

void write_summary_csv(std::ostream& os, const std::vector<TrialSummary>& rows);
void write_summary_csv(const std::string& path, const std::vector<TrialSummary>& rows);
std::vector<TrialSummary> read_summary_csv(std::istream& is);
std::vector<TrialSummary> read_summary_csv(const std::string& path);

/// JSON document {suite, seed, rows:[{label, trials, failures, mean_iters, mean_resid}]}.
void write_summary_json(std::ostream& os, const SuiteSpec& spec,
                        const std::vector<TrialSummary>& rows);
void write_summary_json(const std::string& path, const SuiteSpec& spec,
                        const std::vector<TrialSummary>& rows);

} // namespace andersolve
