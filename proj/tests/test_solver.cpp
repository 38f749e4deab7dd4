#include <doctest.h>

#include <sstream>

#include "andersolve/problems.hpp"
#include "andersolve/solver.hpp"
#include "support.hpp"

using namespace andersolve;
namespace ts = andersolve::testing;

namespace {

RunRecord synthetic_record(const std::vector<double>& errors) {
    RunRecord rec;
    rec.status = SolveStatus::converged;
    rec.iterations = static_cast<int>(errors.size());
    for (const double e : errors) {
        rec.iterates.push_back(Vector{{e}});
    }
    rec.iterates.push_back(Vector{{0.0}});
    return rec;
}

} // namespace

TEST_CASE("linear problems converge in one iteration") {
    std::mt19937_64 rng(103);
    const Matrix A = ts::random_conditioned(rng, 6, 10.0);
    const Vector b = ts::random_vector(rng, 6);
    NonlinearProblem p;
    p.dimension = 6;
    p.residual = [A, b](const Vector& x) { return Vector(A * x - b); };
    p.jacobian = [A](const Vector&) { return A; };

    const RunRecord rec = solve(p, Vector::Zero(6), SolveConfig{});
    CHECK(rec.status == SolveStatus::converged);
    CHECK(rec.iterations == 1);
    CHECK(rec.final_metric < 1e-8);
    CHECK(rec.traces.size() == 1);
}

TEST_CASE("newton on the singular toy from (1,0)") {
    const SingularToy toy = singular_toy();
    SolveConfig cfg;
    cfg.tol = 1e-16;
    const RunRecord rec = solve(toy.problem, Vector{{1.0, 0.0}}, cfg);
    CHECK(rec.status == SolveStatus::converged);
    CHECK(rec.iterations == 27);
    CHECK(std::abs(rec.iterates.back()[0]) < 1e-8);
    // Exact halving along the null space.
    for (int k = 0; k <= 20; ++k) {
        const double ratio = rec.iterates[k + 1][0] / rec.iterates[k][0];
        CHECK(std::abs(ratio - 0.5) <= 1e-12);
    }
    // theta is recorded as 1.0 whenever acceleration is inactive.
    for (const auto& t : rec.traces) {
        CHECK(t.theta == 1.0);
        CHECK(t.lambda == 0.0);
        CHECK(t.regime == Regime::pnm_only);
    }
}

TEST_CASE("solve is deterministic") {
    const BehProblem beh = beh_problem(4);
    SolveConfig cfg;
    cfg.stepper.kind = StepperKind::lm;
    cfg.stepper.mu = beh.default_mu;
    cfg.aa_depth_m = 1;
    const RunRecord a = solve(beh.problem, beh.x0, cfg);
    const RunRecord b = solve(beh.problem, beh.x0, cfg);
    REQUIRE(a.iterates.size() == b.iterates.size());
    for (std::size_t k = 0; k < a.iterates.size(); ++k) {
        CHECK((a.iterates[k] - b.iterates[k]).cwiseAbs().maxCoeff() == 0.0);
    }
    REQUIRE(a.traces.size() == b.traces.size());
    for (std::size_t k = 0; k < a.traces.size(); ++k) {
        CHECK(a.traces[k].gamma == b.traces[k].gamma);
        CHECK(a.traces[k].theta == b.traces[k].theta);
    }
}

TEST_CASE("failure statuses are recorded, not thrown") {
    SUBCASE("max_iter_failure") {
        const BehProblem beh = beh_problem(4);
        SolveConfig cfg;
        cfg.stepper.kind = StepperKind::lm;
        cfg.stepper.mu = {MuKind::gradient_norm, 0.0};
        const RunRecord rec = solve(beh.problem, beh.x0, cfg);
        CHECK(rec.status == SolveStatus::max_iter_failure);
        CHECK(rec.iterations == 100);
        CHECK(rec.final_metric >= cfg.tol);
    }
    SUBCASE("linear_solve_failure") {
        NonlinearProblem p;
        p.dimension = 2;
        p.residual = [](const Vector& x) { return Vector{{x[0] + x[1] - 1.0, x[0] + x[1]}}; };
        p.jacobian = [](const Vector&) {
            Matrix J(2, 2);
            J << 1.0, 1.0, 1.0, 1.0;
            return J;
        };
        const RunRecord rec = solve(p, Vector{{0.0, 0.0}}, SolveConfig{});
        CHECK(rec.status == SolveStatus::linear_solve_failure);
        CHECK(rec.iterations == 0);
    }
    SUBCASE("evaluation_failure") {
        NonlinearProblem p;
        p.dimension = 1;
        p.residual = [](const Vector& x) { return Vector{{std::log(x[0])}}; };
        p.jacobian = [](const Vector& x) { return Matrix{{1.0 / x[0]}}; };
        const RunRecord rec = solve(p, Vector{{-1.0}}, SolveConfig{});
        CHECK(rec.status == SolveStatus::evaluation_failure);
    }
}

TEST_CASE("solve validates its inputs") {
    const SingularToy toy = singular_toy();
    CHECK_THROWS_AS(solve(toy.problem, Vector::Zero(3), SolveConfig{}), InvalidInputError);
    SolveConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve(toy.problem, Vector{{1.0, 0.0}}, bad), ConfigError);
    SolveConfig pre2;
    pre2.aa_depth_m = 2;
    pre2.safeguard.kind = SafeguardModeKind::preasymptotic;
    CHECK_THROWS_AS(solve(toy.problem, Vector{{1.0, 0.0}}, pre2), ConfigError);
}

TEST_CASE("safeguarded depth-1 run on the toy obeys the contraction bounds") {
    const SingularToy toy = singular_toy();
    SolveConfig cfg;
    cfg.aa_depth_m = 1;
    cfg.safeguard.kind = SafeguardModeKind::preasymptotic;
    cfg.tol = 1e-16;
    const RunRecord rec = solve(toy.problem, Vector{{1.0, 0.3}}, cfg);
    REQUIRE(rec.status == SolveStatus::converged);

    const Vector root = toy.diagnostics.known_root;
    double fitted_c = 0.0;
    for (std::size_t k = 1; k + 1 < rec.iterates.size(); ++k) {
        const double null_next = std::abs(rec.iterates[k + 1][0] - root[0]);
        const double null_here = std::abs(rec.iterates[k][0] - root[0]);
        const auto& tr = rec.traces[k];
        if (tr.regime == Regime::safeguarded_aa1 && null_here > 1e-13) {
            CHECK(null_next <= tr.theta * null_here + 1e-10);
        }
        const double range_next = std::abs(rec.iterates[k + 1][1]);
        const double e_here = (rec.iterates[k] - root).norm();
        const double e_prev = (rec.iterates[k - 1] - root).norm();
        const double denom = std::max(e_here * e_here, e_prev * e_prev);
        if (denom > 0.0 && range_next > 0.0) {
            fitted_c = std::max(fitted_c, range_next / denom);
        }
    }
    CHECK(std::isfinite(fitted_c));
    // Range error vanishes after the first Newton step on this toy.
    CHECK(fitted_c <= 1.0);
}

TEST_CASE("newton on the full-size singular H-equation from the unit field") {
    const NonlinearProblem p = chandrasekhar({1.0, 1000});
    const RunRecord rec = solve(p, Vector::Ones(1000), SolveConfig{});
    CHECK(rec.status == SolveStatus::converged);
    CHECK(rec.iterations >= 13);
    CHECK(rec.iterations <= 19);
    CHECK(rec.final_metric < 1e-8);
}

TEST_CASE("beh problems converge under their default damping") {
    for (int id : {1, 2, 3}) {
        const BehProblem beh = beh_problem(id);
        SolveConfig cfg;
        cfg.stepper.kind = StepperKind::lm;
        cfg.stepper.mu = beh.default_mu;
        const RunRecord rec = solve(beh.problem, beh.x0, cfg);
        CHECK(rec.status == SolveStatus::converged);
        CHECK(rec.final_metric < 1e-8);
    }
}

TEST_CASE("observed_order on synthetic sequences") {
    SUBCASE("geometric errors have slope one") {
        std::vector<double> e;
        for (int k = 0; k < 10; ++k) {
            e.push_back(std::pow(2.0, -k));
        }
        CHECK(observed_order(synthetic_record(e)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("doubly exponential errors have slope two") {
        std::vector<double> e;
        for (int k = 0; k < 7; ++k) {
            e.push_back(std::pow(10.0, -std::pow(2.0, k)));
        }
        CHECK(observed_order(synthetic_record(e)) == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("insufficient history is rejected") {
        CHECK_THROWS_AS(observed_order(synthetic_record({1.0, 0.5})), InsufficientHistoryError);
        RunRecord failed = synthetic_record({1.0, 0.5, 0.25, 0.125, 0.06, 0.03});
        failed.status = SolveStatus::max_iter_failure;
        CHECK_THROWS_AS(observed_order(failed), InsufficientHistoryError);
    }
}

TEST_CASE("observed_order sees quadratic convergence for scalar newton") {
    SolveConfig cfg;
    cfg.tol = 1e-12;
    const RunRecord rec = solve(ts::scalar_quadratic(), Vector{{3.0}}, cfg);
    REQUIRE(rec.status == SolveStatus::converged);
    const double order = observed_order(rec);
    CHECK(order >= 1.9);
    CHECK(order <= 2.1);
}

TEST_CASE("trace csv format") {
    const SingularToy toy = singular_toy();
    SolveConfig cfg;
    cfg.aa_depth_m = 1;
    cfg.safeguard.kind = SafeguardModeKind::asymptotic;
    cfg.safeguard.tau = 0.3;
    const RunRecord rec = solve(toy.problem, Vector{{1.0, 0.0}}, cfg);
    std::ostringstream os;
    write_trace_csv(os, rec);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "k,residual,grad_norm,step_norm,eta,gamma,lambda,theta,regime,mu");
    int rows = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty()) {
            ++rows;
        }
    }
    CHECK(rows == static_cast<int>(rec.traces.size()));
    CHECK(os.str().find("safeguarded_aa1") != std::string::npos);
}

TEST_CASE("aa depth zero runs in the pnm regime with uniform trace values") {
    const NonlinearProblem p = ts::smooth_5d();
    std::mt19937_64 rng(113);
    SolveConfig cfg;
    cfg.aa_depth_m = 0;
    const RunRecord rec = solve(p, ts::random_vector(rng, 5), cfg);
    CHECK(rec.status == SolveStatus::converged);
    for (const auto& t : rec.traces) {
        CHECK(t.regime == Regime::pnm_only);
        CHECK(t.theta == 1.0);
        CHECK(t.gamma == 0.0);
    }
}

TEST_CASE("gain-acceleration link on the singular toy") {
    const SingularToy toy = singular_toy();
    SolveConfig cfg;
    cfg.aa_depth_m = 1;
    cfg.safeguard.kind = SafeguardModeKind::preasymptotic;
    cfg.tol = 1e-16;
    const RunRecord rec = solve(toy.problem, Vector{{1.0, 0.0}}, cfg);
    REQUIRE(rec.status == SolveStatus::converged);
    for (std::size_t k = 1; k + 1 < rec.iterates.size(); ++k) {
        const double null_next = std::abs(rec.iterates[k + 1][0]);
        const double null_here = std::abs(rec.iterates[k][0]);
        if (null_here > 1e-13) {
            CHECK(null_next / null_here <= rec.traces[k].theta * (1.0 + 1e-6) + 1e-12);
        }
    }
}
