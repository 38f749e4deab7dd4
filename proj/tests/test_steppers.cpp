#include <doctest.h>

#include "andersolve/problems.hpp"
#include "andersolve/steppers.hpp"
#include "support.hpp"

using namespace andersolve;
namespace ts = andersolve::testing;

namespace {

NonlinearProblem linear_1d() {
    NonlinearProblem p;
    p.dimension = 1;
    p.residual = [](const Vector& x) { return x; };
    p.jacobian = [](const Vector&) { return Matrix{{1.0}}; };
    return p;
}

} // namespace

TEST_CASE("newton_step solves linear problems in one step") {
    const StepResult r = newton_step(linear_1d(), Vector{{5.0}});
    CHECK(r.w[0] == doctest::Approx(-5.0));
    CHECK(r.mu_used == 0.0);
    CHECK(r.eta_used == 0.0);
}

TEST_CASE("newton_step on x^2-4 at x=3") {
    const StepResult r = newton_step(ts::scalar_quadratic(), Vector{{3.0}});
    CHECK(r.w[0] == doctest::Approx(-5.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("newton_step halves the error on the singular scalar problem") {
    NonlinearProblem p;
    p.dimension = 1;
    p.residual = [](const Vector& x) { return Vector{{x[0] * x[0]}}; };
    p.jacobian = [](const Vector& x) { return Matrix{{2.0 * x[0]}}; };
    const StepResult r = newton_step(p, Vector{{1.0}});
    CHECK(r.w[0] == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("forcing term recursion") {
    const ForcingConfig cfg; // gamma_ew=0.9, alpha=2, eta0=0.5, eta_max=0.9
    ForcingState st;
    CHECK(forcing_eta(st, 123.0, cfg) == 0.5);

    SUBCASE("ratio formula") {
        advance_forcing(st, 1.0, 0.5);
        // 0.9 * (0.5/1)^2 = 0.225; the carry 0.9 * 0.5^2 = 0.225 ties it.
        CHECK(forcing_eta(st, 0.5, cfg) == doctest::Approx(0.225).epsilon(1e-14));
    }
    SUBCASE("ratio one clamps at eta_max") {
        advance_forcing(st, 1.0, 0.5);
        CHECK(forcing_eta(st, 1.0, cfg) == doctest::Approx(0.9));
    }
    SUBCASE("safeguard clause keeps eta from collapsing") {
        advance_forcing(st, 1.0, 0.8);
        // Raw value 0.9 * 0.01^2 is tiny; carry 0.9 * 0.64 = 0.576 > 0.1 wins.
        CHECK(forcing_eta(st, 0.01, cfg) == doctest::Approx(0.576).epsilon(1e-14));
        ForcingConfig off = cfg;
        off.safeguard = false;
        CHECK(forcing_eta(st, 0.01, off) == doctest::Approx(9e-5).epsilon(1e-12));
    }
    SUBCASE("carry below 0.1 is ignored") {
        advance_forcing(st, 1.0, 0.2);
        // Carry 0.9 * 0.04 = 0.036 < 0.1, raw value stands.
        CHECK(forcing_eta(st, 0.01, cfg) == doctest::Approx(9e-5).epsilon(1e-12));
    }
}

TEST_CASE("forcing config validation") {
    ForcingConfig bad;
    bad.alpha = 2.5;
    ForcingState st;
    CHECK_THROWS_AS(forcing_eta(st, 1.0, bad), ConfigError);
}

TEST_CASE("inexact newton step satisfies its forcing bound") {
    const NonlinearProblem p = ts::smooth_5d();
    std::mt19937_64 rng(41);
    ForcingState st;
    Vector x = ts::random_vector(rng, 5);
    for (int k = 0; k < 4; ++k) {
        const Vector f = p.residual(x);
        const Matrix J = p.jacobian(x);
        const StepResult r = inexact_newton_step(J, f, st, ForcingConfig{}, 5);
        CHECK((J * r.w + f).norm() <= r.eta_used * f.norm() * (1.0 + 1e-13));
        CHECK(r.linear_residual <= r.eta_used * f.norm() * (1.0 + 1e-13));
        x += r.w;
    }
    CHECK(st.has_prev);
}

TEST_CASE("inexact newton first step uses eta0") {
    const NonlinearProblem p = ts::scalar_quadratic();
    ForcingState st;
    const StepResult r = inexact_newton_step(p, Vector{{3.0}}, st, ForcingConfig{});
    CHECK(r.eta_used == 0.5);
}

TEST_CASE("lm_step scalar arithmetic") {
    const StepResult r = lm_step(linear_1d(), Vector{{2.0}}, {MuKind::constant, 1.0});
    CHECK(r.w[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.mu_used == 1.0);
}

TEST_CASE("lm_step approaches newton_step as damping vanishes") {
    const NonlinearProblem p = ts::smooth_5d();
    std::mt19937_64 rng(43);
    const Vector x = ts::random_vector(rng, 5);
    const StepResult newton = newton_step(p, x);
    const StepResult lm = lm_step(p, x, {MuKind::constant, 1e-12});
    CHECK((newton.w - lm.w).norm() <= 1e-8 * std::max(1.0, newton.w.norm()));
}

TEST_CASE("lm_step on beh4 against the dense-solve oracle") {
    const BehProblem beh = beh_problem(4);
    const Vector x{{0.01, 0.0}};
    const Matrix J = beh.problem.jacobian(x);
    const Vector f = beh.problem.residual(x);
    Matrix JtJ = J.transpose() * J;
    CHECK(JtJ(0, 0) == doctest::Approx(0.0008).epsilon(1e-12));
    CHECK(JtJ(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    const Vector grad = J.transpose() * f;
    CHECK(grad[0] == doctest::Approx(0.040004).epsilon(1e-12));
    CHECK(grad[1] == doctest::Approx(0.0));

    const StepResult r = lm_step(beh.problem, x, {MuKind::constant, 5.0});
    // Oracle: (J^T J + 5 I) is diagonal here, so w = -grad ./ diag.
    CHECK(r.w[0] == doctest::Approx(-0.040004 / 5.0008).epsilon(1e-12));
    CHECK(r.w[1] == doctest::Approx(0.0));
    CHECK(r.w[0] == doctest::Approx(-0.0079995).epsilon(1e-5));
}

TEST_CASE("lm mu schedules") {
    CHECK(mu_value({MuKind::scaled_residual_sq, 2.0}, 3.0, 7.0) == doctest::Approx(18.0));
    CHECK(mu_value({MuKind::gradient_norm, 0.0}, 3.0, 7.0) == doctest::Approx(7.0));
    CHECK(mu_value({MuKind::constant, 5.0}, 3.0, 7.0) == doctest::Approx(5.0));
}

TEST_CASE("lm_step flags degenerate damping") {
    // Rank-deficient Jacobian with mu = 0 leaves a singular normal matrix.
    NonlinearProblem p;
    p.dimension = 2;
    p.residual = [](const Vector& x) { return Vector{{x[0] + x[1], x[0] + x[1]}}; };
    p.jacobian = [](const Vector&) {
        Matrix J(2, 2);
        J << 1.0, 1.0, 1.0, 1.0;
        return J;
    };
    CHECK_THROWS_AS(lm_step(p, Vector{{1.0, 1.0}}, {MuKind::constant, 1e-40}),
                    DegenerateDampingError);
}

TEST_CASE("inexact lm matches exact lm at tight forcing") {
    const NonlinearProblem p = ts::smooth_5d();
    std::mt19937_64 rng(47);
    const Vector x = ts::random_vector(rng, 5);
    const MuSchedule mu{MuKind::constant, 0.3};
    const StepResult exact = lm_step(p, x, mu);
    ForcingState st;
    ForcingConfig forcing;
    forcing.eta0 = 1e-12;
    const StepResult inexact = inexact_lm_step(p, x, mu, st, forcing);
    CHECK((exact.w - inexact.w).norm() <= 1e-8 * std::max(1.0, exact.w.norm()));
}

TEST_CASE("inexact lm per-axis check on a diagonal jacobian") {
    NonlinearProblem p;
    p.dimension = 2;
    p.residual = [](const Vector& x) { return Vector{{x[0], 2.0 * x[1]}}; };
    p.jacobian = [](const Vector&) {
        Matrix J(2, 2);
        J << 1.0, 0.0, 0.0, 2.0;
        return J;
    };
    const Vector x{{1.0, 1.0}};
    const MuSchedule mu{MuKind::constant, 0.5};
    ForcingState st;
    ForcingConfig forcing;
    forcing.eta0 = 1e-12;
    const StepResult r = inexact_lm_step(p, x, mu, st, forcing);
    // Dense oracle: w_i = -J_ii f_i / (J_ii^2 + mu).
    CHECK(r.w[0] == doctest::Approx(-1.0 / 1.5).epsilon(1e-9));
    CHECK(r.w[1] == doctest::Approx(-4.0 / 4.5).epsilon(1e-9));
}

TEST_CASE("lm_step equals the perturbed-Newton form with Omega = mu J^{-T}") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix J = ts::random_conditioned(rng, 5, 50.0);
        const Vector f = ts::random_vector(rng, 5);
        const double mu = ts::uniform(rng, 0.05, 2.0);
        const StepResult lm = lm_step(J, f, {MuKind::constant, mu});
        const Matrix omega = mu * J.inverse().transpose();
        const Vector pnm = lu_solve(J + omega, -f);
        CHECK((lm.w - pnm).norm() <= 1e-8 * std::max(1.0, pnm.norm()));
    }
}

TEST_CASE("take_step dispatches on stepper kind") {
    const NonlinearProblem p = ts::scalar_quadratic();
    const Vector x{{3.0}};
    const Vector f = p.residual(x);
    const Matrix J = p.jacobian(x);
    ForcingState st;
    StepperConfig cfg;
    CHECK(take_step(cfg, J, f, st, 1).w[0] == doctest::Approx(-5.0 / 6.0));
    cfg.kind = StepperKind::lm;
    cfg.mu = {MuKind::constant, 1.0};
    CHECK(take_step(cfg, J, f, st, 1).mu_used == 1.0);
}
