#include "andersolve/anderson.hpp"

#include <algorithm>
#include <cmath>

namespace andersolve {

AndersonWindow::AndersonWindow(int depth) : depth_(depth) {
    if (depth < 0) {
        throw ConfigError("AndersonWindow: depth must be nonnegative");
    }
}

void AndersonWindow::push(const Vector& step_diff, const Vector& iterate_diff) {
    if (depth_ == 0) {
        return;
    }
    if (step_diff.size() != iterate_diff.size()) {
        throw InvalidInputError("AndersonWindow::push: columns not conformal");
    }
    if (!step_diffs_.empty() && step_diffs_.front().size() != step_diff.size()) {
        throw InvalidInputError("AndersonWindow::push: dimension changed mid-window");
    }
    step_diffs_.push_front(step_diff);
    iterate_diffs_.push_front(iterate_diff);
    // The least-squares column count may not exceed the space dimension.
    const auto cap = std::min<Eigen::Index>(depth_, step_diff.size());
    while (static_cast<Eigen::Index>(step_diffs_.size()) > cap) {
        step_diffs_.pop_back();
        iterate_diffs_.pop_back();
    }
}

namespace {

Matrix to_matrix(const std::deque<Vector>& cols) {
    Matrix M(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        M.col(j) = cols[static_cast<std::size_t>(j)];
    }
    return M;
}

} // namespace

Matrix AndersonWindow::step_matrix() const {
    if (empty()) {
        throw EmptyWindowError("AndersonWindow: no columns");
    }
    return to_matrix(step_diffs_);
}

Matrix AndersonWindow::iterate_matrix() const {
    if (empty()) {
        throw EmptyWindowError("AndersonWindow: no columns");
    }
    return to_matrix(iterate_diffs_);
}

std::pair<Vector, double> solve_gamma(const AndersonWindow& window, const Vector& w_next,
                                      double rank_rel_tol) {
    if (window.empty()) {
        throw EmptyWindowError("solve_gamma: empty window");
    }
    const double wnorm = w_next.norm();
    if (wnorm == 0.0) {
        throw ZeroResidualError("solve_gamma: zero combined residual");
    }
    const Matrix F = window.step_matrix();
    Vector gamma = least_squares(F, w_next, rank_rel_tol);
    double theta = (w_next - F * gamma).norm() / wnorm;
    theta = std::clamp(theta, 0.0, 1.0);
    return {std::move(gamma), theta};
}

Vector combine(const Vector& x, const Vector& w_next, const AndersonWindow& window,
               const Vector& gamma) {
    if (window.empty() || gamma.size() == 0) {
        return x + w_next;
    }
    if (gamma.size() != window.size()) {
        throw InvalidInputError("combine: gamma not conformal with the window");
    }
    return x + w_next - (window.iterate_matrix() + window.step_matrix()) * gamma;
}

double depth1_gamma(const Vector& w_next, const Vector& w_prev) {
    const Vector diff = w_next - w_prev;
    const double denom = diff.squaredNorm();
    if (denom == 0.0) {
        throw DegenerateDifferenceError("depth1_gamma: consecutive steps coincide");
    }
    return diff.dot(w_next) / denom;
}

AAStepInfo aa_step(const Vector& x, const Vector& w_next, const AndersonWindow& window) {
    AAStepInfo info;
    if (window.empty()) {
        info.gamma = Vector::Zero(0);
        info.theta = 1.0;
        info.combined_x = x + w_next;
        return info;
    }
    auto [gamma, theta] = solve_gamma(window, w_next);
    info.combined_x = combine(x, w_next, window, gamma);
    info.gamma = std::move(gamma);
    info.theta = theta;
    return info;
}

} // namespace andersolve
