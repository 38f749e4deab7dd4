#pragma once

#include <deque>
#include <utility>

#include "andersolve/numerics.hpp"

namespace andersolve {

/// Sliding history for depth-m Anderson acceleration.
///
/// Columns are ordered newest to oldest: step_diffs holds
/// (w_{k+1}-w_k, ..., w_{k-m+2}-w_{k-m+1}) and iterate_diffs holds
/// (x_k-x_{k-1}, ..., x_{k-m+1}-x_{k-m}). Both always have the same
/// column count m_k = min(k, m).
class AndersonWindow {
public:
    AndersonWindow() = default;
    explicit AndersonWindow(int depth);

    int depth() const { return depth_; }
    int size() const { return static_cast<int>(step_diffs_.size()); }
    bool empty() const { return step_diffs_.empty(); }

    /// Prepend the newest column pair; evicts the oldest beyond depth.
    /// A depth-0 window stays empty (acceleration disabled).
    void push(const Vector& step_diff, const Vector& iterate_diff);

    /// F_k as an n x m_k matrix, newest column first.
    Matrix step_matrix() const;
    /// E_k as an n x m_k matrix, newest column first.
    Matrix iterate_matrix() const;

    const std::deque<Vector>& step_diffs() const { return step_diffs_; }
    const std::deque<Vector>& iterate_diffs() const { return iterate_diffs_; }

private:
    int depth_ = 0;
    std::deque<Vector> step_diffs_;
    std::deque<Vector> iterate_diffs_;
};

/// Result of one Anderson extrapolation.
struct AAStepInfo {
    Vector gamma;
    double theta = 1.0;
    Vector combined_x;
};

/// Minimize ||w_next - F_k gamma|| over the window and report the
/// optimization gain theta = ||w_next - F_k gamma|| / ||w_next||.
///
/// Throws EmptyWindowError on an empty window and ZeroResidualError when
/// ||w_next|| = 0 (the iteration has converged).
std::pair<Vector, double> solve_gamma(const AndersonWindow& window, const Vector& w_next,
                                      double rank_rel_tol = kQrRankRelTol);

/// x_{k+1} = x_k + w_{k+1} - (E_k + F_k) gamma.
Vector combine(const Vector& x, const Vector& w_next, const AndersonWindow& window,
               const Vector& gamma);

/// Depth-1 closed form gamma = (w_next - w_prev)^T w_next / ||w_next - w_prev||^2.
/// Throws DegenerateDifferenceError when consecutive steps coincide; the
/// caller treats that as gamma = 0.
double depth1_gamma(const Vector& w_next, const Vector& w_prev);

/// Convenience wrapper performing one full extrapolation step.
AAStepInfo aa_step(const Vector& x, const Vector& w_next, const AndersonWindow& window);

} // namespace andersolve
