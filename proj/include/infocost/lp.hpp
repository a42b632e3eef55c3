#pragma once

/**
 * @file lp.hpp
 * @brief Dense phase-1 simplex for equality-form feasibility problems.
 *
 * Both order checks in this library reduce to the same question: does there
 * exist x ≥ 0 with Ax = b?  (Garbling matrices for Blackwell dominance and
 * splitting kernels for mean-preserving-spread dominance are row-stochastic
 * matrices pinned down by linear equalities.)  The instances are tiny — tens
 * of variables — so a textbook phase-1 simplex with Bland's anti-cycling rule
 * on a dense tableau is the right tool: it terminates in finitely many steps
 * and its only output is whether the artificial objective can be driven to
 * (numerical) zero.
 */

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <vector>

namespace infocost::lp {

/**
 * Feasibility of {x ≥ 0 : Ax = b} via phase-1 simplex.
 *
 * Rows with negative b are flipped, one artificial variable is added per row,
 * and Σ artificials is minimized.  Feasible iff the optimum is ≤ tol.
 * Bland's rule (smallest eligible index for both entering and leaving
 * variables) guarantees termination despite degeneracy.
 */
inline bool feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-8) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (m == 0) return true;

  // Tableau: m rows of [A | I | b] with b >= 0, plus a reduced-cost row for
  // the phase-1 objective (cost 1 on each artificial, 0 elsewhere).
  Eigen::MatrixXd T(m + 1, n + m + 1);
  T.setZero();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = (b(i) < 0.0) ? -1.0 : 1.0;
    T.block(i, 0, 1, n) = sign * A.row(i);
    T(i, n + i) = 1.0;
    T(i, n + m) = sign * b(i);
  }
  // Price out the artificial basis: objective row = -(sum of constraint rows)
  // over structural columns; objective value lives at T(m, n+m) (negated).
  for (Eigen::Index j = 0; j <= n + m; ++j) {
    if (j >= n && j < n + m) continue;  // artificial columns keep cost 0 in the row
    double s = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) s += T(i, j);
    T(m, j) = -s;
  }

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  constexpr double kPivotEps = 1e-11;
  const int max_iters = 2000 + 200 * static_cast<int>(m + n);
  for (int iter = 0; iter < max_iters; ++iter) {
    // Bland: entering column = smallest index with negative reduced cost.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < n + m; ++j) {
      if (T(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    // Bland: leaving row = min ratio, ties to the smallest basis index.
    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) > kPivotEps) {
        const double ratio = T(i, n + m) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - kPivotEps ||
            (ratio < best_ratio + kPivotEps &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded below cannot happen for phase 1; bail out

    // Pivot.
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  // Phase-1 objective value = Σ artificials = -T(m, n+m) after pricing.
  return -T(m, n + m) <= tol;
}

}  // namespace infocost::lp
