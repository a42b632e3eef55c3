#pragma once

/**
 * @file posteriors.hpp
 * @brief Finite-support random posteriors, the mean-preserving-spread order,
 *        dilution, variance, and two-step strategies.
 *
 * A random posterior π is a finitely supported distribution over beliefs; its
 * barycenter p_π = E_π[q] is the prior it is consistent with (Bayes
 * plausibility).  Information orders compare random posteriors with a common
 * barycenter:
 *
 *   π′ ≥_mps π  ⇔  π′ is a mean-preserving spread of π
 *               ⇔  there is a row-stochastic splitting T with
 *                  Σ_j T(j|i)·q′_j = q_i  and  Σ_i w_i T(j|i) = w′_j,
 *
 * i.e. every atom of π splits into atoms of π′ preserving its mean.  The
 * splitting test is an LP feasibility problem; for binary states it is
 * equivalent to pointwise dominance of integrated CDFs, which we use as a
 * fast path (and cross-check against the LP in the tests).
 *
 * A two-step strategy Π attaches to each first-round outcome a second-round
 * random posterior; `strategy_first_round` is the pushforward of branch
 * weights to the branch barycenters, and `strategy_mean` is the overall
 * terminal distribution E_Π[π₂].
 */

#include "infocost/lp.hpp"
#include "infocost/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace infocost::posteriors {

using simplex::Belief;
using simplex::kAtomMergeTol;

// ===================== RandomPosterior =====================

struct Atom {
  double w;
  Belief q;
};

/**
 * Finitely supported distribution over beliefs.  Construction merges
 * duplicate beliefs (componentwise tolerance 1e−9), drops zero-weight atoms,
 * validates that weights sum to 1 within 1e−9, and caches the barycenter.
 */
class RandomPosterior {
 public:
  explicit RandomPosterior(std::vector<Atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("RandomPosterior: no atoms");
    const std::size_t n = atoms.front().q.size();
    double wsum = 0.0;
    for (const Atom& a : atoms) {
      if (a.q.size() != n) throw std::invalid_argument("RandomPosterior: mixed dimensions");
      if (!std::isfinite(a.w) || a.w < -simplex::kBeliefSumTol)
        throw std::invalid_argument("RandomPosterior: weights must be >= 0");
      wsum += a.w;
    }
    if (std::abs(wsum - 1.0) > simplex::kBeliefSumTol)
      throw std::invalid_argument("RandomPosterior: weights must sum to 1");
    // Merge duplicates, drop null weights, renormalize.
    for (Atom& a : atoms) {
      a.w /= wsum;
      if (a.w <= 0.0) continue;
      bool merged = false;
      for (Atom& b : atoms_) {
        if (b.q == a.q) {
          b.w += a.w;
          merged = true;
          break;
        }
      }
      if (!merged) atoms_.push_back(a);
    }
    if (atoms_.empty()) throw std::invalid_argument("RandomPosterior: all weights zero");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) {
      return std::lexicographical_compare(a.q.probs().begin(), a.q.probs().end(),
                                          b.q.probs().begin(), b.q.probs().end());
    });
    std::vector<double> bary(n, 0.0);
    for (const Atom& a : atoms_)
      for (std::size_t i = 0; i < n; ++i) bary[i] += a.w * a.q[i];
    barycenter_.emplace(std::move(bary));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t states() const { return atoms_.front().q.size(); }
  const Belief& barycenter() const { return *barycenter_; }

  /// δ_p — the unique no-information posterior at p.
  static RandomPosterior trivial(const Belief& p) { return RandomPosterior({Atom{1.0, p}}); }

  bool is_trivial() const { return atoms_.size() == 1; }

 private:
  std::vector<Atom> atoms_;
  std::optional<Belief> barycenter_;
};

/// p_π = E_π[q].
inline Belief prior_of(const RandomPosterior& pi) { return pi.barycenter(); }

/// Var(π) = E_π[‖q − p_π‖²] (squared Euclidean deviation).
inline double variance(const RandomPosterior& pi) {
  const Belief& p = pi.barycenter();
  double v = 0.0;
  for (const Atom& a : pi.atoms()) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = a.q[i] - p[i];
      d2 += d * d;
    }
    v += a.w * d2;
  }
  return v;
}

/// α·π := απ + (1−α)δ_{p_π} — thin the signal, keep the prior.
inline RandomPosterior dilute(const RandomPosterior& pi, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("dilute: alpha in [0,1]");
  if (alpha == 1.0) return pi;
  std::vector<Atom> atoms;
  if (alpha > 0.0)
    for (const Atom& a : pi.atoms()) atoms.push_back({alpha * a.w, a.q});
  atoms.push_back({1.0 - alpha, pi.barycenter()});
  return RandomPosterior(std::move(atoms));
}

// ===================== MPS order =====================

namespace detail {

inline bool priors_agree(const RandomPosterior& a, const RandomPosterior& b, double tol) {
  if (a.states() != b.states()) return false;
  for (std::size_t i = 0; i < a.states(); ++i)
    if (std::abs(a.barycenter()[i] - b.barycenter()[i]) > tol) return false;
  return true;
}

/// Integrated CDF G(t) = Σ w·(t − x)⁺ of a scalar atom list.
inline double integrated_cdf(const std::vector<std::pair<double, double>>& wx, double t) {
  double g = 0.0;
  for (const auto& [w, x] : wx) g += w * std::max(0.0, t - x);
  return g;
}

}  // namespace detail

/**
 * Splitting-kernel LP for π′ ≥_mps π: variables T(j|i) ≥ 0 with
 *   Σ_j T(j|i) = 1,  Σ_j T(j|i) q′_j = q_i  (per state),  Σ_i w_i T(j|i) = w′_j.
 * Exposed separately so the binary fast path can be cross-validated.
 */
inline bool mps_geq_lp(const RandomPosterior& hi, const RandomPosterior& lo, double tol = 1e-8) {
  if (!detail::priors_agree(hi, lo, tol)) return false;
  const auto& his = hi.atoms();
  const auto& los = lo.atoms();
  const std::size_t I = los.size(), J = his.size(), n = lo.states();
  const std::size_t vars = I * J;
  const std::size_t rows = I + I * n + J;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(vars));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  std::size_t r = 0;
  for (std::size_t i = 0; i < I; ++i, ++r) {  // row-stochastic
    for (std::size_t j = 0; j < J; ++j) A(r, i * J + j) = 1.0;
    b(static_cast<Eigen::Index>(r)) = 1.0;
  }
  for (std::size_t i = 0; i < I; ++i) {  // mean preservation
    for (std::size_t s = 0; s < n; ++s, ++r) {
      for (std::size_t j = 0; j < J; ++j) A(r, i * J + j) = his[j].q[s];
      b(static_cast<Eigen::Index>(r)) = los[i].q[s];
    }
  }
  for (std::size_t j = 0; j < J; ++j, ++r) {  // mass balance
    for (std::size_t i = 0; i < I; ++i) A(r, i * J + j) = los[i].w;
    b(static_cast<Eigen::Index>(r)) = his[j].w;
  }
  return lp::feasible(A, b, tol);
}

/**
 * Binary-state fast path: with beliefs keyed by x = q(1), π′ ≥_mps π iff the
 * priors agree and the integrated CDF of π′ dominates that of π at every atom
 * location (piecewise-linear functions, so kinks suffice).
 */
inline bool mps_geq_cdf(const RandomPosterior& hi, const RandomPosterior& lo, double tol = 1e-8) {
  if (hi.states() != 2 || lo.states() != 2)
    throw std::invalid_argument("mps_geq_cdf: binary states only");
  if (!detail::priors_agree(hi, lo, tol)) return false;
  std::vector<std::pair<double, double>> hwx, lwx;
  std::set<double> kinks;
  for (const Atom& a : hi.atoms()) {
    hwx.emplace_back(a.w, a.q[1]);
    kinks.insert(a.q[1]);
  }
  for (const Atom& a : lo.atoms()) {
    lwx.emplace_back(a.w, a.q[1]);
    kinks.insert(a.q[1]);
  }
  for (double t : kinks)
    if (detail::integrated_cdf(hwx, t) < detail::integrated_cdf(lwx, t) - tol) return false;
  return true;
}

/// π′ ≥_mps π. Binary states use the integrated-CDF criterion; otherwise the LP.
inline bool mps_geq(const RandomPosterior& hi, const RandomPosterior& lo, double tol = 1e-8) {
  if (hi.states() == 2 && lo.states() == 2) return mps_geq_cdf(hi, lo, tol);
  return mps_geq_lp(hi, lo, tol);
}

// ===================== Two-step strategies =====================

struct Branch {
  double w;
  RandomPosterior second_round;
};

/// Finite-branch strategy Π: first round realized as branch barycenters.
class TwoStepStrategy {
 public:
  explicit TwoStepStrategy(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) throw std::invalid_argument("TwoStepStrategy: no branches");
    double wsum = 0.0;
    for (const Branch& b : branches_) {
      if (!std::isfinite(b.w) || b.w <= 0.0)
        throw std::invalid_argument("TwoStepStrategy: weights must be > 0");
      wsum += b.w;
    }
    if (std::abs(wsum - 1.0) > simplex::kBeliefSumTol)
      throw std::invalid_argument("TwoStepStrategy: weights must sum to 1");
    for (Branch& b : branches_) b.w /= wsum;
  }

  const std::vector<Branch>& branches() const { return branches_; }

 private:
  std::vector<Branch> branches_;
};

/// π₁ — pushforward of branch weights to second-round barycenters.
inline RandomPosterior strategy_first_round(const TwoStepStrategy& Pi) {
  std::vector<Atom> atoms;
  for (const Branch& b : Pi.branches()) atoms.push_back({b.w, b.second_round.barycenter()});
  return RandomPosterior(std::move(atoms));
}

/// E_Π[π₂] — the terminal posterior distribution of the whole strategy.
inline RandomPosterior strategy_mean(const TwoStepStrategy& Pi) {
  std::vector<Atom> atoms;
  for (const Branch& b : Pi.branches())
    for (const Atom& a : b.second_round.atoms()) atoms.push_back({b.w * a.w, a.q});
  return RandomPosterior(std::move(atoms));
}

// ===================== Sampling =====================

/**
 * Random posterior for axiom checks: support size uniform in {2..5}, beliefs
 * Dirichlet(1) restricted to full support, weights Dirichlet(1).  Never emits
 * boundary beliefs, so rich-domain costs stay finite almost surely.
 */
inline RandomPosterior sample_posterior(simplex::Rng& rng, std::size_t n_states,
                                        std::size_t min_support = 2,
                                        std::size_t max_support = 5) {
  const std::size_t k = min_support + rng.index(max_support - min_support + 1);
  std::vector<double> w = rng.dirichlet(k);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < k; ++i) atoms.push_back({w[i], rng.interior_belief(n_states)});
  return RandomPosterior(std::move(atoms));
}

}  // namespace infocost::posteriors
