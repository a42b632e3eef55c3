#pragma once

/**
 * @file axioms.hpp
 * @brief Randomized checkers for the axioms of information-cost functions,
 *        plus a derivative-free violation-witness search.
 *
 * The axioms quantify over infinite sets, so randomized checks are evidence,
 * not proofs: every report carries its trial count, seed, tolerance, and the
 * worst witness seen.  Checked properties:
 *
 *  - Monotone:            π ≤_mps π′ ⇒ C(π) ≤ C(π′)
 *  - Subadditive:         C(E_Π[π₂]) ≤ C(π₁) + E_Π[C(π₂)]
 *  - Additive:            the same with equality (⇔ UPS)
 *  - Dilution Linear:     C(α·π) = α·C(π)
 *  - Triangle (average):  E_π[D(q|p)] ≤ D(p_π|p) + E_π[D(q|p_π)]
 *  - Constant Marginal:   C(σ⊗σ′, p) = C(σ, p) + C(σ′, p)
 *  - Prior Invariance:    C(σ, p) = C(σ, p′)
 *  - Quasi-metric:        D(q|p) ≤ D(r|p) + D(q|r), D(p|p) = 0
 *  - Partition flatness:  all nontrivial partition experiments cost the same
 *
 * `find_violation` certifies expected failures: randomized multi-start over a
 * smooth parameterization (softmax beliefs, sigmoid weights) refined by
 * Nelder–Mead simplex descent, with +∞ evaluations treated as feasibility
 * walls.
 */

#include "infocost/costs.hpp"
#include "infocost/experiments.hpp"
#include "infocost/posteriors.hpp"
#include "infocost/simplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace infocost::axioms {

using costs::CostFunction;
using costs::Divergence;
using experiments::Experiment;
using posteriors::Atom;
using posteriors::Branch;
using posteriors::RandomPosterior;
using posteriors::TwoStepStrategy;
using simplex::Belief;
using simplex::kPosInf;
using simplex::Rng;

/// Pass tolerance for closed-form costs (float noise only).
inline constexpr double kClosedFormTol = 1e-9;
/// Pass tolerance for numerically integrated costs.
inline constexpr double kIntegratedTol = 1e-6;
/// A witness search only certifies gaps above this threshold.
inline constexpr double kWitnessThreshold = 1e-6;

// ===================== Reports =====================

enum class Verdict { pass, fail, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    default: return "inconclusive";
  }
}

/// Outcome of one randomized axiom check.  worst_violation is a signed gap:
/// positive means the axiom's inequality was broken by that amount.
struct AxiomReport {
  std::string axiom;
  std::size_t trials = 0;
  double worst_violation = -kPosInf;
  std::string witness;
  Verdict verdict = Verdict::pass;
  std::uint64_t seed = 0;
  double tol = kClosedFormTol;
};

namespace detail {

inline AxiomReport finish_report(std::string axiom, std::size_t trials, double worst,
                                 std::string witness, std::uint64_t seed, double tol) {
  AxiomReport r;
  r.axiom = std::move(axiom);
  r.trials = trials;
  r.worst_violation = worst;
  r.witness = std::move(witness);
  r.seed = seed;
  r.tol = tol;
  r.verdict = worst > tol ? Verdict::fail : Verdict::pass;
  return r;
}

inline std::string fmt_belief(const Belief& b) {
  std::ostringstream os;
  os << std::setprecision(17) << "[";
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
  os << "]";
  return os.str();
}

inline std::string fmt_posterior(const RandomPosterior& pi) {
  std::ostringstream os;
  os << std::setprecision(17) << "{";
  for (std::size_t i = 0; i < pi.atoms().size(); ++i)
    os << (i ? "," : "") << "(" << pi.atoms()[i].w << "," << fmt_belief(pi.atoms()[i].q) << ")";
  os << "}";
  return os.str();
}

inline std::string fmt_strategy(const TwoStepStrategy& Pi) {
  std::ostringstream os;
  os << std::setprecision(17) << "strategy{";
  for (std::size_t i = 0; i < Pi.branches().size(); ++i)
    os << (i ? ";" : "") << Pi.branches()[i].w << "*" << fmt_posterior(Pi.branches()[i].second_round);
  os << "}";
  return os.str();
}

inline std::string fmt_experiment(const Experiment& e) {
  std::ostringstream os;
  os << std::setprecision(17) << "channel[";
  for (Eigen::Index r = 0; r < e.channel().rows(); ++r) {
    os << (r ? ";" : "");
    for (Eigen::Index c = 0; c < e.channel().cols(); ++c)
      os << (c ? "," : "") << e.channel()(r, c);
  }
  os << "]";
  return os.str();
}

/// Signed gap lhs − rhs under extended-real conventions: a +∞ bound is never
/// violated; a finite bound is violated infinitely by an infinite lhs.
inline double ext_gap(double lhs, double rhs) {
  if (!std::isfinite(rhs)) return -kPosInf;
  if (!std::isfinite(lhs)) return kPosInf;
  return lhs - rhs;
}

}  // namespace detail

// ===================== Samplers =====================

using PairSampler = std::function<std::pair<RandomPosterior, RandomPosterior>(Rng&)>;
using StrategySampler = std::function<TwoStepStrategy(Rng&)>;
using PosteriorSampler = std::function<RandomPosterior(Rng&)>;
using PosteriorPriorSampler = std::function<std::pair<RandomPosterior, Belief>(Rng&)>;
using ExperimentTripleSampler = std::function<std::tuple<Experiment, Experiment, Belief>(Rng&)>;
using ExperimentPriorsSampler = std::function<std::tuple<Experiment, Belief, Belief>(Rng&)>;
using BeliefTripleSampler = std::function<std::array<Belief, 3>(Rng&)>;

/// Mean-preserving split of one atom: (w, q) ↦ (wα, r) + (w(1−α), (q−αr)/(1−α))
/// with α small enough to keep the complement on the simplex.
inline std::optional<std::pair<Atom, Atom>> split_atom(const Atom& a, const Belief& r,
                                                       double u) {
  double cap = 1.0;
  for (std::size_t i = 0; i < a.q.size(); ++i)
    if (r[i] > 0.0) cap = std::min(cap, a.q[i] / r[i]);
  const double alpha = 0.9 * u * cap;
  if (alpha <= 1e-12 || alpha >= 1.0) return std::nullopt;
  std::vector<double> rest(a.q.size());
  for (std::size_t i = 0; i < a.q.size(); ++i)
    rest[i] = std::max(0.0, (a.q[i] - alpha * r[i]) / (1.0 - alpha));
  return std::make_pair(Atom{a.w * alpha, r}, Atom{a.w * (1.0 - alpha), Belief(std::move(rest))});
}

/// Ordered MPS pairs (π, π′), π′ ≥ π, built by splitting atoms of π.
inline PairSampler make_pair_sampler(std::size_t n_states) {
  return [n_states](Rng& rng) {
    RandomPosterior lo = posteriors::sample_posterior(rng, n_states);
    std::vector<Atom> atoms;
    bool split_any = false;
    for (const Atom& a : lo.atoms()) {
      const bool try_split = !split_any || rng.uniform() < 0.7;
      if (try_split) {
        if (auto parts = split_atom(a, rng.interior_belief(n_states), rng.uniform())) {
          atoms.push_back(parts->first);
          atoms.push_back(parts->second);
          split_any = true;
          continue;
        }
      }
      atoms.push_back(a);
    }
    RandomPosterior hi(std::move(atoms));
    return std::make_pair(std::move(lo), std::move(hi));
  };
}

/// Strategies with ≤ max_branches branches of ≤ max_atoms atoms each.
inline StrategySampler make_strategy_sampler(std::size_t n_states, std::size_t max_branches = 4,
                                             std::size_t max_atoms = 4) {
  return [=](Rng& rng) {
    const std::size_t k = 2 + rng.index(max_branches - 1);
    const std::vector<double> w = rng.dirichlet(k);
    std::vector<Branch> branches;
    for (std::size_t i = 0; i < k; ++i)
      branches.push_back({w[i], posteriors::sample_posterior(rng, n_states, 1, max_atoms)});
    return TwoStepStrategy(std::move(branches));
  };
}

inline PosteriorSampler make_posterior_sampler(std::size_t n_states) {
  return [n_states](Rng& rng) { return posteriors::sample_posterior(rng, n_states); };
}

/// (π, p) pairs with p interior (so p_π ≪ p automatically).
inline PosteriorPriorSampler make_posterior_prior_sampler(std::size_t n_states) {
  return [n_states](Rng& rng) {
    return std::make_pair(posteriors::sample_posterior(rng, n_states),
                          rng.interior_belief(n_states));
  };
}

/// Random experiment with strictly positive Dirichlet channel rows.
inline Experiment sample_experiment(Rng& rng, std::size_t n_states, std::size_t max_signals = 4) {
  const std::size_t m = 2 + rng.index(max_signals - 1);
  Eigen::MatrixXd ch(static_cast<Eigen::Index>(n_states), static_cast<Eigen::Index>(m));
  for (std::size_t t = 0; t < n_states; ++t) {
    const std::vector<double> row = rng.dirichlet(m);
    for (std::size_t s = 0; s < m; ++s)
      ch(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) = row[s];
  }
  return Experiment(std::move(ch));
}

inline ExperimentTripleSampler make_experiment_pair_sampler(std::size_t n_states,
                                                            std::size_t max_signals = 4) {
  return [=](Rng& rng) {
    return std::make_tuple(sample_experiment(rng, n_states, max_signals),
                           sample_experiment(rng, n_states, max_signals),
                           rng.interior_belief(n_states));
  };
}

inline ExperimentPriorsSampler make_experiment_priors_sampler(std::size_t n_states,
                                                              std::size_t max_signals = 4) {
  return [=](Rng& rng) {
    return std::make_tuple(sample_experiment(rng, n_states, max_signals),
                           rng.interior_belief(n_states), rng.interior_belief(n_states));
  };
}

inline BeliefTripleSampler make_belief_triple_sampler(std::size_t n_states) {
  return [n_states](Rng& rng) {
    return std::array<Belief, 3>{rng.interior_belief(n_states), rng.interior_belief(n_states),
                                 rng.interior_belief(n_states)};
  };
}

// ===================== Checkers =====================

/// Axiom 1: C(π) ≤ C(π′) whenever π′ ≥_mps π.
inline AxiomReport check_monotone(const CostFunction& C, const PairSampler& sampler,
                                  std::size_t trials, std::uint64_t seed,
                                  double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [lo, hi] = sampler(rng);
    const double gap = detail::ext_gap(C(lo), C(hi));
    if (gap > worst) {
      worst = gap;
      witness = "lo=" + detail::fmt_posterior(lo) + " hi=" + detail::fmt_posterior(hi);
    }
  }
  return detail::finish_report("monotone", trials, worst, std::move(witness), seed, tol);
}

namespace detail {

/// Signed subadditivity gap C(E_Π[π₂]) − C(π₁) − E_Π[C(π₂)].
inline double strategy_gap(const CostFunction& C, const TwoStepStrategy& Pi) {
  double rhs = C(posteriors::strategy_first_round(Pi));
  for (const Branch& b : Pi.branches())
    rhs = simplex::ext_add(rhs, simplex::ext_scale(b.w, C(b.second_round)));
  return ext_gap(C(posteriors::strategy_mean(Pi)), rhs);
}

}  // namespace detail

/// Axiom 2: C(E_Π[π₂]) ≤ C(π₁) + E_Π[C(π₂)].
inline AxiomReport check_subadditive(const CostFunction& C, const StrategySampler& sampler,
                                     std::size_t trials, std::uint64_t seed,
                                     double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const TwoStepStrategy Pi = sampler(rng);
    const double gap = detail::strategy_gap(C, Pi);
    if (gap > worst) {
      worst = gap;
      witness = detail::fmt_strategy(Pi);
    }
  }
  return detail::finish_report("subadditive", trials, worst, std::move(witness), seed, tol);
}

/// Average-form triangle inequality for a divergence:
/// E_π[D(q|p)] ≤ D(p_π|p) + E_π[D(q|p_π)].  Equivalent to Subadditivity for
/// posterior-separable costs.
inline AxiomReport check_triangle_avg(const Divergence& D, const PosteriorPriorSampler& sampler,
                                      std::size_t trials, std::uint64_t seed,
                                      double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [pi, p] = sampler(rng);
    const Belief& bp = pi.barycenter();
    double lhs = 0.0, inner = 0.0;
    for (const Atom& a : pi.atoms()) {
      lhs = simplex::ext_add(lhs, simplex::ext_scale(a.w, D.value(a.q, p)));
      inner = simplex::ext_add(inner, simplex::ext_scale(a.w, D.value(a.q, bp)));
    }
    const double gap = detail::ext_gap(lhs, simplex::ext_add(D.value(bp, p), inner));
    if (gap > worst) {
      worst = gap;
      witness = "pi=" + detail::fmt_posterior(pi) + " p=" + detail::fmt_belief(p);
    }
  }
  return detail::finish_report("triangle_avg", trials, worst, std::move(witness), seed, tol);
}

/// Axiom 3: C(α·π) = α·C(π); worst absolute deviation.
inline AxiomReport check_dilution_linear(const CostFunction& C, const PosteriorSampler& sampler,
                                         std::size_t trials, std::uint64_t seed,
                                         double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const RandomPosterior pi = sampler(rng);
    const double alpha = rng.uniform();
    const double lhs = C(posteriors::dilute(pi, alpha));
    const double rhs = simplex::ext_scale(alpha, C(pi));
    double gap;
    if (!std::isfinite(lhs) && !std::isfinite(rhs)) gap = 0.0;
    else if (std::isfinite(lhs) != std::isfinite(rhs)) gap = kPosInf;
    else gap = std::abs(lhs - rhs);
    if (gap > worst) {
      worst = gap;
      std::ostringstream os;
      os << std::setprecision(17) << "alpha=" << alpha << " pi=" << detail::fmt_posterior(pi);
      witness = os.str();
    }
  }
  return detail::finish_report("dilution_linear", trials, worst, std::move(witness), seed, tol);
}

/// Axiom 4: the subadditivity relation with equality; worst absolute gap.
inline AxiomReport check_additive(const CostFunction& C, const StrategySampler& sampler,
                                  std::size_t trials, std::uint64_t seed,
                                  double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const TwoStepStrategy Pi = sampler(rng);
    const double lhs = C(posteriors::strategy_mean(Pi));
    double rhs = C(posteriors::strategy_first_round(Pi));
    for (const Branch& b : Pi.branches())
      rhs = simplex::ext_add(rhs, simplex::ext_scale(b.w, C(b.second_round)));
    double gap;
    if (!std::isfinite(lhs) && !std::isfinite(rhs)) gap = 0.0;
    else if (std::isfinite(lhs) != std::isfinite(rhs)) gap = kPosInf;
    else gap = std::abs(lhs - rhs);
    if (gap > worst) {
      worst = gap;
      witness = detail::fmt_strategy(Pi);
    }
  }
  return detail::finish_report("additive", trials, worst, std::move(witness), seed, tol);
}

/// Constant marginal cost: C(σ⊗σ′, p) = C(σ, p) + C(σ′, p); worst |gap| over
/// strictly positive sampled channels.
inline AxiomReport check_cmc(const CostFunction& C, const ExperimentTripleSampler& sampler,
                             std::size_t trials, std::uint64_t seed,
                             double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [s1, s2, p] = sampler(rng);
    const double joint = C(experiments::product(s1, s2), p);
    const double parts = simplex::ext_add(C(s1, p), C(s2, p));
    if (!std::isfinite(joint) || !std::isfinite(parts)) continue;
    const double gap = std::abs(joint - parts);
    if (gap > worst) {
      worst = gap;
      witness = "sigma=" + detail::fmt_experiment(s1) + " sigma2=" + detail::fmt_experiment(s2) +
                " p=" + detail::fmt_belief(p);
    }
  }
  return detail::finish_report("cmc", trials, worst, std::move(witness), seed, tol);
}

/// Prior Invariance: C(σ, p) = C(σ, p′) across full-support priors.
inline AxiomReport check_prior_invariant(const CostFunction& C,
                                         const ExperimentPriorsSampler& sampler,
                                         std::size_t trials, std::uint64_t seed,
                                         double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [sigma, p, p2] = sampler(rng);
    const double a = C(sigma, p), b = C(sigma, p2);
    if (!std::isfinite(a) || !std::isfinite(b)) continue;
    const double gap = std::abs(a - b);
    if (gap > worst) {
      worst = gap;
      witness = "sigma=" + detail::fmt_experiment(sigma) + " p=" + detail::fmt_belief(p) +
                " p2=" + detail::fmt_belief(p2);
    }
  }
  return detail::finish_report("prior_invariant", trials, worst, std::move(witness), seed, tol);
}

/// Quasi-metric property of a divergence: D(q|p) ≤ D(r|p) + D(q|r), plus the
/// identity-of-indiscernibles spot check D(p|p) = 0.
inline AxiomReport check_quasimetric(const Divergence& D, const BeliefTripleSampler& sampler,
                                     std::size_t trials, std::uint64_t seed,
                                     double tol = kClosedFormTol) {
  Rng rng(seed);
  double worst = -kPosInf;
  std::string witness;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [q, r, p] = sampler(rng);
    const double tri =
        detail::ext_gap(D.value(q, p), simplex::ext_add(D.value(r, p), D.value(q, r)));
    const double self = std::abs(D.value(p, p));
    const double gap = std::max(tri, self);
    if (gap > worst) {
      worst = gap;
      witness = "q=" + detail::fmt_belief(q) + " r=" + detail::fmt_belief(r) +
                " p=" + detail::fmt_belief(p);
    }
  }
  return detail::finish_report("quasimetric", trials, worst, std::move(witness), seed, tol);
}

namespace detail {

/// All partitions of {0,…,n−1} via restricted-growth strings.
inline std::vector<experiments::Partition> all_partitions(std::size_t n) {
  std::vector<experiments::Partition> out;
  std::vector<std::size_t> rgs(n, 0);
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t maxc) {
    if (i == n) {
      std::vector<std::vector<std::size_t>> cells(maxc);
      for (std::size_t j = 0; j < n; ++j) cells[rgs[j]].push_back(j);
      out.emplace_back(n, std::move(cells));
      return;
    }
    for (std::size_t c = 0; c <= maxc; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(maxc, c + 1));
    }
  };
  rec(1, 1);  // rgs[0] = 0 always
  return out;
}

}  // namespace detail

/// Partition flatness: every nontrivial partition experiment costs the same
/// at a fixed interior prior (consequence of SLP + Prior Invariance).
/// Deterministic enumeration; |Θ| ≥ 3 required for content.
inline AxiomReport check_partition_flatness(const CostFunction& C, const Belief& p,
                                            std::uint64_t seed = 0,
                                            double tol = kClosedFormTol) {
  if (p.size() < 3)
    throw std::invalid_argument("check_partition_flatness: need at least 3 states");
  double lo = kPosInf, hi = -kPosInf;
  std::string lo_w, hi_w;
  std::size_t count = 0;
  for (const experiments::Partition& P : detail::all_partitions(p.size())) {
    if (P.cells().size() < 2) continue;  // trivial partition excluded
    const Experiment sigma = experiments::partition_experiment(P);
    const double v = C(experiments::bayes_map(sigma, p));
    ++count;
    if (v < lo) {
      lo = v;
      lo_w = detail::fmt_experiment(sigma);
    }
    if (v > hi) {
      hi = v;
      hi_w = detail::fmt_experiment(sigma);
    }
  }
  if (!std::isfinite(hi) || !std::isfinite(lo)) {
    AxiomReport r;
    r.axiom = "partition_flatness";
    r.trials = count;
    r.worst_violation = kPosInf;
    r.witness = "non-finite partition value; low=" + lo_w + " high=" + hi_w;
    r.verdict = Verdict::inconclusive;
    r.seed = seed;
    r.tol = tol;
    return r;
  }
  const double worst = hi - lo;
  return detail::finish_report("partition_flatness", count, worst,
                               "low=" + lo_w + " high=" + hi_w, seed, tol);
}

/// Sequential Learning-Proofness evidence: Monotone ∧ Subadditive (Theorem-1
/// characterization); the report aggregates both checks.
inline AxiomReport slp_verdict(const CostFunction& C, const PairSampler& pairs,
                               const StrategySampler& strategies, std::size_t trials,
                               std::uint64_t seed, double tol = kClosedFormTol) {
  const AxiomReport m = check_monotone(C, pairs, trials, seed, tol);
  const AxiomReport s = check_subadditive(C, strategies, trials, seed + 1, tol);
  AxiomReport r;
  r.axiom = "slp";
  r.trials = m.trials + s.trials;
  r.seed = seed;
  r.tol = tol;
  if (s.worst_violation >= m.worst_violation) {
    r.worst_violation = s.worst_violation;
    r.witness = "subadditive: " + s.witness;
  } else {
    r.worst_violation = m.worst_violation;
    r.witness = "monotone: " + m.witness;
  }
  r.verdict = (m.verdict == Verdict::fail || s.verdict == Verdict::fail) ? Verdict::fail
                                                                         : Verdict::pass;
  return r;
}

// ===================== Violation search =====================

/// Certified counterexample: the parameterized input achieving `gap`.
struct Violation {
  double gap = 0.0;
  std::string witness;
};

namespace detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Softmax of k consecutive entries of z starting at off; clamped interior.
inline Belief softmax_belief(const std::vector<double>& z, std::size_t off, std::size_t k) {
  double m = -kPosInf;
  for (std::size_t i = 0; i < k; ++i) m = std::max(m, z[off + i]);
  std::vector<double> e(k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += e[i] = std::exp(z[off + i] - m);
  for (double& v : e) v = std::max(v / s, 1e-12);
  return Belief(std::move(e));
}

/// Nelder–Mead maximization of f over R^d; −∞ values act as walls.
/// Deterministic given the start point.  Returns the best point found.
inline std::pair<std::vector<double>, double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> z0,
    std::size_t max_evals) {
  const std::size_t d = z0.size();
  std::size_t evals = 0;
  auto eval = [&](const std::vector<double>& z) {
    ++evals;
    const double v = f(z);
    return std::isfinite(v) ? v : -kPosInf;
  };
  std::vector<std::vector<double>> pts(d + 1, z0);
  std::vector<double> val(d + 1);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += 0.5;
  for (std::size_t i = 0; i <= d; ++i) val[i] = eval(pts[i]);
  while (evals + 4 < max_evals) {
    // Order: best first.
    std::vector<std::size_t> idx(d + 1);
    for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    const std::size_t best = idx[0], worst = idx[d], second = idx[d - 1];
    if (std::isfinite(val[best]) && std::isfinite(val[worst]) &&
        val[best] - val[worst] < 1e-12)
      break;
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j] / static_cast<double>(d);
    }
    auto blend = [&](double coef) {
      std::vector<double> z(d);
      for (std::size_t j = 0; j < d; ++j) z[j] = centroid[j] + coef * (centroid[j] - pts[worst][j]);
      return z;
    };
    const std::vector<double> refl = blend(1.0);
    const double vr = eval(refl);
    if (vr > val[best]) {
      const std::vector<double> expd = blend(2.0);
      const double ve = eval(expd);
      if (ve > vr) {
        pts[worst] = expd;
        val[worst] = ve;
      } else {
        pts[worst] = refl;
        val[worst] = vr;
      }
    } else if (vr > val[second]) {
      pts[worst] = refl;
      val[worst] = vr;
    } else {
      const std::vector<double> ctr = blend(-0.5);
      const double vc = eval(ctr);
      if (vc > val[worst]) {
        pts[worst] = ctr;
        val[worst] = vc;
      } else {
        for (std::size_t i = 0; i <= d; ++i) {  // shrink toward best
          if (i == best) continue;
          for (std::size_t j = 0; j < d; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          val[i] = eval(pts[i]);
        }
      }
    }
  }
  std::size_t bi = 0;
  for (std::size_t i = 1; i <= d; ++i)
    if (val[i] > val[bi]) bi = i;
  return {pts[bi], val[bi]};
}

}  // namespace detail

/**
 * Randomized multi-start search for a violation of `axiom` by C, refined with
 * Nelder–Mead on a smooth parameterization.  Returns the witness maximizing
 * the signed gap if it exceeds 1e−6; otherwise nullopt (inconclusive, not a
 * pass).  Supported axioms: monotone, subadditive, additive, dilution_linear,
 * cmc, prior_invariant, quasimetric (via C's divergence metadata).
 */
inline std::optional<Violation> find_violation(const CostFunction& C, const std::string& axiom,
                                               std::size_t budget = 100000,
                                               std::uint64_t seed = 20250817,
                                               std::size_t n_states = 2) {
  const std::size_t n = n_states;
  std::function<double(const std::vector<double>&)> gap_fn;
  std::function<std::string(const std::vector<double>&)> describe;
  std::size_t dim = 0;

  if (axiom == "subadditive" || axiom == "additive") {
    // Two branches, two atoms each: [w | belief,belief,u]×2 with softmax
    // beliefs and sigmoid weights.
    dim = 1 + 2 * (2 * n + 1);
    auto build = [n](const std::vector<double>& z) {
      const double w = detail::sigmoid(z[0]);
      auto branch = [&](std::size_t off) {
        const Belief a = detail::softmax_belief(z, off, n);
        const Belief b = detail::softmax_belief(z, off + n, n);
        const double u = detail::sigmoid(z[off + 2 * n]);
        return RandomPosterior({Atom{u, a}, Atom{1.0 - u, b}});
      };
      return TwoStepStrategy({Branch{w, branch(1)}, Branch{1.0 - w, branch(1 + 2 * n + 1)}});
    };
    const bool absolute = axiom == "additive";
    gap_fn = [&C, build, absolute](const std::vector<double>& z) {
      const double g = detail::strategy_gap(C, build(z));
      return absolute && std::isfinite(g) ? std::abs(g) : g;
    };
    describe = [build](const std::vector<double>& z) { return detail::fmt_strategy(build(z)); };
  } else if (axiom == "monotone") {
    // Base posterior (2 atoms) + split of atom 0 by (r, α).
    dim = 2 * n + 1 + n + 1;
    auto build = [n](const std::vector<double>& z)
        -> std::optional<std::pair<RandomPosterior, RandomPosterior>> {
      const Belief qa = detail::softmax_belief(z, 0, n);
      const Belief qb = detail::softmax_belief(z, n, n);
      const double u = detail::sigmoid(z[2 * n]);
      RandomPosterior lo({Atom{u, qa}, Atom{1.0 - u, qb}});
      const Belief r = detail::softmax_belief(z, 2 * n + 1, n);
      auto parts = split_atom(lo.atoms()[0], r, detail::sigmoid(z[3 * n + 1]));
      if (!parts) return std::nullopt;
      std::vector<Atom> atoms{parts->first, parts->second};
      for (std::size_t i = 1; i < lo.atoms().size(); ++i) atoms.push_back(lo.atoms()[i]);
      return std::make_pair(std::move(lo), RandomPosterior(std::move(atoms)));
    };
    gap_fn = [&C, build](const std::vector<double>& z) {
      const auto pair = build(z);
      if (!pair) return -kPosInf;
      return detail::ext_gap(C(pair->first), C(pair->second));
    };
    describe = [build](const std::vector<double>& z) {
      const auto pair = build(z);
      return "lo=" + detail::fmt_posterior(pair->first) +
             " hi=" + detail::fmt_posterior(pair->second);
    };
  } else if (axiom == "dilution_linear") {
    dim = 2 * n + 1 + 1;
    auto build = [n](const std::vector<double>& z) {
      const double u = detail::sigmoid(z[2 * n]);
      return std::make_pair(RandomPosterior({Atom{u, detail::softmax_belief(z, 0, n)},
                                             Atom{1.0 - u, detail::softmax_belief(z, n, n)}}),
                            detail::sigmoid(z[2 * n + 1]));
    };
    gap_fn = [&C, build](const std::vector<double>& z) {
      const auto [pi, alpha] = build(z);
      const double lhs = C(posteriors::dilute(pi, alpha));
      const double rhs = simplex::ext_scale(alpha, C(pi));
      if (!std::isfinite(lhs) || !std::isfinite(rhs)) return -kPosInf;
      return std::abs(lhs - rhs);
    };
    describe = [build](const std::vector<double>& z) {
      const auto [pi, alpha] = build(z);
      std::ostringstream os;
      os << std::setprecision(17) << "alpha=" << alpha << " pi=" << detail::fmt_posterior(pi);
      return os.str();
    };
  } else if (axiom == "cmc") {
    // Two binary-signal experiments (sigmoid row parameters) + softmax prior.
    dim = 2 * n + n;
    auto build = [n](const std::vector<double>& z) {
      auto channel = [&](std::size_t off) {
        Eigen::MatrixXd ch(static_cast<Eigen::Index>(n), 2);
        for (std::size_t t = 0; t < n; ++t) {
          const double a = std::clamp(detail::sigmoid(z[off + t]), 1e-9, 1.0 - 1e-9);
          ch(static_cast<Eigen::Index>(t), 0) = a;
          ch(static_cast<Eigen::Index>(t), 1) = 1.0 - a;
        }
        return Experiment(std::move(ch));
      };
      return std::make_tuple(channel(0), channel(n), detail::softmax_belief(z, 2 * n, n));
    };
    gap_fn = [&C, build](const std::vector<double>& z) {
      const auto [s1, s2, p] = build(z);
      const double joint = C(experiments::product(s1, s2), p);
      const double parts = simplex::ext_add(C(s1, p), C(s2, p));
      if (!std::isfinite(joint) || !std::isfinite(parts)) return -kPosInf;
      return std::abs(joint - parts);
    };
    describe = [build](const std::vector<double>& z) {
      const auto [s1, s2, p] = build(z);
      return "sigma=" + detail::fmt_experiment(s1) + " sigma2=" + detail::fmt_experiment(s2) +
             " p=" + detail::fmt_belief(p);
    };
  } else if (axiom == "prior_invariant") {
    dim = 2 * n + 2 * n;  // 4-signal experiment rows via two sigmoids each + two priors
    auto build = [n](const std::vector<double>& z) {
      Eigen::MatrixXd ch(static_cast<Eigen::Index>(n), 4);
      for (std::size_t t = 0; t < n; ++t) {
        const double a = std::clamp(detail::sigmoid(z[2 * t]), 1e-9, 1.0 - 1e-9);
        const double b = std::clamp(detail::sigmoid(z[2 * t + 1]), 1e-9, 1.0 - 1e-9);
        ch(static_cast<Eigen::Index>(t), 0) = a * b;
        ch(static_cast<Eigen::Index>(t), 1) = a * (1.0 - b);
        ch(static_cast<Eigen::Index>(t), 2) = (1.0 - a) * b;
        ch(static_cast<Eigen::Index>(t), 3) = (1.0 - a) * (1.0 - b);
      }
      return std::make_tuple(Experiment(std::move(ch)), detail::softmax_belief(z, 2 * n, n),
                             detail::softmax_belief(z, 3 * n, n));
    };
    gap_fn = [&C, build](const std::vector<double>& z) {
      const auto [sigma, p, p2] = build(z);
      const double a = C(sigma, p), b = C(sigma, p2);
      if (!std::isfinite(a) || !std::isfinite(b)) return -kPosInf;
      return std::abs(a - b);
    };
    describe = [build](const std::vector<double>& z) {
      const auto [sigma, p, p2] = build(z);
      return "sigma=" + detail::fmt_experiment(sigma) + " p=" + detail::fmt_belief(p) +
             " p2=" + detail::fmt_belief(p2);
    };
  } else if (axiom == "quasimetric") {
    if (!C.ps) throw std::invalid_argument("find_violation: cost has no divergence form");
    auto D = C.ps;
    dim = 3 * n;
    auto build = [n](const std::vector<double>& z) {
      return std::array<Belief, 3>{detail::softmax_belief(z, 0, n),
                                   detail::softmax_belief(z, n, n),
                                   detail::softmax_belief(z, 2 * n, n)};
    };
    gap_fn = [D, build](const std::vector<double>& z) {
      const auto [q, r, p] = build(z);
      return detail::ext_gap(D->value(q, p), simplex::ext_add(D->value(r, p), D->value(q, r)));
    };
    describe = [build](const std::vector<double>& z) {
      const auto [q, r, p] = build(z);
      return "q=" + detail::fmt_belief(q) + " r=" + detail::fmt_belief(r) +
             " p=" + detail::fmt_belief(p);
    };
  } else {
    throw std::invalid_argument("find_violation: unknown axiom " + axiom);
  }

  Rng rng(seed);
  std::size_t used = 0;
  double best = -kPosInf;
  std::vector<double> best_z;
  const std::size_t per_start = std::max<std::size_t>(200, 120 * dim);
  while (used + dim + 2 < budget) {
    std::vector<double> z0(dim);
    for (double& v : z0) v = rng.uniform(-2.5, 2.5);
    const std::size_t chunk = std::min(per_start, budget - used);
    const auto [z, v] = detail::nelder_mead(gap_fn, std::move(z0), chunk);
    used += chunk;
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  if (best <= kWitnessThreshold || best_z.empty()) return std::nullopt;
  return Violation{best, describe(best_z)};
}

}  // namespace infocost::axioms
