#pragma once

/**
 * @file experiments.hpp
 * @brief Finite-signal statistical experiments: the Bayes map, independent
 *        products, Blackwell comparisons, and named experiment families.
 *
 * An experiment σ = (S, (σ_θ)) assigns each state θ a distribution σ_θ over a
 * finite signal set S.  Observing s under prior p yields the posterior
 *
 *   q^{σ,p}(θ|s) = p(θ)·σ_θ(s) / ⟨σ,p⟩(s),   ⟨σ,p⟩(s) = Σ_θ p(θ)σ_θ(s),
 *
 * so σ induces a random posterior (the Bayes map).  σ′ Blackwell-dominates σ
 * iff σ's channel is a garbling of σ′'s — an LP feasibility question — which
 * for full-support priors coincides with the mean-preserving-spread order on
 * the induced random posteriors.
 *
 * Named families:
 *  - bernoulli(ℓ): two signals, σ_θ(s_θ) = e^ℓ/(1+e^ℓ); the log-likelihood
 *    ratio of a signal in favor of its state is exactly ℓ.
 *  - poisson_dilution(λ): signals {s₀, s₁, s_∅}; the identifying signal s_θ
 *    arrives with probability 1−e^{−λ}, else the uninformative s_∅.
 *    λ = +∞ yields full revelation.
 *  - partition_experiment(P): deterministically reports the partition cell
 *    containing the state.
 */

#include "infocost/lp.hpp"
#include "infocost/posteriors.hpp"
#include "infocost/simplex.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace infocost::experiments {

using posteriors::Atom;
using posteriors::RandomPosterior;
using simplex::Belief;

/// Signals whose unconditional probability falls below this are dropped by
/// the Bayes map (avoids 0/0 posteriors).
inline constexpr double kSignalDropTol = 1e-12;

// ===================== Experiment =====================

/// Finite-signal experiment: labeled states and signals plus a row-stochastic
/// channel (one row per state, one column per signal).
class Experiment {
 public:
  Experiment(std::vector<std::string> states, std::vector<std::string> signals,
             Eigen::MatrixXd channel)
      : states_(std::move(states)), signals_(std::move(signals)), channel_(std::move(channel)) {
    if (states_.size() < 2) throw std::invalid_argument("Experiment: need at least 2 states");
    if (signals_.empty()) throw std::invalid_argument("Experiment: need at least 1 signal");
    if (channel_.rows() != static_cast<Eigen::Index>(states_.size()) ||
        channel_.cols() != static_cast<Eigen::Index>(signals_.size()))
      throw std::invalid_argument("Experiment: channel shape mismatch");
    for (Eigen::Index r = 0; r < channel_.rows(); ++r) {
      double sum = 0.0;
      for (Eigen::Index c = 0; c < channel_.cols(); ++c) {
        const double v = channel_(r, c);
        if (!std::isfinite(v) || v < -simplex::kBeliefSumTol)
          throw std::invalid_argument("Experiment: channel entries must be >= 0");
        sum += v;
      }
      if (std::abs(sum - 1.0) > simplex::kBeliefSumTol)
        throw std::invalid_argument("Experiment: channel rows must sum to 1");
      channel_.row(r) /= sum;
    }
  }

  /// Channel-only constructor with default labels "0","1",… / "s0","s1",…
  explicit Experiment(Eigen::MatrixXd channel) : Experiment(with_default_labels(std::move(channel))) {}

  std::size_t states() const { return states_.size(); }
  std::size_t signals() const { return signals_.size(); }
  const std::vector<std::string>& state_labels() const { return states_; }
  const std::vector<std::string>& signal_labels() const { return signals_; }
  const Eigen::MatrixXd& channel() const { return channel_; }

  static std::vector<std::string> default_labels(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
  }

 private:
  /// Reads the channel's shape before handing it off, so the label counts are
  /// fixed ahead of the move (argument evaluation order is unspecified).
  static Experiment with_default_labels(Eigen::MatrixXd ch) {
    auto states = default_labels("", static_cast<std::size_t>(ch.rows()));
    auto signals = default_labels("s", static_cast<std::size_t>(ch.cols()));
    return Experiment(std::move(states), std::move(signals), std::move(ch));
  }

  std::vector<std::string> states_;
  std::vector<std::string> signals_;
  Eigen::MatrixXd channel_;
};

/// Partition of the state indices {0,…,n−1} into disjoint nonempty cells.
class Partition {
 public:
  Partition(std::size_t n_states, std::vector<std::vector<std::size_t>> cells)
      : n_states_(n_states), cells_(std::move(cells)) {
    std::vector<bool> seen(n_states_, false);
    if (cells_.empty()) throw std::invalid_argument("Partition: no cells");
    for (const auto& cell : cells_) {
      if (cell.empty()) throw std::invalid_argument("Partition: empty cell");
      for (std::size_t s : cell) {
        if (s >= n_states_ || seen[s]) throw std::invalid_argument("Partition: not disjoint/valid");
        seen[s] = true;
      }
    }
    for (bool b : seen)
      if (!b) throw std::invalid_argument("Partition: cells must cover all states");
  }

  std::size_t n_states() const { return n_states_; }
  const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }

 private:
  std::size_t n_states_;
  std::vector<std::vector<std::size_t>> cells_;
};

// ===================== Core operations =====================

/// Posterior distribution induced by running σ at prior p.  Signals with
/// unconditional probability below kSignalDropTol are dropped; duplicate
/// posteriors merge (RandomPosterior construction).  Barycenter equals p.
inline RandomPosterior bayes_map(const Experiment& sigma, const Belief& p) {
  if (p.size() != sigma.states()) throw std::invalid_argument("bayes_map: prior dimension");
  const Eigen::MatrixXd& ch = sigma.channel();
  std::vector<Atom> atoms;
  for (std::size_t s = 0; s < sigma.signals(); ++s) {
    double marg = 0.0;
    for (std::size_t t = 0; t < sigma.states(); ++t)
      marg += p[t] * ch(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s));
    if (marg < kSignalDropTol) continue;
    std::vector<double> q(sigma.states());
    for (std::size_t t = 0; t < sigma.states(); ++t)
      q[t] = p[t] * ch(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) / marg;
    atoms.push_back({marg, Belief(std::move(q))});
  }
  return RandomPosterior(std::move(atoms));
}

/// The canonical experiment of π at its own barycenter: one signal per atom,
/// σ_θ(s_i) = w_i·q_i(θ)/p(θ).  Inverts bayes_map: bayes_map(σ^π, p_π) = π.
/// Requires a full-support barycenter.
inline Experiment canonical_experiment(const RandomPosterior& pi) {
  const Belief& p = pi.barycenter();
  if (!p.full_support())
    throw std::invalid_argument("canonical_experiment: barycenter must have full support");
  const std::size_t n = p.size(), m = pi.atoms().size();
  Eigen::MatrixXd ch(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < n; ++t)
      ch(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) =
          pi.atoms()[i].w * pi.atoms()[i].q[t] / p[t];
  return Experiment(Experiment::default_labels("", n), Experiment::default_labels("s", m),
                    std::move(ch));
}

/// σ ⊗ σ′ — conditionally independent signals; channel rows are outer
/// products, signal labels are pairs.
inline Experiment product(const Experiment& a, const Experiment& b) {
  if (a.states() != b.states()) throw std::invalid_argument("product: state mismatch");
  std::vector<std::string> signals;
  signals.reserve(a.signals() * b.signals());
  for (std::size_t i = 0; i < a.signals(); ++i)
    for (std::size_t j = 0; j < b.signals(); ++j)
      signals.push_back("(" + a.signal_labels()[i] + "," + b.signal_labels()[j] + ")");
  Eigen::MatrixXd ch(a.states(), signals.size());
  for (std::size_t t = 0; t < a.states(); ++t)
    for (std::size_t i = 0; i < a.signals(); ++i)
      for (std::size_t j = 0; j < b.signals(); ++j)
        ch(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i * b.signals() + j)) =
            a.channel()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) *
            b.channel()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
  return Experiment(a.state_labels(), std::move(signals), std::move(ch));
}

/// Post-processes σ through a row-stochastic garbling matrix G: the output
/// channel is σ's channel · G, with default signal labels.
inline Experiment garble(const Experiment& sigma, const Eigen::MatrixXd& G) {
  if (G.rows() != static_cast<Eigen::Index>(sigma.signals()))
    throw std::invalid_argument("garble: G needs one row per signal");
  for (Eigen::Index r = 0; r < G.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < G.cols(); ++c) {
      if (!(G(r, c) >= 0.0)) throw std::invalid_argument("garble: G entries must be >= 0");
      sum += G(r, c);
    }
    if (std::abs(sum - 1.0) > simplex::kBeliefSumTol)
      throw std::invalid_argument("garble: G rows must sum to 1");
  }
  Eigen::MatrixXd ch = sigma.channel() * G;
  return Experiment(sigma.state_labels(),
                    Experiment::default_labels("s", static_cast<std::size_t>(G.cols())),
                    std::move(ch));
}

/// Blackwell dominance: true iff lo's channel = hi's channel · G for some
/// row-stochastic garbling G (LP feasibility, equality tolerance `tol`).
inline bool blackwell_geq(const Experiment& hi, const Experiment& lo, double tol = 1e-8) {
  if (hi.states() != lo.states()) throw std::invalid_argument("blackwell_geq: state mismatch");
  const std::size_t n = hi.states(), mh = hi.signals(), ml = lo.signals();
  const std::size_t vars = mh * ml;  // G(j_hi, j_lo)
  const std::size_t rows = n * ml + mh;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(vars));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  std::size_t r = 0;
  for (std::size_t t = 0; t < n; ++t) {  // channel equality
    for (std::size_t jl = 0; jl < ml; ++jl, ++r) {
      for (std::size_t jh = 0; jh < mh; ++jh)
        A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(jh * ml + jl)) =
            hi.channel()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(jh));
      b(static_cast<Eigen::Index>(r)) =
          lo.channel()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(jl));
    }
  }
  for (std::size_t jh = 0; jh < mh; ++jh, ++r) {  // G row-stochastic
    for (std::size_t jl = 0; jl < ml; ++jl)
      A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(jh * ml + jl)) = 1.0;
    b(static_cast<Eigen::Index>(r)) = 1.0;
  }
  return lp::feasible(A, b, tol);
}

// ===================== Named families =====================

/// Binary experiment with two signals and σ_θ(s_θ) = e^ℓ/(1+e^ℓ): each signal
/// carries log-likelihood ratio exactly ±ℓ.
inline Experiment bernoulli(double ell) {
  if (!(ell >= 0.0)) throw std::invalid_argument("bernoulli: ell >= 0");
  const double a = 1.0 / (1.0 + std::exp(-ell));  // e^ℓ/(1+e^ℓ)
  Eigen::MatrixXd ch(2, 2);
  ch << a, 1.0 - a,  // σ₀: s₀ likely
      1.0 - a, a;    // σ₁: s₁ likely
  return Experiment({"0", "1"}, {"s0", "s1"}, std::move(ch));
}

/// Binary experiment with signals {s0, s1, none}: the identifying signal s_θ
/// fires with probability 1−e^{−λ}, otherwise the uninformative `none`.
/// λ = +∞ (sentinel) gives full revelation.
inline Experiment poisson_dilution(double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("poisson_dilution: lambda >= 0");
  const double reveal = std::isinf(lambda) ? 1.0 : -std::expm1(-lambda);
  Eigen::MatrixXd ch(2, 3);
  ch << reveal, 0.0, 1.0 - reveal,  //
      0.0, reveal, 1.0 - reveal;
  return Experiment({"0", "1"}, {"s0", "s1", "none"}, std::move(ch));
}

/// Deterministic experiment reporting the partition cell of the state.
inline Experiment partition_experiment(const Partition& P) {
  const std::size_t n = P.n_states(), m = P.cells().size();
  Eigen::MatrixXd ch = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                             static_cast<Eigen::Index>(m));
  std::vector<std::string> signals;
  for (std::size_t c = 0; c < m; ++c) {
    signals.push_back("cell" + std::to_string(c));
    for (std::size_t t : P.cells()[c])
      ch(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = 1.0;
  }
  return Experiment(Experiment::default_labels("", n), std::move(signals), std::move(ch));
}

/// Single-signal experiment revealing nothing.
inline Experiment uninformative(std::size_t n_states) {
  return partition_experiment(Partition(n_states, {[&] {
    std::vector<std::size_t> all(n_states);
    for (std::size_t i = 0; i < n_states; ++i) all[i] = i;
    return all;
  }()}));
}

/// Fully revealing experiment (singleton partition).
inline Experiment full_revelation(std::size_t n_states) {
  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < n_states; ++i) cells.push_back({i});
  return partition_experiment(Partition(n_states, std::move(cells)));
}

}  // namespace infocost::experiments
