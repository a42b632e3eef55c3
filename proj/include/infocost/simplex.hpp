#pragma once

/**
 * @file simplex.hpp
 * @brief Beliefs on a finite state space, the tangent space of the simplex,
 *        belief grids, and the small matrix calculus used by kernel work.
 *
 * A belief is a probability vector p ∈ Δ(Θ) over a finite state set Θ.  The
 * tangent space of the simplex is 𝒯 = {y ∈ ℝ^Θ : Σ_θ y_θ = 0}; all local
 * (second-order) structure of information costs lives on 𝒯, so matrix
 * comparisons here are always restricted to tangent directions:
 *
 *   A ≥_psd B  ⇔  yᵀAy ≥ yᵀBy for all y ∈ 𝒯,
 *   ‖A‖       :=  max { |yᵀAy| : y ∈ 𝒯, ‖y‖ = 1 }.
 *
 * A kernel matrix k(p) is the canonical representative of a quadratic form on
 * 𝒯: symmetric with k(p)·p = 0.  Any square matrix β is normalized into that
 * form by
 *
 *   k = ½ (I − 1pᵀ)(β + βᵀ)(I − p1ᵀ),
 *
 * which leaves yᵀβy unchanged for tangent y and is idempotent on matrices
 * already in canonical form.
 *
 * Belief grids discretize the binary-state simplex for the sequential-
 * optimization module.  Two layouts are provided: a uniform lattice in the
 * probability of state 1 (the default), and a lattice uniform in log-odds
 * (interior nodes), which is the natural geometry for Bernoulli evidence
 * whose increments are log-likelihood-ratio steps.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace infocost::simplex {

// ===================== Tolerances (single source of truth) =====================

inline constexpr double kBeliefSumTol   = 1e-9;   // simplex membership
inline constexpr double kTangentSumTol  = 1e-12;  // Σ y_θ = 0
inline constexpr double kKernelSymTol   = 1e-10;  // kernel symmetry
inline constexpr double kKernelAnchorTol = 1e-9;  // ‖k·p‖_∞
inline constexpr double kPsdStrictFloor = 1e-10;  // strictness floor for ≫
inline constexpr double kAtomMergeTol   = 1e-9;   // componentwise belief equality

inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// ===================== Extended-real helpers =====================

/// a + b with +∞ absorbing (never produces NaN from ∞ + finite).
inline double ext_add(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return kPosInf;
  return a + b;
}

/// w·v for a nonnegative weight, with the convention 0·(+∞) = 0.
inline double ext_scale(double w, double v) {
  if (w == 0.0) return 0.0;
  if (std::isinf(v)) return kPosInf;
  return w * v;
}

// ===================== Belief =====================

/**
 * Probability vector over Θ.  Construction validates nonnegativity and that
 * entries sum to 1 within kBeliefSumTol, then renormalizes exactly so that
 * downstream linear programs see clean inputs.
 */
class Belief {
 public:
  explicit Belief(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("Belief: empty vector");
    double sum = 0.0;
    for (double v : probs_) {
      if (!std::isfinite(v) || v < -kBeliefSumTol)
        throw std::invalid_argument("Belief: entries must be finite and >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kBeliefSumTol)
      throw std::invalid_argument("Belief: entries must sum to 1 within 1e-9");
    for (double& v : probs_) v = std::max(0.0, v) / sum;
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < probs_.size(); ++i)
      if (probs_[i] > 0.0) s.push_back(i);
    return s;
  }

  bool full_support() const {
    return std::all_of(probs_.begin(), probs_.end(), [](double v) { return v > 0.0; });
  }

  bool operator==(const Belief& o) const {
    if (o.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (std::abs(probs_[i] - o.probs_[i]) > kAtomMergeTol) return false;
    return true;
  }

 private:
  std::vector<double> probs_;
};

/// Point mass on state θ.
inline Belief point_mass(std::size_t theta, std::size_t n) {
  std::vector<double> v(n, 0.0);
  v.at(theta) = 1.0;
  return Belief(v);
}

/// Uniform belief over n states.
inline Belief uniform_belief(std::size_t n) {
  return Belief(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

/// Binary-state belief keyed by the probability of state 1.
inline Belief binary_belief(double p1) {
  return Belief({1.0 - p1, p1});
}

// ===================== TangentVector =====================

/// Element of 𝒯 = {y : Σ y_θ = 0}; construction enforces the zero-sum invariant.
class TangentVector {
 public:
  explicit TangentVector(std::vector<double> coords) : coords_(std::move(coords)) {
    double sum = 0.0;
    for (double v : coords_) {
      if (!std::isfinite(v)) throw std::invalid_argument("TangentVector: non-finite");
      sum += v;
    }
    if (std::abs(sum) > kTangentSumTol)
      throw std::invalid_argument("TangentVector: coordinates must sum to 0");
  }

  std::size_t size() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// e_i − e_j as a tangent direction.
inline TangentVector pair_direction(std::size_t i, std::size_t j, std::size_t n) {
  std::vector<double> v(n, 0.0);
  v.at(i) = 1.0;
  v.at(j) = -1.0;
  return TangentVector(v);
}

// ===================== Tangent basis =====================

/**
 * Orthonormal basis of 𝒯 as the columns of an n×(n−1) matrix (Helmert
 * construction): column k has entries 1/√(k(k+1)) on the first k coordinates
 * and −k/√(k(k+1)) on coordinate k, zeros below.  Deterministic, exact up to
 * rounding, and orthogonal to 1 by construction.
 */
inline Eigen::MatrixXd tangent_basis(std::size_t n) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(n) - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (std::size_t i = 0; i < k; ++i) T(static_cast<Eigen::Index>(i), k - 1) = scale;
    T(static_cast<Eigen::Index>(k), k - 1) = -static_cast<double>(k) * scale;
  }
  return T;
}

// ===================== KernelMatrix =====================

/// Symmetric matrix anchored at a belief with k·p = 0 (canonical tangent form).
struct KernelMatrix {
  Belief anchor;
  Eigen::MatrixXd entries;

  KernelMatrix(Belief p, Eigen::MatrixXd m) : anchor(std::move(p)), entries(std::move(m)) {
    const Eigen::Index n = entries.rows();
    if (entries.cols() != n || static_cast<std::size_t>(n) != anchor.size())
      throw std::invalid_argument("KernelMatrix: dimension mismatch");
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > kKernelSymTol)
      throw std::invalid_argument("KernelMatrix: not symmetric");
    Eigen::VectorXd p_ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) p_(i) = anchor[static_cast<std::size_t>(i)];
    if ((entries * p_).cwiseAbs().maxCoeff() > kKernelAnchorTol)
      throw std::invalid_argument("KernelMatrix: k(p)p != 0");
  }
};

/**
 * Canonicalize an arbitrary square matrix β into kernel form at p:
 *   k = ½(I − 1pᵀ)(β + βᵀ)(I − p1ᵀ).
 * Preserves yᵀβy on tangent directions; idempotent on canonical inputs.
 */
inline KernelMatrix normalize_kernel(const Eigen::MatrixXd& beta, const Belief& p) {
  const Eigen::Index n = beta.rows();
  if (beta.cols() != n || static_cast<std::size_t>(n) != p.size())
    throw std::invalid_argument("normalize_kernel: dimension mismatch");
  if (!beta.allFinite())
    throw std::invalid_argument("normalize_kernel: non-finite entries");
  Eigen::VectorXd pv(n);
  for (Eigen::Index i = 0; i < n; ++i) pv(i) = p[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd k = 0.5 * (I - ones * pv.transpose()) * (beta + beta.transpose()) *
                      (I - pv * ones.transpose());
  k = 0.5 * (k + k.transpose());  // scrub rounding asymmetry
  return KernelMatrix(p, std::move(k));
}

// ===================== Tangent-restricted matrix calculus =====================

enum class PsdOrder { equal, gg, geq, ll, leq, incomparable };

inline const char* to_string(PsdOrder o) {
  switch (o) {
    case PsdOrder::equal: return "equal";
    case PsdOrder::gg: return "gg";
    case PsdOrder::geq: return "geq";
    case PsdOrder::ll: return "ll";
    case PsdOrder::leq: return "leq";
    default: return "incomparable";
  }
}

namespace detail {
/// Eigenvalue range of the quadratic form y ↦ yᵀAy over unit tangent y.
inline std::pair<double, double> tangent_eigen_range(const Eigen::MatrixXd& A) {
  const Eigen::MatrixXd T = tangent_basis(static_cast<std::size_t>(A.rows()));
  const Eigen::MatrixXd S = T.transpose() * (0.5 * (A + A.transpose())) * T;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const auto& ev = es.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}
}  // namespace detail

/**
 * Compare A and B as quadratic forms on 𝒯 via the eigenvalue range of A−B on
 * the tangent space.  `gg`/`ll` require the extremal value to clear the
 * strictness floor kPsdStrictFloor; `equal` means the difference's seminorm
 * is below the floor.
 */
inline PsdOrder psd_compare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("psd_compare: dimension mismatch");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > kKernelSymTol ||
      (B - B.transpose()).cwiseAbs().maxCoeff() > kKernelSymTol)
    throw std::invalid_argument("psd_compare: inputs must be symmetric");
  auto [lo, hi] = detail::tangent_eigen_range(A - B);
  if (std::abs(lo) <= kPsdStrictFloor && std::abs(hi) <= kPsdStrictFloor)
    return PsdOrder::equal;
  if (lo > kPsdStrictFloor) return PsdOrder::gg;
  if (lo >= -kPsdStrictFloor) return PsdOrder::geq;
  if (hi < -kPsdStrictFloor) return PsdOrder::ll;
  if (hi <= kPsdStrictFloor) return PsdOrder::leq;
  return PsdOrder::incomparable;
}

/// ‖A‖ := max_{y ∈ 𝒯, ‖y‖=1} |yᵀAy| (so 11ᵀ has seminorm 0).
inline double matrix_seminorm(const Eigen::MatrixXd& A) {
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > kKernelSymTol)
    throw std::invalid_argument("matrix_seminorm: input must be symmetric");
  auto [lo, hi] = detail::tangent_eigen_range(A);
  return std::max(std::abs(lo), std::abs(hi));
}

// ===================== BeliefGrid (|Θ| = 2) =====================

/**
 * Grid of binary-state beliefs, keyed by the probability x of state 1.
 *
 * Layouts:
 *  - uniform_prob: x_i = i/(n−1), i = 0..n−1 (endpoints included) — default.
 *  - logit: endpoints 0 and 1 plus n−2 interior nodes uniform in
 *    log-odds on [−M, M].  Index-symmetric interior triples (lo, hi, prior
 *    with lo+hi = 2·prior) are then exactly log-odds-symmetric, which is the
 *    geometry of Bernoulli log-likelihood-ratio steps.
 */
class BeliefGrid {
 public:
  enum class Layout { uniform_prob, logit };

  static BeliefGrid uniform(std::size_t n) {
    if (n < 3) throw std::invalid_argument("BeliefGrid: need n >= 3");
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
      xs[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return BeliefGrid(std::move(xs), Layout::uniform_prob);
  }

  static BeliefGrid logit(std::size_t n, double max_log_odds = 4.0) {
    if (n < 4) throw std::invalid_argument("BeliefGrid: logit layout needs n >= 4");
    if (!(max_log_odds > 0)) throw std::invalid_argument("BeliefGrid: M must be > 0");
    std::vector<double> xs(n);
    xs.front() = 0.0;
    xs.back() = 1.0;
    const std::size_t m = n - 2;
    for (std::size_t i = 0; i < m; ++i) {
      const double lam = -max_log_odds + 2.0 * max_log_odds * static_cast<double>(i) /
                                             static_cast<double>(m - 1);
      xs[i + 1] = 1.0 / (1.0 + std::exp(-lam));
    }
    return BeliefGrid(std::move(xs), Layout::logit);
  }

  std::size_t size() const { return xs_.size(); }
  double x(std::size_t i) const { return xs_.at(i); }
  const std::vector<double>& nodes() const { return xs_; }
  Layout layout() const { return layout_; }
  Belief node_belief(std::size_t i) const { return binary_belief(xs_.at(i)); }

  /// Indices of nodes strictly inside (0,1).
  std::pair<std::size_t, std::size_t> interior_range() const { return {1, xs_.size() - 2}; }

 private:
  BeliefGrid(std::vector<double> xs, Layout layout) : xs_(std::move(xs)), layout_(layout) {
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1]))
        throw std::invalid_argument("BeliefGrid: nodes must be strictly increasing");
    if (xs_.front() != 0.0 || xs_.back() != 1.0)
      throw std::invalid_argument("BeliefGrid: endpoints 0 and 1 required");
  }

  std::vector<double> xs_;
  Layout layout_;
};

// ===================== Deterministic sampling =====================

/**
 * Seeded sampler over beliefs and weights.  Uses std::mt19937_64 (whose
 * output sequence is pinned by the standard) with hand-rolled transforms, so
 * identical seeds reproduce identical draws across toolchains — the standard
 * distribution classes do not guarantee that.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in (0, 1].
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Dirichlet(1,…,1) over k coordinates via normalized exponentials.
  std::vector<double> dirichlet(std::size_t k) {
    std::vector<double> v(k);
    double sum = 0.0;
    for (double& x : v) {
      x = -std::log(uniform());
      sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
  }

  /// Full-support belief ~ Dirichlet(1) on n states.
  Belief interior_belief(std::size_t n) {
    for (;;) {
      std::vector<double> v = dirichlet(n);
      if (std::all_of(v.begin(), v.end(), [](double x) { return x > 1e-12; }))
        return Belief(std::move(v));
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace infocost::simplex
