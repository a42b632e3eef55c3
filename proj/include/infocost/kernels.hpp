#pragma once

/**
 * @file kernels.hpp
 * @brief Local-quadratic kernel estimation, analytic kernels for UPS costs,
 *        experimental kernels, LPI and integrability tests, potential
 *        integration for binary states, and the FLIE lower-bound check.
 *
 * A cost C is locally quadratic at p with kernel k(p) when, for symmetric
 * binary probes π_t = ½δ_{p+ty} + ½δ_{p−ty},
 *
 *   C(π_t) = ½ t² yᵀ k(p) y + O(t⁴),
 *
 * so k is recovered by probing a spanning set of tangent directions across a
 * geometric step ladder with Richardson extrapolation.  UPS costs have
 * k = Hess H.  The experimental kernel κ(p) = diag(p)·k(p)·diag(p) satisfies
 * κ(p)·1 = 0; it is constant in p exactly for likelihood-based (prior
 * invariant) costs.
 *
 * For binary states every kernel field integrates: G″(x) = c(x) with
 * c(x) = (e₁−e₀)ᵀ k(p) (e₁−e₀) recovers the unique potential (up to affine
 * terms, which UPS costs ignore).  The FLIE check asks whether C dominates
 * the UPS cost of its integrated potential — the exact lower bound that
 * sequential shredding of experiments can achieve.
 */

#include "infocost/axioms.hpp"
#include "infocost/costs.hpp"
#include "infocost/posteriors.hpp"
#include "infocost/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace infocost::kernels {

using axioms::AxiomReport;
using axioms::Verdict;
using costs::CostFunction;
using costs::Potential;
using posteriors::Atom;
using posteriors::RandomPosterior;
using simplex::Belief;
using simplex::KernelMatrix;
using simplex::kPosInf;

/// Log-log slope below this flags a kinked (first-order) cost.
inline constexpr double kKinkSlopeThreshold = 1.5;
/// Default probe ladder: top scale and rung count (t_j = t₀·2^{−j}).
inline constexpr double kLadderTop = 1e-2;
inline constexpr std::size_t kLadderRungs = 7;

// ===================== Kernel estimation =====================

/// Result of probing a cost for local-quadratic structure.
struct KernelEstimate {
  enum class Status { ok, kinked, off_domain };
  Status status = Status::off_domain;
  std::optional<KernelMatrix> kernel;  ///< present iff status == ok
  double residual = 0.0;               ///< worst |C − fit| / Var over probes
  std::vector<double> step_ladder;     ///< probe scales actually used
  double loglog_slope = 0.0;           ///< median slope of log C vs log t
};

namespace detail {

/// Tangent probing directions: all e_i − e_j plus (n−1)(n−2)/2 mixed
/// directions e_i + e_j − 2e_0 — together they determine a symmetric form on
/// the tangent space uniquely.
inline std::vector<Eigen::VectorXd> probe_directions(std::size_t n) {
  std::vector<Eigen::VectorXd> dirs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      y(static_cast<Eigen::Index>(i)) = 1.0;
      y(static_cast<Eigen::Index>(j)) = -1.0;
      dirs.push_back(std::move(y));
    }
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      y(static_cast<Eigen::Index>(i)) = 1.0;
      y(static_cast<Eigen::Index>(j)) = 1.0;
      y(0) = -2.0;
      dirs.push_back(std::move(y));
    }
  return dirs;
}

/// Largest t with p ± t·y inside the simplex, shrunk for safety.
inline double direction_cap(const Belief& p, const Eigen::VectorXd& y) {
  double cap = kPosInf;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::abs(y(static_cast<Eigen::Index>(i)));
    if (a > 0.0) cap = std::min(cap, p[i] / a);
  }
  return 0.45 * cap;
}

/// ½δ_{p+ty} + ½δ_{p−ty}.
inline RandomPosterior symmetric_probe(const Belief& p, const Eigen::VectorXd& y, double t) {
  std::vector<double> hi(p.size()), lo(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    hi[i] = p[i] + t * y(static_cast<Eigen::Index>(i));
    lo[i] = p[i] - t * y(static_cast<Eigen::Index>(i));
  }
  return RandomPosterior({Atom{0.5, Belief(std::move(hi))}, Atom{0.5, Belief(std::move(lo))}});
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace detail

/**
 * Probe C around interior p on a geometric step ladder and fit the quadratic
 * form.  Per direction, Q̂(t) = 2C(π_t)/t² converges to yᵀky; the two finest
 * rungs are Richardson-combined, then the tangent form is least-squares
 * fitted and normalized.  Diverging Q̂ (log-log slope < 1.5, e.g. the MLR
 * family) reports `kinked`; a cost that is +∞ on every probe reports
 * `off_domain`.
 */
inline KernelEstimate estimate_kernel(const CostFunction& C, const Belief& p,
                                      double ladder_top = kLadderTop,
                                      std::size_t rungs = kLadderRungs) {
  if (!p.full_support()) throw std::invalid_argument("estimate_kernel: interior prior required");
  const std::size_t n = p.size();
  const std::vector<Eigen::VectorXd> dirs = detail::probe_directions(n);
  KernelEstimate est;

  std::vector<double> slopes;
  std::vector<std::pair<Eigen::VectorXd, double>> fitted;  // (direction, yᵀky)
  std::vector<std::tuple<Eigen::VectorXd, double, double>> probes;  // (y, t, C)
  bool any_finite = false;

  for (const Eigen::VectorXd& y : dirs) {
    const double t0 = std::min(ladder_top, detail::direction_cap(p, y));
    std::vector<double> ts, cs;
    for (std::size_t j = 0; j < rungs; ++j) {
      const double t = t0 * std::pow(2.0, -static_cast<double>(j));
      const double c = C(detail::symmetric_probe(p, y, t));
      if (!std::isfinite(c)) continue;
      ts.push_back(t);
      cs.push_back(c);
      est.step_ladder.push_back(t);
    }
    if (cs.size() < 2) continue;
    any_finite = true;
    for (std::size_t j = 0; j + 1 < cs.size(); ++j)
      if (cs[j] > 0.0 && cs[j + 1] > 0.0)
        slopes.push_back(std::log(cs[j] / cs[j + 1]) / std::log(ts[j] / ts[j + 1]));
    const std::size_t last = cs.size() - 1;
    const double q_coarse = 2.0 * cs[last - 1] / (ts[last - 1] * ts[last - 1]);
    const double q_fine = 2.0 * cs[last] / (ts[last] * ts[last]);
    fitted.emplace_back(y, (4.0 * q_fine - q_coarse) / 3.0);
    for (std::size_t j = 0; j < cs.size(); ++j) probes.emplace_back(y, ts[j], cs[j]);
  }

  if (!any_finite) {
    est.status = KernelEstimate::Status::off_domain;
    return est;
  }
  est.loglog_slope = detail::median(slopes);
  if (est.loglog_slope < kKinkSlopeThreshold) {
    est.status = KernelEstimate::Status::kinked;
    return est;
  }

  // Least-squares fit of the symmetric tangent form S (Helmert coordinates):
  // yᵀKy = uᵀSu with u = Tᵀy.
  const Eigen::MatrixXd T = simplex::tangent_basis(n);
  const std::size_t m = n - 1, unknowns = m * (m + 1) / 2;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(fitted.size()),
                    static_cast<Eigen::Index>(unknowns));
  Eigen::VectorXd b(static_cast<Eigen::Index>(fitted.size()));
  for (std::size_t r = 0; r < fitted.size(); ++r) {
    const Eigen::VectorXd u = T.transpose() * fitted[r].first;
    std::size_t c = 0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j, ++c)
        A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            (i == j ? 1.0 : 2.0) * u(static_cast<Eigen::Index>(i)) *
            u(static_cast<Eigen::Index>(j));
    b(static_cast<Eigen::Index>(r)) = fitted[r].second;
  }
  const Eigen::VectorXd s = A.colPivHouseholderQr().solve(b);
  Eigen::MatrixXd S(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::size_t c = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j, ++c)
      S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          S(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
              s(static_cast<Eigen::Index>(c));
  est.kernel = simplex::normalize_kernel(T * S * T.transpose(), p);
  est.status = KernelEstimate::Status::ok;

  double worst = 0.0;
  for (const auto& [y, t, cv] : probes) {
    const double pred = 0.5 * t * t * y.dot(est.kernel->entries * y);
    worst = std::max(worst, std::abs(cv - pred) / (t * t * y.squaredNorm()));
  }
  est.residual = worst;
  return est;
}

// ===================== Analytic kernels =====================

namespace detail {

/// Central-difference Hessian of H in Helmert tangent coordinates.
inline KernelMatrix fd_hessian(const Potential& H, const Belief& p, double h) {
  const std::size_t n = p.size(), m = n - 1;
  const Eigen::MatrixXd T = simplex::tangent_basis(n);
  const auto at = [&](const Eigen::VectorXd& u) {
    std::vector<double> q(n);
    const Eigen::VectorXd step = T * u;
    for (std::size_t i = 0; i < n; ++i) q[i] = p[i] + step(static_cast<Eigen::Index>(i));
    const double v = H.value(Belief(std::move(q)));
    if (!std::isfinite(v)) throw std::domain_error("analytic_kernel: potential infinite near p");
    return v;
  };
  Eigen::MatrixXd S(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  const double f0 = at(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m)));
  for (std::size_t a = 0; a < m; ++a) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    u(static_cast<Eigen::Index>(a)) = h;
    const double fp = at(u), fm = at(-u);
    S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t bidx = a + 1; bidx < m; ++bidx) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
      u(static_cast<Eigen::Index>(a)) = h;
      u(static_cast<Eigen::Index>(bidx)) = h;
      Eigen::VectorXd v = u;
      v(static_cast<Eigen::Index>(bidx)) = -h;
      const double mixed = (at(u) - at(v) - at(-v) + at(-u)) / (4.0 * h * h);
      S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(bidx)) = mixed;
      S(static_cast<Eigen::Index>(bidx), static_cast<Eigen::Index>(a)) = mixed;
    }
  return simplex::normalize_kernel(T * S * T.transpose(), p);
}

}  // namespace detail

/**
 * Kernel from structural metadata: Hess H for UPS costs (analytic Hessian if
 * supplied, else central finite differences on the tangent chart), and the
 * linearized sum Σ ∂_i g(0)·k_{C^i} for combinators.
 */
inline KernelMatrix analytic_kernel(const CostFunction& C, const Belief& p, double fd_step = 1e-4) {
  if (C.kind == "combine") {
    std::optional<Eigen::MatrixXd> acc;
    for (std::size_t i = 0; i < C.components.size(); ++i) {
      const Eigen::MatrixXd ki =
          analytic_kernel(*C.components[i], p, fd_step).entries * C.combine_grad0[i];
      acc = acc ? Eigen::MatrixXd(*acc + ki) : ki;
    }
    return KernelMatrix(p, *acc);
  }
  if (!C.ups) throw std::invalid_argument("analytic_kernel: cost has no potential metadata");
  if (C.ups->hessian) return C.ups->hessian(p);
  return detail::fd_hessian(*C.ups, p, fd_step);
}

// ===================== Experimental kernel =====================

/// κ(p) = diag(p)·k(p)·diag(p); symmetric with κ·1 = 0.
struct ExperimentalKernel {
  Belief anchor;
  Eigen::MatrixXd entries;

  ExperimentalKernel(Belief a, Eigen::MatrixXd e) : anchor(std::move(a)), entries(std::move(e)) {
    if (!entries.isApprox(entries.transpose(), 1e-9))
      throw std::invalid_argument("ExperimentalKernel: not symmetric");
    const Eigen::VectorXd rowsum = entries * Eigen::VectorXd::Ones(entries.cols());
    if (rowsum.lpNorm<Eigen::Infinity>() > 1e-9)
      throw std::invalid_argument("ExperimentalKernel: rows must sum to 0");
  }
};

inline ExperimentalKernel experimental_kernel(const KernelMatrix& k) {
  const Belief& p = k.anchor;
  Eigen::VectorXd d(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) d(static_cast<Eigen::Index>(i)) = p[i];
  return ExperimentalKernel(p, d.asDiagonal() * k.entries * d.asDiagonal());
}

/// Likelihood-Based Prior Invariance evidence: the experimental kernel is the
/// same matrix at every sampled prior.  Worst pairwise seminorm difference.
inline AxiomReport check_lpi(const CostFunction& C, const std::vector<Belief>& priors,
                             double tol = 1e-3) {
  std::vector<ExperimentalKernel> ks;
  for (const Belief& p : priors) {
    const KernelEstimate est = estimate_kernel(C, p);
    if (est.status != KernelEstimate::Status::ok) {
      AxiomReport r;
      r.axiom = "lpi";
      r.trials = priors.size();
      r.verdict = Verdict::inconclusive;
      r.witness = est.status == KernelEstimate::Status::kinked ? "kinked-cost signal"
                                                               : "off-domain signal";
      r.tol = tol;
      return r;
    }
    ks.push_back(experimental_kernel(*est.kernel));
  }
  double worst = 0.0;
  std::string witness;
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (std::size_t j = i + 1; j < ks.size(); ++j) {
      const double d = simplex::matrix_seminorm(ks[i].entries - ks[j].entries);
      if (d > worst) {
        worst = d;
        std::ostringstream os;
        os << "priors " << i << " and " << j;
        witness = os.str();
      }
    }
  AxiomReport r;
  r.axiom = "lpi";
  r.trials = priors.size() * (priors.size() - 1) / 2;
  r.worst_violation = worst;
  r.witness = std::move(witness);
  r.tol = tol;
  r.verdict = worst > tol ? Verdict::fail : Verdict::pass;
  return r;
}

// ===================== Integrability =====================

/// Whether a kernel field is a Hessian field.  Binary states: always.  Three
/// or more: finite-difference mixed-partial symmetry of the chart form
/// M_ij(x) = (e_i−e_n)ᵀ k(p) (e_j−e_n), requiring ∂_l M_ij = ∂_j M_il.
struct IntegrabilityReport {
  Verdict verdict = Verdict::pass;
  double worst_rel_asym = 0.0;
};

inline IntegrabilityReport integrable_check(
    const std::function<KernelMatrix(const Belief&)>& field, const std::vector<Belief>& region,
    double h = 1e-3, double rel_tol = 1e-3) {
  IntegrabilityReport rep;
  if (region.empty()) {
    rep.verdict = Verdict::inconclusive;
    return rep;
  }
  const std::size_t n = region.front().size();
  if (n == 2) return rep;  // every binary kernel field integrates
  const std::size_t m = n - 1;
  const auto chart_entry = [&](const Belief& p, std::size_t i, std::size_t j) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    u(static_cast<Eigen::Index>(i)) = 1.0;
    u(static_cast<Eigen::Index>(n - 1)) = -1.0;
    v(static_cast<Eigen::Index>(j)) = 1.0;
    v(static_cast<Eigen::Index>(n - 1)) += -1.0;
    return u.dot(field(p).entries * v);
  };
  const auto shifted = [&](const Belief& p, std::size_t l, double step) {
    std::vector<double> q = p.probs();
    q[l] += step;
    q[n - 1] -= step;
    return Belief(std::move(q));
  };
  for (const Belief& p : region) {
    double margin = p[n - 1];
    for (std::size_t i = 0; i < n; ++i) margin = std::min(margin, p[i]);
    const double step = std::min(h, 0.25 * margin);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = j + 1; l < m; ++l) {
          const double dl =
              (chart_entry(shifted(p, l, step), i, j) - chart_entry(shifted(p, l, -step), i, j)) /
              (2.0 * step);
          const double dj =
              (chart_entry(shifted(p, j, step), i, l) - chart_entry(shifted(p, j, -step), i, l)) /
              (2.0 * step);
          const double rel = std::abs(dl - dj) / std::max({1.0, std::abs(dl), std::abs(dj)});
          rep.worst_rel_asym = std::max(rep.worst_rel_asym, rel);
        }
  }
  rep.verdict = rep.worst_rel_asym <= rel_tol ? Verdict::pass : Verdict::fail;
  return rep;
}

// ===================== Potential integration (binary) =====================

/**
 * Double trapezoid integration of the scalar curvature c(x) =
 * (e₁−e₀)ᵀk(p)(e₁−e₀) over x = p(1) ∈ [edge, 1−edge], anchored
 * G(½) = G′(½) = 0 (affine terms never affect a UPS cost).  The returned
 * potential is +∞ outside the integration window and linearly interpolated
 * inside.
 */
inline Potential integrate_potential_binary(const std::function<double(double)>& curvature,
                                            std::size_t nodes = 2001, double edge = 1e-3) {
  if (nodes < 3 || nodes % 2 == 0)
    throw std::invalid_argument("integrate_potential_binary: need an odd node count >= 3");
  const double width = 1.0 - 2.0 * edge;
  const double dx = width / static_cast<double>(nodes - 1);
  std::vector<double> xs(nodes), c(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    xs[i] = edge + dx * static_cast<double>(i);
    c[i] = curvature(xs[i]);
    if (!std::isfinite(c[i]))
      throw std::domain_error("integrate_potential_binary: curvature infinite inside window");
  }
  const std::size_t ic = nodes / 2;  // exact center (odd node count)
  std::vector<double> g1(nodes, 0.0), g(nodes, 0.0);
  for (std::size_t i = ic; i + 1 < nodes; ++i)
    g1[i + 1] = g1[i] + 0.5 * dx * (c[i] + c[i + 1]);
  for (std::size_t i = ic; i > 0; --i) g1[i - 1] = g1[i] - 0.5 * dx * (c[i] + c[i - 1]);
  for (std::size_t i = ic; i + 1 < nodes; ++i)
    g[i + 1] = g[i] + 0.5 * dx * (g1[i] + g1[i + 1]);
  for (std::size_t i = ic; i > 0; --i) g[i - 1] = g[i] - 0.5 * dx * (g1[i] + g1[i - 1]);

  Potential H;
  H.name = "integrated";
  H.value = [xs, g, edge, dx](const Belief& p) {
    if (p.size() != 2) throw std::invalid_argument("integrated potential: binary states only");
    const double x = p[1];
    if (x < xs.front() - 1e-12 || x > xs.back() + 1e-12) return kPosInf;
    const double pos = std::clamp((x - xs.front()) / dx, 0.0, static_cast<double>(xs.size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(pos), xs.size() - 2);
    const double w = pos - static_cast<double>(i);
    return (1.0 - w) * g[i] + w * g[i + 1];
  };
  H.hessian = [curvature](const Belief& p) {
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(2, 2);
    raw(1, 1) = curvature(p[1]);
    return simplex::normalize_kernel(raw, p);
  };
  return H;
}

/// Curvature of a smooth cost at x via the binary probe ladder with
/// Richardson extrapolation (the scalar case of estimate_kernel).
inline double estimate_curvature(const CostFunction& C, double x, double ladder_top = kLadderTop,
                                 std::size_t rungs = kLadderRungs) {
  const Belief p = simplex::binary_belief(x);
  Eigen::VectorXd y(2);
  y << -1.0, 1.0;
  const double t0 = std::min(ladder_top, detail::direction_cap(p, y));
  double q_coarse = kPosInf, q_fine = kPosInf;
  for (std::size_t j = rungs - 2; j < rungs; ++j) {
    const double t = t0 * std::pow(2.0, -static_cast<double>(j));
    const double cv = C(detail::symmetric_probe(p, y, t));
    if (!std::isfinite(cv)) return kPosInf;
    (j == rungs - 2 ? q_coarse : q_fine) = 2.0 * cv / (t * t);
  }
  return (4.0 * q_fine - q_coarse) / 3.0;
}

/// Potential integrated from a cost's own probed curvature field.
inline Potential integrate_potential_from_cost(const CostFunction& C, std::size_t nodes = 2001,
                                               double edge = 1e-3) {
  return integrate_potential_binary([&C](double x) { return estimate_curvature(C, x); }, nodes,
                                    edge);
}

// ===================== FLIE check =====================

/**
 * Does C dominate the UPS cost of H (the indirect-experiment lower bound)?
 * Violation gap: ups_cost(H)(π) − C(π) over dom(C).  For direct Bernoulli
 * costs the scan is exact on a log grid of ℓ:
 * f(ℓ) ≥ E_p[H(posteriors of σ^ℓ)] − H(p) at the uniform prior.
 */
inline AxiomReport flie_check(const CostFunction& C, const Potential& H,
                              std::size_t trials = 2000, std::uint64_t seed = 99,
                              double tol = axioms::kIntegratedTol) {
  AxiomReport r;
  r.axiom = "flie";
  r.seed = seed;
  r.tol = tol;
  double worst = -kPosInf;
  std::string witness;
  if (C.direct_f) {
    const double h0 = H.value(simplex::binary_belief(0.5));
    for (std::size_t i = 0; i < trials; ++i) {
      const double ell = std::exp(std::log(1e-4) + (std::log(30.0) - std::log(1e-4)) *
                                                       static_cast<double>(i) /
                                                       static_cast<double>(trials - 1));
      const double a = 1.0 / (1.0 + std::exp(-ell));
      const double ha = H.value(simplex::binary_belief(a));
      const double hb = H.value(simplex::binary_belief(1.0 - a));
      if (!std::isfinite(ha) || !std::isfinite(hb)) continue;  // outside integration window
      const double gap = (0.5 * ha + 0.5 * hb - h0) - C.direct_f(ell);
      if (gap > worst) {
        worst = gap;
        std::ostringstream os;
        os << std::setprecision(17) << "ell=" << ell;
        witness = os.str();
      }
    }
    r.trials = trials;
  } else {
    simplex::Rng rng(seed);
    std::size_t used = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const RandomPosterior pi = posteriors::sample_posterior(rng, 2);
      const double cv = C(pi);
      if (!std::isfinite(cv)) continue;  // outside dom(C): bound vacuous
      const double uv = costs::detail::ups_value(H, pi);
      if (!std::isfinite(uv)) continue;  // probe escapes the integration window
      ++used;
      const double gap = uv - cv;
      if (gap > worst) {
        worst = gap;
        witness = "pi=" + axioms::detail::fmt_posterior(pi);
      }
    }
    r.trials = used;
  }
  r.worst_violation = worst;
  r.witness = std::move(witness);
  r.verdict = worst > tol ? Verdict::fail : Verdict::pass;
  return r;
}

}  // namespace infocost::kernels
