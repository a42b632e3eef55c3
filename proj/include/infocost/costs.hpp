#pragma once

/**
 * @file costs.hpp
 * @brief The cost-function catalog: divergences, posterior-separable and
 *        uniformly posterior-separable costs, named costs, restricted direct
 *        costs, the prior-independent envelope, and cost combinators.
 *
 * A cost function C maps random posteriors to extended nonnegative reals with
 * C(δ_p) = 0 for every p.  Two structured families recur:
 *
 *  - posterior separable (PS):   C(π) = E_π[D(q | p_π)] for a divergence D;
 *  - uniformly posterior separable (UPS): C(π) = E_π[H(q)] − H(p_π) for a
 *    convex potential H (equivalently PS with the Bregman divergence of H).
 *
 * Named catalog entries (binary unless noted):
 *  - mutual information: UPS with H_MI(p) = Σ_θ p(θ) log p(θ), restricted to
 *    interior-support posteriors;
 *  - total information: Σ_θ p(θ) Σ_θ′ γ_{θθ′} D_KL(σ_θ | σ_θ′); UPS with
 *    H_TI(p) = Σ γ_{θθ′} p(θ) log(p(θ)/p(θ′));
 *  - log-likelihood-ratio cost: Σ β_{θθ′} D_KL(σ_θ | σ_θ′), prior-free;
 *  - Wald cost: p(0) D_KL(σ₀|σ₁) + p(1) D_KL(σ₁|σ₀); UPS with
 *    H_W(x) = (2x−1) log(x/(1−x));
 *  - max-likelihood-ratio cost: E_π[1 − min_{θ∈supp p} q(θ)/p(θ)], full domain;
 *  - total-variation cost: ½ Σ_s |σ₀(s) − σ₁(s)| (binary MLR);
 *  - direct costs on the Bernoulli and Poisson experiment families, +∞ off
 *    their image sets;
 *  - prior-independent envelope: Γ̄(σ) = sup_{p′} C(h_B(σ, p′));
 *  - combinators C = g(C¹, …, Cⁿ) with ∇g(0) recorded for kernel calculus.
 */

#include "infocost/experiments.hpp"
#include "infocost/posteriors.hpp"
#include "infocost/simplex.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace infocost::costs {

using experiments::Experiment;
using posteriors::Atom;
using posteriors::RandomPosterior;
using simplex::Belief;
using simplex::ext_add;
using simplex::ext_scale;
using simplex::kPosInf;

/// Tolerance for recognizing members of the Bernoulli/Poisson image families
/// from their posterior geometry.
inline constexpr double kFamilyFormTol = 1e-7;

// ===================== Kullback–Leibler divergence =====================

/// Σ_s μ(s) log(μ(s)/ν(s)) with 0·log(0/x) = 0; +∞ when μ(s) > 0 = ν(s).
inline double kl(const Eigen::RowVectorXd& mu, const Eigen::RowVectorXd& nu) {
  if (mu.size() != nu.size()) throw std::invalid_argument("kl: size mismatch");
  double sum = 0.0;
  for (Eigen::Index s = 0; s < mu.size(); ++s) {
    const double m = mu(s), v = nu(s);
    if (m <= 0.0) continue;
    if (v <= 0.0) return kPosInf;
    sum += m * std::log(m / v);
  }
  return std::max(0.0, sum);
}

// ===================== Potentials and divergences =====================

/// Convex potential H: Δ(Θ) → (−∞, +∞] with optional calculus.
struct Potential {
  std::string name;
  std::function<double(const Belief&)> value;
  /// Optional: gradient of H as a function on the ambient coordinates.
  std::function<Eigen::VectorXd(const Belief&)> gradient;
  /// Optional: normalized Hessian kernel k(p) = ½(I−1pᵀ)(∇²H+∇²Hᵀ)(I−p1ᵀ).
  std::function<simplex::KernelMatrix(const Belief&)> hessian;

  bool finite_at(const Belief& p) const { return std::isfinite(value(p)); }
};

/// Divergence D(q | p) ≥ 0 with D(p | p) = 0.
struct Divergence {
  std::string name;
  std::function<double(const Belief& q, const Belief& p)> value;
};

// ===================== CostFunction =====================

struct CostFunction;
using CostPtr = std::shared_ptr<const CostFunction>;

/// Cost of information: evaluator on random posteriors plus the structural
/// metadata (UPS potential, PS divergence, experiment form, combinator
/// linearization) downstream analysis runs on.
struct CostFunction {
  std::string kind;
  std::function<double(const RandomPosterior&)> eval;
  /// Optional experiment form Γ(σ, p); null means "evaluate via bayes_map".
  std::function<double(const Experiment&, const Belief&)> experiment_form;
  std::shared_ptr<const Potential> ups;    ///< set iff the UPS form is known
  std::shared_ptr<const Divergence> ps;    ///< set iff a PS form is known
  std::vector<double> combine_grad0;       ///< ∇g(0) when kind == "combine"
  std::vector<CostPtr> components;         ///< combinator inputs
  std::function<double(double)> direct_f;  ///< f(ℓ) for the Bernoulli direct cost

  double operator()(const RandomPosterior& pi) const { return eval(pi); }

  /// Γ(σ, p): the experiment form when present, else C(h_B(σ, p)).
  double operator()(const Experiment& sigma, const Belief& p) const {
    return experiment_form ? experiment_form(sigma, p) : eval(experiments::bayes_map(sigma, p));
  }
};

namespace detail {

inline bool all_atoms_interior(const RandomPosterior& pi) {
  return std::all_of(pi.atoms().begin(), pi.atoms().end(),
                     [](const Atom& a) { return a.q.full_support(); });
}

/// E_π[H(q)] − H(p_π) with extended-real care; assumes H(p_π) finite whenever
/// every H(q_i) is (convexity gives H(p) ≤ E[H(q)]).
inline double ups_value(const Potential& H, const RandomPosterior& pi) {
  if (pi.is_trivial()) return 0.0;
  double acc = 0.0;
  for (const Atom& a : pi.atoms()) acc = ext_add(acc, ext_scale(a.w, H.value(a.q)));
  if (!std::isfinite(acc)) return kPosInf;
  const double hp = H.value(pi.barycenter());
  if (!std::isfinite(hp)) return kPosInf;
  return std::max(0.0, acc - hp);
}

/// E_π[D(q | p_π)].
inline double ps_value(const Divergence& D, const RandomPosterior& pi) {
  if (pi.is_trivial()) return 0.0;
  double acc = 0.0;
  for (const Atom& a : pi.atoms())
    acc = ext_add(acc, ext_scale(a.w, D.value(a.q, pi.barycenter())));
  return std::max(0.0, acc);
}

}  // namespace detail

// ===================== Generic constructors =====================

/// UPS cost E_π[H(q)] − H(p_π); +∞ where any H(q_i) or H(p_π) is +∞; 0 on
/// every trivial posterior regardless of domain.
inline CostFunction ups_cost(Potential H, std::string kind = "ups") {
  auto Hp = std::make_shared<const Potential>(std::move(H));
  CostFunction C;
  C.kind = std::move(kind);
  C.ups = Hp;
  C.eval = [Hp](const RandomPosterior& pi) { return detail::ups_value(*Hp, pi); };
  return C;
}

/// PS cost E_π[D(q | p_π)].
inline CostFunction ps_cost(Divergence D, std::string kind = "ps") {
  auto Dp = std::make_shared<const Divergence>(std::move(D));
  CostFunction C;
  C.kind = std::move(kind);
  C.ps = Dp;
  C.eval = [Dp](const RandomPosterior& pi) { return detail::ps_value(*Dp, pi); };
  return C;
}

// ===================== Mutual information =====================

/// H_MI(p) = Σ_θ p(θ) log p(θ) (0·log 0 = 0; finite on all of Δ(Θ)).
inline Potential mi_potential(std::size_t n_states) {
  Potential H;
  H.name = "neg-entropy";
  H.value = [](const Belief& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0.0) s += p[i] * std::log(p[i]);
    return s;
  };
  H.gradient = [](const Belief& p) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) g(static_cast<Eigen::Index>(i)) = 1.0 + std::log(p[i]);
    return g;
  };
  H.hessian = [n_states](const Belief& p) {
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_states),
                                                static_cast<Eigen::Index>(n_states));
    for (std::size_t i = 0; i < p.size(); ++i)
      raw(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 / p[i];
    return simplex::normalize_kernel(raw, p);
  };
  return H;
}

/// Mutual-information cost, restricted to interior-support posteriors (the
/// rich-domain version): +∞ when any nontrivial atom touches the boundary.
inline CostFunction mi_cost(std::size_t n_states = 2) {
  CostFunction C = ups_cost(mi_potential(n_states), "mi");
  auto Hp = C.ups;
  C.eval = [Hp](const RandomPosterior& pi) {
    if (pi.is_trivial()) return 0.0;
    if (!detail::all_atoms_interior(pi)) return kPosInf;
    return detail::ups_value(*Hp, pi);
  };
  return C;
}

// ===================== Total information =====================

/// H_TI(p) = Σ_{θ≠θ′} γ_{θθ′} p(θ) log(p(θ)/p(θ′)); +∞ where a needed ratio
/// divides by zero.
inline Potential ti_potential(Eigen::MatrixXd gamma) {
  Potential H;
  H.name = "total-information";
  const auto n = gamma.rows();
  if (gamma.cols() != n) throw std::invalid_argument("ti_potential: gamma must be square");
  if ((gamma.array() < 0.0).any()) throw std::invalid_argument("ti_potential: gamma >= 0");
  H.value = [gamma](const Belief& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (i == j) continue;
        const double g = gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (g == 0.0 || p[i] <= 0.0) continue;
        if (p[j] <= 0.0) return kPosInf;
        s += g * p[i] * std::log(p[i] / p[j]);
      }
    }
    return s;
  };
  H.hessian = [gamma](const Belief& p) {
    const std::size_t n = p.size();
    Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a == b) {
          double d = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            if (j == a) continue;
            d += gamma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) / p[a];
            d += gamma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) * p[j] /
                 (p[a] * p[a]);
          }
          raw(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)) = d;
        } else {
          raw(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              -gamma(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) / p[b] -
              gamma(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) / p[a];
        }
      }
    }
    return simplex::normalize_kernel(raw, p);
  };
  return H;
}

/// Total-information cost: experiment form Σ_θ p(θ) Σ_θ′ γ_{θθ′} KL(σ_θ|σ_θ′),
/// UPS form via H_TI; the two agree on interior-support inputs.
inline CostFunction ti_cost(Eigen::MatrixXd gamma) {
  CostFunction C = ups_cost(ti_potential(gamma), "ti");
  C.experiment_form = [gamma](const Experiment& sigma, const Belief& p) {
    if (p.size() != sigma.states()) throw std::invalid_argument("ti: prior dimension");
    double s = 0.0;
    for (std::size_t t = 0; t < sigma.states(); ++t) {
      if (p[t] <= 0.0) continue;
      for (std::size_t u = 0; u < sigma.states(); ++u) {
        if (t == u) continue;
        const double g = gamma(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(u));
        if (g == 0.0) continue;
        s = ext_add(s, ext_scale(p[t] * g, kl(sigma.channel().row(static_cast<Eigen::Index>(t)),
                                              sigma.channel().row(static_cast<Eigen::Index>(u)))));
      }
    }
    return s;
  };
  return C;
}

// ===================== Log-likelihood-ratio cost =====================

/// D_LLR(q | p) = Σ_{θ≠θ′} β_{θθ′} (q_θ/p_θ) log((q_θ/p_θ)/(q_θ′/p_θ′)):
/// the posterior form of the LLR cost at full-support priors.
inline Divergence llr_divergence(Eigen::MatrixXd beta) {
  Divergence D;
  D.name = "llr";
  D.value = [beta](const Belief& q, const Belief& p) {
    if (q.size() != p.size()) throw std::invalid_argument("llr divergence: dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t j = 0; j < q.size(); ++j) {
        if (i == j) continue;
        const double b = beta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (b == 0.0) continue;
        if (p[i] <= 0.0 || p[j] <= 0.0) return kPosInf;
        const double ri = q[i] / p[i], rj = q[j] / p[j];
        if (ri <= 0.0) continue;  // 0·log 0 = 0
        if (rj <= 0.0) return kPosInf;
        s += b * ri * std::log(ri / rj);
      }
    }
    return std::max(0.0, s);
  };
  return D;
}

/// LLR cost Σ_{θ≠θ′} β_{θθ′} D_KL(σ_θ | σ_θ′) — prior-independent by
/// construction; posterior form via D_LLR.
inline CostFunction llr_cost(Eigen::MatrixXd beta) {
  if (beta.rows() != beta.cols()) throw std::invalid_argument("llr_cost: beta must be square");
  if ((beta.array() < 0.0).any()) throw std::invalid_argument("llr_cost: beta >= 0");
  CostFunction C = ps_cost(llr_divergence(beta), "llr");
  C.experiment_form = [beta](const Experiment& sigma, const Belief& p) {
    if (p.size() != sigma.states()) throw std::invalid_argument("llr: prior dimension");
    double s = 0.0;
    for (std::size_t t = 0; t < sigma.states(); ++t)
      for (std::size_t u = 0; u < sigma.states(); ++u) {
        if (t == u) continue;
        const double b = beta(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(u));
        if (b == 0.0) continue;
        s = ext_add(s, ext_scale(b, kl(sigma.channel().row(static_cast<Eigen::Index>(t)),
                                       sigma.channel().row(static_cast<Eigen::Index>(u)))));
      }
    return s;
  };
  return C;
}

// ===================== Wald cost =====================

/// H_W as a function of x = p(1): (2x−1) log(x/(1−x)), +∞ at the endpoints.
inline double wald_potential_scalar(double x) {
  if (x <= 0.0 || x >= 1.0) return kPosInf;
  if (x == 0.5) return 0.0;
  return (2.0 * x - 1.0) * std::log(x / (1.0 - x));
}

/// Wald potential on binary beliefs (total information with γ₀₁ = γ₁₀ = 1).
inline Potential wald_potential() {
  Potential H = ti_potential(Eigen::MatrixXd::Ones(2, 2) - Eigen::MatrixXd::Identity(2, 2));
  H.name = "wald";
  return H;
}

/// Wald sequential-sampling cost: p(0)·KL(σ₀|σ₁) + p(1)·KL(σ₁|σ₀); UPS with
/// the Wald potential.  Binary states only.
inline CostFunction wald_cost() {
  CostFunction C = ups_cost(wald_potential(), "wald");
  C.experiment_form = [](const Experiment& sigma, const Belief& p) {
    if (sigma.states() != 2 || p.size() != 2)
      throw std::invalid_argument("wald_cost: binary states only");
    return ext_add(ext_scale(p[0], kl(sigma.channel().row(0), sigma.channel().row(1))),
                   ext_scale(p[1], kl(sigma.channel().row(1), sigma.channel().row(0))));
  };
  return C;
}

// ===================== Max-likelihood-ratio cost =====================

/// D_MLR(q | p) = 1 − min_{θ ∈ supp(p)} q(θ)/p(θ); defined for every pair.
inline Divergence mlr_divergence() {
  Divergence D;
  D.name = "mlr";
  D.value = [](const Belief& q, const Belief& p) {
    if (q.size() != p.size()) throw std::invalid_argument("mlr divergence: dimension");
    double m = kPosInf;
    for (std::size_t i : p.support()) m = std::min(m, q[i] / p[i]);
    return std::max(0.0, 1.0 - m);
  };
  return D;
}

/// MLR cost E_π[D_MLR(q | p_π)] on the full domain; experiment form
/// 1 − Σ_s min_{θ∈supp(p)} σ_θ(s).
inline CostFunction mlr_cost() {
  CostFunction C = ps_cost(mlr_divergence(), "mlr");
  C.experiment_form = [](const Experiment& sigma, const Belief& p) {
    if (p.size() != sigma.states()) throw std::invalid_argument("mlr: prior dimension");
    double covered = 0.0;
    for (std::size_t s = 0; s < sigma.signals(); ++s) {
      double m = kPosInf;
      for (std::size_t t : p.support())
        m = std::min(m, sigma.channel()(static_cast<Eigen::Index>(t),
                                        static_cast<Eigen::Index>(s)));
      covered += m;
    }
    return std::max(0.0, 1.0 - covered);
  };
  return C;
}

// ===================== Total-variation cost =====================

/// Binary total-variation cost ½ Σ_s |σ₀(s) − σ₁(s)|; on binary states this
/// coincides with the MLR cost, which supplies the posterior form.
inline CostFunction tv_cost() {
  CostFunction C = ps_cost(mlr_divergence(), "tv");
  C.eval = [D = C.ps](const RandomPosterior& pi) {
    if (pi.states() != 2) throw std::invalid_argument("tv_cost: binary states only");
    return detail::ps_value(*D, pi);
  };
  C.experiment_form = [](const Experiment& sigma, const Belief& p) {
    if (sigma.states() != 2 || p.size() != 2)
      throw std::invalid_argument("tv_cost: binary states only");
    return 0.5 * (sigma.channel().row(0) - sigma.channel().row(1)).cwiseAbs().sum();
  };
  return C;
}

// ===================== Direct (restricted-domain) costs =====================

namespace detail {

/// If π is bayes_map(bernoulli(ℓ), p) for some ℓ ≥ 0 and full-support binary
/// p, return ℓ; the signature is two interior atoms whose log-odds sit
/// symmetrically around the prior's log-odds.
inline bool bernoulli_form_ell(const RandomPosterior& pi, double* ell_out) {
  if (pi.states() != 2 || pi.atoms().size() != 2) return false;
  if (!all_atoms_interior(pi) || !pi.barycenter().full_support()) return false;
  const auto lo = [](const Belief& q) { return std::log(q[1] / q[0]); };
  const double l1 = lo(pi.atoms()[0].q), l2 = lo(pi.atoms()[1].q);
  const double lp = lo(pi.barycenter());
  if (std::abs((l1 - lp) + (l2 - lp)) > kFamilyFormTol) return false;
  *ell_out = std::abs(l1 - lp);
  return true;
}

}  // namespace detail

/// Direct cost on the Bernoulli experiment family: C(h_B(σ^ℓ, p)) = f(ℓ) for
/// every full-support binary prior; +∞ on every other nontrivial posterior.
/// Requires f(0) = f′(0) = 0 and f″(0) > 0.
inline CostFunction bernoulli_direct(std::function<double(double)> f) {
  CostFunction C;
  C.kind = "bernoulli_direct";
  C.direct_f = f;
  C.eval = [f](const RandomPosterior& pi) {
    if (pi.is_trivial()) return 0.0;
    double ell = 0.0;
    if (!detail::bernoulli_form_ell(pi, &ell)) return kPosInf;
    return std::max(0.0, f(ell));
  };
  return C;
}

/// Direct cost on the Poisson-dilution family: 1−e^{−λ} on images of
/// poisson_dilution(λ); +∞ on every other nontrivial posterior.  The image at
/// prior p has atoms inside {δ₀, δ₁, p} with the two revealing atoms weighted
/// proportionally to the prior.
inline CostFunction poisson_direct() {
  CostFunction C;
  C.kind = "poisson_direct";
  C.eval = [](const RandomPosterior& pi) {
    if (pi.states() != 2) throw std::invalid_argument("poisson_direct: binary states only");
    if (pi.is_trivial()) return 0.0;
    const double p1 = pi.barycenter()[1];
    double at_prior = 0.0;
    for (const Atom& a : pi.atoms()) {
      const double x = a.q[1];
      if (x <= kFamilyFormTol || x >= 1.0 - kFamilyFormTol) continue;  // revealing atom
      if (std::abs(x - p1) <= kFamilyFormTol) {
        at_prior += a.w;  // uninformative atom
        continue;
      }
      return kPosInf;  // interior atom away from the prior: not a dilution image
    }
    return 1.0 - at_prior;
  };
  return C;
}

// ===================== Prior-independent envelope =====================

/// Γ̄(σ, p) = max over sampled priors p′ with supp(p′) = supp(p) of
/// C(h_B(σ, p′)).  Closed form for the Wald cost:
/// max{KL(σ₀|σ₁), KL(σ₁|σ₀)}.  Sampling is deterministic (fixed seed).
inline CostFunction pie(CostFunction base, std::size_t n_priors = 200,
                        std::uint64_t seed = 271828) {
  auto basep = std::make_shared<const CostFunction>(std::move(base));
  if (!basep->experiment_form)
    throw std::invalid_argument("pie: base cost needs an experiment form");
  CostFunction C;
  C.kind = "pie";
  C.components = {basep};
  std::function<double(const Experiment&, const Belief&)> form;
  if (basep->kind == "wald") {
    form = [](const Experiment& sigma, const Belief& p) {
      if (sigma.states() != 2 || p.size() != 2)
        throw std::invalid_argument("pie(wald): binary states only");
      return std::max(kl(sigma.channel().row(0), sigma.channel().row(1)),
                      kl(sigma.channel().row(1), sigma.channel().row(0)));
    };
  } else {
    form = [basep, n_priors, seed](const Experiment& sigma, const Belief& p) {
      const std::vector<std::size_t> supp = p.support();
      simplex::Rng rng(seed);
      double best = (*basep)(sigma, p);
      for (std::size_t i = 0; i < n_priors; ++i) {
        const std::vector<double> w = rng.dirichlet(supp.size());
        std::vector<double> probs(p.size(), 0.0);
        for (std::size_t j = 0; j < supp.size(); ++j) probs[supp[j]] = w[j];
        best = std::max(best, (*basep)(sigma, Belief(std::move(probs))));
      }
      return best;
    };
  }
  C.experiment_form = form;
  // Posterior evaluation goes through the canonical experiment of π.
  C.eval = [form](const RandomPosterior& pi) {
    if (pi.is_trivial()) return 0.0;
    if (!pi.barycenter().full_support()) return kPosInf;
    return form(experiments::canonical_experiment(pi), pi.barycenter());
  };
  return C;
}

// ===================== Combinators =====================

/// C(π) = g(C¹(π), …, Cⁿ(π)) with g(0) = 0; ∇g(0) recorded for the kernel
/// rule k_C = Σ_i ∂_i g(0) · k_{C^i}.  +∞ as soon as any component is +∞.
inline CostFunction combine(std::function<double(const std::vector<double>&)> g,
                            std::vector<double> grad0, std::vector<CostFunction> parts) {
  if (parts.empty() || grad0.size() != parts.size())
    throw std::invalid_argument("combine: need one gradient entry per cost");
  std::vector<CostPtr> comps;
  comps.reserve(parts.size());
  for (CostFunction& c : parts) comps.push_back(std::make_shared<const CostFunction>(std::move(c)));
  CostFunction C;
  C.kind = "combine";
  C.combine_grad0 = std::move(grad0);
  C.components = comps;
  C.eval = [g, comps](const RandomPosterior& pi) {
    std::vector<double> vals;
    vals.reserve(comps.size());
    for (const CostPtr& c : comps) {
      const double v = (*c)(pi);
      if (!std::isfinite(v)) return kPosInf;
      vals.push_back(v);
    }
    return std::max(0.0, g(vals));
  };
  bool all_forms = std::all_of(comps.begin(), comps.end(),
                               [](const CostPtr& c) { return bool(c->experiment_form); });
  if (all_forms) {
    C.experiment_form = [g, comps](const Experiment& sigma, const Belief& p) {
      std::vector<double> vals;
      vals.reserve(comps.size());
      for (const CostPtr& c : comps) {
        const double v = (*c)(sigma, p);
        if (!std::isfinite(v)) return kPosInf;
        vals.push_back(v);
      }
      return std::max(0.0, g(vals));
    };
  }
  return C;
}

// ===================== Experiment-based evaluators =====================

/// Experiment-based total information Σ_θ p(θ) Σ_θ′ γ_{θθ′} KL(σ_θ | σ_θ′):
/// the inner sum ranges over all states, including those outside supp(p).
inline CostFunction experiment_ti(Eigen::MatrixXd gamma) {
  CostFunction C = ti_cost(std::move(gamma));
  C.kind = "experiment_ti";
  auto form = C.experiment_form;
  // Posterior inputs are routed through the canonical experiment, which only
  // exists at full-support priors.
  C.ups.reset();
  C.eval = [form](const RandomPosterior& pi) {
    if (pi.is_trivial()) return 0.0;
    if (!pi.barycenter().full_support()) return kPosInf;
    return form(experiments::canonical_experiment(pi), pi.barycenter());
  };
  return C;
}

/// Experiment-based MLR cost 1 − Σ_s min over ALL states of σ_θ(s) — fully
/// prior-invariant (the prior never enters).
inline CostFunction experiment_mlr() {
  CostFunction C;
  C.kind = "experiment_mlr";
  C.experiment_form = [](const Experiment& sigma, const Belief&) {
    double covered = 0.0;
    for (std::size_t s = 0; s < sigma.signals(); ++s) {
      double m = kPosInf;
      for (std::size_t t = 0; t < sigma.states(); ++t)
        m = std::min(m, sigma.channel()(static_cast<Eigen::Index>(t),
                                        static_cast<Eigen::Index>(s)));
      covered += m;
    }
    return std::max(0.0, 1.0 - covered);
  };
  auto form = C.experiment_form;
  C.eval = [form](const RandomPosterior& pi) {
    if (pi.is_trivial()) return 0.0;
    if (!pi.barycenter().full_support()) return kPosInf;
    return form(experiments::canonical_experiment(pi), pi.barycenter());
  };
  return C;
}

}  // namespace infocost::costs
