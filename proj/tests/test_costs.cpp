// SPDX-License-Identifier: MIT
//
// The cost-function catalog against frozen closed-form values.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "infocost/costs.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace infocost;
using costs::CostFunction;
using infocost::posteriors::Atom;
using infocost::posteriors::RandomPosterior;
using infocost::simplex::Belief;
using infocost::simplex::binary_belief;
using infocost::simplex::kPosInf;
using infocost::simplex::Rng;
using infocost::simplex::uniform_belief;

namespace {

RandomPosterior bern1_image() {
  return fixtures::symmetric_pair(fixtures::kLogistic1);
}

}  // namespace

TEST_CASE("kl between channel rows") {
  Eigen::RowVectorXd a(2), b(2);
  a << fixtures::kLogistic1, 1.0 - fixtures::kLogistic1;
  b << 1.0 - fixtures::kLogistic1, fixtures::kLogistic1;
  CHECK_THAT(costs::kl(a, b), WithinAbs(fixtures::kKlStep1, 1e-15));
  CHECK_THAT(costs::kl(a, a), WithinAbs(0.0, 1e-15));

  Eigen::RowVectorXd zero(2), pos(2);
  zero << 1.0, 0.0;
  pos << 0.5, 0.5;
  CHECK(std::isfinite(costs::kl(zero, pos)));
  CHECK(costs::kl(pos, zero) == kPosInf);
}

TEST_CASE("mutual-information cost") {
  const auto mi = costs::mi_cost(2);
  CHECK(mi.kind == "mi");
  CHECK_THAT(mi(bern1_image()), WithinAbs(fixtures::kMiStep1, 1e-15));
  CHECK_THAT(mi(RandomPosterior::trivial(binary_belief(0.3))), WithinAbs(0.0, 1e-15));

  // Experiment form agrees with the posterior form.
  CHECK_THAT(mi(fixtures::bernoulli_experiment(1.0), binary_belief(0.5)),
             WithinAbs(fixtures::kMiStep1, 1e-12));

  const auto mi3 = costs::mi_cost(3);
  CHECK_THAT(mi3(fixtures::ternary_experiment(), fixtures::ternary_prior()),
             WithinAbs(fixtures::kTernaryMi, 1e-12));
}

TEST_CASE("scaled-log-odds potential and its cost") {
  CHECK_THAT(costs::wald_potential_scalar(0.5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(costs::wald_potential_scalar(fixtures::kLogistic1),
             WithinAbs(fixtures::kKlStep1, 1e-15));
  CHECK(costs::wald_potential_scalar(0.0) == kPosInf);
  CHECK(costs::wald_potential_scalar(1.0) == kPosInf);

  const auto wald = costs::wald_cost();
  CHECK(wald.kind == "wald");
  REQUIRE(wald.ups != nullptr);
  CHECK_THAT(wald(fixtures::asym_experiment(), binary_belief(0.5)),
             WithinAbs(fixtures::kWaldAsym, 1e-14));
  CHECK_THAT(wald(bern1_image()), WithinAbs(fixtures::kKlStep1, 1e-14));

  // Boundary posteriors cost +∞; trivial ones cost 0.
  CHECK(wald(fixtures::full_revelation_binary(0.4)) == kPosInf);
  CHECK_THAT(wald(RandomPosterior::trivial(binary_belief(0.9))), WithinAbs(0.0, 1e-15));

  // Curvature of the binary potential along the simplex direction e₁ − e₀,
  // dᵀ∇²H d with d = (−1, 1): equals the scalar second derivative
  // 1/(x²(1−x)²) of the one-variable potential.
  const auto k = wald.ups->hessian(binary_belief(0.3));
  const double along = k.entries(0, 0) - 2.0 * k.entries(0, 1) + k.entries(1, 1);
  CHECK_THAT(along, WithinAbs(fixtures::kWaldCurvature03, 1e-9));
}

TEST_CASE("pairwise-attention cost matches its two forms and scales") {
  Eigen::MatrixXd ones(2, 2), half(2, 2);
  ones << 0.0, 1.0, 1.0, 0.0;
  half << 0.0, 0.5, 0.5, 0.0;
  const auto ti1 = costs::ti_cost(ones);
  const auto ti_half = costs::ti_cost(half);
  const auto wald = costs::wald_cost();

  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto pi = posteriors::sample_posterior(rng, 2);
    CHECK_THAT(ti1(pi), WithinAbs(wald(pi), 1e-12));
    CHECK_THAT(ti_half(pi), WithinAbs(0.5 * wald(pi), 1e-12));
  }

  // Ternary fixture, adjacent-pair and all-pairs attention.
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(3, 3);
  adj(0, 1) = adj(1, 0) = adj(1, 2) = adj(2, 1) = 1.0;
  Eigen::MatrixXd all = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  const auto sigma = fixtures::ternary_experiment();
  const auto p = fixtures::ternary_prior();
  CHECK_THAT(costs::ti_cost(adj)(sigma, p), WithinAbs(fixtures::kTernaryTiAdjacent, 1e-12));
  CHECK_THAT(costs::ti_cost(all)(sigma, p), WithinAbs(fixtures::kTernaryTiAllPairs, 1e-12));

  // Experiment form and posterior form agree at interior priors.
  CHECK_THAT(costs::ti_cost(all)(experiments::bayes_map(sigma, p)),
             WithinAbs(fixtures::kTernaryTiAllPairs, 1e-9));
}

TEST_CASE("likelihood-ratio cost is prior-free on experiments") {
  Eigen::MatrixXd beta(2, 2);
  beta << 0.0, 1.0, 1.0, 0.0;
  const auto llr = costs::llr_cost(beta);
  CHECK(llr.kind == "llr");
  REQUIRE(llr.ps != nullptr);

  CHECK_THAT(llr(bern1_image()), WithinAbs(fixtures::kLlrStep1, 1e-14));

  const auto sigma = fixtures::asym_experiment();
  const double at_half = llr(sigma, binary_belief(0.5));
  CHECK_THAT(at_half, WithinAbs(fixtures::kLlrAsym, 1e-12));
  for (double x : {0.1, 0.37, 0.62, 0.93})
    CHECK_THAT(llr(sigma, binary_belief(x)), WithinAbs(at_half, 1e-10));
}

TEST_CASE("minimal-learning cost and its divergence") {
  const auto mlr = costs::mlr_cost();
  REQUIRE(mlr.ps != nullptr);
  // D(q|p) = 1 − min_θ q(θ)/p(θ).
  CHECK_THAT(mlr.ps->value(binary_belief(0.8), binary_belief(0.5)),
             WithinAbs(1.0 - 0.2 / 0.5, 1e-15));
  CHECK_THAT(mlr.ps->value(binary_belief(0.5), binary_belief(0.5)),
             WithinAbs(0.0, 1e-15));

  CHECK_THAT(mlr(fixtures::ternary_experiment(), fixtures::ternary_prior()),
             WithinAbs(fixtures::kTernaryMlr, 1e-12));

  // Full revelation costs exactly 1 at any interior prior.
  CHECK_THAT(mlr(fixtures::full_revelation_binary(0.3)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("total-variation cost closed form on binary pairs") {
  const auto tv = costs::tv_cost();
  const auto mlr = costs::mlr_cost();

  CHECK_THAT(tv(bern1_image()), WithinAbs(fixtures::kKlStep1, 1e-12));

  Rng rng(17);
  for (int t = 0; t < 60; ++t) {
    const double lo = rng.uniform(0.01, 0.45);
    const double hi = rng.uniform(0.55, 0.99);
    const double p = rng.uniform(lo + 0.01, hi - 0.01);
    const auto pi = fixtures::binary_pair(lo, hi, p);
    CHECK_THAT(tv(pi), WithinAbs(fixtures::tv_closed_form(lo, hi, p), 1e-12));
    // On binary states the two costs coincide.
    CHECK_THAT(tv(pi), WithinAbs(mlr(pi), 1e-12));
  }

  CHECK_THAT(tv(fixtures::full_revelation_binary(0.42)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("direct log-odds cost recognizes symmetric pair images") {
  const auto direct = costs::bernoulli_direct([](double l) { return l * l; });
  REQUIRE(direct.direct_f);

  // ½δ_a + ½δ_{1−a} at prior ½ carries log-odds step ℓ = logit(a).
  CHECK_THAT(direct(bern1_image()), WithinAbs(1.0, 1e-12));
  CHECK_THAT(direct(fixtures::symmetric_pair(1.0 / (1.0 + std::exp(-2.0)))),
             WithinAbs(4.0, 1e-10));
  CHECK_THAT(direct(RandomPosterior::trivial(binary_belief(0.5))), WithinAbs(0.0, 1e-15));

  // Anything that is not a symmetric pair around ½ is out of reach.
  CHECK(direct(fixtures::binary_pair(0.2, 0.9, 0.5)) == kPosInf);
  CHECK(direct(fixtures::binary_pair(0.3, 0.7, 0.4)) == kPosInf);
}

TEST_CASE("arrival cost prices revelation weight") {
  const auto poisson = costs::poisson_direct();

  CHECK_THAT(poisson(fixtures::full_revelation_binary(0.35)), WithinAbs(1.0, 1e-12));
  // Diluted full revelation: mass α on {δ₀, δ₁}, rest at the prior.
  const auto diluted = posteriors::dilute(fixtures::full_revelation_binary(0.35), 0.4);
  CHECK_THAT(poisson(diluted), WithinAbs(0.4, 1e-12));
  CHECK_THAT(poisson(RandomPosterior::trivial(binary_belief(0.35))), WithinAbs(0.0, 1e-15));

  // Interior-support images are not arrival images.
  CHECK(poisson(fixtures::binary_pair(0.2, 0.8, 0.5)) == kPosInf);
}

TEST_CASE("prior-independent envelope") {
  const auto env = costs::pie(costs::wald_cost());
  CHECK(env.kind == "pie");
  // Closed form for the base: max of the two row KLs.
  CHECK_THAT(env(fixtures::asym_experiment(), binary_belief(0.5)),
             WithinAbs(fixtures::kKlAsym01, 1e-13));
  CHECK_THAT(env(fixtures::asym_experiment(), binary_belief(0.2)),
             WithinAbs(fixtures::kKlAsym01, 1e-13));

  // Sampled envelope for a generic base: dominates the base pointwise and is
  // deterministic across calls.
  Eigen::MatrixXd ones(2, 2);
  ones << 0.0, 1.0, 1.0, 0.0;
  const auto base = costs::ti_cost(ones);
  const auto env_ti = costs::pie(base, 100, 5);
  const auto sigma = fixtures::asym_experiment();
  const double v1 = env_ti(sigma, binary_belief(0.3));
  const double v2 = env_ti(sigma, binary_belief(0.3));
  CHECK(v1 == v2);
  CHECK(v1 >= base(sigma, binary_belief(0.3)) - 1e-12);

  // Posterior-only costs carry no experiment form to take an envelope over.
  CHECK_THROWS_AS(costs::pie(costs::mi_cost(2)), std::invalid_argument);
  CHECK_THROWS_AS(costs::pie(costs::bernoulli_direct([](double l) { return l * l; })),
                  std::invalid_argument);
}

TEST_CASE("combine forms weighted bundles with +inf propagation") {
  std::vector<CostFunction> parts;
  parts.push_back(costs::mi_cost(2));
  parts.push_back(costs::wald_cost());
  const std::vector<double> w = {2.0, 3.0};
  auto g = [w](const std::vector<double>& v) { return w[0] * v[0] + w[1] * v[1]; };
  const auto mix = costs::combine(g, w, std::move(parts));

  CHECK(mix.kind == "combine");
  REQUIRE(mix.components.size() == 2);
  CHECK(mix.combine_grad0 == w);

  const auto mi = costs::mi_cost(2);
  const auto wald = costs::wald_cost();
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const auto pi = posteriors::sample_posterior(rng, 2);
    CHECK_THAT(mix(pi), WithinAbs(2.0 * mi(pi) + 3.0 * wald(pi), 1e-12));
  }
  // A boundary posterior is finite for MI but infinite for the log-odds cost.
  CHECK(mix(fixtures::full_revelation_binary(0.5)) == kPosInf);

  CHECK_THROWS_AS(costs::combine(g, {1.0}, std::vector<CostFunction>{}),
                  std::invalid_argument);
}

TEST_CASE("experiment-based variants match their posterior-based twins") {
  Eigen::MatrixXd all = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  const auto eti = costs::experiment_ti(all);
  CHECK(eti.kind == "experiment_ti");
  CHECK_THAT(eti(fixtures::ternary_experiment(), fixtures::ternary_prior()),
             WithinAbs(fixtures::kTernaryTiAllPairs, 1e-12));

  const auto emlr = costs::experiment_mlr();
  CHECK_THAT(emlr(fixtures::ternary_experiment(), fixtures::ternary_prior()),
             WithinAbs(fixtures::kTernaryMlr, 1e-12));

  // Posterior evaluation routes through the canonical experiment.
  Rng rng(23);
  const auto mlr = costs::mlr_cost();
  for (int t = 0; t < 20; ++t) {
    const auto pi = posteriors::sample_posterior(rng, 2);
    CHECK_THAT(emlr(pi), WithinAbs(mlr(pi), 1e-9));
  }
}

TEST_CASE("ups_cost and ps_cost generic constructors") {
  const auto wald_pot = costs::wald_potential();
  const auto C = costs::ups_cost(wald_pot, "custom");
  CHECK(C.kind == "custom");
  CHECK_THAT(C(bern1_image()), WithinAbs(fixtures::kKlStep1, 1e-14));

  const auto D = costs::mlr_divergence();
  const auto P = costs::ps_cost(D, "ps-custom");
  CHECK_THAT(P(fixtures::full_revelation_binary(0.3)), WithinAbs(1.0, 1e-12));
}
