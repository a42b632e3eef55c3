// SPDX-License-Identifier: MIT
//
// Sampled axiom checkers and the adversarial violation search.

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "infocost/axioms.hpp"

using namespace infocost;
using axioms::Verdict;
using costs::CostFunction;

namespace {

Eigen::MatrixXd ones_offdiag(int n) {
  return Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("monotone and subadditive hold for the proof-stable families") {
  const std::vector<CostFunction> stable = {costs::wald_cost(), costs::mlr_cost(),
                                            costs::tv_cost(), costs::mi_cost(2)};
  for (const auto& C : stable) {
    const auto m = axioms::check_monotone(C, axioms::make_pair_sampler(2), 500, 42);
    INFO(C.kind << " monotone worst " << m.worst_violation);
    CHECK(m.verdict == Verdict::pass);
    CHECK(m.worst_violation <= 1e-9);

    const auto s = axioms::check_subadditive(C, axioms::make_strategy_sampler(2), 500, 42);
    INFO(C.kind << " subadditive worst " << s.worst_violation);
    CHECK(s.verdict == Verdict::pass);
    CHECK(s.worst_violation <= 1e-9);
  }
}

TEST_CASE("the likelihood-ratio cost is not subadditive") {
  const auto llr = costs::llr_cost(ones_offdiag(2));
  const auto s = axioms::check_subadditive(llr, axioms::make_strategy_sampler(2), 2000, 7);
  CHECK(s.verdict == Verdict::fail);
  CHECK(s.worst_violation > 1e-3);
  CHECK_FALSE(s.witness.empty());

  // The aggregated two-axiom verdict also fails, via the subadditive half.
  const auto v = axioms::slp_verdict(llr, axioms::make_pair_sampler(2),
                                     axioms::make_strategy_sampler(2), 2000, 7);
  CHECK(v.verdict == Verdict::fail);
  CHECK(v.witness.rfind("subadditive:", 0) == 0);
}

TEST_CASE("two-step additivity holds for the uniformly separable families") {
  const auto mi = costs::mi_cost(2);
  const auto ti = costs::ti_cost(ones_offdiag(2));
  for (const CostFunction* C : {&mi, &ti}) {
    const auto r = axioms::check_additive(*C, axioms::make_strategy_sampler(2), 1000, 9);
    INFO(C->kind << " additive worst " << r.worst_violation);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.worst_violation <= 1e-8);
  }

  // Minimal learning is subadditive but not additive: splitting can be
  // strictly cheaper than one shot, so the two-step identity breaks.
  const auto r = axioms::check_additive(costs::mlr_cost(),
                                        axioms::make_strategy_sampler(2), 2000, 9);
  CHECK(r.verdict == Verdict::fail);
}

TEST_CASE("dilution linearity for the built-in stable families") {
  const std::vector<CostFunction> costs_list = {costs::wald_cost(), costs::mlr_cost(),
                                                costs::tv_cost(), costs::mi_cost(2)};
  for (const auto& C : costs_list) {
    const auto r =
        axioms::check_dilution_linear(C, axioms::make_posterior_sampler(2), 500, 13);
    INFO(C.kind << " dilution worst " << r.worst_violation);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.worst_violation <= 1e-10);
  }
}

TEST_CASE("independent products price additively except for minimal learning") {
  const auto ti = costs::ti_cost(ones_offdiag(2));
  const auto llr = costs::llr_cost(ones_offdiag(2));
  for (const CostFunction* C : {&ti, &llr}) {
    const auto r = axioms::check_cmc(*C, axioms::make_experiment_pair_sampler(2), 400, 5);
    INFO(C->kind << " cmc worst " << r.worst_violation);
    CHECK(r.verdict == Verdict::pass);
  }

  const auto r =
      axioms::check_cmc(costs::mlr_cost(), axioms::make_experiment_pair_sampler(2), 400, 5);
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.worst_violation > 1e-3);
}

TEST_CASE("prior invariance separates the experiment-priced families") {
  const auto llr = costs::llr_cost(ones_offdiag(2));
  const auto mlr = costs::mlr_cost();
  for (const CostFunction* C : {&llr, &mlr}) {
    const auto r = axioms::check_prior_invariant(
        *C, axioms::make_experiment_priors_sampler(2), 400, 31);
    INFO(C->kind << " prior-invariance worst " << r.worst_violation);
    CHECK(r.verdict == Verdict::pass);
  }

  const auto r = axioms::check_prior_invariant(
      costs::ti_cost(ones_offdiag(2)), axioms::make_experiment_priors_sampler(2), 400, 31);
  CHECK(r.verdict == Verdict::fail);
}

TEST_CASE("quasi-metric triangle inequality") {
  const auto mlr = costs::mlr_cost();
  const auto r = axioms::check_quasimetric(*mlr.ps, axioms::make_belief_triple_sampler(2),
                                           2000, 77);
  CHECK(r.verdict == Verdict::pass);

  // Relative entropy violates the triangle inequality.
  costs::Divergence kl_div;
  kl_div.name = "kl";
  kl_div.value = [](const simplex::Belief& q, const simplex::Belief& p) {
    Eigen::RowVectorXd qv(static_cast<Eigen::Index>(q.size())),
        pv(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < q.size(); ++i) {
      qv(static_cast<Eigen::Index>(i)) = q[i];
      pv(static_cast<Eigen::Index>(i)) = p[i];
    }
    return costs::kl(qv, pv);
  };
  const auto bad = axioms::check_quasimetric(kl_div, axioms::make_belief_triple_sampler(2),
                                             2000, 77);
  CHECK(bad.verdict == Verdict::fail);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("averaged triangle inequality tracks subadditivity for separable costs") {
  const auto mlr = costs::mlr_cost();
  const auto good = axioms::check_triangle_avg(*mlr.ps,
                                               axioms::make_posterior_prior_sampler(2),
                                               1000, 3);
  CHECK(good.verdict == Verdict::pass);

  Eigen::MatrixXd beta = ones_offdiag(2);
  const auto llr = costs::llr_cost(beta);
  const auto bad = axioms::check_triangle_avg(*llr.ps,
                                              axioms::make_posterior_prior_sampler(2),
                                              1000, 3);
  CHECK(bad.verdict == Verdict::fail);
}

TEST_CASE("partition flatness needs three states and separates families") {
  CHECK_THROWS_AS(
      axioms::check_partition_flatness(costs::mlr_cost(), simplex::binary_belief(0.5)),
      std::invalid_argument);

  const auto flat = axioms::check_partition_flatness(costs::mlr_cost(),
                                                     simplex::uniform_belief(3));
  CHECK(flat.verdict == Verdict::pass);

  // Partition posteriors sit on the boundary, so probe the entropy potential
  // through the unrestricted constructor rather than the interior-only cost.
  const auto open_mi = costs::ups_cost(costs::mi_potential(3), "mi-open");
  const auto curved = axioms::check_partition_flatness(open_mi, simplex::uniform_belief(3));
  CHECK(curved.verdict == Verdict::fail);
  CHECK(curved.worst_violation > 1e-2);
}

TEST_CASE("violation search certifies failures and respects stability") {
  // Positive control: the adversarial search finds the known failures.
  const auto llr_hit = axioms::find_violation(costs::llr_cost(ones_offdiag(2)),
                                              "subadditive", 30000, 19);
  REQUIRE(llr_hit.has_value());
  CHECK(llr_hit->gap >= 1e-3);
  CHECK_FALSE(llr_hit->witness.empty());

  const auto ti_hit = axioms::find_violation(costs::ti_cost(ones_offdiag(2)),
                                             "prior_invariant", 30000, 19);
  REQUIRE(ti_hit.has_value());
  CHECK(ti_hit->gap >= 1e-3);

  const auto mlr_hit = axioms::find_violation(costs::mlr_cost(), "cmc", 30000, 19);
  REQUIRE(mlr_hit.has_value());
  CHECK(mlr_hit->gap >= 1e-3);

  // Negative control: no subadditivity violation exists for the log-odds cost.
  const auto none = axioms::find_violation(costs::wald_cost(), "subadditive", 30000, 19);
  CHECK_FALSE(none.has_value());

  CHECK_THROWS_AS(axioms::find_violation(costs::wald_cost(), "no_such_axiom", 100, 1),
                  std::invalid_argument);
}

TEST_CASE("reports carry their reproduction parameters") {
  const auto r = axioms::check_monotone(costs::wald_cost(), axioms::make_pair_sampler(2),
                                        50, 23456);
  CHECK(r.axiom == "monotone");
  CHECK(r.trials == 50);
  CHECK(r.seed == 23456);
  CHECK(r.tol == axioms::kClosedFormTol);
  CHECK(axioms::to_string(r.verdict) == std::string("pass"));
}
