// infocost — command-line front end for the information-cost toolkit.
//
// Subcommands:
//   cost-eval          evaluate a cost on an experiment (at a prior) or on a
//                      random posterior given directly
//   axioms             run a sampled property check (optionally followed by an
//                      adversarial search) for one axiom against one cost
//   trilemma           verify the pass/fail pattern of the three canonical
//                      attention-cost families across SLP / prior invariance /
//                      constant marginal cost
//   kernel estimate    recover the local quadratic form of a cost at a prior
//   phi iterate        run the sequential-learning reduction on a belief grid
//   walk               evaluate the halving-walk recursion for direct costs
//   poisson-cover      split a binary experiment into reveal/blank components
//   pipeline           classify an indirect cost and, when it is not
//                      posterior separable, hand off to the grid reduction
//   experiment validate  parse and sanity-check an experiment file
//
// Exit codes: 0 = pass/ok, 1 = property failed, 2 = schema or usage error,
// 3 = inconclusive.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infocost/axioms.hpp"
#include "infocost/costs.hpp"
#include "infocost/io.hpp"
#include "infocost/kernels.hpp"
#include "infocost/seqlearn.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitSchema = 2;
constexpr int kExitInconclusive = 3;

constexpr std::uint64_t kDefaultSeed = 20250817ULL;

// --seed beats the INFOCOST_SEED environment variable beats the default.
std::uint64_t resolve_seed(std::int64_t flag_value) {
  if (flag_value >= 0) return static_cast<std::uint64_t>(flag_value);
  if (const char* env = std::getenv("INFOCOST_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return static_cast<std::uint64_t>(v);
    throw std::invalid_argument("schema: INFOCOST_SEED is not an integer");
  }
  return kDefaultSeed;
}

infocost::simplex::Belief parse_belief_csv(const std::string& csv) {
  std::vector<double> entries;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      entries.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("schema: belief entry '" + tok +
                                  "' is not a number");
    }
  }
  if (entries.size() < 2)
    throw std::invalid_argument("schema: a belief needs at least two entries");
  try {
    return infocost::simplex::Belief(std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("schema: ") + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    infocost::io::save_text(out_path, text + "\n");
    std::cout << "wrote " << out_path << '\n';
  }
}

void emit_json(const nlohmann::json& j, const std::string& out_path) {
  emit(j.dump(2), out_path);
}

int verdict_exit(infocost::axioms::Verdict v) {
  switch (v) {
    case infocost::axioms::Verdict::pass: return kExitPass;
    case infocost::axioms::Verdict::fail: return kExitFail;
    case infocost::axioms::Verdict::inconclusive: return kExitInconclusive;
  }
  return kExitSchema;
}

// ---------------------------------------------------------------------------
// cost-eval
// ---------------------------------------------------------------------------

struct CostEvalArgs {
  std::string cost_path;
  std::string experiment_path;
  std::string posterior_path;
  std::string prior_csv;
  std::string format = "json";
  std::string out_path;
};

int run_cost_eval(const CostEvalArgs& a) {
  using namespace infocost;
  const costs::CostFunction cost = io::cost_from_json(io::load_json(a.cost_path));

  nlohmann::json result;
  result["cost"] = cost.kind;
  double value = 0.0;

  if (!a.experiment_path.empty()) {
    if (a.prior_csv.empty())
      throw std::invalid_argument(
          "schema: --experiment requires --prior to form posteriors");
    const auto sigma =
        io::experiment_from_json(io::load_json(a.experiment_path));
    const auto prior = parse_belief_csv(a.prior_csv);
    value = cost(sigma, prior);
    result["experiment"] = a.experiment_path;
    result["prior"] = io::belief_json(prior);
    const auto pi = experiments::bayes_map(sigma, prior);
    result["induced_posterior"] = io::posterior_json(pi);
  } else if (!a.posterior_path.empty()) {
    const auto pi = io::posterior_from_json(io::load_json(a.posterior_path));
    value = cost(pi);
    result["posterior"] = a.posterior_path;
  } else {
    throw std::invalid_argument(
        "schema: cost-eval needs --experiment (with --prior) or --posterior");
  }

  result["value"] = io::finite_or_tag(value);
  emit_json(result, a.out_path);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// axioms
// ---------------------------------------------------------------------------

struct AxiomsArgs {
  std::string cost_path;
  std::string axiom;
  int trials = 1000;
  std::int64_t seed = -1;
  double tol = -1.0;  // negative = use the checker's default
  int n_states = 2;
  int budget = 100000;
  bool certify = false;
  std::string format = "json";
  std::string out_path;
};

infocost::axioms::AxiomReport dispatch_sampled_check(
    const infocost::costs::CostFunction& cost, const AxiomsArgs& a,
    std::uint64_t seed) {
  using namespace infocost::axioms;
  const int n = a.n_states;
  const double tol_closed = a.tol >= 0 ? a.tol : kClosedFormTol;

  if (a.axiom == "monotone")
    return check_monotone(cost, make_pair_sampler(n), a.trials, seed,
                          tol_closed);
  if (a.axiom == "subadditive")
    return check_subadditive(cost, make_strategy_sampler(n), a.trials, seed,
                             tol_closed);
  if (a.axiom == "additive")
    return check_additive(cost, make_strategy_sampler(n), a.trials, seed,
                          tol_closed);
  if (a.axiom == "dilution_linear")
    return check_dilution_linear(cost, make_posterior_sampler(n), a.trials,
                                 seed, tol_closed);
  if (a.axiom == "cmc")
    return check_cmc(cost, make_experiment_pair_sampler(n), a.trials, seed,
                     tol_closed);
  if (a.axiom == "prior_invariant")
    return check_prior_invariant(cost, make_experiment_priors_sampler(n),
                                 a.trials, seed, tol_closed);
  if (a.axiom == "quasimetric") {
    if (!cost.ps)
      throw std::invalid_argument(
          "schema: quasimetric needs a cost with a divergence form");
    return check_quasimetric(*cost.ps,
                             make_belief_triple_sampler(n), a.trials, seed,
                             tol_closed);
  }
  if (a.axiom == "triangle_avg") {
    if (!cost.ps)
      throw std::invalid_argument(
          "schema: triangle_avg needs a cost with a divergence form");
    return check_triangle_avg(*cost.ps,
                              make_posterior_prior_sampler(n), a.trials, seed,
                              tol_closed);
  }
  if (a.axiom == "partition_flatness") {
    if (n < 3)
      throw std::invalid_argument(
          "schema: partition_flatness needs --n-states of at least 3");
    return check_partition_flatness(
        cost, infocost::simplex::uniform_belief(n), seed, tol_closed);
  }
  throw std::invalid_argument("schema: unknown axiom '" + a.axiom + "'");
}

int run_axioms(const AxiomsArgs& a) {
  using namespace infocost;
  const costs::CostFunction cost = io::cost_from_json(io::load_json(a.cost_path));
  const std::uint64_t seed = resolve_seed(a.seed);

  std::vector<axioms::AxiomReport> reports;
  if (a.axiom == "slp") {
    reports.push_back(axioms::slp_verdict(
        cost, axioms::make_pair_sampler(a.n_states),
        axioms::make_strategy_sampler(a.n_states), a.trials, seed,
        a.tol >= 0 ? a.tol : axioms::kClosedFormTol));
  } else {
    reports.push_back(dispatch_sampled_check(cost, a, seed));
  }

  // A sampled pass only says "no violation at these draws".  With --certify an
  // adversarial search tries to produce a witness before we report pass.
  if (a.certify) {
    static const std::vector<std::string> searchable = {
        "monotone",        "subadditive", "additive", "dilution_linear",
        "prior_invariant", "cmc",         "quasimetric"};
    for (auto& report : reports) {
      if (report.verdict != axioms::Verdict::pass) continue;
      const bool can_search =
          std::find(searchable.begin(), searchable.end(), report.axiom) !=
          searchable.end();
      if (!can_search) continue;
      const auto found = axioms::find_violation(cost, report.axiom, a.budget,
                                                seed, a.n_states);
      if (found) {
        report.verdict = axioms::Verdict::fail;
        report.worst_violation = found->gap;
        report.witness = found->witness;
      }
    }
  }

  if (a.format == "table") {
    emit(io::report_table(reports), a.out_path);
  } else {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) j.push_back(io::report_json(r));
    emit_json(j, a.out_path);
  }

  int exit_code = kExitPass;
  for (const auto& r : reports)
    exit_code = std::max(exit_code, verdict_exit(r.verdict));
  return exit_code;
}

// ---------------------------------------------------------------------------
// trilemma
// ---------------------------------------------------------------------------

struct TrilemmaArgs {
  int trials = 1000;
  std::int64_t seed = -1;
  int budget = 100000;
  double witness_gap = 1e-3;
  std::string format = "json";
  std::string out_path;
};

// Expected pattern for binary costs: each family keeps exactly two of the
// three properties {sequential learning proofness, prior invariance, constant
// marginal cost} and loses the third.
int run_trilemma(const TrilemmaArgs& a) {
  using namespace infocost;
  const std::uint64_t seed = resolve_seed(a.seed);

  // Draw a generic asymmetric attention matrix so the conclusion does not
  // hinge on a special symmetric instance.
  simplex::Rng rng(seed);
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2, 2);
  gamma(0, 1) = rng.uniform(0.25, 2.5);
  gamma(1, 0) = rng.uniform(0.25, 2.5);

  Eigen::MatrixXd beta = Eigen::MatrixXd::Zero(2, 2);
  beta(0, 1) = 1.0;
  beta(1, 0) = 1.0;

  struct Row {
    std::string name;
    costs::CostFunction cost;
    // expected verdicts for {slp, prior_invariant, cmc}: true = pass
    bool slp, pi, cmc;
  };
  std::vector<Row> rows;
  rows.push_back({"total_information", costs::ti_cost(gamma), true, false, true});
  rows.push_back({"log_likelihood_ratio", costs::llr_cost(beta), false, true, true});
  rows.push_back({"minimal_learning", costs::mlr_cost(), true, true, false});

  nlohmann::json out;
  out["seed"] = seed;
  out["trials"] = a.trials;
  out["gamma"] = io::matrix_json(gamma);
  nlohmann::json table = nlohmann::json::array();

  bool all_match = true;
  for (const auto& row : rows) {
    nlohmann::json cells;
    cells["cost"] = row.name;

    const auto run_cell = [&](const std::string& label, bool expect_pass,
                              const std::string& search_axiom,
                              auto&& sampled) -> void {
      nlohmann::json cell;
      cell["expected"] = expect_pass ? "pass" : "fail";
      if (expect_pass) {
        const auto reports = sampled();
        bool pass = true;
        double worst = 0.0;
        for (const auto& r : reports) {
          pass = pass && r.verdict == axioms::Verdict::pass;
          worst = std::max(worst, r.worst_violation);
        }
        cell["verdict"] = pass ? "pass" : "fail";
        cell["worst_violation"] = io::finite_or_tag(worst);
        cell["method"] = "sampled";
        if (!pass) all_match = false;
      } else {
        const auto found =
            axioms::find_violation(row.cost, search_axiom, a.budget, seed, 2);
        const bool certified = found && found->gap >= a.witness_gap;
        cell["verdict"] = certified ? "fail" : "pass";
        cell["method"] = "search";
        if (found) {
          cell["witness_gap"] = found->gap;
          cell["witness"] = found->witness;
        }
        if (!certified) all_match = false;
      }
      cells[label] = cell;
    };

    run_cell("slp", row.slp, "subadditive", [&] {
      return std::vector<axioms::AxiomReport>{axioms::slp_verdict(
          row.cost, axioms::make_pair_sampler(2),
          axioms::make_strategy_sampler(2), a.trials, seed,
          axioms::kClosedFormTol)};
    });
    run_cell("prior_invariant", row.pi, "prior_invariant", [&] {
      return std::vector<axioms::AxiomReport>{axioms::check_prior_invariant(
          row.cost, axioms::make_experiment_priors_sampler(2), a.trials, seed,
          axioms::kClosedFormTol)};
    });
    run_cell("cmc", row.cmc, "cmc", [&] {
      return std::vector<axioms::AxiomReport>{
          axioms::check_cmc(row.cost, axioms::make_experiment_pair_sampler(2),
                            a.trials, seed, axioms::kClosedFormTol)};
    });

    table.push_back(cells);
  }

  out["table"] = table;
  out["matches_expected"] = all_match;
  emit_json(out, a.out_path);
  return all_match ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// kernel estimate
// ---------------------------------------------------------------------------

struct KernelArgs {
  std::string cost_path;
  std::string prior_csv = "0.5,0.5";
  double ladder_top = infocost::kernels::kLadderTop;
  int rungs = infocost::kernels::kLadderRungs;
  bool analytic = false;
  std::string out_path;
};

int run_kernel_estimate(const KernelArgs& a) {
  using namespace infocost;
  const costs::CostFunction cost = io::cost_from_json(io::load_json(a.cost_path));
  const auto prior = parse_belief_csv(a.prior_csv);

  nlohmann::json out;
  if (a.analytic) {
    const auto k = kernels::analytic_kernel(cost, prior);
    out["status"] = "ok";
    out["anchor"] = io::belief_json(prior);
    out["kernel"] = io::matrix_json(k.entries);
    out["experimental_kernel"] =
        io::matrix_json(kernels::experimental_kernel(k).entries);
    emit_json(out, a.out_path);
    return kExitPass;
  }

  const auto est = kernels::estimate_kernel(cost, prior, a.ladder_top,
                                            static_cast<std::size_t>(a.rungs));
  out = io::kernel_json(est);
  if (est.kernel)
    out["experimental_kernel"] =
        io::matrix_json(kernels::experimental_kernel(*est.kernel).entries);
  emit_json(out, a.out_path);
  if (est.status == kernels::KernelEstimate::Status::ok) return kExitPass;
  return kExitInconclusive;
}

// ---------------------------------------------------------------------------
// phi iterate
// ---------------------------------------------------------------------------

struct PhiArgs {
  std::string cost_path;
  int grid_n = 41;
  std::string layout = "uniform";
  double max_log_odds = 4.0;
  double tol = 1e-8;
  int max_iters = 500;
  std::string table_out;
  std::string out_path;
};

infocost::simplex::BeliefGrid make_grid(const std::string& layout, int n,
                                        double max_log_odds) {
  using infocost::simplex::BeliefGrid;
  try {
    if (layout == "uniform")
      return BeliefGrid::uniform(static_cast<std::size_t>(n));
    if (layout == "logit")
      return BeliefGrid::logit(static_cast<std::size_t>(n), max_log_odds);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("schema: ") + e.what());
  }
  throw std::invalid_argument("schema: --grid-layout must be uniform or logit");
}

int run_phi_iterate(const PhiArgs& a) {
  using namespace infocost;
  const costs::CostFunction cost = io::cost_from_json(io::load_json(a.cost_path));
  const auto grid = make_grid(a.layout, a.grid_n, a.max_log_odds);

  auto table = seqlearn::table_from_cost(cost, grid);
  const auto report = seqlearn::phi_iterate(
      table, a.tol, static_cast<std::size_t>(a.max_iters));

  nlohmann::json out = io::iteration_json(report);
  out["cost"] = cost.kind;
  out["grid_nodes"] = a.grid_n;
  out["grid_layout"] = a.layout;
  if (!a.table_out.empty()) {
    io::save_text(a.table_out, io::table_csv(table));
    out["table_csv"] = a.table_out;
  }
  emit_json(out, a.out_path);
  return report.converged ? kExitPass : kExitInconclusive;
}

// ---------------------------------------------------------------------------
// walk
// ---------------------------------------------------------------------------

struct WalkArgs {
  std::string f_spec = "l2";
  double ell = 1.0;
  int n = 12;
  std::string out_path;
};

// Accepts "l2", "l2over1pl", or "pow:<exponent>[:<scale>]".
std::function<double(double)> parse_f_spec(const std::string& spec,
                                           std::string& pretty) {
  if (spec == "l2") {
    pretty = "l^2";
    return [](double l) { return l * l; };
  }
  if (spec == "l2over1pl") {
    pretty = "l^2/(1+l)";
    return [](double l) { return l * l / (1.0 + l); };
  }
  if (spec.rfind("pow:", 0) == 0) {
    std::stringstream ss(spec.substr(4));
    std::string tok;
    std::vector<double> parts;
    while (std::getline(ss, tok, ':')) {
      try {
        parts.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("schema: bad pow spec '" + spec + "'");
      }
    }
    if (parts.empty() || parts.size() > 2 || parts[0] <= 0.0)
      throw std::invalid_argument("schema: bad pow spec '" + spec + "'");
    const double p = parts[0];
    const double scale = parts.size() == 2 ? parts[1] : 1.0;
    if (scale <= 0.0)
      throw std::invalid_argument("schema: pow scale must be positive");
    std::ostringstream name;
    name << scale << "*l^" << p;
    pretty = name.str();
    return [p, scale](double l) { return scale * std::pow(l, p); };
  }
  throw std::invalid_argument("schema: unknown walk function '" + spec + "'");
}

int run_walk(const WalkArgs& a) {
  using namespace infocost;
  std::string pretty;
  const auto f = parse_f_spec(a.f_spec, pretty);
  if (a.n < 0 || a.ell < 0)
    throw std::invalid_argument("schema: walk needs --n >= 0 and --ell >= 0");

  nlohmann::json out;
  out["f"] = pretty;
  out["ell"] = a.ell;
  nlohmann::json values = nlohmann::json::array();
  for (int k = 0; k <= a.n; ++k)
    values.push_back(io::finite_or_tag(
        seqlearn::bernoulli_walk_cost(f, a.ell, static_cast<std::size_t>(k))));
  out["values"] = values;

  const double fpp0 = seqlearn::detail::direct_curvature_at_zero(f);
  out["curvature_at_zero"] = io::finite_or_tag(fpp0);
  out["limit"] =
      io::finite_or_tag(seqlearn::bernoulli_walk_limit(fpp0, a.ell));
  emit_json(out, a.out_path);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// poisson-cover
// ---------------------------------------------------------------------------

struct PoissonArgs {
  std::string experiment_path;
  std::string prior_csv = "0.5,0.5";
  std::string out_path;
};

int run_poisson_cover(const PoissonArgs& a) {
  using namespace infocost;
  const auto sigma = io::experiment_from_json(io::load_json(a.experiment_path));
  const auto prior = parse_belief_csv(a.prior_csv);
  const auto cover = seqlearn::poisson_cover(sigma);

  nlohmann::json out;
  out["lambda_hat"] = io::finite_or_tag(cover.lambda_hat);
  out["cover"] = io::experiment_json(cover.cover);
  const auto tv = costs::tv_cost();
  out["tv_of_original"] = io::finite_or_tag(tv(sigma, prior));
  if (std::isfinite(cover.lambda_hat))
    out["one_minus_exp_lambda"] = 1.0 - std::exp(-cover.lambda_hat);
  out["cover_blackwell_geq_original"] =
      experiments::blackwell_geq(cover.cover, sigma);
  emit_json(out, a.out_path);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------------------

struct PipelineArgs {
  std::string cost_path;
  int grid_n = 41;
  std::string layout = "logit";
  double max_log_odds = 4.0;
  double tol = 1e-8;
  int max_iters = 2000;
  int potential_nodes = 2001;
  int flie_trials = 2000;
  std::int64_t seed = -1;
  std::string table_out;
  std::string out_path;
};

int run_pipeline(const PipelineArgs& a) {
  using namespace infocost;
  const costs::CostFunction cost = io::cost_from_json(io::load_json(a.cost_path));
  const std::uint64_t seed = resolve_seed(a.seed);

  const auto report = seqlearn::compute_indirect(
      cost, static_cast<std::size_t>(a.potential_nodes),
      static_cast<std::size_t>(a.flie_trials), seed);

  nlohmann::json out = io::indirect_json(report);
  out["cost"] = cost.kind;

  if (report.verdict != seqlearn::IndirectReport::Verdict::ups) {
    // Not posterior separable in closed form: fall back to the grid
    // reduction so the caller still gets sequential values.
    const auto grid = make_grid(a.layout, a.grid_n, a.max_log_odds);
    auto table = seqlearn::table_from_cost(cost, grid);
    const auto iter = seqlearn::phi_iterate(
        table, a.tol, static_cast<std::size_t>(a.max_iters));
    out["grid_handoff"] = io::iteration_json(iter);
    out["grid_handoff"]["grid_nodes"] = a.grid_n;
    out["grid_handoff"]["grid_layout"] = a.layout;
    if (!a.table_out.empty()) {
      io::save_text(a.table_out, io::table_csv(table));
      out["grid_handoff"]["table_csv"] = a.table_out;
    }
  }

  emit_json(out, a.out_path);
  return kExitPass;
}

// ---------------------------------------------------------------------------
// experiment validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string experiment_path;
  std::string out_path;
};

int run_experiment_validate(const ValidateArgs& a) {
  using namespace infocost;
  const auto sigma = io::experiment_from_json(io::load_json(a.experiment_path));
  nlohmann::json out;
  out["valid"] = true;
  out["states"] = sigma.states();
  out["signals"] = sigma.signals();
  out["experiment"] = io::experiment_json(sigma);
  emit_json(out, a.out_path);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-cost toolkit"};
  app.require_subcommand(1);

  CostEvalArgs cost_eval_args;
  auto* cost_eval = app.add_subcommand(
      "cost-eval", "evaluate a cost on an experiment or posterior");
  cost_eval->add_option("--cost", cost_eval_args.cost_path, "cost spec (JSON)")
      ->required();
  cost_eval->add_option("--experiment", cost_eval_args.experiment_path,
                        "experiment file (JSON)");
  cost_eval->add_option("--posterior", cost_eval_args.posterior_path,
                        "random posterior file (JSON)");
  cost_eval->add_option("--prior", cost_eval_args.prior_csv,
                        "prior belief, comma separated");
  cost_eval->add_option("--format", cost_eval_args.format, "json");
  cost_eval->add_option("--out", cost_eval_args.out_path, "write result here");

  AxiomsArgs axioms_args;
  auto* axioms_cmd =
      app.add_subcommand("axioms", "sampled axiom checks for one cost");
  axioms_cmd->add_option("--cost", axioms_args.cost_path, "cost spec (JSON)")
      ->required();
  axioms_cmd
      ->add_option("--axiom", axioms_args.axiom,
                   "monotone|subadditive|slp|additive|dilution_linear|cmc|"
                   "prior_invariant|quasimetric|triangle_avg|partition_flatness")
      ->required();
  axioms_cmd->add_option("--trials", axioms_args.trials, "sampled trials");
  axioms_cmd->add_option("--seed", axioms_args.seed, "RNG seed");
  axioms_cmd->add_option("--tol", axioms_args.tol, "violation tolerance");
  axioms_cmd->add_option("--n-states", axioms_args.n_states,
                         "size of the state space");
  axioms_cmd->add_option("--budget", axioms_args.budget,
                         "evaluation budget for --certify");
  axioms_cmd->add_flag("--certify", axioms_args.certify,
                       "run an adversarial search before reporting pass");
  axioms_cmd->add_option("--format", axioms_args.format, "json|table");
  axioms_cmd->add_option("--out", axioms_args.out_path, "write result here");

  TrilemmaArgs trilemma_args;
  auto* trilemma =
      app.add_subcommand("trilemma", "pass/fail pattern of the three families");
  trilemma->add_option("--trials", trilemma_args.trials, "sampled trials");
  trilemma->add_option("--seed", trilemma_args.seed, "RNG seed");
  trilemma->add_option("--budget", trilemma_args.budget,
                       "evaluation budget per violation search");
  trilemma->add_option("--witness-gap", trilemma_args.witness_gap,
                       "minimum certified violation gap");
  trilemma->add_option("--format", trilemma_args.format, "json");
  trilemma->add_option("--out", trilemma_args.out_path, "write result here");

  KernelArgs kernel_args;
  auto* kernel = app.add_subcommand("kernel", "local quadratic forms");
  kernel->require_subcommand(1);
  auto* kernel_estimate = kernel->add_subcommand(
      "estimate", "probe a cost near a prior and fit its kernel");
  kernel_estimate
      ->add_option("--cost", kernel_args.cost_path, "cost spec (JSON)")
      ->required();
  kernel_estimate->add_option("--prior", kernel_args.prior_csv,
                              "anchor belief, comma separated");
  kernel_estimate->add_option("--ladder-top", kernel_args.ladder_top,
                              "largest probe radius");
  kernel_estimate->add_option("--rungs", kernel_args.rungs,
                              "number of probe radii");
  kernel_estimate->add_flag("--analytic", kernel_args.analytic,
                            "use cost metadata instead of probing");
  kernel_estimate->add_option("--out", kernel_args.out_path,
                              "write result here");

  PhiArgs phi_args;
  auto* phi = app.add_subcommand("phi", "sequential-learning reduction");
  phi->require_subcommand(1);
  auto* phi_iterate =
      phi->add_subcommand("iterate", "iterate the one-step operator on a grid");
  phi_iterate->add_option("--cost", phi_args.cost_path, "cost spec (JSON)")
      ->required();
  phi_iterate->add_option("--grid-n", phi_args.grid_n, "grid nodes");
  phi_iterate->add_option("--grid-layout", phi_args.layout, "uniform|logit");
  phi_iterate->add_option("--max-log-odds", phi_args.max_log_odds,
                          "logit grid half-width");
  phi_iterate->add_option("--tol", phi_args.tol, "sup-norm stopping tolerance");
  phi_iterate->add_option("--max-iters", phi_args.max_iters, "iteration cap");
  phi_iterate->add_option("--table-out", phi_args.table_out,
                          "write the converged table as CSV");
  phi_iterate->add_option("--out", phi_args.out_path, "write report here");

  WalkArgs walk_args;
  auto* walk = app.add_subcommand(
      "walk", "halving-walk recursion for a direct log-odds cost");
  walk->add_option("--f", walk_args.f_spec, "l2|l2over1pl|pow:<p>[:<scale>]");
  walk->add_option("--ell", walk_args.ell, "target log-odds");
  walk->add_option("--n", walk_args.n, "number of halvings");
  walk->add_option("--out", walk_args.out_path, "write result here");

  PoissonArgs poisson_args;
  auto* poisson = app.add_subcommand(
      "poisson-cover", "reveal/blank split of a binary experiment");
  poisson
      ->add_option("--experiment", poisson_args.experiment_path,
                   "experiment file (JSON)")
      ->required();
  poisson->add_option("--prior", poisson_args.prior_csv,
                      "prior belief, comma separated");
  poisson->add_option("--out", poisson_args.out_path, "write result here");

  PipelineArgs pipeline_args;
  auto* pipeline = app.add_subcommand(
      "pipeline", "classify an indirect cost, then grid handoff if needed");
  pipeline->add_option("--cost", pipeline_args.cost_path, "cost spec (JSON)")
      ->required();
  pipeline->add_option("--grid-n", pipeline_args.grid_n, "grid nodes");
  pipeline->add_option("--grid-layout", pipeline_args.layout, "uniform|logit");
  pipeline->add_option("--max-log-odds", pipeline_args.max_log_odds,
                       "logit grid half-width");
  pipeline->add_option("--tol", pipeline_args.tol, "stopping tolerance");
  pipeline->add_option("--max-iters", pipeline_args.max_iters, "iteration cap");
  pipeline->add_option("--potential-nodes", pipeline_args.potential_nodes,
                       "nodes for potential integration");
  pipeline->add_option("--flie-trials", pipeline_args.flie_trials,
                       "trials for the lower-envelope check");
  pipeline->add_option("--seed", pipeline_args.seed, "RNG seed");
  pipeline->add_option("--table-out", pipeline_args.table_out,
                       "write the converged table as CSV");
  pipeline->add_option("--out", pipeline_args.out_path, "write report here");

  ValidateArgs validate_args;
  auto* experiment = app.add_subcommand("experiment", "experiment utilities");
  experiment->require_subcommand(1);
  auto* validate =
      experiment->add_subcommand("validate", "parse and sanity-check a file");
  validate
      ->add_option("--experiment", validate_args.experiment_path,
                   "experiment file (JSON)")
      ->required();
  validate->add_option("--out", validate_args.out_path, "write result here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // --help and friends exit cleanly; anything else is a usage error.
    return code == 0 ? kExitPass : kExitSchema;
  }

  try {
    if (cost_eval->parsed()) return run_cost_eval(cost_eval_args);
    if (axioms_cmd->parsed()) return run_axioms(axioms_args);
    if (trilemma->parsed()) return run_trilemma(trilemma_args);
    if (kernel->parsed() && kernel_estimate->parsed())
      return run_kernel_estimate(kernel_args);
    if (phi->parsed() && phi_iterate->parsed())
      return run_phi_iterate(phi_args);
    if (walk->parsed()) return run_walk(walk_args);
    if (poisson->parsed()) return run_poisson_cover(poisson_args);
    if (pipeline->parsed()) return run_pipeline(pipeline_args);
    if (experiment->parsed() && validate->parsed())
      return run_experiment_validate(validate_args);
  } catch (const std::invalid_argument& e) {
    // Schema and argument problems; the message already carries context.
    std::cout << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << '\n';
    return kExitSchema;
  }
  return kExitSchema;
}
