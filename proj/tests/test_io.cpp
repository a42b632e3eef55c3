// SPDX-License-Identifier: MIT
//
// JSON serialization, cost-spec parsing, report rendering, and CSV export.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "fixtures.hpp"
#include "infocost/io.hpp"

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using namespace infocost;
using nlohmann::json;

namespace {

json parse(const char* text) { return json::parse(text); }

}  // namespace

TEST_CASE("belief round trip") {
  const simplex::Belief b({0.3, 0.7});
  const json j = io::belief_json(b);
  const simplex::Belief back = io::belief_from_json(j);
  CHECK_THAT(back[0], WithinAbs(0.3, 1e-15));
  CHECK_THROWS_WITH(io::belief_from_json(parse("[0.5]")), ContainsSubstring("schema"));
  CHECK_THROWS_WITH(io::belief_from_json(parse("{\"p\":1}")), ContainsSubstring("schema"));
}

TEST_CASE("experiment round trip preserves labels and channel") {
  const auto sigma = fixtures::asym_experiment();
  const json j = io::experiment_json(sigma);
  const auto back = io::experiment_from_json(j);
  CHECK(back.states() == 2);
  CHECK(back.signals() == 2);
  CHECK_THAT(back.channel()(0, 0), WithinAbs(0.7, 1e-15));
  CHECK(back.signal_labels() == sigma.signal_labels());

  // Labels are optional: a channel-only spec gets defaults sized correctly.
  const auto bare = io::experiment_from_json(parse(
      R"({"channel": [[0.7, 0.3], [0.2, 0.8]]})"));
  CHECK(bare.states() == 2);
  CHECK(bare.signals() == 2);
  CHECK(bare.state_labels()[1] == "1");

  CHECK_THROWS_WITH(io::experiment_from_json(parse(R"({"channel": [[0.7, 0.3], [0.2]]})")),
                    ContainsSubstring("schema"));
}

TEST_CASE("posterior round trip") {
  const auto pi = fixtures::binary_pair(0.2, 0.8, 0.5);
  const auto back = io::posterior_from_json(io::posterior_json(pi));
  REQUIRE(back.atoms().size() == 2);
  CHECK_THAT(back.barycenter()[1], WithinAbs(0.5, 1e-12));
  CHECK_THROWS_WITH(io::posterior_from_json(parse(R"({"atoms": []})")),
                    ContainsSubstring("schema"));
}

TEST_CASE("cost specs construct every catalog entry") {
  struct Case {
    const char* text;
    const char* kind;
  };
  const Case cases[] = {
      {R"({"kind": "mi"})", "mi"},
      {R"({"kind": "ti", "params": {"gamma": [[0, 1], [1, 0]]}})", "ti"},
      {R"({"kind": "llr", "params": {"beta": [[0, 1], [1, 0]]}})", "llr"},
      {R"({"kind": "wald"})", "wald"},
      {R"({"kind": "mlr"})", "mlr"},
      {R"({"kind": "tv"})", "tv"},
      {R"({"kind": "ups", "params": {"potential": "wald", "scale": 0.5}})", "ups"},
      {R"({"kind": "bernoulli_direct", "params": {"power": 2}})", "bernoulli_direct"},
      {R"({"kind": "poisson_direct"})", "poisson_direct"},
      {R"({"kind": "pie", "params": {"base": {"kind": "wald"}}})", "pie"},
      {R"({"kind": "experiment_ti", "params": {"gamma": [[0, 1], [1, 0]]}})",
       "experiment_ti"},
      {R"({"kind": "experiment_mlr"})", "experiment_mlr"},
  };
  for (const auto& c : cases) {
    const auto C = io::cost_from_json(parse(c.text));
    INFO(c.text);
    CHECK(C.kind == c.kind);
  }

  // Spot value: the parsed log-odds cost matches the frozen reference.
  const auto wald = io::cost_from_json(parse(R"({"kind": "wald"})"));
  CHECK_THAT(wald(fixtures::asym_experiment(), simplex::binary_belief(0.5)),
             WithinAbs(fixtures::kWaldAsym, 1e-12));

  // Scaled separable costs scale values.
  const auto half = io::cost_from_json(
      parse(R"({"kind": "ups", "params": {"potential": "wald", "scale": 0.5}})"));
  CHECK_THAT(half(fixtures::asym_experiment(), simplex::binary_belief(0.5)),
             WithinAbs(0.5 * fixtures::kWaldAsym, 1e-12));

  const auto combo = io::cost_from_json(parse(
      R"({"kind": "combine", "params": {"weights": [2, 3],
          "components": [{"kind": "mi"}, {"kind": "wald"}]}})"));
  CHECK(combo.kind == "combine");
  REQUIRE(combo.components.size() == 2);
  const auto pi = fixtures::symmetric_pair(fixtures::kLogistic1);
  CHECK_THAT(combo(pi), WithinAbs(2.0 * fixtures::kMiStep1 + 3.0 * fixtures::kKlStep1, 1e-12));
}

TEST_CASE("cost specs reject malformed input with schema errors") {
  CHECK_THROWS_WITH(io::cost_from_json(parse(R"({"kind": "free_lunch"})")),
                    ContainsSubstring("schema"));
  CHECK_THROWS_WITH(io::cost_from_json(parse(R"({"params": {}})")),
                    ContainsSubstring("schema"));
  CHECK_THROWS_WITH(io::cost_from_json(parse(R"({"kind": "ti"})")),
                    ContainsSubstring("schema"));  // gamma required
  CHECK_THROWS_WITH(io::cost_from_json(parse(
                        R"({"kind": "ti", "params": {"gamma": [[0, 1], [1]]}})")),
                    ContainsSubstring("schema"));
  CHECK_THROWS_WITH(io::cost_from_json(parse(
                        R"({"kind": "combine", "params": {"weights": [1],
                            "components": []}})")),
                    ContainsSubstring("schema"));
  CHECK_THROWS_AS(io::cost_from_json(parse(
                      R"({"kind": "bernoulli_direct", "params": {"power": -1}})")),
                  std::invalid_argument);
}

TEST_CASE("reports render to JSON and a fixed-width table") {
  axioms::AxiomReport r;
  r.axiom = "monotone";
  r.trials = 100;
  r.worst_violation = simplex::kPosInf;
  r.witness = "w";
  r.verdict = axioms::Verdict::pass;
  r.seed = 9;
  r.tol = 1e-9;

  const json j = io::report_json(r);
  CHECK(j["axiom"] == "monotone");
  CHECK(j["worst_violation"] == "inf");
  CHECK(j["verdict"] == "pass");
  CHECK(j["seed"] == 9);

  const std::string table = io::report_table({r});
  CHECK_THAT(table, ContainsSubstring("monotone"));
  CHECK_THAT(table, ContainsSubstring("pass"));
}

TEST_CASE("finite_or_tag marks infinities") {
  CHECK(io::finite_or_tag(1.5) == json(1.5));
  CHECK(io::finite_or_tag(simplex::kPosInf) == json("inf"));
  CHECK(io::finite_or_tag(-simplex::kPosInf) == json("-inf"));
}

TEST_CASE("kernel estimates serialize with status and ladder") {
  const auto est = kernels::estimate_kernel(costs::wald_cost(), simplex::binary_belief(0.5));
  const json j = io::kernel_json(est);
  CHECK(j["status"] == "ok");
  CHECK(j.contains("kernel"));
  CHECK(j.contains("anchor"));
  CHECK(j["step_ladder"].is_array());

  const auto kinked = kernels::estimate_kernel(costs::mlr_cost(), simplex::binary_belief(0.5));
  const json jk = io::kernel_json(kinked);
  CHECK(jk["status"] == "kinked");
  CHECK_FALSE(jk.contains("kernel"));
}

TEST_CASE("grid tables export as CSV with inf markers") {
  const auto grid = simplex::BeliefGrid::uniform(5);
  seqlearn::GridCostTable t(grid);
  t.set(0, 4, 2, 1.0);
  const std::string csv = io::table_csv(t);
  CHECK(csv.rfind("lo,hi,prior,value", 0) == 0);
  CHECK_THAT(csv, ContainsSubstring("inf"));
  CHECK_THAT(csv, ContainsSubstring("0,1,0.5,1"));

  // One data line per (lo ≤ p ≤ hi) triple.
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  std::size_t expect = 0;
  for (std::size_t lo = 0; lo < 5; ++lo)
    for (std::size_t hi = lo; hi < 5; ++hi) expect += hi - lo + 1;
  CHECK(lines == expect + 1);  // + header
}

TEST_CASE("load_json distinguishes missing files from bad syntax") {
  CHECK_THROWS_AS(io::load_json("/nonexistent/path.json"), std::runtime_error);

  const std::string path = "io_test_bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_WITH(io::load_json(path), ContainsSubstring("schema"));
  std::remove(path.c_str());

  const std::string good = "io_test_good.json";
  {
    std::ofstream out(good);
    out << R"({"kind": "wald"})";
  }
  CHECK(io::load_json(good)["kind"] == "wald");
  io::save_text(good, "payload");
  std::ifstream in(good);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "payload");
  std::remove(good.c_str());
}
