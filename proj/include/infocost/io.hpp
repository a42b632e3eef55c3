#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV interchange: experiments, random posteriors, cost
 *        specifications, axiom reports, kernel estimates, and grid tables.
 *
 * All parsers throw std::invalid_argument with a "schema:" prefix on
 * malformed input.  Serialization uses alphabetically ordered keys (the
 * nlohmann default), so identical inputs produce byte-identical output.
 * Non-finite numbers are encoded as the strings "inf" / "-inf" because JSON
 * has no literal for them.
 */

#include "infocost/axioms.hpp"
#include "infocost/costs.hpp"
#include "infocost/experiments.hpp"
#include "infocost/kernels.hpp"
#include "infocost/posteriors.hpp"
#include "infocost/seqlearn.hpp"
#include "infocost/simplex.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace infocost::io {

using json = nlohmann::json;
using posteriors::Atom;
using posteriors::RandomPosterior;
using simplex::Belief;
using simplex::kPosInf;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what) {
  throw std::invalid_argument("schema: " + what);
}

inline json finite_or_tag(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : "-inf";
}

inline double number_or_tag(const json& j, const char* field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kPosInf;
    if (s == "-inf") return -kPosInf;
  }
  schema_error(std::string(field) + " must be a number or \"inf\"/\"-inf\"");
}

inline const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field))
    schema_error(std::string("missing field \"") + field + "\"");
  return j.at(field);
}

}  // namespace detail

/// Extended-real number → JSON: ±∞ become the strings "inf" / "-inf".
inline json finite_or_tag(double x) { return detail::finite_or_tag(x); }

// ===================== Matrices and beliefs =====================

inline json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array())
    detail::schema_error("matrix must be a non-empty array of rows");
  const std::size_t rows = j.size(), cols = j.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      detail::schema_error("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) detail::schema_error("matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

inline json belief_json(const Belief& b) { return json(b.probs()); }

inline Belief belief_from_json(const json& j) {
  if (!j.is_array() || j.size() < 2) detail::schema_error("belief must be an array of >= 2 numbers");
  std::vector<double> v;
  for (const json& x : j) {
    if (!x.is_number()) detail::schema_error("belief entries must be numbers");
    v.push_back(x.get<double>());
  }
  try {
    return Belief(std::move(v));
  } catch (const std::exception& e) {
    detail::schema_error(std::string("invalid belief: ") + e.what());
  }
}

// ===================== Experiments =====================

inline json experiment_json(const experiments::Experiment& e) {
  return json{{"states", e.state_labels()},
              {"signals", e.signal_labels()},
              {"channel", matrix_json(e.channel())}};
}

inline experiments::Experiment experiment_from_json(const json& j) {
  const Eigen::MatrixXd ch = matrix_from_json(detail::require(j, "channel"));
  try {
    if (j.contains("states") || j.contains("signals")) {
      std::vector<std::string> states =
          detail::require(j, "states").get<std::vector<std::string>>();
      std::vector<std::string> signals =
          detail::require(j, "signals").get<std::vector<std::string>>();
      return experiments::Experiment(std::move(states), std::move(signals), ch);
    }
    return experiments::Experiment(ch);
  } catch (const std::invalid_argument& e) {
    detail::schema_error(std::string("invalid experiment: ") + e.what());
  }
}

// ===================== Random posteriors =====================

inline json posterior_json(const RandomPosterior& pi) {
  json atoms = json::array();
  for (const Atom& a : pi.atoms()) atoms.push_back(json{{"w", a.w}, {"q", belief_json(a.q)}});
  return json{{"atoms", std::move(atoms)}};
}

inline RandomPosterior posterior_from_json(const json& j) {
  const json& arr = detail::require(j, "atoms");
  if (!arr.is_array() || arr.empty()) detail::schema_error("\"atoms\" must be a non-empty array");
  std::vector<Atom> atoms;
  for (const json& a : arr) {
    const json& w = detail::require(a, "w");
    if (!w.is_number()) detail::schema_error("atom weight must be a number");
    atoms.push_back(Atom{w.get<double>(), belief_from_json(detail::require(a, "q"))});
  }
  try {
    return RandomPosterior(std::move(atoms));
  } catch (const std::exception& e) {
    detail::schema_error(std::string("invalid posterior: ") + e.what());
  }
}

// ===================== Cost specifications =====================

/**
 * Build a cost from {"kind": ..., "params": {...}}.  Supported kinds:
 *   mi               params: n_states (default 2)
 *   ti               params: gamma (square matrix, required)
 *   llr              params: beta (square matrix, required)
 *   wald | mlr | tv  params: none
 *   ups              params: potential "wald"|"neg_entropy", scale (default 1),
 *                            n_states (neg_entropy only, default 2)
 *   bernoulli_direct params: power (default 2), scale (default 1):
 *                            f(ell) = scale * ell^power
 *   poisson_direct   params: none
 *   pie              params: base (cost spec), n_priors, seed
 *   combine          params: weights (array), components (array of cost specs)
 *   experiment_ti    params: gamma (required)
 *   experiment_mlr   params: none
 */
inline costs::CostFunction cost_from_json(const json& j) {
  const json& kj = detail::require(j, "kind");
  if (!kj.is_string()) detail::schema_error("\"kind\" must be a string");
  const std::string kind = kj.get<std::string>();
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (!params.is_object()) detail::schema_error("\"params\" must be an object");

  try {
    if (kind == "mi") {
      const std::size_t n =
          params.contains("n_states") ? params.at("n_states").get<std::size_t>() : 2;
      return costs::mi_cost(n);
    }
    if (kind == "ti") return costs::ti_cost(matrix_from_json(detail::require(params, "gamma")));
    if (kind == "llr") return costs::llr_cost(matrix_from_json(detail::require(params, "beta")));
    if (kind == "wald") return costs::wald_cost();
    if (kind == "mlr") return costs::mlr_cost();
    if (kind == "tv") return costs::tv_cost();
    if (kind == "ups") {
      const std::string which = detail::require(params, "potential").get<std::string>();
      const double scale = params.contains("scale") ? params.at("scale").get<double>() : 1.0;
      costs::Potential base;
      if (which == "wald")
        base = costs::wald_potential();
      else if (which == "neg_entropy")
        base = costs::mi_potential(params.contains("n_states")
                                       ? params.at("n_states").get<std::size_t>()
                                       : 2);
      else
        detail::schema_error("ups potential must be \"wald\" or \"neg_entropy\"");
      costs::Potential H;
      H.name = base.name + "-scaled";
      auto inner = std::make_shared<costs::Potential>(std::move(base));
      H.value = [inner, scale](const Belief& p) {
        return simplex::ext_scale(scale, inner->value(p));
      };
      if (inner->hessian)
        H.hessian = [inner, scale](const Belief& p) {
          return simplex::KernelMatrix(p, inner->hessian(p).entries * scale);
        };
      return costs::ups_cost(std::move(H));
    }
    if (kind == "bernoulli_direct") {
      const double power = params.contains("power") ? params.at("power").get<double>() : 2.0;
      const double scale = params.contains("scale") ? params.at("scale").get<double>() : 1.0;
      if (!(power > 0.0) || !(scale > 0.0))
        detail::schema_error("bernoulli_direct needs power > 0 and scale > 0");
      return costs::bernoulli_direct(
          [power, scale](double ell) { return scale * std::pow(ell, power); });
    }
    if (kind == "poisson_direct") return costs::poisson_direct();
    if (kind == "pie") {
      costs::CostFunction base = cost_from_json(detail::require(params, "base"));
      const std::size_t n_priors =
          params.contains("n_priors") ? params.at("n_priors").get<std::size_t>() : 200;
      const std::uint64_t seed =
          params.contains("seed") ? params.at("seed").get<std::uint64_t>() : 271828;
      return costs::pie(std::move(base), n_priors, seed);
    }
    if (kind == "combine") {
      const json& wj = detail::require(params, "weights");
      const json& cj = detail::require(params, "components");
      if (!wj.is_array() || !cj.is_array() || wj.size() != cj.size() || wj.empty())
        detail::schema_error("combine needs equal-length non-empty weights/components");
      std::vector<double> weights;
      for (const json& w : wj) weights.push_back(w.get<double>());
      std::vector<costs::CostFunction> parts;
      for (const json& c : cj) parts.push_back(cost_from_json(c));
      std::vector<double> grad0 = weights;
      return costs::combine(
          [weights](const std::vector<double>& vals) {
            double s = 0.0;
            for (std::size_t i = 0; i < vals.size(); ++i) s += weights[i] * vals[i];
            return s;
          },
          std::move(grad0), std::move(parts));
    }
    if (kind == "experiment_ti")
      return costs::experiment_ti(matrix_from_json(detail::require(params, "gamma")));
    if (kind == "experiment_mlr") return costs::experiment_mlr();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.rfind("schema:", 0) == 0) throw;
    detail::schema_error("invalid cost parameters: " + msg);
  } catch (const json::exception& e) {
    detail::schema_error(std::string("invalid cost parameters: ") + e.what());
  }
  detail::schema_error("unknown cost kind \"" + kind + "\"");
}

// ===================== Reports =====================

inline json report_json(const axioms::AxiomReport& r) {
  return json{{"axiom", r.axiom},
              {"seed", r.seed},
              {"tol", r.tol},
              {"trials", r.trials},
              {"verdict", axioms::to_string(r.verdict)},
              {"witness", r.witness},
              {"worst_violation", detail::finite_or_tag(r.worst_violation)}};
}

/// Fixed-width text rendering of axiom reports.
inline std::string report_table(const std::vector<axioms::AxiomReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "axiom" << std::setw(14) << "verdict" << std::setw(10)
     << "trials" << std::setw(16) << "worst" << "witness\n";
  for (const axioms::AxiomReport& r : reports) {
    std::ostringstream worst;
    worst << std::setprecision(6) << r.worst_violation;
    os << std::left << std::setw(18) << r.axiom << std::setw(14) << axioms::to_string(r.verdict)
       << std::setw(10) << r.trials << std::setw(16) << worst.str()
       << (r.witness.empty() ? "-" : r.witness) << "\n";
  }
  return os.str();
}

inline json kernel_json(const kernels::KernelEstimate& est) {
  json j{{"loglog_slope", est.loglog_slope},
         {"residual", est.residual},
         {"status", est.status == kernels::KernelEstimate::Status::ok       ? "ok"
                    : est.status == kernels::KernelEstimate::Status::kinked ? "kinked"
                                                                            : "off_domain"},
         {"step_ladder", est.step_ladder}};
  if (est.kernel) {
    j["anchor"] = belief_json(est.kernel->anchor);
    j["kernel"] = matrix_json(est.kernel->entries);
  }
  return j;
}

inline json iteration_json(const seqlearn::IterationReport& rep) {
  return json{{"converged", rep.converged},
              {"iterations", rep.iterations},
              {"sup_change", detail::finite_or_tag(rep.sup_change)}};
}

inline json indirect_json(const seqlearn::IndirectReport& rep) {
  json j{{"notes", rep.notes}, {"verdict", seqlearn::to_string(rep.verdict)}};
  if (rep.kernel) j["kernel"] = kernel_json(*rep.kernel);
  if (rep.flie) j["flie"] = report_json(*rep.flie);
  return j;
}

// ===================== Grid tables =====================

/// CSV rows (lo, hi, prior, value) over every target lo <= prior <= hi,
/// keyed by node probabilities; +∞ renders as "inf".
inline std::string table_csv(const seqlearn::GridCostTable& t) {
  std::ostringstream os;
  os << "lo,hi,prior,value\n" << std::setprecision(17);
  const std::size_t n = t.n();
  for (std::size_t lo = 0; lo < n; ++lo)
    for (std::size_t hi = lo; hi < n; ++hi)
      for (std::size_t p = lo; p <= hi; ++p) {
        const double v = t.at(lo, hi, p);
        os << t.grid().x(lo) << "," << t.grid().x(hi) << "," << t.grid().x(p) << ",";
        if (std::isfinite(v))
          os << v << "\n";
        else
          os << "inf\n";
      }
  return os.str();
}

// ===================== Files =====================

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    detail::schema_error(std::string("parse failure in ") + path + ": " + e.what());
  }
}

inline void save_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

}  // namespace infocost::io
