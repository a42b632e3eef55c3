// SPDX-License-Identifier: MIT
//
// Shared test fixtures and frozen reference values.
//
// Every constant below was computed independently of the library (exact
// closed forms evaluated in extended precision, or high-resolution numeric
// oracles) and is frozen to 17 significant digits.  Tests compare library
// output against these values; they must never be regenerated from the
// library itself.
#pragma once

#include <cmath>
#include <vector>

#include "infocost/costs.hpp"
#include "infocost/experiments.hpp"
#include "infocost/posteriors.hpp"
#include "infocost/simplex.hpp"

namespace fixtures {

// --------------------------------------------------------------------------
// Frozen scalars
// --------------------------------------------------------------------------

/// logistic(1) = e/(1+e).
inline constexpr double kLogistic1 = 0.73105857863000488;

/// KL between the rows of the symmetric binary channel with log-odds step 1;
/// equals 1·tanh(1/2) and also the scaled-log-odds potential at logistic(1).
inline constexpr double kKlStep1 = 0.46211715726000976;

/// Mutual information of that channel at the uniform prior.
inline constexpr double kMiStep1 = 0.11094407167172735;

/// Sum of both row KLs of the same channel (= 2·tanh(1/2)).
inline constexpr double kLlrStep1 = 0.92423431452001952;

/// Wald cost of the asymmetric channel {(0.7,0.3),(0.2,0.8)} at prior (½,½).
inline constexpr double kWaldAsym = 0.55839805537677356;

/// Row KLs of the asymmetric channel.
inline constexpr double kKlAsym01 = 0.58268530204323973;
inline constexpr double kKlAsym10 = 0.53411080871030739;

/// Halving-walk values for f(l) = l² at l = 1, n = 0..3, and the n→∞ limit
/// f″(0)·l·tanh(l/2) = 2·tanh(1/2).
inline constexpr double kWalk0 = 1.0;
inline constexpr double kWalk1 = 0.94340944198503695;
inline constexpr double kWalk2 = 0.92904302806617721;
inline constexpr double kWalk3 = 0.92543743134034058;
inline constexpr double kWalkLimit = 0.92423431452001952;

/// Ternary fixture, channel rows (0.6,0.3,0.1)/(0.2,0.5,0.3)/(0.1,0.2,0.7),
/// prior (0.3,0.4,0.3).
inline constexpr double kTernaryTiAdjacent = 0.5041220223864271;
inline constexpr double kTernaryTiAllPairs = 1.1353137228438368;
inline constexpr double kTernaryMlr = 0.6;
inline constexpr double kTernaryMi = 0.17242526708065492;

/// LLR cost (unit off-diagonal weights) of the asymmetric channel; prior-free.
inline constexpr double kLlrAsym = 1.1167961107535471;

/// Wald curvature 1/(x²(1−x)²) at x = 0.3.
inline constexpr double kWaldCurvature03 = 22.675736961451247;

// --------------------------------------------------------------------------
// Builders
// --------------------------------------------------------------------------

/// Symmetric binary channel with log-odds step `ell`: rows (a,1−a)/(1−a,a)
/// with a = logistic(ell).
inline infocost::experiments::Experiment bernoulli_experiment(double ell) {
  const double a = 1.0 / (1.0 + std::exp(-ell));
  Eigen::MatrixXd ch(2, 2);
  ch << a, 1.0 - a, 1.0 - a, a;
  return infocost::experiments::Experiment(std::move(ch));
}

/// The asymmetric binary channel used throughout: rows (0.7,0.3)/(0.2,0.8).
inline infocost::experiments::Experiment asym_experiment() {
  Eigen::MatrixXd ch(2, 2);
  ch << 0.7, 0.3, 0.2, 0.8;
  return infocost::experiments::Experiment(std::move(ch));
}

/// Ternary channel rows (0.6,0.3,0.1)/(0.2,0.5,0.3)/(0.1,0.2,0.7).
inline infocost::experiments::Experiment ternary_experiment() {
  Eigen::MatrixXd ch(3, 3);
  ch << 0.6, 0.3, 0.1, 0.2, 0.5, 0.3, 0.1, 0.2, 0.7;
  return infocost::experiments::Experiment(std::move(ch));
}

inline infocost::simplex::Belief ternary_prior() {
  return infocost::simplex::Belief({0.3, 0.4, 0.3});
}

/// ½δ_a + ½δ_{1−a} (barycenter ½): the image of a symmetric binary channel.
inline infocost::posteriors::RandomPosterior symmetric_pair(double a) {
  using infocost::posteriors::Atom;
  using infocost::simplex::binary_belief;
  return infocost::posteriors::RandomPosterior(
      {Atom{0.5, binary_belief(a)}, Atom{0.5, binary_belief(1.0 - a)}});
}

/// Full revelation of a binary state with prior (1−p, p) in x-coordinates.
inline infocost::posteriors::RandomPosterior full_revelation_binary(double x) {
  using infocost::posteriors::Atom;
  using infocost::simplex::binary_belief;
  return infocost::posteriors::RandomPosterior(
      {Atom{1.0 - x, binary_belief(0.0)}, Atom{x, binary_belief(1.0)}});
}

/// Two-atom binary posterior supported on {x_lo, x_hi} with barycenter x_p.
inline infocost::posteriors::RandomPosterior binary_pair(double x_lo,
                                                         double x_hi,
                                                         double x_p) {
  using infocost::posteriors::Atom;
  using infocost::simplex::binary_belief;
  const double w_hi = (x_p - x_lo) / (x_hi - x_lo);
  return infocost::posteriors::RandomPosterior(
      {Atom{1.0 - w_hi, binary_belief(x_lo)}, Atom{w_hi, binary_belief(x_hi)}});
}

/// Closed-form minimal-learning value of a binary two-atom posterior:
/// (x_p−x_lo)(x_hi−x_p) / [(x_hi−x_lo)·x_p·(1−x_p)].
inline double tv_closed_form(double x_lo, double x_hi, double x_p) {
  return (x_p - x_lo) * (x_hi - x_p) / ((x_hi - x_lo) * x_p * (1.0 - x_p));
}

/// Scaled-log-odds potential (2x−1)·log(x/(1−x)).
inline double wald_potential_value(double x) {
  return (2.0 * x - 1.0) * std::log(x / (1.0 - x));
}

}  // namespace fixtures
