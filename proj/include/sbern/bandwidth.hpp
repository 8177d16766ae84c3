#pragma once

#include <string>
#include <vector>

#include "sbern/estimators.hpp"

namespace sbern {

/// Least-squares cross-validation score for the density estimator at order m:
///   LSCV(m) = int fhat^2  -  (2/n) sum_i fhat^{(-i)}(X_i),
/// where the first term is evaluated exactly as a quadratic form over the
/// occupied bins (the pairwise lattice integral of the weight products) and
/// the second uses the O(1) leave-one-out downdate.  Smaller is better.
double lscv_score(const dataset& data, int m);

/// The exact integral term of the LSCV score, sum_{k,l} p_k p_l I_{k,l}; always
/// >= 0 since it equals int fhat^2.
double lscv_quadratic_term(const density_model& model);

/// Likelihood cross-validation score: n^{-1} sum_i log fhat^{(-i)}(X_i);
/// -inf as soon as one held-out density vanishes (including by underflow).
/// Larger is better.
double lcv_score(const dataset& data, int m);

struct selection_result {
  std::string method;          // "lscv" | "lcv"
  std::vector<long> grid;      // candidate orders, ascending
  std::vector<double> scores;  // aligned with grid; -inf excluded from argmax
  long chosen_m = 0;
  std::string to_json() const;
};

/// Evaluates the requested score over the grid and picks the extremal entry
/// (ties broken toward smaller m); an all--inf LCV grid is an error.  When the
/// grid is empty the default is used: about 24 geometrically spaced orders
/// from 2 to ceil(4 n^{2/(d+4)}).
selection_result select_bandwidth(const dataset& data, const std::string& method,
                                  std::vector<long> grid = {}, int workers = 1);

std::vector<long> default_bandwidth_grid(long n, int d, int count = 24);

/// Geometrically spaced integer grid from lo to hi inclusive (duplicates after
/// rounding dropped); the building block behind the default grid and the CLI
/// min/max/count knobs.
std::vector<long> geometric_grid(long lo, long hi, int count);

}  // namespace sbern
