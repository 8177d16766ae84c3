#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "sbern/simplex.hpp"

namespace sbern {

/// Bernstein polynomial of order m of an arbitrary function on the simplex:
///   sum_{|k|_1 <= m} g(k/m) P_{k,m}(x),  P the multinomial weights.
double bernstein_poly(const std::function<double(std::span<const double>)>& g, int m,
                      std::span<const double> x);

/// Smoothed empirical CDF: the Bernstein polynomial of order m of F_n.
/// F_n(k/m) is precomputed on the lattice at construction (exact integer
/// counts); evaluation anywhere on the closed simplex is a weighted lattice
/// sum with compensated accumulation.
class cdf_model {
 public:
  cdf_model(dataset data, int m);

  int order() const { return m_; }
  int dim() const { return data_.dim(); }
  long sample_size() const { return data_.size(); }
  const dataset& data() const { return data_; }
  const std::vector<double>& lattice_values() const { return memo_; }

  double operator()(std::span<const double> x) const;

 private:
  dataset data_;
  int m_;
  std::vector<double> memo_;  // F_n(k/m), lexicographic lattice order
};

/// Histogram-weighted Bernstein density: occupied bins only, stored as a
/// sorted structure-of-arrays over lattice multi-indices.
class density_model {
 public:
  density_model(const dataset& data, int m);

  int order() const { return m_; }
  int dim() const { return d_; }
  long sample_size() const { return n_; }

  struct bin {
    std::vector<int> k;
    long count;
    double p;
  };
  std::vector<bin> bins() const;

  /// Number of occupied bins.
  long occupied() const { return static_cast<long>(counts_.size()); }

  /// Histogram-polynomial form:
  ///   ((m-1+d)!/(m-1)!) sum_k p_k P_{k,m-1}(x).
  double operator()(std::span<const double> x) const;

  /// Dirichlet-mixture form: sum_k p_k D(k+1, m-|k|_1)(x); must agree with the
  /// polynomial form to ~1e-10 on interior points (cross-check surface).
  double eval_dirichlet_form(std::span<const double> x) const;

  /// Log of the polynomial form (log-sum-exp; -inf where the density is 0 or
  /// underflows).
  double log_eval(std::span<const double> x) const;

  /// Leave-one-out evaluation without refitting: removing observation i
  /// removes one count from its bin.
  double loo_eval(std::span<const double> x, std::span<const int> bin_of_i) const;

  /// Rebuild from serialized bins (deserialization path).
  static density_model from_bins(int m, int d, long n, std::vector<bin> bins);

  // flat accessors for hot loops
  const std::vector<int>& flat_index() const { return idx_; }
  const std::vector<long>& counts() const { return counts_; }
  const std::vector<int>& index_sums() const { return sums_; }
  double scale_log() const { return scale_log_; }

 private:
  density_model() = default;
  void finalize();

  int m_ = 0, d_ = 0;
  long n_ = 0;
  std::vector<int> idx_;     // occupied bin multi-indices, row-major, sorted lexicographically
  std::vector<long> counts_; // per occupied bin
  std::vector<int> sums_;    // |k|_1 per occupied bin
  double scale_log_ = 0.0;   // log((m-1+d)!/(m-1)!)
};

/// Leave-one-out density from scratch: refit-equivalent evaluation used by the
/// cross-validation scores.
double loo_density(const dataset& data, long leave_out, int m, std::span<const double> x);

cdf_model fit_cdf(dataset data, int m);
density_model fit_density(const dataset& data, int m);

}  // namespace sbern
