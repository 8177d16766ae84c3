#pragma once

#include <span>
#include <vector>

namespace sbern {

/// log(n!) from a table built once with extended precision; falls back to
/// lgamma for arguments beyond the table. n >= 0.
double log_factorial(long n);

/// log C(n, k); returns -inf for k < 0 or k > n.
double log_binomial(long n, long k);

/// Exact C(n, k) in 64-bit integer arithmetic; throws on overflow.
unsigned long long binomial_exact(int n, int k);

/// Regularized incomplete beta I_x(a, b) (Beta(a,b) CDF at x).
double beta_cdf(double a, double b, double x);

/// Standard normal CDF and quantile (quantile via erfc_inv).
double normal_cdf(double z);
double normal_quantile(double u);

/// Multinomial weight evaluator for fixed (trials, x): repeated k-queries share
/// the per-x log terms. x lies in the closed simplex (coordinates may be 0 and
/// may sum to 1); weights at such boundary points degenerate correctly.
class multinomial_pmf {
 public:
  multinomial_pmf(int trials, std::span<const double> x);

  int trials() const { return trials_; }
  int dim() const { return static_cast<int>(logx_.size()); }

  /// log P_{k,trials}(x); requires k_i >= 0 and sum(k) <= trials.
  double log_pmf(std::span<const int> k) const;
  double pmf(std::span<const int> k) const;

 private:
  int trials_;
  std::vector<double> logx_;  // log x_i, -inf allowed
  double log_rem_;            // log(1 - sum x)
  double log_fact_m_;         // log trials!
};

/// Dirichlet density D(alpha, beta) on the d-simplex, log scale:
///   log Gamma(beta + sum alpha) - log Gamma(beta) - sum log Gamma(alpha_i)
///   + sum (alpha_i - 1) log x_i + (beta - 1) log(1 - sum x).
/// Boundary points: exponent 0 contributes nothing, positive exponent gives
/// -inf (density 0), negative exponent gives +inf (integrable singularity);
/// callers integrating numerically must treat non-finite values as errors.
double dirichlet_log_density(std::span<const double> alpha, double beta,
                             std::span<const double> x);

/// Simplex moment integral  int_S (1-|x|_1)^b prod x_i^{a_i} dx
///   = b! prod a_i! / (b + sum a_i + d)!          (a_i, b nonnegative integers)
/// Exact integer arithmetic while b + sum a + d <= 33 (fits __int128),
/// log-space beyond.
double dirichlet_moment_integral(std::span<const int> a, int b);

}  // namespace sbern
