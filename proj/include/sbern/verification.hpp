#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sbern {

/// Max_i |sum_k (k_i/m - x_i) P_{k,m}(x)|; identically 0 in exact arithmetic.
double multinomial_mean_residual(int m, std::span<const double> x);

/// Max_ij |sum_k (k_i/m - x_i)(k_j/m - x_j) P_{k,m}(x) - m^{-1}(x_i 1{i=j} - x_i x_j)|.
double multinomial_cov_residual(int m, std::span<const double> x);

/// Scaled lattice power sums of the multinomial weights at an interior x:
///   p=2: r^{d/2} sum_k P^2   ->  [(4 pi)^d prod x_i (1-|x|_1)]^{-1/2}
///   p=3: r^d    sum_k P^3   ->  [(2 sqrt(3) pi)^d prod x_i (1-|x|_1)]^{-1}
double pmf_power_sum(int r, std::span<const double> x, int p);
double pmf_power_limit(std::span<const double> x, int p);

/// R_{i,r}(x) = r^{1/2} sum_{k,l} ((k_i ^ l_i)/r - x_i) P_k P_l, reduced to the
/// i-th binomial marginal (O(r) after prefix sums); bounded by 1 in absolute
/// value, with limit -sqrt(x_i(1-x_i)/pi).
double min_coordinate_sum(int r, double xi);
double min_coordinate_limit(double xi);

/// int_S sum_k P_{k,r}^2 dx: term-by-term via the simplex moment integral,
/// and the closed form 2^{-d} sqrt(pi) Gamma(r+1) / (Gamma(d/2+1/2) Gamma(r+d/2+1)).
double squared_pmf_integral_sum(int r, int d);
double squared_pmf_integral_closed(int r, int d);

/// int_S psi(x) dx = 2^{-d} sqrt(pi) / Gamma(d/2 + 1/2).
double psi_integral_closed(int d);

/// Gaussian limit density phi_{Sigma_x}(y), Sigma_x = diag(x) - x x^T, via the
/// closed-form inverse (diag(1/x) + J/(1-|x|_1)) and via a Cholesky
/// factorization; the two determinant routes must agree to ~1e-10.
double gaussian_limit_density(std::span<const double> x, std::span<const double> y);
double gaussian_limit_density_chol(std::span<const double> x, std::span<const double> y);
double simplex_covariance_det_closed(std::span<const double> x);
double simplex_covariance_det_chol(std::span<const double> x);

/// Bernstein inequality envelope 2 exp(-(t^2/2)/(variance_sum + b t / 3)).
double bernstein_tail_bound(double variance_sum, double b, double t);

/// One executed lemma check with its tolerance verdict.
struct lemma_check {
  std::string id;
  bool pass;
  double observed;
  double expected;
  double tolerance;  // |observed - expected| budget (absolute or relative, per detail)
  std::string detail;
};

/// The pinned verification sweep behind the `verify` command: identity fuzz,
/// exact integral cross-checks, finite-r convergence spot checks, bound
/// sanity.  Deterministic for a fixed seed and independent of worker count.
std::vector<lemma_check> run_verification_sweep(std::uint64_t seed, int workers);

std::string verification_report_json(const std::vector<lemma_check>& checks);
bool verification_all_pass(const std::vector<lemma_check>& checks);

}  // namespace sbern
