#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbern/distribution.hpp"

namespace sbern {

enum class estimator_kind { cdf, density };

/// Pointwise CDF expansion coefficients at an interior x:
///   bias_coeff  B(x)  = (1/2) sum_ij (x_i 1{i=j} - x_i x_j) d2F/dx_i dx_j
///   variance    sigma^2(x) = F(x)(1 - F(x))
///   deficiency  V(x)  = sum_i dF/dx_i sqrt(x_i(1-x_i)/pi)
struct cdf_coeffs {
  double bias_coeff;
  double variance;
  double deficiency;
};

/// Pointwise density expansion coefficients at an interior x:
///   bias_coeff      b(x)   = sum_i (1/2 - x_i) df/dx_i
///                          + (1/2) sum_ij (x_i 1{i=j} - x_i x_j) d2f/dx_i dx_j
///   variance_factor psi(x) = [(4 pi)^d x_1...x_d (1-|x|_1)]^{-1/2}
///   pdf_value       f(x)
struct density_coeffs {
  double bias_coeff;
  double variance_factor;
  double pdf_value;
};

cdf_coeffs cdf_asymptotics_at(const distribution_model& model, std::span<const double> x);
density_coeffs density_asymptotics_at(const distribution_model& model, std::span<const double> x);

/// psi lower bound over the simplex: (4 pi)^{-d/2} (d+1)^{(d+1)/2}, attained at
/// the barycenter.
double psi_lower_bound(int d);

/// First-order error expansion at sample size n and bandwidth parameter m:
///   cdf:     n^{-1} sigma^2 - n^{-1} m^{-1/2} V + m^{-2} B^2
///   density: n^{-1} m^{d/2} psi f + m^{-2} b^2
/// Pointwise when x is given, integrated over the simplex otherwise
/// (coefficients integrated with the interior midpoint rule at `resolution`,
/// default 1000 for d=1, 200 for d=2, 60 for d=3).
struct error_report {
  estimator_kind kind;
  bool integrated;
  double n, m;
  double variance_term;    // n^{-1} sigma^2  |  n^{-1} m^{d/2} psi f
  double deficiency_term;  // -n^{-1} m^{-1/2} V  |  0 for densities
  double bias_sq_term;     // m^{-2} B^2  |  m^{-2} b^2
  double total;
  double rate_exponent;    // d log(total)/d log(n) at the optimum: -1 (cdf), -4/(d+4) (density)
  bool negative_prediction;  // cdf expansion dipped below 0 (m too small for the expansion)
  std::string to_json() const;
};

error_report asymptotic_error(const distribution_model& model, estimator_kind kind,
                              std::optional<std::vector<double>> x, double n, double m,
                              int resolution = 0);

/// Asymptotically optimal bandwidth parameter:
///   cdf:     m = n^{2/3} [4 B^2 / V]^{2/3}          (B^2, V integrated when x absent)
///   density: m = n^{2/(d+4)} [(4/d) b^2 / (psi f)]^{2/(d+4)}
/// plus the error value at the optimum:
///   cdf:     n^{-1} sigma^2 - (3/4) [V^4/(4 B^2)]^{1/3} n^{-4/3}
///   density: [(4/d+1)/(4/d)^{4/(d+4)}] (psi f)^{4/(d+4)} (b^2)^{d/(d+4)} n^{-4/(d+4)}
/// Degenerate functionals (vanishing bias coefficient, vanishing density, or
/// vanishing deficiency) produce degenerate=true with a reason; no bandwidth
/// is fabricated.
struct bandwidth_choice {
  bool degenerate = false;
  std::string reason;
  double m_real = 0.0;  // untruncated optimum
  long m = 0;           // max(1, round(m_real))
  double error_at_opt = 0.0;
  std::string to_json() const;
};

bandwidth_choice optimal_bandwidth(const distribution_model& model, estimator_kind kind,
                                   std::optional<std::vector<double>> x, double n,
                                   int resolution = 0);

/// Kernel-bandwidth correspondence m ~ h^{-2} for comparing against
/// boundary-kernel literature.
double bandwidth_to_h(double m);
double h_to_bandwidth(double h);

int default_coeff_resolution(int d);

}  // namespace sbern
