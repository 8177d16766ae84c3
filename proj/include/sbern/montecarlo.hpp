#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbern/asymptotics.hpp"
#include "sbern/mixture.hpp"

namespace sbern {

enum class study_kind { pointwise, mise_rate, normality, consistency };

/// Bandwidth schedule across the n ladder: a fixed order, a power law
/// m = round(c * n^p) (p = 2/3 reproduces the CDF-optimal scaling, p = 1 the
/// m = n consistency schedule), or the plug-in asymptotic optimum.
enum class m_rule_kind { fixed, power, optimal };

struct m_rule {
  m_rule_kind kind = m_rule_kind::fixed;
  long fixed_m = 10;
  double coefficient = 1.0;
  double exponent = 2.0 / 3.0;
};

/// Monte Carlo study description; JSON round-trips via from_json/to_json.
struct study_config {
  study_kind study = study_kind::pointwise;
  estimator_kind kind = estimator_kind::cdf;
  mixture_spec target;
  std::vector<long> n_values;
  m_rule rule;
  std::vector<std::vector<double>> points;  // pointwise / normality evaluation points
  int grid_resolution = 0;                  // ISE / sup-grid resolution, 0 = per-d default
  long replicates = 2;
  std::uint64_t seed = 12345;

  void validate() const;
  static study_config from_json(const std::string& text);
  std::string to_json() const;
};

/// One reported statistic. `x` is empty for quantities that are not tied to an
/// evaluation point; `se` is the Monte Carlo standard error (0 where the
/// statistic has no replication error); `theory` is NaN when the theory offers
/// no prediction for this row.
struct study_row {
  long n = 0;
  long m = 0;
  std::vector<double> x;
  std::string statistic;
  double value = 0.0;
  double se = 0.0;
  double theory = 0.0;
};

struct study_report {
  study_kind study = study_kind::pointwise;
  estimator_kind kind = estimator_kind::cdf;
  long replicates = 0;
  std::uint64_t seed = 0;
  std::vector<study_row> rows;
  double slope = 0.0, slope_se = 0.0, slope_theory = 0.0;  // NaN unless a rate study
  bool has_slope = false;
  bool monotone = false;  // consistency studies: sup error strictly decreasing in n
  bool has_monotone = false;
  std::vector<std::string> warnings;

  const study_row* find(const std::string& statistic, long n) const;

  std::string to_json() const;
  /// Flat table, one row per (n, m, x, statistic): "n,m,x,statistic,value,se,theory"
  /// with x coordinates joined by ';'.
  std::string to_csv() const;
};

/// Empirical bias/variance at fixed evaluation points against the pointwise
/// expansions: reports m*bias vs the bias coefficient, n*Var vs
/// sigma^2 - m^{-1/2} V (CDF) and n m^{-d/2} Var vs psi f (density, with a
/// second-order refinement psi f - m^{-d/2} f^2 reported alongside).
study_report run_pointwise_study(const study_config& config, int workers = 1);

/// Quadrature-ISE averaged over replicates per n, with the log-log slope of
/// MISE against n fitted and compared to the theoretical rate.
study_report run_mise_rate_study(const study_config& config, int workers = 1);

/// Replicate estimates standardized by the theorem mean (the order-m smoothed
/// CDF / exact-binning density mean) and asymptotic standard deviation;
/// reports the Kolmogorov-Smirnov distance to the standard normal and the
/// standardized variance ratio.
study_report run_normality_study(const study_config& config, int workers = 1);

/// Sup-norm distance over a fixed grid between the estimator and both the
/// target and (CDF case) the empirical CDF, across the n ladder, with a
/// monotone-decay summary.
study_report run_consistency_study(const study_config& config, int workers = 1);

/// Dispatch on config.study.
study_report run_study(const study_config& config, int workers = 1);

// --- small statistical helpers, exposed for tests ---

struct moment_summary {
  double mean = 0.0;
  double se_mean = 0.0;
  double variance = 0.0;
  double se_variance = 0.0;  // fourth-moment formula, no normality assumption
};
moment_summary summarize(std::span<const double> values);

/// OLS slope of y on x with intercept; `se` is the usual slope standard error.
void fit_loglog(std::span<const double> x, std::span<const double> y, double& slope, double& se);

/// Kolmogorov-Smirnov distance between the sample and the standard normal.
double ks_distance_to_normal(std::vector<double> sample);

/// Exact order-m smoothed density mean f_m(x): the binned Bernstein density
/// with bin probabilities taken from the target law itself (box probabilities
/// by CDF inclusion-exclusion).
double smoothed_density_mean(const mixture_spec& mix, int m, std::span<const double> x);

const char* to_string(study_kind s);
const char* to_string(estimator_kind k);
study_kind study_kind_from_string(const std::string& s);
estimator_kind estimator_kind_from_string(const std::string& s);

}  // namespace sbern
