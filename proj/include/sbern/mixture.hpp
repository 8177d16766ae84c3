#pragma once

#include <span>
#include <string>
#include <vector>

#include "sbern/rng.hpp"
#include "sbern/simplex.hpp"

namespace sbern {

/// One Dirichlet component D(alpha, beta) with a mixing weight.
struct mixture_component {
  double weight = 1.0;
  std::vector<double> alpha;
  double beta = 1.0;
};

/// Finite mixture of Dirichlet densities on the d-simplex.  The JSON wire
/// format is {"components":[{"weight":w,"alpha":[...],"beta":b}, ...]}.
struct mixture_spec {
  std::vector<mixture_component> components;

  int dim() const;
  void validate() const;  // positive parameters, equal dims, weights sum to 1

  static mixture_spec from_json(const std::string& text);
  std::string to_json() const;

  /// Uniform density on the d-simplex: single component with unit parameters.
  static mixture_spec uniform(int d);
};

double mixture_log_pdf(const mixture_spec& mix, std::span<const double> x);
double mixture_pdf(const mixture_spec& mix, std::span<const double> x);

/// Gradient and Hessian of the density at a strictly interior point.
std::vector<double> mixture_pdf_grad(const mixture_spec& mix, std::span<const double> x);
std::vector<double> mixture_pdf_hess(const mixture_spec& mix, std::span<const double> x);

/// CDF F(x) = P[X <= x coordinatewise].  d=1 closed form through the
/// regularized incomplete beta; d >= 2 by nested Gauss-Legendre panels over
/// the box [0,x] clipped to the simplex.
double mixture_cdf(const mixture_spec& mix, std::span<const double> x);

/// n draws: component chosen by weight, then a Dirichlet(alpha, beta) draw via
/// normalized Gamma variates keeping the first d coordinates.
dataset sample_mixture(const mixture_spec& mix, long n, rng& gen);

}  // namespace sbern
