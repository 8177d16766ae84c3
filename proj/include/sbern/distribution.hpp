#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sbern/mixture.hpp"
#include "sbern/rng.hpp"
#include "sbern/simplex.hpp"

namespace sbern {

/// Analytic description of a target distribution on the simplex: density,
/// CDF, and their derivatives as callables.  Missing derivative callables can
/// be filled in with central finite-difference adapters (step 1e-5, scaled to
/// stay interior), so only pdf/cdf are mandatory.
struct distribution_model {
  int d = 0;
  std::function<double(std::span<const double>)> pdf;
  std::function<std::vector<double>(std::span<const double>)> pdf_grad;
  std::function<std::vector<double>(std::span<const double>)> pdf_hess;  // row-major d*d
  std::function<double(std::span<const double>)> cdf;
  std::function<std::vector<double>(std::span<const double>)> cdf_grad;
  std::function<std::vector<double>(std::span<const double>)> cdf_hess;
  std::function<dataset(long, rng&)> sampler;
};

/// Central finite differences of a scalar field; used both as adapters and as
/// an independent cross-check of analytic derivatives.
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h = 1e-5);
std::vector<double> fd_hessian(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> x, double h = 1e-4);

/// Fills any missing derivative callables with finite differences of pdf/cdf.
void attach_fd_adapters(distribution_model& model);

/// Fully analytic model for a Dirichlet mixture (CDF derivatives for d >= 2
/// fall back to finite differences of the quadrature CDF).
distribution_model model_from_mixture(const mixture_spec& mix);

}  // namespace sbern
