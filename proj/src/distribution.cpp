#include "sbern/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "sbern/common.hpp"

namespace sbern {

namespace {

// Step sizes shrink near the boundary so probes stay inside the open simplex.
double safe_step(std::span<const double> x, int i, double h) {
  double rem = 1.0;
  for (double xi : x) rem -= xi;
  const double room = std::min(x[i], rem);
  return std::min(h, 0.25 * room);
}

}  // namespace

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h) {
  const int d = static_cast<int>(x.size());
  std::vector<double> g(static_cast<std::size_t>(d));
  std::vector<double> probe(x.begin(), x.end());
  for (int i = 0; i < d; ++i) {
    const double hi = safe_step(x, i, h);
    if (!(hi > 0.0)) raise(errc::invalid_argument, "fd_gradient: point not interior");
    probe[i] = x[i] + hi;
    const double fp = f(probe);
    probe[i] = x[i] - hi;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * hi);
  }
  return g;
}

std::vector<double> fd_hessian(const std::function<double(std::span<const double>)>& f,
                               std::span<const double> x, double h) {
  const int d = static_cast<int>(x.size());
  std::vector<double> hess(static_cast<std::size_t>(d) * d);
  std::vector<double> probe(x.begin(), x.end());
  const double f0 = f(x);
  for (int i = 0; i < d; ++i) {
    const double hi = safe_step(x, i, h);
    if (!(hi > 0.0)) raise(errc::invalid_argument, "fd_hessian: point not interior");
    probe[i] = x[i] + hi;
    const double fp = f(probe);
    probe[i] = x[i] - hi;
    const double fm = f(probe);
    probe[i] = x[i];
    hess[static_cast<std::size_t>(i) * d + i] = (fp - 2.0 * f0 + fm) / (hi * hi);
    for (int j = i + 1; j < d; ++j) {
      const double hj = safe_step(x, j, h);
      probe[i] = x[i] + hi;
      probe[j] = x[j] + hj;
      const double fpp = f(probe);
      probe[j] = x[j] - hj;
      const double fpm = f(probe);
      probe[i] = x[i] - hi;
      const double fmm = f(probe);
      probe[j] = x[j] + hj;
      const double fmp = f(probe);
      probe[i] = x[i];
      probe[j] = x[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
      hess[static_cast<std::size_t>(i) * d + j] = v;
      hess[static_cast<std::size_t>(j) * d + i] = v;
    }
  }
  return hess;
}

void attach_fd_adapters(distribution_model& model) {
  if (!model.pdf || !model.cdf) {
    raise(errc::invalid_argument, "attach_fd_adapters: pdf and cdf are mandatory");
  }
  if (!model.pdf_grad) {
    auto f = model.pdf;
    model.pdf_grad = [f](std::span<const double> x) { return fd_gradient(f, x); };
  }
  if (!model.pdf_hess) {
    auto f = model.pdf;
    model.pdf_hess = [f](std::span<const double> x) { return fd_hessian(f, x); };
  }
  if (!model.cdf_grad) {
    auto f = model.cdf;
    model.cdf_grad = [f](std::span<const double> x) { return fd_gradient(f, x); };
  }
  if (!model.cdf_hess) {
    auto f = model.cdf;
    model.cdf_hess = [f](std::span<const double> x) { return fd_hessian(f, x); };
  }
}

distribution_model model_from_mixture(const mixture_spec& mix) {
  mix.validate();
  distribution_model model;
  model.d = mix.dim();
  model.pdf = [mix](std::span<const double> x) { return mixture_pdf(mix, x); };
  model.pdf_grad = [mix](std::span<const double> x) { return mixture_pdf_grad(mix, x); };
  model.pdf_hess = [mix](std::span<const double> x) { return mixture_pdf_hess(mix, x); };
  model.cdf = [mix](std::span<const double> x) { return mixture_cdf(mix, x); };
  if (model.d == 1) {
    // d/dx F = f; d2/dx2 F = f'
    model.cdf_grad = [mix](std::span<const double> x) {
      return std::vector<double>{mixture_pdf(mix, x)};
    };
    model.cdf_hess = [mix](std::span<const double> x) { return mixture_pdf_grad(mix, x); };
  }
  model.sampler = [mix](long n, rng& gen) { return sample_mixture(mix, n, gen); };
  attach_fd_adapters(model);
  return model;
}

}  // namespace sbern
