#include "sbern/asymptotics.hpp"

#include <cmath>
#include <json.hpp>

#include "sbern/common.hpp"
#include "sbern/quadrature.hpp"

namespace sbern {

namespace {

using nlohmann::json;

void require_interior_point(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) raise(errc::invalid_argument, "asymptotics: point must be interior");
    s += xi;
  }
  if (!(s < 1.0)) raise(errc::invalid_argument, "asymptotics: point must be interior");
}

double quadratic_form(std::span<const double> x, const std::vector<double>& hess) {
  const int d = static_cast<int>(x.size());
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double cov = (i == j ? x[i] : 0.0) - x[i] * x[j];
      acc += cov * hess[static_cast<std::size_t>(i) * d + j];
    }
  }
  return 0.5 * acc;
}

}  // namespace

int default_coeff_resolution(int d) {
  switch (d) {
    case 1: return 1000;
    case 2: return 200;
    default: return 60;
  }
}

cdf_coeffs cdf_asymptotics_at(const distribution_model& model, std::span<const double> x) {
  require_interior_point(x);
  const double F = model.cdf(x);
  if (F < -1e-9 || F > 1.0 + 1e-9) {
    raise(errc::invalid_argument, "cdf_asymptotics_at: cdf value outside [0,1]");
  }
  const auto grad = model.cdf_grad(x);
  const auto hess = model.cdf_hess(x);
  cdf_coeffs c{};
  c.bias_coeff = quadratic_form(x, hess);
  c.variance = F * (1.0 - F);
  c.deficiency = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.deficiency += grad[i] * std::sqrt(x[i] * (1.0 - x[i]) / M_PI);
  }
  return c;
}

density_coeffs density_asymptotics_at(const distribution_model& model,
                                      std::span<const double> x) {
  require_interior_point(x);
  const double f = model.pdf(x);
  if (!(f >= 0.0)) raise(errc::invalid_argument, "density_asymptotics_at: negative density");
  const auto grad = model.pdf_grad(x);
  const auto hess = model.pdf_hess(x);
  density_coeffs c{};
  c.bias_coeff = quadratic_form(x, hess);
  for (std::size_t i = 0; i < x.size(); ++i) {
    c.bias_coeff += (0.5 - x[i]) * grad[i];
  }
  double prod = 1.0;
  double s = 0.0;
  for (double xi : x) {
    prod *= xi;
    s += xi;
  }
  prod *= 1.0 - s;
  c.variance_factor = std::pow(4.0 * M_PI, -0.5 * static_cast<double>(x.size())) / std::sqrt(prod);
  c.pdf_value = f;
  return c;
}

double psi_lower_bound(int d) {
  return std::pow(4.0 * M_PI, -0.5 * d) * std::pow(d + 1.0, 0.5 * (d + 1.0));
}

namespace {

struct functionals {
  // cdf: sigma2, V, B2; density: psi_f, b2
  double a = 0.0, b = 0.0, c = 0.0;
};

functionals gather(const distribution_model& model, estimator_kind kind,
                   const std::optional<std::vector<double>>& x, int resolution) {
  functionals out;
  if (x) {
    if (kind == estimator_kind::cdf) {
      const auto co = cdf_asymptotics_at(model, *x);
      out.a = co.variance;
      out.b = co.deficiency;
      out.c = co.bias_coeff * co.bias_coeff;
    } else {
      const auto co = density_asymptotics_at(model, *x);
      out.a = co.variance_factor * co.pdf_value;
      out.c = co.bias_coeff * co.bias_coeff;
    }
    return out;
  }
  const int res = resolution > 0 ? resolution : default_coeff_resolution(model.d);
  const auto nodes = simplex_grid_nodes(model.d, res);
  const long count = static_cast<long>(nodes.size()) / model.d;
  const double vol = std::pow(static_cast<double>(res), -model.d);
  kahan_sum sa, sb, sc;
  for (long i = 0; i < count; ++i) {
    std::span<const double> node{nodes.data() + static_cast<std::size_t>(i) * model.d,
                                 static_cast<std::size_t>(model.d)};
    if (kind == estimator_kind::cdf) {
      const auto co = cdf_asymptotics_at(model, node);
      sa.add(co.variance);
      sb.add(co.deficiency);
      sc.add(co.bias_coeff * co.bias_coeff);
    } else {
      const auto co = density_asymptotics_at(model, node);
      sa.add(co.variance_factor * co.pdf_value);
      sc.add(co.bias_coeff * co.bias_coeff);
    }
  }
  out.a = sa.value() * vol;
  out.b = sb.value() * vol;
  out.c = sc.value() * vol;
  return out;
}

}  // namespace

error_report asymptotic_error(const distribution_model& model, estimator_kind kind,
                              std::optional<std::vector<double>> x, double n, double m,
                              int resolution) {
  if (!(n > 0.0) || !(m >= 1.0)) {
    raise(errc::invalid_argument, "asymptotic_error: need n > 0 and m >= 1");
  }
  const auto fn = gather(model, kind, x, resolution);
  error_report r{};
  r.kind = kind;
  r.integrated = !x.has_value();
  r.n = n;
  r.m = m;
  if (kind == estimator_kind::cdf) {
    r.variance_term = fn.a / n;
    r.deficiency_term = -fn.b / (n * std::sqrt(m));
    r.bias_sq_term = fn.c / (m * m);
    r.rate_exponent = -1.0;
  } else {
    r.variance_term = std::pow(m, 0.5 * model.d) * fn.a / n;
    r.deficiency_term = 0.0;
    r.bias_sq_term = fn.c / (m * m);
    r.rate_exponent = -4.0 / (model.d + 4.0);
  }
  r.total = r.variance_term + r.deficiency_term + r.bias_sq_term;
  r.negative_prediction = kind == estimator_kind::cdf && r.total < 0.0;
  return r;
}

bandwidth_choice optimal_bandwidth(const distribution_model& model, estimator_kind kind,
                                   std::optional<std::vector<double>> x, double n,
                                   int resolution) {
  if (!(n > 0.0)) raise(errc::invalid_argument, "optimal_bandwidth: need n > 0");
  const auto fn = gather(model, kind, x, resolution);
  bandwidth_choice out;
  const char* scope = x ? "pointwise" : "integrated";
  if (kind == estimator_kind::cdf) {
    const double B2 = fn.c, V = fn.b, sigma2 = fn.a;
    if (!(B2 > 0.0)) {
      out.degenerate = true;
      out.reason = std::string("cdf ") + scope +
                   " bias functional vanishes: the squared-bias term has no minimum in m";
      return out;
    }
    if (!(V > 0.0)) {
      out.degenerate = true;
      out.reason = std::string("cdf ") + scope +
                   " deficiency functional vanishes: nothing to trade against the bias";
      return out;
    }
    out.m_real = std::pow(n, 2.0 / 3.0) * std::pow(4.0 * B2 / V, 2.0 / 3.0);
    out.error_at_opt =
        sigma2 / n - 0.75 * std::cbrt(V * V * V * V / (4.0 * B2)) * std::pow(n, -4.0 / 3.0);
  } else {
    const double psif = fn.a, b2 = fn.c;
    const double q = 4.0 / static_cast<double>(model.d);
    if (!(psif > 0.0)) {
      out.degenerate = true;
      out.reason = std::string("density ") + scope + " variance functional vanishes";
      return out;
    }
    if (!(b2 > 0.0)) {
      out.degenerate = true;
      out.reason = std::string("density ") + scope +
                   " bias functional vanishes (e.g. uniform target): no finite optimum";
      return out;
    }
    const double expo = 2.0 / (model.d + 4.0);
    out.m_real = std::pow(n * q * b2 / psif, expo);
    out.error_at_opt = (q + 1.0) / std::pow(q, 4.0 / (model.d + 4.0)) *
                       std::pow(psif, 4.0 / (model.d + 4.0)) *
                       std::pow(b2, model.d / (model.d + 4.0)) *
                       std::pow(n, -4.0 / (model.d + 4.0));
  }
  out.m = std::max<long>(1, std::lround(out.m_real));
  return out;
}

double bandwidth_to_h(double m) {
  if (!(m > 0.0)) raise(errc::invalid_argument, "bandwidth_to_h: need m > 0");
  return 1.0 / std::sqrt(m);
}

double h_to_bandwidth(double h) {
  if (!(h > 0.0)) raise(errc::invalid_argument, "h_to_bandwidth: need h > 0");
  return 1.0 / (h * h);
}

std::string error_report::to_json() const {
  json doc{{"kind", kind == estimator_kind::cdf ? "cdf" : "density"},
           {"integrated", integrated},
           {"n", n},
           {"m", m},
           {"variance_term", variance_term},
           {"deficiency_term", deficiency_term},
           {"bias_sq_term", bias_sq_term},
           {"total", total},
           {"rate_exponent", rate_exponent},
           {"negative_prediction", negative_prediction}};
  return doc.dump();
}

std::string bandwidth_choice::to_json() const {
  json doc{{"degenerate", degenerate},
           {"reason", reason},
           {"m_real", m_real},
           {"m", m},
           {"error_at_opt", error_at_opt}};
  return doc.dump();
}

}  // namespace sbern
