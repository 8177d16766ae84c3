#include "sbern/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "sbern/common.hpp"
#include "sbern/special.hpp"

namespace sbern {

namespace {

using nlohmann::json;

// Gauss-Legendre nodes/weights on [0,1], cached per order.
struct gl_rule {
  std::vector<double> node, weight;
};

const gl_rule& gauss_legendre(int n) {
  static const gl_rule rule = [] {
    constexpr int order = 48;
    gl_rule r;
    r.node.resize(order);
    r.weight.resize(order);
    for (int i = 0; i < order; ++i) {
      // Newton iteration on P_order from the Chebyshev initial guess.
      double t = std::cos(M_PI * (i + 0.75) / (order + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= order; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = order * (t * p1 - p0) / (t * t - 1.0);
        const double step = p1 / dp;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (t * p1 - p0) / (t * t - 1.0);
      r.node[i] = 0.5 * (1.0 + t);
      r.weight[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
  }();
  (void)n;
  return rule;
}

// Integral of the mixture density over the box [0, upper] clipped to the
// simplex, integrating coordinates from the last to the first.  The inner
// integral changes regime where the remaining budget crosses a cumulative sum
// of the deeper box edges (the simplex starts clipping the box there);
// splitting the panel at those points keeps each Gauss-Legendre panel on a
// smooth piece instead of straddling a kink.
double box_integral(const mixture_spec& mix, std::vector<double>& point,
                    std::span<const double> upper, int level, double budget) {
  const auto& gl = gauss_legendre(48);
  const double hi = std::min(upper[level], budget);
  if (hi <= 0.0) return 0.0;
  std::vector<double> cuts{0.0, hi};
  double deeper = 0.0;
  for (std::size_t j = static_cast<std::size_t>(level) + 1; j < upper.size(); ++j) {
    deeper += upper[j];
    const double t = budget - deeper;
    if (t > 0.0 && t < hi) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], len = cuts[c + 1] - cuts[c];
    if (len <= 0.0) continue;
    double piece = 0.0;
    if (level + 1 == static_cast<int>(upper.size())) {
      for (std::size_t i = 0; i < gl.node.size(); ++i) {
        point[level] = lo + len * gl.node[i];
        piece += gl.weight[i] * mixture_pdf(mix, point);
      }
    } else {
      for (std::size_t i = 0; i < gl.node.size(); ++i) {
        point[level] = lo + len * gl.node[i];
        piece += gl.weight[i] *
                 box_integral(mix, point, upper, level + 1, budget - point[level]);
      }
    }
    acc += piece * len;
  }
  return acc;
}

}  // namespace

int mixture_spec::dim() const {
  if (components.empty()) raise(errc::invalid_argument, "mixture_spec: no components");
  return static_cast<int>(components.front().alpha.size());
}

void mixture_spec::validate() const {
  if (components.empty()) raise(errc::invalid_argument, "mixture_spec: no components");
  const std::size_t d = components.front().alpha.size();
  if (d == 0) raise(errc::invalid_argument, "mixture_spec: empty alpha");
  double wsum = 0.0;
  for (const auto& c : components) {
    if (c.alpha.size() != d) raise(errc::invalid_argument, "mixture_spec: mixed dimensions");
    if (!(c.weight > 0.0)) raise(errc::invalid_argument, "mixture_spec: weights must be positive");
    if (!(c.beta > 0.0)) raise(errc::invalid_argument, "mixture_spec: beta must be positive");
    for (double a : c.alpha) {
      if (!(a > 0.0)) raise(errc::invalid_argument, "mixture_spec: alpha must be positive");
    }
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-9) {
    raise(errc::invalid_argument, "mixture_spec: weights must sum to 1");
  }
}

mixture_spec mixture_spec::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    raise(errc::io_error, std::string("mixture JSON parse error: ") + e.what());
  }
  mixture_spec mix;
  if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array()) {
    raise(errc::io_error, "mixture JSON: expected object with a components array");
  }
  for (const auto& c : doc["components"]) {
    mixture_component comp;
    try {
      comp.weight = c.at("weight").get<double>();
      comp.alpha = c.at("alpha").get<std::vector<double>>();
      comp.beta = c.at("beta").get<double>();
    } catch (const std::exception& e) {
      raise(errc::io_error, std::string("mixture JSON: bad component: ") + e.what());
    }
    mix.components.push_back(std::move(comp));
  }
  mix.validate();
  return mix;
}

std::string mixture_spec::to_json() const {
  json comps = json::array();
  for (const auto& c : components) {
    comps.push_back({{"weight", c.weight}, {"alpha", c.alpha}, {"beta", c.beta}});
  }
  return json{{"components", comps}}.dump();
}

mixture_spec mixture_spec::uniform(int d) {
  mixture_spec mix;
  mixture_component c;
  c.weight = 1.0;
  c.alpha.assign(static_cast<std::size_t>(d), 1.0);
  c.beta = 1.0;
  mix.components.push_back(std::move(c));
  return mix;
}

double mixture_log_pdf(const mixture_spec& mix, std::span<const double> x) {
  // log-sum-exp over components
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(mix.components.size());
  for (std::size_t c = 0; c < mix.components.size(); ++c) {
    const auto& comp = mix.components[c];
    const double l = dirichlet_log_density(comp.alpha, comp.beta, x);
    if (l == std::numeric_limits<double>::infinity()) return l;
    logs[c] = std::log(comp.weight) + l;
    best = std::max(best, logs[c]);
  }
  if (!std::isfinite(best)) return best;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - best);
  return best + std::log(s);
}

double mixture_pdf(const mixture_spec& mix, std::span<const double> x) {
  return std::exp(mixture_log_pdf(mix, x));
}

namespace {

void require_interior(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) raise(errc::invalid_argument, "mixture derivative: point not interior");
    s += xi;
  }
  if (!(s < 1.0)) raise(errc::invalid_argument, "mixture derivative: point not interior");
}

}  // namespace

std::vector<double> mixture_pdf_grad(const mixture_spec& mix, std::span<const double> x) {
  require_interior(x);
  const int d = static_cast<int>(x.size());
  double rem = 1.0;
  for (double xi : x) rem -= xi;
  std::vector<double> g(static_cast<std::size_t>(d), 0.0);
  for (const auto& comp : mix.components) {
    const double val =
        comp.weight * std::exp(dirichlet_log_density(comp.alpha, comp.beta, x));
    const double br = (comp.beta - 1.0) / rem;
    for (int i = 0; i < d; ++i) {
      g[i] += val * ((comp.alpha[i] - 1.0) / x[i] - br);
    }
  }
  return g;
}

std::vector<double> mixture_pdf_hess(const mixture_spec& mix, std::span<const double> x) {
  require_interior(x);
  const int d = static_cast<int>(x.size());
  double rem = 1.0;
  for (double xi : x) rem -= xi;
  std::vector<double> h(static_cast<std::size_t>(d) * d, 0.0);
  for (const auto& comp : mix.components) {
    const double val =
        comp.weight * std::exp(dirichlet_log_density(comp.alpha, comp.beta, x));
    const double br = (comp.beta - 1.0) / rem;
    const double brr = (comp.beta - 1.0) / (rem * rem);
    std::vector<double> delta(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) delta[i] = (comp.alpha[i] - 1.0) / x[i] - br;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double e = -brr;
        if (i == j) e -= (comp.alpha[i] - 1.0) / (x[i] * x[i]);
        h[static_cast<std::size_t>(i) * d + j] += val * (delta[i] * delta[j] + e);
      }
    }
  }
  return h;
}

double mixture_cdf(const mixture_spec& mix, std::span<const double> x) {
  mix.validate();
  if (static_cast<int>(x.size()) != mix.dim()) {
    raise(errc::invalid_argument, "mixture_cdf: dimension mismatch");
  }
  const int d = static_cast<int>(x.size());
  if (d == 1) {
    double acc = 0.0;
    for (const auto& comp : mix.components) {
      acc += comp.weight * beta_cdf(comp.alpha[0], comp.beta, std::min(1.0, std::max(0.0, x[0])));
    }
    return acc;
  }
  std::vector<double> upper(x.begin(), x.end());
  for (double& u : upper) u = std::min(1.0, std::max(0.0, u));
  std::vector<double> point(static_cast<std::size_t>(d));
  return box_integral(mix, point, upper, 0, 1.0);
}

dataset sample_mixture(const mixture_spec& mix, long n, rng& gen) {
  mix.validate();
  if (n < 1) raise(errc::invalid_argument, "sample_mixture: need n >= 1");
  const int d = mix.dim();
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * d);
  std::vector<double> draw(static_cast<std::size_t>(d));
  for (long i = 0; i < n; ++i) {
    double u = gen.uniform01();
    std::size_t pick = 0;
    for (; pick + 1 < mix.components.size(); ++pick) {
      u -= mix.components[pick].weight;
      if (u <= 0.0) break;
    }
    const auto& comp = mix.components[pick];
    gen.dirichlet(comp.alpha, comp.beta, draw);
    flat.insert(flat.end(), draw.begin(), draw.end());
  }
  return dataset(std::move(flat), d);
}

}  // namespace sbern
