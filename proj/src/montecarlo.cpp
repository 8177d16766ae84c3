#include "sbern/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "sbern/common.hpp"
#include "sbern/estimators.hpp"
#include "sbern/quadrature.hpp"
#include "sbern/special.hpp"

namespace sbern {

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

int default_ise_resolution(int d) { return d == 1 ? 300 : 150; }
int default_sup_resolution(int d) { return d == 1 ? 200 : d == 2 ? 60 : 30; }

long resolve_m(const study_config& cfg, const distribution_model& model, long n) {
  switch (cfg.rule.kind) {
    case m_rule_kind::fixed:
      return cfg.rule.fixed_m;
    case m_rule_kind::power:
      return std::max<long>(
          1, std::llround(cfg.rule.coefficient * std::pow(static_cast<double>(n), cfg.rule.exponent)));
    case m_rule_kind::optimal: {
      const bandwidth_choice bw = optimal_bandwidth(model, cfg.kind, std::nullopt, static_cast<double>(n));
      if (bw.degenerate) raise(errc::degenerate, "degenerate-m_opt: " + bw.reason);
      return bw.m;
    }
  }
  raise(errc::internal, "resolve_m: unreachable");
}

std::uint64_t stream_id(int n_index, long replicate) {
  return (static_cast<std::uint64_t>(n_index + 1) << 32) | static_cast<std::uint64_t>(replicate);
}

/// Runs `replicates` independent fits (one sampled dataset each) and collects
/// fn(model estimate at each of the P points) into a replicate-major matrix.
/// Deterministic for fixed seed regardless of worker count: stream per
/// replicate, ordered storage.
template <class Eval>
std::vector<double> replicate_matrix(const study_config& cfg, long n, long m, int n_index,
                                     int workers, long points, Eval&& eval) {
  std::vector<double> values(static_cast<std::size_t>(cfg.replicates) * points);
  parallel_for(cfg.replicates, workers, [&](long r) {
    rng gen = rng::for_stream(cfg.seed, stream_id(n_index, r));
    const dataset data = sample_mixture(cfg.target, n, gen);
    eval(data, static_cast<long>(m), values.data() + static_cast<std::size_t>(r) * points);
  });
  return values;
}

std::vector<double> column(const std::vector<double>& matrix, long rows, long cols, long c) {
  std::vector<double> out(static_cast<std::size_t>(rows));
  for (long r = 0; r < rows; ++r) out[r] = matrix[static_cast<std::size_t>(r) * cols + c];
  return out;
}

void push_row(study_report& rep, long n, long m, std::vector<double> x, std::string stat,
              double value, double se, double theory) {
  rep.rows.push_back({n, m, std::move(x), std::move(stat), value, se, theory});
}

std::string join_coords(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ';';
    os << x[i];
  }
  return os.str();
}

nlohmann::json rule_to_json(const m_rule& r) {
  switch (r.kind) {
    case m_rule_kind::fixed:
      return {{"rule", "fixed"}, {"m", r.fixed_m}};
    case m_rule_kind::power:
      return {{"rule", "power"}, {"coefficient", r.coefficient}, {"exponent", r.exponent}};
    case m_rule_kind::optimal:
      return {{"rule", "optimal"}};
  }
  raise(errc::internal, "rule_to_json: unreachable");
}

m_rule rule_from_json(const nlohmann::json& j) {
  m_rule r;
  const std::string kind = j.at("rule").get<std::string>();
  if (kind == "fixed") {
    r.kind = m_rule_kind::fixed;
    r.fixed_m = j.at("m").get<long>();
  } else if (kind == "power") {
    r.kind = m_rule_kind::power;
    r.coefficient = j.at("coefficient").get<double>();
    r.exponent = j.at("exponent").get<double>();
  } else if (kind == "optimal") {
    r.kind = m_rule_kind::optimal;
  } else {
    raise(errc::invalid_argument, "m_rule: unknown rule '" + kind + "'");
  }
  return r;
}

void require_interior(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) raise(errc::invalid_argument, "evaluation point must be strictly interior");
    s += xi;
  }
  if (!(s < 1.0)) raise(errc::invalid_argument, "evaluation point must be strictly interior");
}

}  // namespace

const char* to_string(study_kind s) {
  switch (s) {
    case study_kind::pointwise: return "pointwise";
    case study_kind::mise_rate: return "mise-rate";
    case study_kind::normality: return "normality";
    case study_kind::consistency: return "consistency";
  }
  return "?";
}

const char* to_string(estimator_kind k) { return k == estimator_kind::cdf ? "cdf" : "density"; }

study_kind study_kind_from_string(const std::string& s) {
  if (s == "pointwise") return study_kind::pointwise;
  if (s == "mise-rate" || s == "mise_rate") return study_kind::mise_rate;
  if (s == "normality") return study_kind::normality;
  if (s == "consistency") return study_kind::consistency;
  raise(errc::invalid_argument, "unknown study kind '" + s + "'");
}

estimator_kind estimator_kind_from_string(const std::string& s) {
  if (s == "cdf") return estimator_kind::cdf;
  if (s == "density") return estimator_kind::density;
  raise(errc::invalid_argument, "unknown estimator kind '" + s + "'");
}

void study_config::validate() const {
  target.validate();
  const int d = target.dim();
  if (d < 1 || d > 3) raise(errc::invalid_argument, "study: dimension must be 1..3");
  if (n_values.empty()) raise(errc::invalid_argument, "study: at least one n required");
  for (long n : n_values) {
    if (n < 10) raise(errc::invalid_argument, "study: every n must be >= 10");
  }
  if (replicates < 2) raise(errc::invalid_argument, "study: replicates must be >= 2");
  if (grid_resolution < 0) raise(errc::invalid_argument, "study: grid_resolution must be >= 0");
  if (rule.kind == m_rule_kind::fixed && rule.fixed_m < 1) {
    raise(errc::invalid_argument, "study: fixed m must be >= 1");
  }
  if (rule.kind == m_rule_kind::power && (!(rule.coefficient > 0.0) || !(rule.exponent >= 0.0))) {
    raise(errc::invalid_argument, "study: power rule needs coefficient > 0 and exponent >= 0");
  }
  switch (study) {
    case study_kind::pointwise:
    case study_kind::normality: {
      if (points.empty()) raise(errc::invalid_argument, "study: evaluation points required");
      for (const auto& p : points) {
        const auto canon = simplex_point(p);
        if (static_cast<int>(canon.size()) != d) {
          raise(errc::invalid_argument, "study: point dimension mismatch");
        }
        if (kind == estimator_kind::density) require_interior(canon);
      }
      break;
    }
    case study_kind::mise_rate: {
      if (d > 2) raise(errc::invalid_argument, "study: MISE studies support d <= 2");
      if (rule.kind != m_rule_kind::optimal) {
        raise(errc::invalid_argument, "study: mise-rate requires the optimal bandwidth rule");
      }
      std::vector<long> uniq(n_values);
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      if (uniq.size() < 4) {
        raise(errc::invalid_argument, "study: mise-rate needs at least 4 distinct n values");
      }
      break;
    }
    case study_kind::consistency:
      break;
  }
}

study_config study_config::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    raise(errc::io_error, std::string("study config: invalid JSON: ") + e.what());
  }
  study_config cfg;
  try {
    cfg.study = study_kind_from_string(j.at("study").get<std::string>());
    cfg.kind = estimator_kind_from_string(j.at("kind").get<std::string>());
    cfg.target = mixture_spec::from_json(j.at("target").dump());
    cfg.n_values = j.at("n").get<std::vector<long>>();
    cfg.rule = rule_from_json(j.at("m_rule"));
    if (j.contains("points")) cfg.points = j.at("points").get<std::vector<std::vector<double>>>();
    if (j.contains("grid_resolution")) cfg.grid_resolution = j.at("grid_resolution").get<int>();
    if (j.contains("replicates")) cfg.replicates = j.at("replicates").get<long>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    raise(errc::invalid_argument, std::string("study config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string study_config::to_json() const {
  nlohmann::json j{{"study", to_string(study)},
                   {"kind", to_string(kind)},
                   {"target", nlohmann::json::parse(target.to_json())},
                   {"n", n_values},
                   {"m_rule", rule_to_json(rule)},
                   {"points", points},
                   {"grid_resolution", grid_resolution},
                   {"replicates", replicates},
                   {"seed", seed}};
  return j.dump(2);
}

moment_summary summarize(std::span<const double> values) {
  const long r = static_cast<long>(values.size());
  if (r < 2) raise(errc::invalid_argument, "summarize: need at least 2 values");
  kahan_sum s;
  for (double v : values) s.add(v);
  const double mean = s.value() / r;
  kahan_sum ss, s4;
  for (double v : values) {
    const double dev = v - mean;
    ss.add(dev * dev);
    s4.add(dev * dev * dev * dev);
  }
  moment_summary out;
  out.mean = mean;
  out.variance = ss.value() / (r - 1);
  out.se_mean = std::sqrt(out.variance / r);
  const double m2 = ss.value() / r;
  const double m4 = s4.value() / r;
  out.se_variance = std::sqrt(std::max(0.0, m4 - m2 * m2 * (r - 3.0) / (r - 1.0)) / r);
  return out;
}

void fit_loglog(std::span<const double> x, std::span<const double> y, double& slope, double& se) {
  const long k = static_cast<long>(x.size());
  if (k < 4 || y.size() != x.size()) raise(errc::invalid_argument, "fit_loglog: need >= 4 points");
  double xbar = 0.0, ybar = 0.0;
  for (long i = 0; i < k; ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= k;
  ybar /= k;
  double sxx = 0.0, sxy = 0.0;
  for (long i = 0; i < k; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) raise(errc::invalid_argument, "fit_loglog: degenerate abscissae");
  slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double rss = 0.0;
  for (long i = 0; i < k; ++i) {
    const double resid = y[i] - intercept - slope * x[i];
    rss += resid * resid;
  }
  se = std::sqrt(rss / (k - 2) / sxx);
}

double ks_distance_to_normal(std::vector<double> sample) {
  if (sample.empty()) raise(errc::invalid_argument, "ks_distance_to_normal: empty sample");
  std::sort(sample.begin(), sample.end());
  const double r = static_cast<double>(sample.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = normal_cdf(sample[i]);
    dist = std::max(dist, std::max(u - i / r, (i + 1) / r - u));
  }
  return dist;
}

double smoothed_density_mean(const mixture_spec& mix, int m, std::span<const double> x) {
  if (m < 1) raise(errc::invalid_argument, "smoothed_density_mean: m must be >= 1");
  const int d = mix.dim();
  if (static_cast<int>(x.size()) != d) {
    raise(errc::invalid_argument, "smoothed_density_mean: point dimension mismatch");
  }
  const auto pt = simplex_point(x);
  multinomial_pmf pmf(m - 1, pt);
  const double scale_log = log_factorial(m - 1 + d) - log_factorial(m - 1);
  std::vector<double> corner(static_cast<std::size_t>(d));
  kahan_sum acc;
  for_each_lattice(m - 1, d, [&](std::span<const int> k) {
    const double lp = pmf.log_pmf(k);
    if (lp == -std::numeric_limits<double>::infinity()) return;
    // box probability P(X in (k/m, (k+1)/m]) by CDF inclusion-exclusion
    double p = 0.0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      for (int i = 0; i < d; ++i) {
        const bool lower = (mask >> i) & 1u;
        corner[i] = (k[i] + (lower ? 0 : 1)) / static_cast<double>(m);
      }
      const double f = mixture_cdf(mix, corner);
      p += (std::popcount(mask) % 2 ? -1.0 : 1.0) * f;
    }
    if (p <= 0.0) return;  // quadrature noise on an empty box
    acc.add(p * std::exp(scale_log + lp));
  });
  return acc.value();
}

const study_row* study_report::find(const std::string& statistic, long n) const {
  for (const auto& row : rows) {
    if (row.statistic == statistic && (n == 0 || row.n == n)) return &row;
  }
  return nullptr;
}

std::string study_report::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r{{"n", row.n},       {"m", row.m},   {"x", row.x},
                     {"statistic", row.statistic}, {"value", row.value}, {"se", row.se}};
    if (std::isfinite(row.theory)) {
      r["theory"] = row.theory;
    } else {
      r["theory"] = nullptr;
    }
    arr.push_back(std::move(r));
  }
  nlohmann::json j{{"study", to_string(study)},
                   {"kind", to_string(kind)},
                   {"replicates", replicates},
                   {"seed", seed},
                   {"rows", arr},
                   {"warnings", warnings}};
  if (has_slope) {
    j["slope"] = slope;
    j["slope_se"] = slope_se;
    j["slope_theory"] = slope_theory;
  }
  if (has_monotone) j["monotone"] = monotone;
  return j.dump(2);
}

std::string study_report::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "n,m,x,statistic,value,se,theory\n";
  for (const auto& row : rows) {
    os << row.n << ',' << row.m << ',' << join_coords(row.x) << ',' << row.statistic << ','
       << row.value << ',' << row.se << ',';
    if (std::isfinite(row.theory)) os << row.theory;
    os << '\n';
  }
  if (has_slope) {
    os << "0,0,,slope," << slope << ',' << slope_se << ',' << slope_theory << '\n';
  }
  if (has_monotone) {
    os << "0,0,,monotone," << (monotone ? 1 : 0) << ",0,\n";
  }
  return os.str();
}

study_report run_pointwise_study(const study_config& cfg, int workers) {
  cfg.validate();
  if (cfg.points.empty()) raise(errc::invalid_argument, "pointwise study: points required");
  const distribution_model model = model_from_mixture(cfg.target);
  const int d = cfg.target.dim();
  const long npts = static_cast<long>(cfg.points.size());

  study_report rep;
  rep.study = study_kind::pointwise;
  rep.kind = cfg.kind;
  rep.replicates = cfg.replicates;
  rep.seed = cfg.seed;

  for (int j = 0; j < static_cast<int>(cfg.n_values.size()); ++j) {
    const long n = cfg.n_values[j];
    const long m = resolve_m(cfg, model, n);
    std::vector<double> values;
    if (cfg.kind == estimator_kind::cdf) {
      values = replicate_matrix(cfg, n, m, j, workers, npts,
                                [&](const dataset& data, long mm, double* out) {
                                  const cdf_model fitted(data, static_cast<int>(mm));
                                  for (long p = 0; p < npts; ++p) out[p] = fitted(cfg.points[p]);
                                });
    } else {
      values = replicate_matrix(cfg, n, m, j, workers, npts,
                                [&](const dataset& data, long mm, double* out) {
                                  const density_model fitted = fit_density(data, static_cast<int>(mm));
                                  for (long p = 0; p < npts; ++p) out[p] = fitted(cfg.points[p]);
                                });
    }
    for (long p = 0; p < npts; ++p) {
      const auto& x = cfg.points[p];
      const auto col = column(values, cfg.replicates, npts, p);
      const moment_summary s = summarize(col);
      const double md = static_cast<double>(m);
      if (cfg.kind == estimator_kind::cdf) {
        const cdf_coeffs c = cdf_asymptotics_at(model, x);
        const double truth = model.cdf(x);
        const double bias = s.mean - truth;
        push_row(rep, n, m, x, "bias", bias, s.se_mean, c.bias_coeff / md);
        push_row(rep, n, m, x, "m_bias", md * bias, md * s.se_mean, c.bias_coeff);
        const double var_theory = (c.variance - c.deficiency / std::sqrt(md)) / n;
        push_row(rep, n, m, x, "variance", s.variance, s.se_variance, var_theory);
        push_row(rep, n, m, x, "n_var", n * s.variance, n * s.se_variance,
                 c.variance - c.deficiency / std::sqrt(md));
        const double mse = s.variance + bias * bias;
        const double mse_se = std::hypot(s.se_variance, 2.0 * bias * s.se_mean);
        const auto err = asymptotic_error(model, cfg.kind, std::vector<double>(x),
                                          static_cast<double>(n), md);
        push_row(rep, n, m, x, "mse", mse, mse_se, err.total);
      } else {
        const density_coeffs c = density_asymptotics_at(model, x);
        const double truth = c.pdf_value;
        const double bias = s.mean - truth;
        push_row(rep, n, m, x, "bias", bias, s.se_mean, c.bias_coeff / md);
        push_row(rep, n, m, x, "m_bias", md * bias, md * s.se_mean, c.bias_coeff);
        const double scale = n * std::pow(md, -0.5 * d);
        push_row(rep, n, m, x, "variance", s.variance, s.se_variance,
                 std::pow(md, 0.5 * d) / n * c.variance_factor * truth);
        push_row(rep, n, m, x, "scaled_var", scale * s.variance, scale * s.se_variance,
                 c.variance_factor * truth);
        // finite-m refinement: the next term of n Var is -f^2, so the scaled
        // variance sits below psi f by about m^{-d/2} f^2 at desk-scale m.
        push_row(rep, n, m, x, "scaled_var_refined", scale * s.variance, scale * s.se_variance,
                 c.variance_factor * truth - std::pow(md, -0.5 * d) * truth * truth);
        const double mse = s.variance + bias * bias;
        const double mse_se = std::hypot(s.se_variance, 2.0 * bias * s.se_mean);
        const auto err = asymptotic_error(model, cfg.kind, std::vector<double>(x),
                                          static_cast<double>(n), md);
        push_row(rep, n, m, x, "mse", mse, mse_se, err.total);
      }
    }
  }
  return rep;
}

study_report run_mise_rate_study(const study_config& cfg, int workers) {
  cfg.validate();
  if (cfg.study != study_kind::mise_rate) {
    raise(errc::invalid_argument, "run_mise_rate_study: config.study mismatch");
  }
  const distribution_model model = model_from_mixture(cfg.target);
  const int d = cfg.target.dim();
  const int res = cfg.grid_resolution > 0 ? cfg.grid_resolution : default_ise_resolution(d);

  study_report rep;
  rep.study = study_kind::mise_rate;
  rep.kind = cfg.kind;
  rep.replicates = cfg.replicates;
  rep.seed = cfg.seed;

  std::vector<long> ns(cfg.n_values);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<double> logn, logmise;
  for (int j = 0; j < static_cast<int>(ns.size()); ++j) {
    const long n = ns[j];
    const long m = resolve_m(cfg, model, n);
    std::vector<double> ise(static_cast<std::size_t>(cfg.replicates));
    parallel_for(cfg.replicates, workers, [&](long r) {
      rng gen = rng::for_stream(cfg.seed, stream_id(j, r));
      const dataset data = sample_mixture(cfg.target, n, gen);
      if (cfg.kind == estimator_kind::cdf) {
        const cdf_model fitted(data, static_cast<int>(m));
        ise[r] = integrate_simplex(d, res, [&](std::span<const double> x) {
          const double diff = fitted(x) - model.cdf(x);
          return diff * diff;
        });
      } else {
        const density_model fitted = fit_density(data, static_cast<int>(m));
        ise[r] = integrate_simplex(d, res, [&](std::span<const double> x) {
          const double diff = fitted(x) - model.pdf(x);
          return diff * diff;
        });
      }
    });
    const moment_summary s = summarize(ise);
    const auto err = asymptotic_error(model, cfg.kind, std::nullopt, static_cast<double>(n),
                                      static_cast<double>(m));
    push_row(rep, n, m, {}, "mise", s.mean, s.se_mean, err.total);
    logn.push_back(std::log(static_cast<double>(n)));
    logmise.push_back(std::log(s.mean));
  }
  fit_loglog(logn, logmise, rep.slope, rep.slope_se);
  rep.slope_theory = cfg.kind == estimator_kind::cdf ? -1.0 : -4.0 / (d + 4.0);
  rep.has_slope = true;
  return rep;
}

study_report run_normality_study(const study_config& cfg, int workers) {
  cfg.validate();
  const distribution_model model = model_from_mixture(cfg.target);
  const int d = cfg.target.dim();
  const long npts = static_cast<long>(cfg.points.size());

  study_report rep;
  rep.study = study_kind::normality;
  rep.kind = cfg.kind;
  rep.replicates = cfg.replicates;
  rep.seed = cfg.seed;

  for (int j = 0; j < static_cast<int>(cfg.n_values.size()); ++j) {
    const long n = cfg.n_values[j];
    const long m = resolve_m(cfg, model, n);
    const double md = static_cast<double>(m);

    // theorem standardization: exact smoothed means and asymptotic sd per point
    std::vector<double> center(static_cast<std::size_t>(npts)), sd(static_cast<std::size_t>(npts));
    for (long p = 0; p < npts; ++p) {
      const auto& x = cfg.points[p];
      if (cfg.kind == estimator_kind::cdf) {
        const double f = model.cdf(x);
        if (!(f > 0.0) || !(f < 1.0)) {
          raise(errc::invalid_argument,
                "normality study: F(x) must lie strictly inside (0,1) at every point");
        }
        center[p] = bernstein_poly(model.cdf, static_cast<int>(m), x);
        sd[p] = std::sqrt(f * (1.0 - f));
      } else {
        const density_coeffs c = density_asymptotics_at(model, x);
        if (!(c.pdf_value > 0.0)) {
          raise(errc::invalid_argument, "normality study: f(x) must be positive at every point");
        }
        center[p] = smoothed_density_mean(cfg.target, static_cast<int>(m), x);
        sd[p] = std::sqrt(c.variance_factor * c.pdf_value);
      }
    }

    const double rate_scaling =
        cfg.kind == estimator_kind::cdf ? std::sqrt(static_cast<double>(n))
                                        : std::sqrt(static_cast<double>(n)) * std::pow(md, -0.25 * d);
    if (cfg.kind == estimator_kind::density && rate_scaling < 10.0) {
      rep.warnings.push_back("rate precondition weak at n=" + std::to_string(n) +
                             ": sqrt(n) m^{-d/4} = " + std::to_string(rate_scaling));
    }

    std::vector<double> values;
    if (cfg.kind == estimator_kind::cdf) {
      values = replicate_matrix(cfg, n, m, j, workers, npts,
                                [&](const dataset& data, long mm, double* out) {
                                  const cdf_model fitted(data, static_cast<int>(mm));
                                  for (long p = 0; p < npts; ++p) out[p] = fitted(cfg.points[p]);
                                });
    } else {
      values = replicate_matrix(cfg, n, m, j, workers, npts,
                                [&](const dataset& data, long mm, double* out) {
                                  const density_model fitted = fit_density(data, static_cast<int>(mm));
                                  for (long p = 0; p < npts; ++p) out[p] = fitted(cfg.points[p]);
                                });
    }

    for (long p = 0; p < npts; ++p) {
      const auto& x = cfg.points[p];
      std::vector<double> z = column(values, cfg.replicates, npts, p);
      const double scale = cfg.kind == estimator_kind::cdf
                               ? std::sqrt(static_cast<double>(n))
                               : std::sqrt(static_cast<double>(n)) * std::pow(md, -0.25 * d);
      for (double& v : z) v = scale * (v - center[p]) / sd[p];
      const moment_summary s = summarize(z);
      push_row(rep, n, m, x, "standardized_mean", s.mean, s.se_mean, 0.0);
      push_row(rep, n, m, x, "variance_ratio", s.variance, s.se_variance, 1.0);
      push_row(rep, n, m, x, "ks_distance", ks_distance_to_normal(z), 0.0, 0.0);
      push_row(rep, n, m, x, "rate_scaling", rate_scaling, 0.0, nan_v);
    }
  }
  return rep;
}

study_report run_consistency_study(const study_config& cfg, int workers) {
  cfg.validate();
  const distribution_model model = model_from_mixture(cfg.target);
  const int d = cfg.target.dim();
  const int g = cfg.grid_resolution > 0 ? cfg.grid_resolution : default_sup_resolution(d);

  study_report rep;
  rep.study = study_kind::consistency;
  rep.kind = cfg.kind;
  rep.replicates = cfg.replicates;
  rep.seed = cfg.seed;

  // fixed evaluation grid: closed lattice for CDFs, interior midpoints for
  // densities (the density theory is an interior statement)
  std::vector<std::vector<double>> grid;
  std::vector<double> target_at;
  if (cfg.kind == estimator_kind::cdf) {
    for_each_lattice(g, d, [&](std::span<const int> k) {
      std::vector<double> x(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) / g;
      grid.push_back(std::move(x));
    });
    for (const auto& x : grid) target_at.push_back(model.cdf(x));
  } else {
    const std::vector<double> nodes = simplex_grid_nodes(d, g);
    const long count = static_cast<long>(nodes.size()) / d;
    for (long i = 0; i < count; ++i) {
      grid.emplace_back(nodes.begin() + i * d, nodes.begin() + (i + 1) * d);
    }
    for (const auto& x : grid) target_at.push_back(model.pdf(x));
  }

  std::vector<double> primary_means;
  for (int j = 0; j < static_cast<int>(cfg.n_values.size()); ++j) {
    const long n = cfg.n_values[j];
    const long m = resolve_m(cfg, model, n);
    std::vector<double> sup_emp(static_cast<std::size_t>(cfg.replicates), 0.0);
    std::vector<double> sup_tgt(static_cast<std::size_t>(cfg.replicates), 0.0);
    parallel_for(cfg.replicates, workers, [&](long r) {
      rng gen = rng::for_stream(cfg.seed, stream_id(j, r));
      const dataset data = sample_mixture(cfg.target, n, gen);
      double worst_emp = 0.0, worst_tgt = 0.0;
      if (cfg.kind == estimator_kind::cdf) {
        const cdf_model fitted(data, static_cast<int>(m));
        const std::vector<double> ecdf = ecdf_on_lattice(data, g);
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const double v = fitted(grid[i]);
          worst_emp = std::max(worst_emp, std::abs(v - ecdf[i]));
          worst_tgt = std::max(worst_tgt, std::abs(v - target_at[i]));
        }
      } else {
        const density_model fitted = fit_density(data, static_cast<int>(m));
        for (std::size_t i = 0; i < grid.size(); ++i) {
          worst_tgt = std::max(worst_tgt, std::abs(fitted(grid[i]) - target_at[i]));
        }
      }
      sup_emp[r] = worst_emp;
      sup_tgt[r] = worst_tgt;
    });
    if (cfg.kind == estimator_kind::cdf) {
      const moment_summary se = summarize(sup_emp);
      push_row(rep, n, m, {}, "sup_vs_empirical", se.mean, se.se_mean, nan_v);
      primary_means.push_back(se.mean);
    }
    const moment_summary st = summarize(sup_tgt);
    push_row(rep, n, m, {}, "sup_vs_target", st.mean, st.se_mean, nan_v);
    if (cfg.kind == estimator_kind::density) primary_means.push_back(st.mean);
  }
  rep.monotone = true;
  for (std::size_t i = 1; i < primary_means.size(); ++i) {
    rep.monotone = rep.monotone && primary_means[i] < primary_means[i - 1];
  }
  rep.has_monotone = primary_means.size() >= 2;
  return rep;
}

study_report run_study(const study_config& cfg, int workers) {
  switch (cfg.study) {
    case study_kind::pointwise: return run_pointwise_study(cfg, workers);
    case study_kind::mise_rate: return run_mise_rate_study(cfg, workers);
    case study_kind::normality: return run_normality_study(cfg, workers);
    case study_kind::consistency: return run_consistency_study(cfg, workers);
  }
  raise(errc::internal, "run_study: unreachable");
}

}  // namespace sbern
