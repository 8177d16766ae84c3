#include "sbern/verification.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "sbern/common.hpp"
#include "sbern/quadrature.hpp"
#include "sbern/rng.hpp"
#include "sbern/simplex.hpp"
#include "sbern/special.hpp"

namespace sbern {

double multinomial_mean_residual(int m, std::span<const double> x) {
  const int d = static_cast<int>(x.size());
  multinomial_pmf pmf(m, x);
  std::vector<kahan_sum> acc(static_cast<std::size_t>(d));
  for_each_lattice(m, d, [&](std::span<const int> k) {
    const double w = pmf.pmf(k);
    if (w == 0.0) return;
    for (int i = 0; i < d; ++i) {
      acc[i].add((static_cast<double>(k[i]) / m - x[i]) * w);
    }
  });
  double worst = 0.0;
  for (const auto& a : acc) worst = std::max(worst, std::abs(a.value()));
  return worst;
}

double multinomial_cov_residual(int m, std::span<const double> x) {
  const int d = static_cast<int>(x.size());
  multinomial_pmf pmf(m, x);
  std::vector<kahan_sum> acc(static_cast<std::size_t>(d) * d);
  std::vector<double> dev(static_cast<std::size_t>(d));
  for_each_lattice(m, d, [&](std::span<const int> k) {
    const double w = pmf.pmf(k);
    if (w == 0.0) return;
    for (int i = 0; i < d; ++i) dev[i] = static_cast<double>(k[i]) / m - x[i];
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        acc[static_cast<std::size_t>(i) * d + j].add(dev[i] * dev[j] * w);
      }
    }
  });
  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double expect = ((i == j ? x[i] : 0.0) - x[i] * x[j]) / m;
      worst = std::max(worst,
                       std::abs(acc[static_cast<std::size_t>(i) * d + j].value() - expect));
    }
  }
  return worst;
}

double pmf_power_sum(int r, std::span<const double> x, int p) {
  if (p != 2 && p != 3) raise(errc::invalid_argument, "pmf_power_sum: p must be 2 or 3");
  if (r < 1) raise(errc::invalid_argument, "pmf_power_sum: r must be >= 1");
  const int d = static_cast<int>(x.size());
  multinomial_pmf pmf(r, x);
  kahan_sum acc;
  for_each_lattice(r, d, [&](std::span<const int> k) {
    const double lp = pmf.log_pmf(k);
    if (lp == -std::numeric_limits<double>::infinity()) return;
    acc.add(std::exp(p * lp));
  });
  const double scale = p == 2 ? std::pow(r, 0.5 * d) : std::pow(r, d);
  return scale * acc.value();
}

double pmf_power_limit(std::span<const double> x, int p) {
  if (p != 2 && p != 3) raise(errc::invalid_argument, "pmf_power_limit: p must be 2 or 3");
  double prod = 1.0, s = 0.0;
  for (double xi : x) {
    prod *= xi;
    s += xi;
  }
  prod *= 1.0 - s;
  if (!(prod > 0.0)) raise(errc::invalid_argument, "pmf_power_limit: point must be interior");
  const int d = static_cast<int>(x.size());
  if (p == 2) return 1.0 / std::sqrt(std::pow(4.0 * M_PI, d) * prod);
  return 1.0 / (std::pow(2.0 * std::sqrt(3.0) * M_PI, d) * prod);
}

double min_coordinate_sum(int r, double xi) {
  if (r < 1) raise(errc::invalid_argument, "min_coordinate_sum: r must be >= 1");
  if (!(xi >= 0.0) || !(xi <= 1.0)) {
    raise(errc::invalid_argument, "min_coordinate_sum: coordinate outside [0,1]");
  }
  // Binomial marginal reduction: with B_a = Bin(r, x) weights and
  // T_a = sum_{b > a} B_b,
  //   sum_{a,b} (min(a,b)/r - x) B_a B_b = sum_a (a/r - x) B_a (2 T_a + B_a).
  std::vector<double> B(static_cast<std::size_t>(r) + 1);
  const double lx = xi > 0.0 ? std::log(xi) : -std::numeric_limits<double>::infinity();
  const double l1 = xi < 1.0 ? std::log1p(-xi) : -std::numeric_limits<double>::infinity();
  for (int a = 0; a <= r; ++a) {
    double t = log_binomial(r, a);
    if (a > 0) t += a * lx;
    if (a < r) t += (r - a) * l1;
    B[a] = (a > 0 && xi == 0.0) || (a < r && xi == 1.0) ? 0.0 : std::exp(t);
  }
  std::vector<double> tail(static_cast<std::size_t>(r) + 2, 0.0);
  for (int a = r; a >= 0; --a) tail[a] = tail[a + 1] + B[a];
  kahan_sum acc;
  for (int a = 0; a <= r; ++a) {
    acc.add((static_cast<double>(a) / r - xi) * B[a] * (2.0 * tail[a + 1] + B[a]));
  }
  return std::sqrt(static_cast<double>(r)) * acc.value();
}

double min_coordinate_limit(double xi) { return -std::sqrt(xi * (1.0 - xi) / M_PI); }

double squared_pmf_integral_sum(int r, int d) {
  if (r < 1 || d < 1) raise(errc::invalid_argument, "squared_pmf_integral_sum: need r, d >= 1");
  // int P_{k,r}^2 = C_k^2 (2k_1)!...(2k_d)! (2 rem)! / (2r+d)!  with
  // C_k the multinomial coefficient; all in log space, compensated sum.
  const double tail = log_factorial(2 * r + d);
  kahan_sum acc;
  for_each_lattice(r, d, [&](std::span<const int> k) {
    int rem = r;
    double logc = log_factorial(r);
    double logm = 0.0;
    for (int i = 0; i < d; ++i) {
      rem -= k[i];
      logc -= log_factorial(k[i]);
      logm += log_factorial(2 * k[i]);
    }
    logc -= log_factorial(rem);
    logm += log_factorial(2 * rem);
    acc.add(std::exp(2.0 * logc + logm - tail));
  });
  return acc.value();
}

double squared_pmf_integral_closed(int r, int d) {
  return std::exp(0.5 * std::log(M_PI) - d * std::log(2.0) + std::lgamma(r + 1.0) -
                  std::lgamma(0.5 * d + 0.5) - std::lgamma(r + 0.5 * d + 1.0));
}

double psi_integral_closed(int d) {
  return std::exp(0.5 * std::log(M_PI) - d * std::log(2.0) - std::lgamma(0.5 * d + 0.5));
}

namespace {

void require_interior_cov(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) {
    if (!(xi > 0.0)) raise(errc::invalid_argument, "gaussian limit: x must be interior");
    s += xi;
  }
  if (!(s < 1.0)) raise(errc::invalid_argument, "gaussian limit: x must be interior");
}

}  // namespace

double simplex_covariance_det_closed(std::span<const double> x) {
  require_interior_cov(x);
  double prod = 1.0, s = 0.0;
  for (double xi : x) {
    prod *= xi;
    s += xi;
  }
  return prod * (1.0 - s);
}

double simplex_covariance_det_chol(std::span<const double> x) {
  require_interior_cov(x);
  const int d = static_cast<int>(x.size());
  std::vector<double> L(static_cast<std::size_t>(d) * d, 0.0);
  auto sigma = [&](int i, int j) { return (i == j ? x[i] : 0.0) - x[i] * x[j]; };
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = sigma(i, j);
      for (int k = 0; k < j; ++k) {
        v -= L[static_cast<std::size_t>(i) * d + k] * L[static_cast<std::size_t>(j) * d + k];
      }
      if (i == j) {
        if (!(v > 0.0)) raise(errc::internal, "simplex_covariance_det_chol: not positive definite");
        L[static_cast<std::size_t>(i) * d + i] = std::sqrt(v);
      } else {
        L[static_cast<std::size_t>(i) * d + j] = v / L[static_cast<std::size_t>(j) * d + j];
      }
    }
  }
  double det = 1.0;
  for (int i = 0; i < d; ++i) {
    const double lii = L[static_cast<std::size_t>(i) * d + i];
    det *= lii * lii;
  }
  return det;
}

double gaussian_limit_density(std::span<const double> x, std::span<const double> y) {
  require_interior_cov(x);
  if (x.size() != y.size()) raise(errc::invalid_argument, "gaussian_limit_density: size mismatch");
  const int d = static_cast<int>(x.size());
  // Sigma_x^{-1} = diag(1/x_i) + (1-|x|_1)^{-1} J  (rank-one update of the
  // multinomial covariance inverse), so the quadratic form is closed-form.
  double s = 0.0;
  for (double xi : x) s += xi;
  double q = 0.0, ysum = 0.0;
  for (int i = 0; i < d; ++i) {
    q += y[i] * y[i] / x[i];
    ysum += y[i];
  }
  q += ysum * ysum / (1.0 - s);
  const double det = simplex_covariance_det_closed(x);
  return std::exp(-0.5 * q) / std::pow(2.0 * M_PI, 0.5 * d) / std::sqrt(det);
}

double gaussian_limit_density_chol(std::span<const double> x, std::span<const double> y) {
  require_interior_cov(x);
  if (x.size() != y.size()) raise(errc::invalid_argument, "gaussian_limit_density: size mismatch");
  const int d = static_cast<int>(x.size());
  std::vector<double> L(static_cast<std::size_t>(d) * d, 0.0);
  auto sigma = [&](int i, int j) { return (i == j ? x[i] : 0.0) - x[i] * x[j]; };
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double v = sigma(i, j);
      for (int k = 0; k < j; ++k) {
        v -= L[static_cast<std::size_t>(i) * d + k] * L[static_cast<std::size_t>(j) * d + k];
      }
      if (i == j) {
        L[static_cast<std::size_t>(i) * d + i] = std::sqrt(v);
      } else {
        L[static_cast<std::size_t>(i) * d + j] = v / L[static_cast<std::size_t>(j) * d + j];
      }
    }
  }
  // forward solve L z = y; q = |z|^2; det = prod L_ii^2
  std::vector<double> z(static_cast<std::size_t>(d));
  double det = 1.0, q = 0.0;
  for (int i = 0; i < d; ++i) {
    double v = y[i];
    for (int k = 0; k < i; ++k) v -= L[static_cast<std::size_t>(i) * d + k] * z[k];
    const double lii = L[static_cast<std::size_t>(i) * d + i];
    z[i] = v / lii;
    det *= lii * lii;
    q += z[i] * z[i];
  }
  return std::exp(-0.5 * q) / std::pow(2.0 * M_PI, 0.5 * d) / std::sqrt(det);
}

double bernstein_tail_bound(double variance_sum, double b, double t) {
  if (!(variance_sum >= 0.0) || !(b >= 0.0) || !(t >= 0.0)) {
    raise(errc::invalid_argument, "bernstein_tail_bound: arguments must be nonnegative");
  }
  const double denom = variance_sum + b * t / 3.0;
  if (denom == 0.0) return t == 0.0 ? 2.0 : 0.0;
  return 2.0 * std::exp(-0.5 * t * t / denom);
}

namespace {

struct check_builder {
  std::vector<lemma_check> out;
  void add(std::string id, bool pass, double observed, double expected, double tol,
           std::string detail) {
    out.push_back({std::move(id), pass, observed, expected, tol, std::move(detail)});
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::vector<lemma_check> run_verification_sweep(std::uint64_t seed, int workers) {
  check_builder cb;

  // --- multinomial moment identities, 100 random (m, d, x) tuples ---
  {
    constexpr int kTuples = 100;
    std::vector<double> mean_res(kTuples), cov_res(kTuples);
    parallel_for(kTuples, workers, [&](long i) {
      rng gen = rng::for_stream(seed, 1000 + static_cast<std::uint64_t>(i));
      const int d = 1 + static_cast<int>(gen.next_u64() % 3);
      const int m = 1 + static_cast<int>(gen.next_u64() % 40);
      std::vector<double> alpha(static_cast<std::size_t>(d), 1.0);
      std::vector<double> x(static_cast<std::size_t>(d));
      gen.dirichlet(alpha, 1.0, x);
      mean_res[i] = multinomial_mean_residual(m, x);
      cov_res[i] = multinomial_cov_residual(m, x);
    });
    const double worst_mean = *std::max_element(mean_res.begin(), mean_res.end());
    const double worst_cov = *std::max_element(cov_res.begin(), cov_res.end());
    cb.add("multinomial.mean.identity", worst_mean <= 1e-12, worst_mean, 0.0, 1e-12,
           "max_i |sum (k_i/m - x_i) P| over 100 random tuples, m <= 40, d <= 3");
    cb.add("multinomial.covariance.identity", worst_cov <= 1e-10, worst_cov, 0.0, 1e-10,
           "max_ij |sum (k_i/m-x_i)(k_j/m-x_j) P - m^{-1}(x_i 1{i=j} - x_i x_j)|");
  }

  // --- squared-weight integral: exact term sum vs closed form, r <= 40, d <= 3 ---
  {
    double worst = 0.0;
    int worst_r = 0, worst_d = 0;
    for (int d = 1; d <= 3; ++d) {
      for (int r = 1; r <= 40; ++r) {
        const double sum = squared_pmf_integral_sum(r, d);
        const double closed = squared_pmf_integral_closed(r, d);
        const double rel = std::abs(sum / closed - 1.0);
        if (rel > worst) {
          worst = rel;
          worst_r = r;
          worst_d = d;
        }
      }
    }
    cb.add("lemma4.exact.match", worst <= 1e-12, worst, 0.0, 1e-12,
           "max relative gap, worst at r=" + std::to_string(worst_r) +
               ", d=" + std::to_string(worst_d));
    const double s1 = squared_pmf_integral_sum(1, 1);
    cb.add("lemma4.spot.r1d1", std::abs(s1 - 2.0 / 3.0) <= 1e-12, s1, 2.0 / 3.0, 1e-12,
           "int over [0,1] of (1-x)^2 + x^2");
    const double s2 = squared_pmf_integral_sum(2, 1);
    cb.add("lemma4.spot.r2d1", std::abs(s2 - 8.0 / 15.0) <= 1e-12, s2, 8.0 / 15.0, 1e-12,
           "int over [0,1] of (1-x)^4 + 4x^2(1-x)^2 + x^4");
  }

  // --- power-sum convergence at the interior spot x = (1/3, 1/3), d = 2 ---
  {
    const std::vector<double> x{1.0 / 3.0, 1.0 / 3.0};
    const double limit = pmf_power_limit(x, 2);
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    std::string detail = "abs errors at r=50,100,200:";
    double last_rel = 0.0;
    for (int r : {50, 100, 200}) {
      const double err = std::abs(pmf_power_sum(r, x, 2) - limit);
      decreasing = decreasing && err < prev;
      prev = err;
      last_rel = err / limit;
      detail += " " + fmt(err);
    }
    cb.add("lemma2.convergence.p2", decreasing && last_rel <= 0.05, last_rel, 0.0, 0.05,
           detail + " (decreasing, final relative error vs 5%)");
    const double limit3 = pmf_power_limit(x, 3);
    const double v3 = pmf_power_sum(200, x, 3);
    cb.add("lemma2.spot.p3", std::abs(v3 / limit3 - 1.0) <= 0.05, v3, limit3, 0.05,
           "r^d sum P^3 at r=200 vs [(2 sqrt(3) pi)^d prod]^{-1}");
  }

  // --- min-coordinate double sum: bound fuzz + limit spot ---
  {
    constexpr int kTuples = 10000;
    std::vector<double> vals(kTuples);
    parallel_for(kTuples, workers, [&](long i) {
      rng gen = rng::for_stream(seed, 20000 + static_cast<std::uint64_t>(i));
      const int r = 1 + static_cast<int>(gen.next_u64() % 2000);
      const double xi = gen.uniform01();
      vals[i] = std::abs(min_coordinate_sum(r, xi));
    });
    const double worst = *std::max_element(vals.begin(), vals.end());
    cb.add("lemma3.bound.fuzz", worst <= 1.0 + 1e-12, worst, 1.0, 1e-12,
           "max |R_{i,r}| over 10^4 random (r <= 2000, x) tuples");
    const double v = min_coordinate_sum(500, 0.5);
    const double lim = min_coordinate_limit(0.5);
    cb.add("lemma3.limit.r500", std::abs(v - lim) <= 0.03 * std::abs(lim), v, lim,
           0.03 * std::abs(lim), "R_{1,500}(0.5) vs -sqrt(x(1-x)/pi)");
  }

  // --- Gaussian limit density: determinant route agreement + normalization ---
  {
    constexpr int kTuples = 200;
    std::vector<double> rels(kTuples);
    parallel_for(kTuples, workers, [&](long i) {
      rng gen = rng::for_stream(seed, 40000 + static_cast<std::uint64_t>(i));
      const int d = 1 + static_cast<int>(gen.next_u64() % 3);
      std::vector<double> alpha(static_cast<std::size_t>(d), 1.0);
      std::vector<double> x(static_cast<std::size_t>(d));
      gen.dirichlet(alpha, 1.0, x);
      const double a = simplex_covariance_det_closed(x);
      const double b = simplex_covariance_det_chol(x);
      double rel = std::abs(a / b - 1.0);
      std::vector<double> y(static_cast<std::size_t>(d));
      for (int j = 0; j < d; ++j) y[j] = 0.3 * (gen.uniform01() - 0.5);
      const double da = gaussian_limit_density(x, y);
      const double db = gaussian_limit_density_chol(x, y);
      rel = std::max(rel, std::abs(da / db - 1.0));
      rels[i] = rel;
    });
    const double worst = *std::max_element(rels.begin(), rels.end());
    cb.add("gaussian.route.agreement", worst <= 1e-10, worst, 0.0, 1e-10,
           "closed product vs Cholesky, determinant and density, 200 random (d <= 3, x)");
    // normalization over a wide box, d = 2 spot
    const std::vector<double> x{0.3, 0.25};
    const double s1 = std::sqrt(x[0] * (1 - x[0]));
    const double s2 = std::sqrt(x[1] * (1 - x[1]));
    const int res = 400;
    double total = 0.0;
    for (int i = 0; i < res; ++i) {
      for (int j = 0; j < res; ++j) {
        const std::vector<double> y{(-6.0 + 12.0 * (i + 0.5) / res) * s1,
                                    (-6.0 + 12.0 * (j + 0.5) / res) * s2};
        total += gaussian_limit_density(x, y);
      }
    }
    total *= (12.0 * s1 / res) * (12.0 * s2 / res);
    cb.add("gaussian.normalization", std::abs(total - 1.0) <= 1e-3, total, 1.0, 1e-3,
           "midpoint integral over the +-6 sigma box at x=(0.3,0.25)");
  }

  // --- Bernstein inequality envelope ---
  {
    const double spot = bernstein_tail_bound(0.0, 1.0, 6.0);
    cb.add("bernstein.bound.spot", std::abs(spot - 2.0 * std::exp(-9.0)) <= 1e-15, spot,
           2.0 * std::exp(-9.0), 1e-15, "variance 0, b=1, t=6");
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 50; ++i) {
      const double v = bernstein_tail_bound(0.7, 0.2, 0.1 * i);
      monotone = monotone && v < prev;
      prev = v;
    }
    const double at0 = bernstein_tail_bound(0.7, 0.2, 1e-12);
    monotone = monotone && std::abs(at0 - 2.0) <= 1e-9;
    cb.add("bernstein.bound.shape", monotone, at0, 2.0, 1e-9,
           "decreasing in t, and -> 2 as t -> 0+");
  }

  return cb.out;
}

bool verification_all_pass(const std::vector<lemma_check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string verification_report_json(const std::vector<lemma_check>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"id", c.id},
                   {"pass", c.pass},
                   {"observed", c.observed},
                   {"expected", c.expected},
                   {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  nlohmann::json doc{{"checks", arr}, {"all_pass", verification_all_pass(checks)}};
  return doc.dump(2);
}

}  // namespace sbern
