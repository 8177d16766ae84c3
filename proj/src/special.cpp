#include "sbern/special.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>

#include "sbern/common.hpp"

namespace sbern {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Table of log(n!) for n < kLogFactTableSize, built once with long-double
// lgamma so each entry is correctly rounded to double.  2 MB; covers every
// order used by the estimators (m up to 1e5 needs arguments up to ~2m).
constexpr long kLogFactTableSize = 262145;

const std::vector<double>& log_fact_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactTableSize);
    t[0] = 0.0;
    for (long n = 1; n < kLogFactTableSize; ++n) {
      t[n] = static_cast<double>(lgammal(static_cast<long double>(n) + 1.0L));
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(long n) {
  if (n < 0) raise(errc::invalid_argument, "log_factorial: negative argument");
  const auto& table = log_fact_table();
  if (n < kLogFactTableSize) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(long n, long k) {
  if (k < 0 || k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

unsigned long long binomial_exact(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) {
    const unsigned long long num = static_cast<unsigned long long>(n - k + i);
    // r * num never overflows when the final result fits: check before multiply.
    if (r > std::numeric_limits<unsigned long long>::max() / num) {
      raise(errc::invalid_argument, "binomial_exact: overflow");
    }
    r = r * num / static_cast<unsigned long long>(i);
  }
  return r;
}

double beta_cdf(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) raise(errc::invalid_argument, "beta_cdf: parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double u) {
  if (!(u > 0.0) || !(u < 1.0)) raise(errc::invalid_argument, "normal_quantile: u must be in (0,1)");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

multinomial_pmf::multinomial_pmf(int trials, std::span<const double> x) : trials_(trials) {
  if (trials < 0) raise(errc::invalid_argument, "multinomial_pmf: negative trial count");
  double s = 0.0;
  logx_.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) raise(errc::invalid_argument, "multinomial_pmf: negative coordinate");
    s += x[i];
    logx_[i] = x[i] > 0.0 ? std::log(x[i]) : kNegInf;
  }
  const double rem = 1.0 - s;
  if (rem < -1e-9) raise(errc::invalid_argument, "multinomial_pmf: coordinates sum past 1");
  log_rem_ = rem > 0.0 ? std::log(rem) : kNegInf;
  log_fact_m_ = log_factorial(trials);
}

double multinomial_pmf::log_pmf(std::span<const int> k) const {
  if (k.size() != logx_.size()) raise(errc::invalid_argument, "multinomial_pmf: index dimension mismatch");
  long s = 0;
  double t = log_fact_m_;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0) raise(errc::invalid_argument, "multinomial_pmf: negative index");
    s += k[i];
    if (k[i] > 0) {
      if (logx_[i] == kNegInf) return kNegInf;  // x_i = 0 with k_i > 0
      t += k[i] * logx_[i] - log_factorial(k[i]);
    }
  }
  const long rem = trials_ - s;
  if (rem < 0) raise(errc::invalid_argument, "multinomial_pmf: indices sum past trial count");
  if (rem > 0) {
    if (log_rem_ == kNegInf) return kNegInf;
    t += rem * log_rem_ - log_factorial(rem);
  }
  return t;
}

double multinomial_pmf::pmf(std::span<const int> k) const { return std::exp(log_pmf(k)); }

double dirichlet_log_density(std::span<const double> alpha, double beta,
                             std::span<const double> x) {
  if (alpha.size() != x.size()) raise(errc::invalid_argument, "dirichlet_log_density: dimension mismatch");
  if (!(beta > 0.0)) raise(errc::invalid_argument, "dirichlet_log_density: beta must be positive");
  double asum = beta;
  double norm = -std::lgamma(beta);
  double t = 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = alpha[i];
    if (!(a > 0.0)) raise(errc::invalid_argument, "dirichlet_log_density: alpha must be positive");
    asum += a;
    norm -= std::lgamma(a);
    s += x[i];
    const double e = a - 1.0;
    if (x[i] > 0.0) {
      t += e * std::log(x[i]);
    } else if (e != 0.0) {
      return e > 0.0 ? kNegInf : std::numeric_limits<double>::infinity();
    }
  }
  const double rem = 1.0 - s;
  const double eb = beta - 1.0;
  if (rem > 0.0) {
    t += eb * std::log(rem);
  } else if (eb != 0.0) {
    return eb > 0.0 ? kNegInf : std::numeric_limits<double>::infinity();
  }
  return std::lgamma(asum) + norm + t;
}

double dirichlet_moment_integral(std::span<const int> a, int b) {
  if (b < 0) raise(errc::invalid_argument, "dirichlet_moment_integral: negative exponent");
  long total = b + static_cast<long>(a.size());
  for (int ai : a) {
    if (ai < 0) raise(errc::invalid_argument, "dirichlet_moment_integral: negative exponent");
    total += ai;
  }
  if (total <= 33) {  // 33! < 2^127: numerator and denominator exact in __int128
    auto fact = [](int n) {
      unsigned __int128 r = 1;
      for (int i = 2; i <= n; ++i) r *= static_cast<unsigned>(i);
      return r;
    };
    unsigned __int128 num = fact(b);
    for (int ai : a) num *= fact(ai);
    const unsigned __int128 den = fact(static_cast<int>(total));
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
  }
  double t = log_factorial(b) - log_factorial(total);
  for (int ai : a) t += log_factorial(ai);
  return std::exp(t);
}

}  // namespace sbern
