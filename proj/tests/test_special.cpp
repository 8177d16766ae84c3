#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "sbern/common.hpp"
#include "sbern/special.hpp"

using namespace sbern;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("log_factorial matches exact small factorials") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(1) == 0.0);
  CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
  CHECK(log_factorial(12) == doctest::Approx(std::log(479001600.0)).epsilon(1e-15));
  // beyond the table: must agree with lgamma
  CHECK(log_factorial(5000) == doctest::Approx(std::lgamma(5001.0)).epsilon(1e-13));
  CHECK_THROWS_AS(log_factorial(-1), error);
}

TEST_CASE("log_binomial edge cases and values") {
  CHECK(log_binomial(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-14));
  CHECK(log_binomial(10, 0) == 0.0);
  CHECK(log_binomial(10, 10) == 0.0);
  CHECK(log_binomial(10, -1) == -inf);
  CHECK(log_binomial(10, 11) == -inf);
  // large argument consistency with the exact integer route
  CHECK(log_binomial(52, 5) == doctest::Approx(std::log(2598960.0)).epsilon(1e-13));
}

TEST_CASE("binomial_exact values and overflow") {
  CHECK(binomial_exact(0, 0) == 1ULL);
  CHECK(binomial_exact(52, 5) == 2598960ULL);
  CHECK(binomial_exact(40, 20) == 137846528820ULL);
  // C(70,35) ~ 1.1e20 exceeds 64-bit range
  CHECK_THROWS_AS(binomial_exact(70, 35), error);
}

TEST_CASE("multinomial pmf: interior values") {
  // d=1, m=3, x=0.5: P(k) = C(3,k)/8
  std::array<double, 1> x{0.5};
  multinomial_pmf pmf(3, x);
  std::array<int, 1> k{0};
  CHECK(pmf.pmf(k) == doctest::Approx(0.125).epsilon(1e-15));
  k[0] = 1;
  CHECK(pmf.pmf(k) == doctest::Approx(0.375).epsilon(1e-15));
  k[0] = 3;
  CHECK(pmf.log_pmf(k) == doctest::Approx(std::log(0.125)).epsilon(1e-14));

  // d=2, m=2, x=(1/3,1/3): P((1,1)) = 2!/(1!1!0!) (1/3)^2 (1/3)^0 = 2/9
  std::array<double, 2> y{1.0 / 3.0, 1.0 / 3.0};
  multinomial_pmf pmf2(2, y);
  std::array<int, 2> k2{1, 1};
  CHECK(pmf2.pmf(k2) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("multinomial pmf: pmf sums to one") {
  std::array<double, 2> x{0.21, 0.47};
  multinomial_pmf pmf(9, x);
  kahan_sum total;
  std::vector<int> k(2);
  for (int a = 0; a <= 9; ++a)
    for (int b = 0; a + b <= 9; ++b) {
      k[0] = a;
      k[1] = b;
      total.add(pmf.pmf(k));
    }
  CHECK(total.value() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("multinomial pmf: boundary degeneracy") {
  // x_1 = 0: mass concentrates on k_1 = 0
  std::array<double, 2> x{0.0, 0.6};
  multinomial_pmf pmf(4, x);
  std::array<int, 2> on{1, 1};
  CHECK(pmf.pmf(on) == 0.0);
  CHECK(pmf.log_pmf(on) == -inf);
  std::array<int, 2> off{0, 2};
  // reduces to Binomial(4, 0.6) at k=2
  CHECK(pmf.pmf(off) == doctest::Approx(6 * 0.36 * 0.16).epsilon(1e-14));

  // sum x = 1: the remainder category has probability 0
  std::array<double, 1> full{1.0};
  multinomial_pmf pmf1(3, full);
  std::array<int, 1> k{2};
  CHECK(pmf1.pmf(k) == 0.0);
  k[0] = 3;
  CHECK(pmf1.pmf(k) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("multinomial pmf rejects invalid k") {
  std::array<double, 1> x{0.4};
  multinomial_pmf pmf(3, x);
  std::array<int, 1> bad{4};
  CHECK_THROWS_AS(pmf.log_pmf(bad), error);
  bad[0] = -1;
  CHECK_THROWS_AS(pmf.log_pmf(bad), error);
}

TEST_CASE("beta_cdf exact rational spot and symmetry") {
  // I_{1/2}(2,5) = 57/64 by the binomial expansion of the integral
  CHECK(beta_cdf(2, 5, 0.5) == doctest::Approx(57.0 / 64.0).epsilon(1e-13));
  CHECK(beta_cdf(3, 3, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(beta_cdf(2, 5, 0.0) == 0.0);
  CHECK(beta_cdf(2, 5, 1.0) == 1.0);
  // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
  CHECK(beta_cdf(2.5, 4.5, 0.3) ==
        doctest::Approx(1.0 - beta_cdf(4.5, 2.5, 0.7)).epsilon(1e-12));
  // uniform case is the identity
  CHECK(beta_cdf(1, 1, 0.37) == doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("normal cdf/quantile round trip") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-10));
  for (double u : {0.001, 0.2, 0.5, 0.77, 0.9999}) {
    CHECK(normal_cdf(normal_quantile(u)) == doctest::Approx(u).epsilon(1e-10));
  }
}

TEST_CASE("dirichlet log density values") {
  // Beta(2,1) on [0,1]: density 2x
  std::array<double, 1> a{2.0};
  std::array<double, 1> x{0.3};
  CHECK(dirichlet_log_density(a, 1.0, x) == doctest::Approx(std::log(0.6)).epsilon(1e-13));
  // uniform on the 2-simplex: density 2! = 2
  std::array<double, 2> a2{1.0, 1.0};
  std::array<double, 2> x2{0.2, 0.3};
  CHECK(dirichlet_log_density(a2, 1.0, x2) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("dirichlet log density boundary exponents") {
  std::array<double, 1> a{1.0};
  std::array<double, 1> x0{0.0};
  // exponent 0 at the boundary contributes nothing
  CHECK(dirichlet_log_density(a, 1.0, x0) == doctest::Approx(0.0).epsilon(1e-13));
  std::array<double, 1> a2{2.0};
  CHECK(dirichlet_log_density(a2, 1.0, x0) == -inf);  // density vanishes
  std::array<double, 1> ah{0.5};
  CHECK(dirichlet_log_density(ah, 0.5, x0) == inf);  // integrable singularity
}

TEST_CASE("dirichlet moment integral exact values") {
  // int_0^1 x (1-x) dx = 1/6
  std::array<int, 1> a{1};
  CHECK(dirichlet_moment_integral(a, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  // simplex volume in d=2: 1/2
  std::array<int, 2> zero{0, 0};
  CHECK(dirichlet_moment_integral(zero, 0) == doctest::Approx(0.5).epsilon(1e-15));
  // 4! 2! 3! / 11! = 7.215007215007215e-06
  std::array<int, 2> a23{2, 3};
  CHECK(dirichlet_moment_integral(a23, 4) ==
        doctest::Approx(7.215007215007215e-06).epsilon(1e-14));
  // log-space fallback stays consistent with the Gamma-function form
  std::array<int, 2> big{20, 20};
  const double expect =
      std::exp(log_factorial(20) * 3 - log_factorial(20 + 20 + 20 + 2));
  CHECK(dirichlet_moment_integral(big, 20) == doctest::Approx(expect).epsilon(1e-12));
}
