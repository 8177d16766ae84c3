#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "sbern/common.hpp"
#include "sbern/estimators.hpp"
#include "sbern/mixture.hpp"
#include "sbern/quadrature.hpp"
#include "sbern/rng.hpp"
#include "sbern/special.hpp"

using namespace sbern;

namespace {
dataset tiny() { return dataset({0.2, 0.6, 0.9}, 1); }

dataset sampled(int d, long n, std::uint64_t stream) {
  auto mix = mixture_spec::uniform(d);
  rng gen = rng::for_stream(99, stream);
  return sample_mixture(mix, n, gen);
}
}  // namespace

TEST_CASE("bernstein polynomial of known functions") {
  // affine functions are reproduced exactly (mean identity)
  auto aff = [](std::span<const double> x) { return 0.3 + 0.9 * x[0] - 0.4 * x[1]; };
  std::array<double, 2> x{0.22, 0.41};
  CHECK(bernstein_poly(aff, 7, x) == doctest::Approx(aff(x)).epsilon(1e-14));

  // F(t)=t^2: exact smoothing value t^2 + t(1-t)/m
  auto sq = [](std::span<const double> t) { return t[0] * t[0]; };
  std::array<double, 1> t{0.5};
  CHECK(bernstein_poly(sq, 2, t) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(bernstein_poly(sq, 50, t) == doctest::Approx(0.25 + 0.25 / 50).epsilon(1e-13));
}

TEST_CASE("cdf model reproduces hand-computed smoothing of a 3-point sample") {
  auto model = fit_cdf(tiny(), 2);
  CHECK(model.order() == 2);
  CHECK(model.dim() == 1);
  CHECK(model.sample_size() == 3);
  // F_n at lattice {0, 1/2, 1} = {0, 1/3, 1}
  const std::vector<double> memo = model.lattice_values();
  REQUIRE(memo.size() == 3);
  CHECK(memo[0] == 0.0);
  CHECK(memo[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(memo[2] == 1.0);
  // weighted by Binomial(2, 1/2): 0/4 + (1/3)(1/2) + 1/4
  std::array<double, 1> x{0.5};
  CHECK(model(x) == doctest::Approx(5.0 / 12).epsilon(1e-14));
  x[0] = 0.0;
  CHECK(model(x) == 0.0);
  x[0] = 1.0;
  CHECK(model(x) == 1.0);
}

TEST_CASE("cdf model is monotone in each coordinate, d=2") {
  auto data = sampled(2, 60, 0);
  auto model = fit_cdf(data, 8);
  rng gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(2), alpha(2, 1.0);
    gen.dirichlet(alpha, 1.0, a);
    auto b = a;
    const int axis = trial % 2;
    const double room = 1.0 - a[0] - a[1];
    b[axis] += room * gen.uniform01();
    CHECK(model(b) >= model(a) - 1e-12);
  }
  // corner (sum = 1) evaluates to F_n at that corner; upper corner is 1
  std::array<double, 2> e1{1.0, 0.0};
  CHECK(model(e1) == doctest::Approx(empirical_cdf(data, e1)).epsilon(1e-12));
}

TEST_CASE("density model bins a 3-point sample as expected") {
  auto model = fit_density(tiny(), 2);
  CHECK(model.order() == 2);
  CHECK(model.occupied() == 2);
  auto bins = model.bins();
  REQUIRE(bins.size() == 2);
  CHECK(bins[0].k == std::vector<int>{0});
  CHECK(bins[0].count == 1);
  CHECK(bins[0].p == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(bins[1].k == std::vector<int>{1});
  CHECK(bins[1].count == 2);
  // fhat(x) = 2 [p0 (1-x) + p1 x]
  std::array<double, 1> x{0.5};
  CHECK(model(x) == doctest::Approx(1.0).epsilon(1e-14));
  x[0] = 0.2;
  CHECK(model(x) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(model.log_eval(x) == doctest::Approx(std::log(0.8)).epsilon(1e-13));
}

TEST_CASE("polynomial and dirichlet forms agree to 1e-10") {
  for (int d = 1; d <= 3; ++d) {
    auto data = sampled(d, 40, 10 + d);
    auto model = fit_density(data, 6);
    rng gen(17);
    std::vector<double> x(d), alpha(d, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
      gen.dirichlet(alpha, 1.0, x);
      const double poly = model(x);
      const double dir = model.eval_dirichlet_form(x);
      CHECK(std::abs(poly - dir) <= 1e-10 * std::max(1.0, std::abs(poly)));
    }
  }
}

TEST_CASE("density integrates to one") {
  // algebraic normalization: bin proportions sum to 1 exactly
  for (int d = 1; d <= 3; ++d) {
    auto data = sampled(d, 35, 20 + d);
    auto model = fit_density(data, 5);
    kahan_sum total;
    for (const auto& b : model.bins()) total.add(b.p);
    CHECK(std::abs(total.value() - 1.0) <= 1e-12);
  }
  // quadrature confirmation in d=1 (exact cell tiling, no boundary sliver)
  auto data = sampled(1, 35, 25);
  auto model = fit_density(data, 5);
  const double mass =
      integrate_simplex(1, 3000, [&](std::span<const double> x) { return model(x); });
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("leave-one-out downdate equals the refit and the defining identity") {
  auto data = sampled(1, 30, 30);
  const int m = 4;
  auto model = fit_density(data, m);
  const long n = data.size();
  const double scale = std::exp(model.scale_log());
  rng gen(23);
  for (long i = 0; i < n; ++i) {
    const auto bin_i = bin_index(data.row(i), m);
    std::array<double, 1> x{gen.uniform01()};
    const double down = model.loo_eval(x, bin_i);
    const double refit = loo_density(data, i, m, x);
    CHECK(down == doctest::Approx(refit).epsilon(1e-12));
    // n fhat - (n-1) fhat^(-i) = scale * P_{bin(i), m-1}(x)
    multinomial_pmf pmf(m - 1, x);
    const double contribution = scale * pmf.pmf(bin_i);
    CHECK(n * model(x) - (n - 1) * down ==
          doctest::Approx(contribution).epsilon(1e-11));
  }
}

TEST_CASE("hand-checked leave-one-out values on the 3-point sample") {
  auto data = tiny();
  auto model = fit_density(data, 2);
  // removing the observation in bin 0 leaves p = (0, 1)
  std::array<double, 1> x{0.2};
  const auto b0 = bin_index(data.row(0), 2);
  CHECK(model.loo_eval(x, b0) == doctest::Approx(0.4).epsilon(1e-14));
  const auto b1 = bin_index(data.row(1), 2);
  std::array<double, 1> x6{0.6};
  CHECK(model.loo_eval(x6, b1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("from_bins round trips evaluation") {
  auto data = sampled(2, 45, 40);
  auto model = fit_density(data, 7);
  auto rebuilt = density_model::from_bins(model.order(), model.dim(),
                                          model.sample_size(), model.bins());
  CHECK(rebuilt.occupied() == model.occupied());
  rng gen(29);
  std::vector<double> x(2), alpha(2, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    gen.dirichlet(alpha, 1.0, x);
    CHECK(rebuilt(x) == model(x));  // identical bins, identical sums
  }
}

TEST_CASE("fit rejects invalid orders and empty data") {
  CHECK_THROWS_AS(fit_cdf(tiny(), 0), error);
  CHECK_THROWS_AS(fit_density(tiny(), 0), error);
  CHECK_THROWS_AS(fit_density(dataset(std::vector<double>{}, 1), 3), error);
}

TEST_CASE("cdf evaluation rejects dimension mismatches") {
  auto model = fit_cdf(tiny(), 3);
  std::array<double, 2> wrong{0.2, 0.2};
  CHECK_THROWS_AS(model(wrong), error);
  auto dens = fit_density(tiny(), 3);
  CHECK_THROWS_AS(dens(wrong), error);
}
