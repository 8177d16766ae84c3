#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "sbern/asymptotics.hpp"
#include "sbern/common.hpp"
#include "sbern/mixture.hpp"

using namespace sbern;

namespace {
// F(t) = t^2 on [0,1], i.e. Beta(2,1)
distribution_model square_cdf_model() {
  mixture_spec mix;
  mix.components.push_back({1.0, {2.0}, 1.0});
  return model_from_mixture(mix);
}
}  // namespace

TEST_CASE("cdf coefficients for F(t)=t^2 at 1/2") {
  auto model = square_cdf_model();
  const std::vector<double> x{0.5};
  auto c = cdf_asymptotics_at(model, x);
  // B = (1/2) x(1-x) F'' = 0.25;  sigma^2 = F(1-F) = 3/16;  V = F' sqrt(x(1-x)/pi)
  CHECK(c.bias_coeff == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(c.variance == doctest::Approx(0.1875).epsilon(1e-12));
  CHECK(c.deficiency == doctest::Approx(std::sqrt(0.25 / M_PI)).epsilon(1e-9));
}

TEST_CASE("density coefficients: linear density and the uniform") {
  // f(t) = 2t: b(x) = (1/2 - x) f' at x=0.25 -> 0.5, psi = (4 pi x(1-x))^{-1/2}
  auto model = square_cdf_model();
  const std::vector<double> x{0.25};
  auto c = density_asymptotics_at(model, x);
  CHECK(c.bias_coeff == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(c.variance_factor == doctest::Approx(0.6514700158705599).epsilon(1e-12));
  CHECK(c.pdf_value == doctest::Approx(0.5).epsilon(1e-12));

  auto uniform = model_from_mixture(mixture_spec::uniform(2));
  const std::vector<double> bary{1.0 / 3, 1.0 / 3};
  auto u = density_asymptotics_at(uniform, bary);
  CHECK(u.bias_coeff == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(u.variance_factor == doctest::Approx(0.41349667156634407).epsilon(1e-12));
  CHECK(u.pdf_value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("psi lower bound is attained at the barycenter") {
  CHECK(psi_lower_bound(1) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-14));
  CHECK(psi_lower_bound(2) == doctest::Approx(0.41349667156634407).epsilon(1e-13));
  // sampling a few interior points never dips below the bound
  auto uniform = model_from_mixture(mixture_spec::uniform(2));
  for (double a : {0.1, 0.25, 0.45}) {
    const std::vector<double> x{a, 0.3};
    CHECK(density_asymptotics_at(uniform, x).variance_factor >=
          psi_lower_bound(2) - 1e-12);
  }
}

TEST_CASE("pointwise error report assembles the expansion terms") {
  auto model = square_cdf_model();
  auto rep = asymptotic_error(model, estimator_kind::cdf, std::vector<double>{0.5},
                              1e4, 100.0);
  CHECK(rep.kind == estimator_kind::cdf);
  CHECK_FALSE(rep.integrated);
  CHECK(rep.variance_term == doctest::Approx(0.1875e-4).epsilon(1e-9));
  CHECK(rep.deficiency_term ==
        doctest::Approx(-std::sqrt(0.25 / M_PI) / (1e4 * 10.0)).epsilon(1e-8));
  CHECK(rep.bias_sq_term == doctest::Approx(0.0625 / 1e4).epsilon(1e-8));
  CHECK(rep.total ==
        doctest::Approx(rep.variance_term + rep.deficiency_term + rep.bias_sq_term)
            .epsilon(1e-12));
  CHECK_FALSE(rep.negative_prediction);
  CHECK(rep.rate_exponent == doctest::Approx(-1.0));

  // density at a moderate fixed order: n^{-1} m^{1/2} psi f dominates
  auto uni = model_from_mixture(mixture_spec::uniform(1));
  auto drep = asymptotic_error(uni, estimator_kind::density,
                               std::vector<double>{0.5}, 1e4, 25.0);
  CHECK(drep.variance_term == doctest::Approx(5.0 / 1e4 / std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(drep.bias_sq_term == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(drep.deficiency_term == 0.0);
  CHECK(drep.rate_exponent == doctest::Approx(-0.8));
}

TEST_CASE("cdf expansion flags negative variance predictions") {
  // Beta(8,2) at x=0.3: F ~ 4.3e-4 makes the deficiency exceed sigma^2 for
  // sqrt(m) < V/sigma^2 ~ 6.6, so a small sample size turns the total negative
  mixture_spec steep;
  steep.components.push_back({1.0, {8.0}, 2.0});
  auto model = model_from_mixture(steep);
  auto rep = asymptotic_error(model, estimator_kind::cdf, std::vector<double>{0.3},
                              10.0, 25.0);
  CHECK(rep.total < 0.0);
  CHECK(rep.negative_prediction);
  // generous m restores a positive prediction
  auto ok = asymptotic_error(model, estimator_kind::cdf, std::vector<double>{0.3},
                             10.0, 4000.0);
  CHECK_FALSE(ok.negative_prediction);
}

TEST_CASE("optimal cdf bandwidth for F(t)=t^2 at n=1e6") {
  auto model = square_cdf_model();
  auto choice =
      optimal_bandwidth(model, estimator_kind::cdf, std::vector<double>{0.5}, 1e6);
  REQUIRE_FALSE(choice.degenerate);
  CHECK(choice.m_real == doctest::Approx(9226.350743220137).epsilon(1e-6));
  CHECK(choice.m == 9226);
  CHECK(choice.error_at_opt == doctest::Approx(1.852973710087754e-07).epsilon(1e-6));

  // the reported optimum minimizes the expansion over nearby integer orders
  const double at_opt =
      asymptotic_error(model, estimator_kind::cdf, std::vector<double>{0.5}, 1e6,
                       static_cast<double>(choice.m))
          .total;
  for (long m : {2307L, 4613L, 9226L / 2 * 3, 18452L, 36904L}) {
    const double other = asymptotic_error(model, estimator_kind::cdf,
                                          std::vector<double>{0.5}, 1e6,
                                          static_cast<double>(m))
                             .total;
    CHECK(at_opt <= other + 1e-18);
  }
}

TEST_CASE("optimal density bandwidth for f(t)=2t at x=1/4, n=1e5") {
  auto model = square_cdf_model();
  auto choice = optimal_bandwidth(model, estimator_kind::density,
                                  std::vector<double>{0.25}, 1e5);
  REQUIRE_FALSE(choice.degenerate);
  CHECK(choice.m_real == doctest::Approx(156.6225265466843).epsilon(1e-6));
  CHECK(choice.m == 157);
  // error at the optimum matches evaluating the expansion there
  const double direct = asymptotic_error(model, estimator_kind::density,
                                         std::vector<double>{0.25}, 1e5,
                                         choice.m_real)
                            .total;
  CHECK(choice.error_at_opt == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("degenerate functionals refuse to produce a bandwidth") {
  // uniform density: b(x) = 0 everywhere
  auto uni = model_from_mixture(mixture_spec::uniform(1));
  auto choice = optimal_bandwidth(uni, estimator_kind::density, std::nullopt, 1e4);
  CHECK(choice.degenerate);
  CHECK_FALSE(choice.reason.empty());

  // uniform CDF F(t)=t: B(x) = 0
  auto cdfc =
      optimal_bandwidth(uni, estimator_kind::cdf, std::vector<double>{0.4}, 1e4);
  CHECK(cdfc.degenerate);
}

TEST_CASE("integrated error report uses functional integrals") {
  auto model = square_cdf_model();
  auto rep = asymptotic_error(model, estimator_kind::cdf, std::nullopt, 1e4, 50.0);
  CHECK(rep.integrated);
  // int sigma^2 = int t^2(1-t^2) = 1/3 - 1/5 = 2/15
  CHECK(rep.variance_term == doctest::Approx((2.0 / 15) / 1e4).epsilon(1e-4));
  // int B^2 = int t^2 (1-t)^2 = 1/30
  CHECK(rep.bias_sq_term == doctest::Approx((1.0 / 30) / 2500.0).epsilon(1e-4));
  // int V = 2/sqrt(pi) * Beta(2.5, 1.5)
  const double intV = 2.0 / std::sqrt(M_PI) * std::exp(std::lgamma(2.5) + std::lgamma(1.5) - std::lgamma(4.0));
  CHECK(rep.deficiency_term == doctest::Approx(-intV / (1e4 * std::sqrt(50.0))).epsilon(2e-3));
}

TEST_CASE("bandwidth to kernel-width correspondence") {
  CHECK(bandwidth_to_h(25.0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(h_to_bandwidth(0.2) == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(h_to_bandwidth(bandwidth_to_h(123.0)) == doctest::Approx(123.0).epsilon(1e-12));
}

TEST_CASE("error report serializes to json") {
  auto model = square_cdf_model();
  auto rep = asymptotic_error(model, estimator_kind::cdf, std::vector<double>{0.5},
                              1e4, 100.0);
  const std::string j = rep.to_json();
  CHECK(j.find("\"total\"") != std::string::npos);
  CHECK(j.find("\"variance_term\"") != std::string::npos);

  auto choice =
      optimal_bandwidth(model, estimator_kind::cdf, std::vector<double>{0.5}, 1e6);
  const std::string cj = choice.to_json();
  CHECK(cj.find("\"m\"") != std::string::npos);
  CHECK(cj.find("9226") != std::string::npos);
}
