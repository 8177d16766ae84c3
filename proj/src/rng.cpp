#include "sbern/rng.hpp"

#include <cmath>

#include "sbern/common.hpp"
#include "sbern/special.hpp"

namespace sbern {

std::uint64_t rng::mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

std::uint64_t rng::next_u64() {
  state_ += UINT64_C(0x9E3779B97F4A7C15);
  return mix64(state_);
}

double rng::uniform01() {
  // (k + 1/2) * 2^-53 with k the top 53 bits: strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double rng::normal() { return normal_quantile(uniform01()); }

double rng::gamma(double alpha) {
  if (!(alpha > 0.0)) raise(errc::invalid_argument, "rng::gamma: alpha must be positive");
  if (alpha < 1.0) {
    const double u = uniform01();
    return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

void rng::dirichlet(std::span<const double> alpha, double beta, std::span<double> out) {
  if (alpha.size() != out.size()) raise(errc::invalid_argument, "rng::dirichlet: size mismatch");
  double total = gamma(beta);
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = gamma(alpha[i]);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

}  // namespace sbern
