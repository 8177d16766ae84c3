#pragma once

#include <cstdint>
#include <span>

namespace sbern {

/// Counter-based 64-bit generator (SplitMix64).  Streams: the replicate stream
/// r of a base seed s starts from state mix64(s + (r+1) * 0x9E3779B97F4A7C15),
/// where mix64 is the SplitMix64 output finalizer; draws within a stream are
/// sequential.  Distinct streams are statistically independent for Monte Carlo
/// purposes and reproducible regardless of thread scheduling.
class rng {
 public:
  explicit rng(std::uint64_t seed) : state_(seed) {}

  /// SplitMix64 output finalizer.
  static std::uint64_t mix64(std::uint64_t z);

  static rng for_stream(std::uint64_t base_seed, std::uint64_t stream) {
    return rng(mix64(base_seed + (stream + 1) * UINT64_C(0x9E3779B97F4A7C15)));
  }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0,1), 53-bit resolution, never 0 or 1.
  double uniform01();

  /// Standard normal via quantile inversion of one uniform.
  double normal();

  /// Gamma(alpha, 1), alpha > 0: Marsaglia-Tsang for alpha >= 1, boosted by
  /// Gamma(alpha+1) * U^{1/alpha} below 1.
  double gamma(double alpha);

  /// Dirichlet(alpha, beta) draw on the d-simplex via d+1 normalized Gamma
  /// variates, keeping the first d coordinates.
  void dirichlet(std::span<const double> alpha, double beta, std::span<double> out);

 private:
  std::uint64_t state_;
};

}  // namespace sbern
