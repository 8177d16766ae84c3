#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sbern {

/// Geometric tolerance for membership in the closed simplex:
/// x_i >= -eps and sum x_i <= 1 + eps accepted, then clamped exactly.
inline constexpr double geom_eps = 1e-12;

bool in_simplex(std::span<const double> x, double eps = geom_eps);

/// Validates and canonicalizes a point: clamps coordinates within eps of the
/// boundary onto it; throws errc::invalid_argument outside the tolerance.
std::vector<double> simplex_point(std::span<const double> x, double eps = geom_eps);

/// Observations on the d-simplex, row-major flat storage. Every row is
/// validated (and boundary-clamped) on construction.
class dataset {
 public:
  dataset(std::vector<double> flat, int dim);

  int dim() const { return dim_; }
  long size() const { return static_cast<long>(flat_.size()) / dim_; }
  std::span<const double> row(long i) const {
    return {flat_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& flat() const { return flat_; }

 private:
  std::vector<double> flat_;
  int dim_;
};

/// Number of lattice points {k in N_0^d : |k|_1 <= m} = C(m+d, d).
long long lattice_size(int m, int d);

/// Visits the lattice in lexicographic order ((0,..,0), (0,..,1), ...,
/// (m,0,..,0)), passing each multi-index as span<const int>. The buffer is
/// reused between calls; copy if retained.
template <class F>
void for_each_lattice(int m, int d, F&& fn) {
  std::vector<int> k(static_cast<std::size_t>(d), 0);
  int sum = 0;
  for (;;) {
    fn(std::span<const int>(k));
    int i = d - 1;
    while (i >= 0) {
      if (sum < m) {
        ++k[i];
        ++sum;
        break;
      }
      sum -= k[i];
      k[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

/// Materialized lattice (small m convenience / API surface).
std::vector<std::vector<int>> enumerate_lattice(int m, int d);

/// Position of k in the lexicographic enumeration.
long long lattice_rank(std::span<const int> k, int m);

/// Histogram bin of x at resolution m: k_i = max(0, ceil(m x_i) - 1), i.e. the
/// half-open box (k/m, (k+1)/m] with the k_i = 0 face closed.  Guarantees
/// |k|_1 <= m - 1 for every point of the closed simplex.
std::vector<int> bin_index(std::span<const double> x, int m);

/// Empirical CDF of the data at an arbitrary point: n^{-1} #{rows <= x
/// coordinatewise}.
double empirical_cdf(const dataset& data, std::span<const double> x);

/// F_n at every lattice node k/G, |k|_1 <= G, in lexicographic lattice order.
/// Exact integer counts via the ceil-index prefix construction (the lattice
/// comparison x_i <= k_i/G is equivalent to ceil(G x_i) <= k_i).
std::vector<double> ecdf_on_lattice(const dataset& data, int G);

}  // namespace sbern
