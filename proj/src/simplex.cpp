#include "sbern/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "sbern/common.hpp"
#include "sbern/special.hpp"

namespace sbern {

bool in_simplex(std::span<const double> x, double eps) {
  double s = 0.0;
  for (double xi : x) {
    if (!std::isfinite(xi) || xi < -eps) return false;
    s += xi;
  }
  return s <= 1.0 + eps;
}

std::vector<double> simplex_point(std::span<const double> x, double eps) {
  if (x.empty()) raise(errc::invalid_argument, "simplex_point: empty coordinate vector");
  if (!in_simplex(x, eps)) raise(errc::invalid_argument, "simplex_point: point outside the simplex");
  std::vector<double> p(x.begin(), x.end());
  double s = 0.0;
  for (double& xi : p) {
    xi = std::max(xi, 0.0);
    s += xi;
  }
  if (s > 1.0) {  // within eps past the diagonal face: rescale onto it
    for (double& xi : p) xi /= s;
  }
  return p;
}

dataset::dataset(std::vector<double> flat, int dim) : dim_(dim) {
  if (dim < 1) raise(errc::invalid_argument, "dataset: dimension must be >= 1");
  if (flat.size() % static_cast<std::size_t>(dim) != 0) {
    raise(errc::invalid_argument, "dataset: flat size not a multiple of dimension");
  }
  flat_.reserve(flat.size());
  const long n = static_cast<long>(flat.size()) / dim;
  for (long i = 0; i < n; ++i) {
    std::span<const double> row{flat.data() + static_cast<std::size_t>(i) * dim,
                                static_cast<std::size_t>(dim)};
    auto p = simplex_point(row);
    flat_.insert(flat_.end(), p.begin(), p.end());
  }
}

long long lattice_size(int m, int d) {
  if (m < 0 || d < 1) raise(errc::invalid_argument, "lattice_size: need m >= 0, d >= 1");
  return static_cast<long long>(binomial_exact(m + d, d));
}

std::vector<std::vector<int>> enumerate_lattice(int m, int d) {
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(lattice_size(m, d)));
  for_each_lattice(m, d, [&](std::span<const int> k) { out.emplace_back(k.begin(), k.end()); });
  return out;
}

long long lattice_rank(std::span<const int> k, int m) {
  const int d = static_cast<int>(k.size());
  long long rank = 0;
  int prefix = 0;
  for (int i = 0; i < d; ++i) {
    const int rem_dims = d - i - 1;
    for (int v = 0; v < k[i]; ++v) {
      rank += static_cast<long long>(binomial_exact(m - prefix - v + rem_dims, rem_dims));
    }
    prefix += k[i];
    if (prefix > m) raise(errc::invalid_argument, "lattice_rank: index outside lattice");
  }
  return rank;
}

std::vector<int> bin_index(std::span<const double> x, int m) {
  if (m < 1) raise(errc::invalid_argument, "bin_index: resolution must be >= 1");
  auto p = simplex_point(x);
  std::vector<int> k(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    k[i] = std::max(0, static_cast<int>(std::ceil(m * p[i])) - 1);
  }
  return k;
}

double empirical_cdf(const dataset& data, std::span<const double> x) {
  if (static_cast<int>(x.size()) != data.dim()) {
    raise(errc::invalid_argument, "empirical_cdf: dimension mismatch");
  }
  const long n = data.size();
  long count = 0;
  for (long i = 0; i < n; ++i) {
    auto row = data.row(i);
    bool le = true;
    for (int j = 0; j < data.dim(); ++j) {
      if (row[j] > x[j]) {
        le = false;
        break;
      }
    }
    count += le;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

std::vector<double> ecdf_on_lattice(const dataset& data, int G) {
  if (G < 1) raise(errc::invalid_argument, "ecdf_on_lattice: resolution must be >= 1");
  const int d = data.dim();
  const long n = data.size();
  const auto total = lattice_size(G, d);
  std::vector<double> out(static_cast<std::size_t>(total));

  // Dense prefix-count grid over ceil indices; fall back to direct counting
  // when (G+1)^d would not fit in memory.
  double cells = 1.0;
  for (int i = 0; i < d; ++i) cells *= G + 1.0;
  if (cells <= double(1 << 24)) {
    std::vector<long> grid(static_cast<std::size_t>(cells), 0);
    std::vector<std::size_t> stride(static_cast<std::size_t>(d));
    stride[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride[i] = stride[i + 1] * (G + 1);
    for (long r = 0; r < n; ++r) {
      auto row = data.row(r);
      std::size_t pos = 0;
      for (int i = 0; i < d; ++i) {
        const int c = std::min(G, static_cast<int>(std::ceil(G * row[i])));
        pos += stride[i] * static_cast<std::size_t>(c);
      }
      ++grid[pos];
    }
    // in-place prefix sums along each axis: cell k ends up holding
    // #{rows : ceil(G x_i) <= k_i for all i} = n F_n(k/G)
    for (int axis = 0; axis < d; ++axis) {
      const std::size_t st = stride[axis];
      const std::size_t span_len = st * static_cast<std::size_t>(G + 1);
      for (std::size_t base = 0; base < grid.size(); base += span_len) {
        for (std::size_t off = 0; off < st; ++off) {
          for (int v = 1; v <= G; ++v) {
            grid[base + off + st * v] += grid[base + off + st * (v - 1)];
          }
        }
      }
    }
    std::size_t idx = 0;
    for_each_lattice(G, d, [&](std::span<const int> k) {
      std::size_t pos = 0;
      for (int i = 0; i < d; ++i) pos += stride[i] * static_cast<std::size_t>(k[i]);
      out[idx++] = static_cast<double>(grid[pos]) / static_cast<double>(n);
    });
  } else {
    std::vector<double> node(static_cast<std::size_t>(d));
    std::size_t idx = 0;
    for_each_lattice(G, d, [&](std::span<const int> k) {
      for (int i = 0; i < d; ++i) node[i] = static_cast<double>(k[i]) / G;
      out[idx++] = empirical_cdf(data, node);
    });
  }
  return out;
}

}  // namespace sbern
