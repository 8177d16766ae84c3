#include "sbern/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "sbern/common.hpp"
#include "sbern/special.hpp"

namespace sbern {

double bernstein_poly(const std::function<double(std::span<const double>)>& g, int m,
                      std::span<const double> x) {
  if (m < 1) raise(errc::invalid_argument, "bernstein_poly: order must be >= 1");
  const auto p = simplex_point(x);
  const int d = static_cast<int>(p.size());
  multinomial_pmf pmf(m, p);
  std::vector<double> node(static_cast<std::size_t>(d));
  kahan_sum acc;
  for_each_lattice(m, d, [&](std::span<const int> k) {
    const double w = pmf.pmf(k);
    if (w == 0.0) return;
    for (int i = 0; i < d; ++i) node[i] = static_cast<double>(k[i]) / m;
    acc.add(g(node) * w);
  });
  return acc.value();
}

cdf_model::cdf_model(dataset data, int m) : data_(std::move(data)), m_(m) {
  if (m < 1) raise(errc::invalid_argument, "cdf_model: order must be >= 1");
  if (data_.size() < 1) raise(errc::invalid_argument, "cdf_model: empty dataset");
  memo_ = ecdf_on_lattice(data_, m_);
}

double cdf_model::operator()(std::span<const double> x) const {
  const auto p = simplex_point(x);
  if (static_cast<int>(p.size()) != data_.dim()) {
    raise(errc::invalid_argument, "cdf_model: dimension mismatch");
  }
  multinomial_pmf pmf(m_, p);
  kahan_sum acc;
  std::size_t idx = 0;
  for_each_lattice(m_, data_.dim(), [&](std::span<const int> k) {
    const double w = pmf.pmf(k);
    const double v = memo_[idx++];
    if (w != 0.0) acc.add(v * w);
  });
  return acc.value();
}

density_model::density_model(const dataset& data, int m) {
  if (m < 1) raise(errc::invalid_argument, "density_model: order must be >= 1");
  if (data.size() < 1) raise(errc::invalid_argument, "density_model: empty dataset");
  m_ = m;
  d_ = data.dim();
  n_ = data.size();
  std::map<long long, long> hist;  // lattice rank of the bin -> count
  for (long i = 0; i < n_; ++i) {
    const auto k = bin_index(data.row(i), m_);
    ++hist[lattice_rank(k, m_ - 1)];
  }
  idx_.reserve(hist.size() * static_cast<std::size_t>(d_));
  counts_.reserve(hist.size());
  // walk the lattice once, emitting occupied ranks in lexicographic order
  long long rank = 0;
  auto it = hist.begin();
  for_each_lattice(m_ - 1, d_, [&](std::span<const int> k) {
    if (it != hist.end() && it->first == rank) {
      idx_.insert(idx_.end(), k.begin(), k.end());
      counts_.push_back(it->second);
      ++it;
    }
    ++rank;
  });
  finalize();
}

void density_model::finalize() {
  sums_.resize(counts_.size());
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    int s = 0;
    for (int i = 0; i < d_; ++i) s += idx_[b * static_cast<std::size_t>(d_) + i];
    if (s > m_ - 1) raise(errc::invalid_argument, "density_model: bin index outside lattice");
    sums_[b] = s;
  }
  scale_log_ = log_factorial(m_ - 1 + d_) - log_factorial(m_ - 1);
}

std::vector<density_model::bin> density_model::bins() const {
  std::vector<bin> out(counts_.size());
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    out[b].k.assign(idx_.begin() + b * static_cast<std::size_t>(d_),
                    idx_.begin() + (b + 1) * static_cast<std::size_t>(d_));
    out[b].count = counts_[b];
    out[b].p = static_cast<double>(counts_[b]) / static_cast<double>(n_);
  }
  return out;
}

double density_model::operator()(std::span<const double> x) const {
  const auto p = simplex_point(x);
  if (static_cast<int>(p.size()) != d_) {
    raise(errc::invalid_argument, "density_model: dimension mismatch");
  }
  multinomial_pmf pmf(m_ - 1, p);
  kahan_sum acc;
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    std::span<const int> k{idx_.data() + b * static_cast<std::size_t>(d_),
                           static_cast<std::size_t>(d_)};
    const double lp = pmf.log_pmf(k);
    if (lp == -std::numeric_limits<double>::infinity()) continue;
    acc.add(static_cast<double>(counts_[b]) * inv_n * std::exp(scale_log_ + lp));
  }
  return acc.value();
}

double density_model::eval_dirichlet_form(std::span<const double> x) const {
  const auto p = simplex_point(x);
  if (static_cast<int>(p.size()) != d_) {
    raise(errc::invalid_argument, "density_model: dimension mismatch");
  }
  kahan_sum acc;
  const double inv_n = 1.0 / static_cast<double>(n_);
  std::vector<double> alpha(static_cast<std::size_t>(d_));
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    for (int i = 0; i < d_; ++i) {
      alpha[i] = static_cast<double>(idx_[b * static_cast<std::size_t>(d_) + i]) + 1.0;
    }
    const double beta = static_cast<double>(m_ - sums_[b]);
    const double ld = dirichlet_log_density(alpha, beta, p);
    if (ld == -std::numeric_limits<double>::infinity()) continue;
    acc.add(static_cast<double>(counts_[b]) * inv_n * std::exp(ld));
  }
  return acc.value();
}

double density_model::log_eval(std::span<const double> x) const {
  const auto p = simplex_point(x);
  multinomial_pmf pmf(m_ - 1, p);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(counts_.size());
  const double log_n = std::log(static_cast<double>(n_));
  for (std::size_t b = 0; b < counts_.size(); ++b) {
    std::span<const int> k{idx_.data() + b * static_cast<std::size_t>(d_),
                           static_cast<std::size_t>(d_)};
    logs[b] = scale_log_ + pmf.log_pmf(k) + std::log(static_cast<double>(counts_[b])) - log_n;
    best = std::max(best, logs[b]);
  }
  if (best == -std::numeric_limits<double>::infinity()) return best;
  double s = 0.0;
  for (double l : logs) s += std::exp(l - best);
  return best + std::log(s);
}

double density_model::loo_eval(std::span<const double> x, std::span<const int> bin_of_i) const {
  if (n_ < 2) raise(errc::invalid_argument, "loo_eval: need at least 2 observations");
  const double full = (*this)(x);
  const auto p = simplex_point(x);
  multinomial_pmf pmf(m_ - 1, p);
  const double removed = std::exp(scale_log_ + pmf.log_pmf(bin_of_i));
  const double v = (static_cast<double>(n_) * full - removed) / static_cast<double>(n_ - 1);
  return std::max(v, 0.0);  // clip the subtraction's rounding residue
}

density_model density_model::from_bins(int m, int d, long n, std::vector<bin> bins) {
  if (m < 1 || d < 1 || n < 1) {
    raise(errc::invalid_argument, "density_model::from_bins: bad shape parameters");
  }
  density_model out;
  out.m_ = m;
  out.d_ = d;
  out.n_ = n;
  std::sort(bins.begin(), bins.end(), [](const bin& a, const bin& b) { return a.k < b.k; });
  long total = 0;
  for (const auto& b : bins) {
    if (static_cast<int>(b.k.size()) != d) {
      raise(errc::invalid_argument, "density_model::from_bins: index dimension mismatch");
    }
    const long c = b.count > 0 ? b.count : std::lround(b.p * static_cast<double>(n));
    if (c <= 0) raise(errc::invalid_argument, "density_model::from_bins: nonpositive bin count");
    for (int v : b.k) {
      if (v < 0) raise(errc::invalid_argument, "density_model::from_bins: negative index");
    }
    out.idx_.insert(out.idx_.end(), b.k.begin(), b.k.end());
    out.counts_.push_back(c);
    total += c;
  }
  if (total != n) {
    raise(errc::invalid_argument, "density_model::from_bins: bin counts do not sum to n");
  }
  out.finalize();
  return out;
}

double loo_density(const dataset& data, long leave_out, int m, std::span<const double> x) {
  if (leave_out < 0 || leave_out >= data.size()) {
    raise(errc::invalid_argument, "loo_density: index out of range");
  }
  density_model model(data, m);
  const auto k = bin_index(data.row(leave_out), m);
  return model.loo_eval(x, k);
}

cdf_model fit_cdf(dataset data, int m) { return cdf_model(std::move(data), m); }

density_model fit_density(const dataset& data, int m) { return density_model(data, m); }

}  // namespace sbern
