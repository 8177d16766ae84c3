#include "sbern/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "sbern/common.hpp"
#include "sbern/simplex.hpp"

namespace sbern {

std::vector<double> simplex_grid_nodes(int d, int resolution) {
  if (d < 1 || resolution < d) {
    raise(errc::invalid_argument, "simplex_grid_nodes: need resolution >= d >= 1");
  }
  const long long count = lattice_size(resolution - d, d);
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(count) * d);
  for_each_lattice(resolution - d, d, [&](std::span<const int> k) {
    for (int i = 0; i < d; ++i) {
      nodes.push_back((k[i] + 0.5) / resolution);
    }
  });
  return nodes;
}

void parallel_for(long count, int workers, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  workers = static_cast<int>(std::max<long>(1, std::min<long>(workers, count)));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

double integrate_simplex(int d, int resolution,
                         const std::function<double(std::span<const double>)>& fn,
                         int workers) {
  const auto nodes = simplex_grid_nodes(d, resolution);
  const long count = static_cast<long>(nodes.size()) / d;
  const double vol = std::pow(static_cast<double>(resolution), -d);

  std::vector<double> values(static_cast<std::size_t>(count));
  parallel_for(count, workers, [&](long i) {
    std::span<const double> x{nodes.data() + static_cast<std::size_t>(i) * d,
                              static_cast<std::size_t>(d)};
    const double v = fn(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrate_simplex: non-finite integrand at node (";
      for (int j = 0; j < d; ++j) msg << (j ? ", " : "") << x[j];
      msg << ")";
      raise(errc::invalid_argument, msg.str());
    }
    values[static_cast<std::size_t>(i)] = v;
  });
  // fixed-order compensated reduction: result independent of worker count
  kahan_sum acc;
  for (double v : values) acc.add(v);
  return acc.value() * vol;
}

}  // namespace sbern
