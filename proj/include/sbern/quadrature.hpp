#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sbern {

/// Interior midpoint nodes for simplex quadrature at the given resolution:
/// {(k + 1/2)/resolution : |k + 1|_1 <= resolution}, i.e. the centers of all
/// axis-aligned cells lying entirely inside the simplex.  Flat row-major,
/// lexicographic cell order; every node is strictly interior, so integrands
/// with (integrable) boundary singularities are never probed on the boundary.
std::vector<double> simplex_grid_nodes(int d, int resolution);

/// Midpoint-rule integral over the simplex: sum of fn(node) * resolution^{-d}
/// over the interior nodes.  Converges as resolution grows (O(1/resolution)
/// from the uncovered boundary sliver for d >= 2).  Non-finite integrand
/// values abort with a diagnostic naming the offending node.
double integrate_simplex(int d, int resolution,
                         const std::function<double(std::span<const double>)>& fn,
                         int workers = 1);

/// Deterministic helper: runs fn(i) for i in [0, count) across `workers`
/// threads; exceptions are re-thrown on the caller thread.
void parallel_for(long count, int workers, const std::function<void(long)>& fn);

}  // namespace sbern
