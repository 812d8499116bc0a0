#ifndef SLANGVAR_OPTIMIZE_HPP
#define SLANGVAR_OPTIMIZE_HPP

#include <functional>
#include <vector>

namespace slangvar {

struct ScalarMinimizeOptions {
  int grid_points = 20;     // log-spaced scan of [lo, hi]
  double tolerance = 1e-5;  // absolute bracket width at which refinement stops
  std::vector<double> extra_candidates;  // evaluated before the grid
  int max_iterations = 200;
};

struct ScalarMinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

// Deterministic bounded minimization of a scalar function on [lo, hi]:
// scans a log-spaced grid, refines the best bracket by golden section, and
// returns the best point ever evaluated (first seen wins exact ties, so
// extra candidates take precedence on flat objectives). The result is never
// worse than any grid point or extra candidate.
ScalarMinimizeResult minimize_scalar_bounded(const std::function<double(double)>& f, double lo,
                                             double hi,
                                             const ScalarMinimizeOptions& options = {});

// The canonical log-spaced grid over [lo, hi], endpoints included.
std::vector<double> log_spaced_grid(double lo, double hi, int n);

}  // namespace slangvar

#endif
