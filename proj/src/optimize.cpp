#include "slangvar/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace slangvar {

std::vector<double> log_spaced_grid(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_spaced_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> grid(n);
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int i = 0; i < n; ++i) {
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

ScalarMinimizeResult minimize_scalar_bounded(const std::function<double(double)>& f, double lo,
                                             double hi, const ScalarMinimizeOptions& options) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_scalar_bounded: need lo < hi");

  ScalarMinimizeResult best;
  bool have_best = false;
  int evals = 0;
  const auto consider = [&](double x, double fx) {
    if (!have_best || fx < best.fx) {
      best.x = x;
      best.fx = fx;
      have_best = true;
    }
  };
  const auto eval = [&](double x) {
    const double fx = f(x);
    ++evals;
    consider(x, fx);
    return fx;
  };

  for (const double x : options.extra_candidates) {
    if (x >= lo && x <= hi) eval(x);
  }

  const std::vector<double> grid = log_spaced_grid(lo, hi, options.grid_points);
  std::size_t best_idx = 0;
  double best_grid = eval(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double fx = eval(grid[i]);
    if (fx < best_grid) {
      best_grid = fx;
      best_idx = i;
    }
  }

  // Golden-section refinement inside the bracket around the best grid point.
  double a = best_idx == 0 ? lo : grid[best_idx - 1];
  double b = best_idx + 1 == grid.size() ? hi : grid[best_idx + 1];
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = eval(c);
  double fd = eval(d);
  for (int iter = 0; iter < options.max_iterations && (b - a) > options.tolerance; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = eval(d);
    }
  }
  eval(0.5 * (a + b));

  best.evaluations = evals;
  return best;
}

}  // namespace slangvar
