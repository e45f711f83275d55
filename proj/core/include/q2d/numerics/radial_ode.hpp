#pragma once

#include "q2d/numerics/grid.hpp"

#include <functional>
#include <vector>

namespace q2d::numerics {

struct RadialOdeSolution {
  /// Stored values; the true solution is u * exp(ln_scale) (same for du).
  std::vector<double> u;
  std::vector<double> du;
  double ln_scale = 0.0;
  int halvings = 0; ///< cells that needed sub-stepping
};

/// Integrates u'' = q(x) u along an increasing grid starting from
/// u(x0) = value, u'(x0) = slope.
///
/// Each cell is advanced with a fourth-order Magnus propagator using q at the
/// two Gauss points of the cell. It reduces to the exact propagator when q is
/// constant on the cell, so piecewise-constant q with jumps on nodes is
/// integrated exactly. Growth beyond 1e150 is absorbed into
/// `ln_scale`; a cell whose propagator overflows is split in halves up to 20
/// times before the integration fails with ConvergenceError.
RadialOdeSolution integrate_radial_ode(const std::function<double(double)> &q,
                                       const Grid1D &grid, double value, double slope);

} // namespace q2d::numerics
