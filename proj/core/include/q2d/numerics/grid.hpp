#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace q2d::numerics {

enum class GridKind { uniform, log_radial, piecewise };

/// Ordered set of sample points on a line.
///
/// Uniform grids carry a constant spacing. Log-radial grids are uniform in
/// t = ln r and never contain r = 0; their `spacing()` is the step in t.
/// Piecewise grids are concatenations of uniform segments (used to put
/// potential breakpoints exactly on nodes).
class Grid1D {
public:
  static Grid1D uniform(double lo, double hi, std::size_t points);
  static Grid1D log_radial(double r_min, double r_max, std::size_t points);
  /// Uniform segments between consecutive `knots`, each with spacing <= `max_step`.
  static Grid1D piecewise(std::span<const double> knots, double max_step);

  GridKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  std::span<const double> points() const noexcept { return points_; }

  /// Constant step (uniform: in x; log-radial: in ln r). Throws for piecewise grids.
  double spacing() const;
  /// x[i+1] - x[i].
  double step(std::size_t i) const { return points_[i + 1] - points_[i]; }

  /// Trapezoid weights in the grid's own coordinate.
  std::vector<double> trapezoid_weights() const;

  /// Same grid with every point multiplied by `factor` (> 0).
  Grid1D scaled(double factor) const;

private:
  Grid1D(std::vector<double> points, GridKind kind, double spacing);

  std::vector<double> points_;
  GridKind kind_;
  double spacing_;
};

/// Trapezoid rule for samples `f` on `grid` (in the grid coordinate).
double trapezoid(const Grid1D &grid, std::span<const double> f);

/// Composite Simpson rule for samples on a uniform grid with an odd number of points.
double simpson(double step, std::span<const double> f);

} // namespace q2d::numerics
