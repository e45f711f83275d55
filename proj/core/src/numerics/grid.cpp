#include "q2d/numerics/grid.hpp"

#include "q2d/error.hpp"

#include <cmath>
#include <string>

namespace q2d::numerics {

Grid1D::Grid1D(std::vector<double> points, GridKind kind, double spacing)
    : points_(std::move(points)), kind_(kind), spacing_(spacing) {}

Grid1D Grid1D::uniform(double lo, double hi, std::size_t points) {
  if (points < 2)
    throw InvalidInput("uniform grid needs at least 2 points");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InvalidInput("uniform grid needs finite lo < hi");
  const double h = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> x(points);
  for (std::size_t i = 0; i < points; ++i)
    x[i] = lo + h * static_cast<double>(i);
  x.back() = hi;
  return Grid1D(std::move(x), GridKind::uniform, h);
}

Grid1D Grid1D::log_radial(double r_min, double r_max, std::size_t points) {
  if (points < 2)
    throw InvalidInput("log-radial grid needs at least 2 points");
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw InvalidInput("log-radial grid needs 0 < r_min < r_max");
  const double t0 = std::log(r_min);
  const double dt = (std::log(r_max) - t0) / static_cast<double>(points - 1);
  std::vector<double> r(points);
  for (std::size_t i = 0; i < points; ++i)
    r[i] = std::exp(t0 + dt * static_cast<double>(i));
  r.front() = r_min;
  r.back() = r_max;
  return Grid1D(std::move(r), GridKind::log_radial, dt);
}

Grid1D Grid1D::piecewise(std::span<const double> knots, double max_step) {
  if (knots.size() < 2)
    throw InvalidInput("piecewise grid needs at least two knots");
  if (!(max_step > 0.0))
    throw InvalidInput("piecewise grid needs a positive step");
  std::vector<double> x{knots[0]};
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k], b = knots[k + 1];
    if (!(b > a))
      throw InvalidInput("piecewise grid knots must be strictly increasing");
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / max_step));
    for (std::size_t i = 1; i <= n; ++i)
      x.push_back(i == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
  }
  return Grid1D(std::move(x), GridKind::piecewise, 0.0);
}

double Grid1D::spacing() const {
  if (kind_ == GridKind::piecewise)
    throw InvalidInput("piecewise grid has no single spacing");
  return spacing_;
}

std::vector<double> Grid1D::trapezoid_weights() const {
  std::vector<double> w(points_.size(), 0.0);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const double dx = kind_ == GridKind::log_radial ? spacing_ : step(i);
    w[i] += 0.5 * dx;
    w[i + 1] += 0.5 * dx;
  }
  return w;
}

Grid1D Grid1D::scaled(double factor) const {
  if (!(factor > 0.0))
    throw InvalidInput("grid scale factor must be positive");
  std::vector<double> x(points_);
  for (auto &v : x)
    v *= factor;
  const double sp = kind_ == GridKind::uniform ? spacing_ * factor : spacing_;
  return Grid1D(std::move(x), kind_, sp);
}

double trapezoid(const Grid1D &grid, std::span<const double> f) {
  if (f.size() != grid.size())
    throw InvalidInput("trapezoid: sample count does not match grid");
  const auto w = grid.trapezoid_weights();
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    s += w[i] * f[i];
  return s;
}

double simpson(double step, std::span<const double> f) {
  if (f.size() < 3 || f.size() % 2 == 0)
    throw InvalidInput("simpson: need an odd number (>= 3) of samples, got " +
                       std::to_string(f.size()));
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * step / 3.0;
}

} // namespace q2d::numerics
