#include "q2d/numerics/radial_ode.hpp"

#include "q2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace q2d::numerics {

namespace {

constexpr double rescale_at = 1e150;
constexpr int max_splits = 20;
const double gauss_lo = 0.5 - std::sqrt(3.0) / 6.0;
const double gauss_hi = 0.5 + std::sqrt(3.0) / 6.0;

// Advance (u, du) across a cell of width h with the fourth-order Magnus
// propagator built from q at the two Gauss points. Omega = [[al, h], [h qm, -al]]
// squares to k2 * I, so exp(Omega) = C I + S Omega.
void propagate(double q1, double q2, double h, double &u, double &du) {
  const double qm = 0.5 * (q1 + q2);
  const double al = std::sqrt(3.0) / 12.0 * h * h * (q1 - q2);
  const double k2 = al * al + h * h * qm;
  double c, s;
  if (std::abs(k2) < 1e-4) {
    c = 1.0 + k2 / 2.0 * (1.0 + k2 / 12.0 * (1.0 + k2 / 30.0));
    s = 1.0 + k2 / 6.0 * (1.0 + k2 / 20.0 * (1.0 + k2 / 42.0));
  } else if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    c = std::cosh(k);
    s = std::sinh(k) / k;
  } else {
    const double k = std::sqrt(-k2);
    c = std::cos(k);
    s = std::sin(k) / k;
  }
  const double u1 = (c + s * al) * u + s * h * du;
  du = s * h * qm * u + (c - s * al) * du;
  u = u1;
}

} // namespace

RadialOdeSolution integrate_radial_ode(const std::function<double(double)> &q,
                                       const Grid1D &grid, double value, double slope) {
  const std::size_t n = grid.size();
  RadialOdeSolution out;
  out.u.resize(n);
  out.du.resize(n);
  out.u[0] = value;
  out.du[0] = slope;

  double u = value, du = slope;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = grid[i], b = grid[i + 1];
    bool done = false;
    for (int split = 0; split <= max_splits && !done; ++split) {
      const std::size_t pieces = std::size_t{1} << split;
      const double h = (b - a) / static_cast<double>(pieces);
      double uu = u, dd = du, local_scale = 0.0;
      bool ok = true;
      for (std::size_t p = 0; p < pieces && ok; ++p) {
        const double x0 = a + static_cast<double>(p) * h;
        const double q1 = q(x0 + gauss_lo * h);
        const double q2 = q(x0 + gauss_hi * h);
        if (!std::isfinite(q1) || !std::isfinite(q2))
          throw InvalidInput("radial ODE coefficient is not finite near x = " +
                             std::to_string(x0 + 0.5 * h));
        propagate(q1, q2, h, uu, dd);
        if (!std::isfinite(uu) || !std::isfinite(dd)) {
          ok = false;
          break;
        }
        if (std::max(std::abs(uu), std::abs(dd)) > rescale_at) {
          uu /= rescale_at;
          dd /= rescale_at;
          local_scale += std::log(rescale_at);
        }
      }
      if (!ok)
        continue;
      if (split > 0)
        ++out.halvings;
      if (local_scale > 0.0) {
        // Rescale everything stored so far so the whole array shares one factor.
        const double f = std::exp(-local_scale);
        for (std::size_t j = 0; j <= i; ++j) {
          out.u[j] *= f;
          out.du[j] *= f;
        }
        out.ln_scale += local_scale;
      }
      u = uu;
      du = dd;
      done = true;
    }
    if (!done)
      throw ConvergenceError("radial ODE overflow near x = " + std::to_string(a), max_splits);
    out.u[i + 1] = u;
    out.du[i + 1] = du;
  }
  return out;
}

} // namespace q2d::numerics
