#include "q2d/transverse.hpp"

#include "q2d/error.hpp"
#include "q2d/numerics/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace q2d {

using numerics::Grid1D;

namespace {

constexpr double truncation_default = 50.0;

TransverseMode build_mode(const Potential &v, const Grid1D &grid) {
  const auto pairs = numerics::eigs_sturm_liouville(v.profile(), grid, 2);
  TransverseMode m{.grid = grid, .s = pairs[0].eigenvector};
  m.e_perp = pairs[0].eigenvalue;
  m.e_perp_excited = pairs[1].eigenvalue;
  const double dz = grid.spacing();
  double s4 = 0.0, sinf = 0.0, ds2 = 0.0;
  const std::size_t n = m.s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double s2 = m.s[i] * m.s[i];
    s4 += s2 * s2;
    sinf = std::max(sinf, s2);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = (m.s[i + 1] * m.s[i + 1] - m.s[i - 1] * m.s[i - 1]) / (2.0 * dz);
    ds2 = std::max(ds2, std::abs(d));
  }
  m.s4 = s4 * dz;
  m.s_inf_sq = sinf;
  m.ds2_inf = ds2;
  return m;
}

double end_value(const Potential &v, double z) { return v(z); }

} // namespace

double harmonic_s4() { return 1.0 / std::sqrt(2.0 * std::numbers::pi); }

TransverseMode solve_transverse(const Potential &v, const Grid1D &grid) {
  if (grid.kind() != numerics::GridKind::uniform)
    throw InvalidInput("transverse: grid must be uniform");
  if (v.is_box()) {
    const double half = 0.5 * v.box_side();
    if (grid.front() < -half * (1.0 + 1e-12) || grid.back() > half * (1.0 + 1e-12))
      throw InvalidInput("transverse: grid extends outside the box walls");
    // The walls are the Dirichlet ends; evaluate inside only.
    Potential inner([](double) { return 0.0; }, {.name = "box-interior"});
    return build_mode(inner, grid);
  }
  auto mode = build_mode(v, grid);
  const double need = truncation_default * mode.e_perp;
  const double lo = end_value(v, grid.front()), hi = end_value(v, grid.back());
  if (!(mode.e_perp > 0.0) || lo < need || hi < need)
    throw InvalidInput("transverse: potential '" + v.name() +
                       "' is not confining on the given domain (V at ends " +
                       std::to_string(lo) + ", " + std::to_string(hi) + " < 50 e_perp = " +
                       std::to_string(need) + ")");
  return mode;
}

TransverseMode solve_transverse(const Potential &v, const TransverseOptions &opt) {
  if (opt.points < 11)
    throw InvalidInput("transverse: need at least 11 grid points");
  if (v.is_box()) {
    const double half = 0.5 * v.box_side();
    return solve_transverse(v, Grid1D::uniform(-half, half, opt.points));
  }
  // Grow each side until V there reaches factor * e_perp, using a coarse solve
  // for the energy estimate.
  double zlo = -1.0, zhi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const auto coarse = build_mode(v, Grid1D::uniform(zlo, zhi, 801));
    const double need = opt.truncation_factor * std::max(coarse.e_perp, 0.0);
    const bool ok_lo = v(zlo) >= need && need > 0.0;
    const bool ok_hi = v(zhi) >= need && need > 0.0;
    if (ok_lo && ok_hi) {
      auto mode = build_mode(v, Grid1D::uniform(zlo, zhi, opt.points));
      // The fine energy is slightly lower, so the rule still holds.
      return mode;
    }
    if (!ok_lo)
      zlo *= 1.25;
    if (!ok_hi)
      zhi *= 1.25;
    if (zhi - zlo > 1e8)
      break;
  }
  throw InvalidInput("transverse: potential '" + v.name() +
                     "' does not reach 50 e_perp; not confining");
}

TransverseMode scale_mode(const TransverseMode &mode, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidInput("scale_mode: h must be positive, got " + std::to_string(h));
  if (h == 1.0)
    return mode;
  TransverseMode out = mode;
  out.grid = mode.grid.scaled(h);
  const double f = 1.0 / std::sqrt(h);
  for (auto &x : out.s)
    x *= f;
  out.e_perp /= h * h;
  out.e_perp_excited /= h * h;
  out.s4 /= h;
  out.s_inf_sq /= h;
  out.ds2_inf /= h * h;
  out.h = mode.h * h;
  return out;
}

} // namespace q2d
