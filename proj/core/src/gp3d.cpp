#include "q2d/gp3d.hpp"

#include "detail/radial_operator.hpp"
#include "q2d/error.hpp"
#include "q2d/numerics/gradient_flow.hpp"
#include "q2d/numerics/tridiagonal.hpp"
#include "q2d/transverse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

namespace q2d {

namespace {

constexpr double pi = std::numbers::pi;

using Matrix = Eigen::MatrixXd;
using Map = Eigen::Map<const Matrix>;

struct Cylinder {
  detail::RadialOperator op;
  std::vector<double> v;    // V_L(r_i)
  std::vector<double> zeta; // mode energies
  Matrix X;                 // chi_m(z_j) on interior z points, nz x M
  Matrix X2;                // chi^2
  double dz;
  double Na;

  // Cache of the last Phi = C X^T.
  mutable std::vector<double> cached_c;
  mutable Matrix phi;

  std::size_t nr() const { return op.n; }
  std::size_t modes() const { return static_cast<std::size_t>(X.cols()); }

  const Matrix &field(std::span<const double> c) const {
    if (cached_c.size() == c.size() &&
        std::memcmp(cached_c.data(), c.data(), c.size() * sizeof(double)) == 0)
      return phi;
    cached_c.assign(c.begin(), c.end());
    const Map C(c.data(), static_cast<Eigen::Index>(nr()), static_cast<Eigen::Index>(modes()));
    phi.noalias() = C * X.transpose();
    return phi;
  }

  double quartic(std::span<const double> c) const {
    const Matrix &p = field(c);
    const Eigen::VectorXd row = p.array().square().square().rowwise().sum().matrix();
    double s = 0.0;
    for (std::size_t i = 0; i < nr(); ++i)
      s += op.w[i] * row(static_cast<Eigen::Index>(i));
    return s * dz;
  }

  double energy(std::span<const double> c) const {
    const std::size_t n = nr();
    double lin = 0.0;
    for (std::size_t m = 0; m < modes(); ++m) {
      const auto cm = c.subspan(m * n, n);
      lin += op.kinetic(cm);
      for (std::size_t i = 0; i < n; ++i)
        lin += op.w[i] * (v[i] + zeta[m]) * cm[i] * cm[i];
    }
    return lin + (Na > 0.0 ? 4.0 * pi * Na * quartic(c) : 0.0);
  }

  mutable Matrix U; // 8 pi Na dz Phi^2 X^2, for the preconditioner

  void gradient(std::span<const double> c, std::span<double> g) const {
    const std::size_t n = nr(), M = modes();
    for (std::size_t m = 0; m < M; ++m) {
      const auto cm = c.subspan(m * n, n);
      auto gm = g.subspan(m * n, n);
      op.apply(cm, gm);
      for (std::size_t i = 0; i < n; ++i)
        gm[i] = 2.0 * (gm[i] / op.w[i] + (v[i] + zeta[m]) * cm[i]);
    }
    if (Na > 0.0) {
      const Matrix &p = field(c);
      const Matrix cubic = (p.array().cube().matrix() * X) * (16.0 * pi * Na * dz);
      U.noalias() = (p.array().square().matrix() * X2) * (8.0 * pi * Na * dz);
      for (std::size_t m = 0; m < M; ++m)
        for (std::size_t i = 0; i < n; ++i)
          g[m * n + i] += cubic(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
    } else {
      U = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(M));
    }
  }

  void precondition(std::span<const double> r, std::span<double> d) const {
    const std::size_t n = nr();
    std::vector<double> diag(n), rhs(n);
    for (std::size_t m = 0; m < modes(); ++m) {
      for (std::size_t i = 0; i < n; ++i) {
        const double u = U(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m));
        diag[i] = op.k_diag[i] + op.w[i] * (v[i] + zeta[m] - zeta[0] + u + 1.0);
        rhs[i] = op.w[i] * r[m * n + i];
      }
      const auto x = numerics::solve_tridiagonal(op.k_off, diag, op.k_off, rhs);
      std::copy(x.begin(), x.end(), d.begin() + static_cast<std::ptrdiff_t>(m * n));
    }
  }
};

} // namespace

GP3DResult minimize_gp3d(const Potential &trap, const Potential &v_perp, double h, double Na,
                         const GP3DOptions &opt) {
  if (!(h > 0.0))
    throw InvalidInput("gp3d: h must be positive");
  if (!(Na >= 0.0) || !std::isfinite(Na))
    throw InvalidInput("gp3d: Na must be finite and >= 0");
  if (trap.is_box())
    throw InvalidInput("gp3d: the in-plane trap must be rotationally symmetric (box not supported)");
  if (opt.modes < 1)
    throw InvalidInput("gp3d: need at least one transverse mode");
  const double dz = opt.dz > 0.0 ? opt.dz : h / 400.0;
  const double dr = opt.dr > 0.0 ? opt.dr : 1.0 / 1000.0;
  if (dz > h / 40.0 * (1.0 + 1e-12))
    throw InvalidInput("gp3d: dz = " + std::to_string(dz) + " exceeds h/40 = " +
                       std::to_string(h / 40.0) + "; z resolution insufficient for h");
  if (dr > 1.0 / 200.0 * (1.0 + 1e-12))
    throw InvalidInput("gp3d: dr = " + std::to_string(dr) + " exceeds L/200");

  // Transverse domain: unit-scale truncation rule, then scaled by h.
  double zlo, zhi;
  if (v_perp.is_box()) {
    zlo = -0.5 * v_perp.box_side() * h;
    zhi = -zlo;
  } else {
    const auto coarse = solve_transverse(v_perp, TransverseOptions{.points = 801});
    zlo = coarse.grid.front() * h;
    zhi = coarse.grid.back() * h;
  }
  const auto nz_full = static_cast<std::size_t>(std::llround((zhi - zlo) / dz)) + 1;
  const double dz_used = (zhi - zlo) / static_cast<double>(nz_full - 1);
  const std::size_t nz = nz_full - 2; // interior
  if (opt.modes > nz)
    throw InvalidInput("gp3d: more modes than interior z points");

  const Potential vh = v_perp.is_box() ? Potential::zero() : v_perp.scaled(h);
  numerics::SymTridiagonal tz;
  tz.diag.resize(nz);
  tz.off.assign(nz - 1, -1.0 / (dz_used * dz_used));
  std::vector<double> z(nz);
  for (std::size_t j = 0; j < nz; ++j) {
    z[j] = zlo + dz_used * static_cast<double>(j + 1);
    tz.diag[j] = 2.0 / (dz_used * dz_used) + vh(z[j]);
  }
  const auto pairs = numerics::lowest_eigenpairs(tz, opt.modes);

  Cylinder cyl{.op = detail::RadialOperator(dr, 8), .v = {}, .zeta = pairs.values, .X = {}, .X2 = {},
               .dz = dz_used, .Na = Na, .cached_c = {}, .phi = {}, .U = {}};
  const auto M = static_cast<Eigen::Index>(opt.modes);
  cyl.X.resize(static_cast<Eigen::Index>(nz), M);
  const double inv_sqrt_dz = 1.0 / std::sqrt(dz_used);
  for (Eigen::Index m = 0; m < M; ++m)
    for (std::size_t j = 0; j < nz; ++j)
      cyl.X(static_cast<Eigen::Index>(j), m) = pairs.vectors[static_cast<std::size_t>(m)][j] * inv_sqrt_dz;
  cyl.X2 = cyl.X.array().square().matrix();

  GP3DResult out;
  out.zeta0 = pairs.values[0];
  out.zeta1 = opt.modes > 1 ? pairs.values[1] : std::numeric_limits<double>::quiet_NaN();
  out.s4_h = cyl.X.col(0).array().pow(4).sum() * dz_used;
  out.g = Na * out.s4_h;
  out.z_half_width = 0.5 * (zhi - zlo);

  GP2DOptions o2;
  o2.dr = dr;
  o2.r_max = opt.r_max;
  o2.tol = std::min(opt.tol, 1e-10);
  o2.truncation_factor = opt.truncation_factor;
  out.ansatz_2d = minimize_gp2d(trap, out.g, o2);
  out.upper_bound = out.zeta0 + out.ansatz_2d.energy;
  const std::size_t nr = out.ansatz_2d.r.size();
  out.r_max = out.ansatz_2d.r_max();

  cyl.op = detail::RadialOperator(dr, nr);
  cyl.v.resize(nr);
  for (std::size_t i = 0; i < nr; ++i)
    cyl.v[i] = trap(cyl.op.r[i]);

  const std::size_t Mz = opt.modes;
  std::vector<double> c(nr * Mz, 0.0);
  std::copy(out.ansatz_2d.phi.begin(), out.ansatz_2d.phi.end(), c.begin());

  numerics::FlowProblem fp;
  fp.weights.resize(nr * Mz);
  for (std::size_t m = 0; m < Mz; ++m)
    std::copy(cyl.op.w.begin(), cyl.op.w.end(), fp.weights.begin() + static_cast<std::ptrdiff_t>(m * nr));
  fp.energy = [&cyl](std::span<const double> x) { return cyl.energy(x); };
  fp.gradient = [&cyl](std::span<const double> x, std::span<double> g) { cyl.gradient(x, g); };
  fp.precondition = [&cyl](std::span<const double> r, std::span<double> d) { cyl.precondition(r, d); };
  numerics::FlowOptions fo;
  fo.tol = opt.tol;
  fo.max_iter = opt.max_iter;
  fo.initial_step = 1.0;
  const auto res = numerics::gradient_flow_minimize(fp, std::move(c), fo);

  GPState &s = out.state;
  s.geometry = GPGeometry::cylindrical;
  s.dr = dr;
  s.r = cyl.op.r;
  s.z = z;
  s.coupling = Na;
  s.quartic = cyl.quartic(res.state);
  s.mu = res.energy + 4.0 * pi * Na * s.quartic;
  s.energy = res.energy;
  s.converged = res.converged;
  s.iterations = res.iterations;
  s.energy_history = res.energy_history;
  if (opt.keep_state) {
    const Matrix &p = cyl.field(res.state);
    s.phi.resize(nr * nz);
    double sign = p.sum() < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nz; ++j)
        s.phi[i * nz + j] = sign * p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return out;
}

} // namespace q2d
