#include "q2d/scattering.hpp"

#include "q2d/error.hpp"
#include "q2d/numerics/grid.hpp"
#include "q2d/numerics/radial_ode.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace q2d {

using numerics::Grid1D;

namespace {

constexpr double pi = std::numbers::pi;

// Sorted unique knots of `pts` strictly inside (lo, hi), with lo and hi added.
std::vector<double> knots_between(double lo, double hi, std::span<const double> pts) {
  std::vector<double> k{lo};
  for (double p : pts)
    if (p > lo && p < hi)
      k.push_back(p);
  k.push_back(hi);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end(),
                      [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::abs(y); }),
          k.end());
  return k;
}

template <class F> double gk(F &&f, double a, double b, double tol, double &err) {
  if (!(b > a)) {
    err = 0.0;
    return 0.0;
  }
  double e = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, tol, &e);
  err += e;
  return v;
}

} // namespace

ScatteringSolution3D solve_scattering_3d(const Potential &v, double a_scale,
                                         const Scattering3DOptions &opt) {
  if (!(a_scale > 0.0))
    throw InvalidInput("scatter3d: scale a must be positive");
  const Potential va = v.scaled(a_scale);
  if (!std::isfinite(va.range()))
    throw InvalidInput("scatter3d: potential '" + v.name() + "' has no finite range");
  const double rc = va.hard_core_radius();
  const double range = std::max(va.range(), rc);
  const double r_end = range > 0.0 ? 2.0 * range : 1.0;
  const double span = range > rc ? range - rc : r_end - rc;
  const double step = span / static_cast<double>(std::max<std::size_t>(opt.points_per_range, 10));

  std::vector<double> marks(va.breakpoints().begin(), va.breakpoints().end());
  marks.push_back(range);
  const std::vector<double> knots = knots_between(rc, r_end, marks);
  const Grid1D grid = Grid1D::piecewise(knots, step);

  const auto q = [&va](double r) { return 0.5 * va(r); };
  const auto ode = numerics::integrate_radial_ode(q, grid, 0.0, 1.0);

  // Linear fit u = alpha r + beta over the outer 20% of the points beyond the range.
  const std::size_t n = grid.size();
  std::size_t first_out = 0;
  while (first_out < n && grid[first_out] < range)
    ++first_out;
  const std::size_t n_out = n - first_out;
  const std::size_t n_fit = std::max<std::size_t>(n_out / 5, 2);
  const std::size_t i0 = n - n_fit;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = i0; i < n; ++i) {
    sx += grid[i];
    sy += ode.u[i];
    sxx += grid[i] * grid[i];
    sxy += grid[i] * ode.u[i];
  }
  const double m = static_cast<double>(n_fit);
  const double alpha = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double beta = (sy - alpha * sx) / m;
  if (!(alpha > 0.0))
    throw ConvergenceError("scatter3d: non-positive outer slope", 0);

  ScatteringSolution3D sol;
  sol.range = range;
  sol.a = -beta / alpha;
  double umax = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    umax = std::max(umax, std::abs(ode.u[i] / alpha));
  for (std::size_t i = i0; i < n; ++i) {
    const double d = (ode.u[i] - (alpha * grid[i] + beta)) / alpha;
    ss += d * d;
  }
  sol.fit_residual = std::sqrt(ss / m) / std::max(umax, 1e-300);
  if (sol.fit_residual > opt.fit_residual_limit)
    throw InvalidInput("scatter3d: fit residual " + std::to_string(sol.fit_residual) +
                       " above limit; is the potential zero beyond its declared range?");

  sol.r.assign(grid.points().begin(), grid.points().end());
  sol.u.resize(n);
  sol.du.resize(n);
  sol.f0.resize(n);
  sol.df0.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid[i];
    const double u = ode.u[i] / alpha, du = ode.du[i] / alpha;
    sol.u[i] = u;
    sol.du[i] = du;
    if (r > 0.0) {
      sol.f0[i] = u / r;
      sol.df0[i] = (du * r - u) / (r * r);
    } else {
      sol.f0[i] = du;
      sol.df0[i] = 0.0;
    }
  }
  return sol;
}

HardWallProfile::HardWallProfile(std::shared_ptr<const ScatteringSolution3D> sol, double R)
    : sol_(std::move(sol)), R_(R) {
  if (!(R > sol_->a))
    throw InvalidInput("hard_wall_profile: R must exceed the scattering length a");
  if (!(R > sol_->range))
    throw InvalidInput("hard_wall_profile: R must exceed the potential range");
  norm_ = 1.0 / (1.0 - sol_->a / R);
}

void HardWallProfile::interpolate(double r, double &u, double &du) const {
  const auto &x = sol_->r;
  if (r <= x.front()) {
    u = x.front() > 0.0 ? 0.0 : sol_->du.front() * r;
    du = x.front() > 0.0 && r < x.front() ? 0.0 : sol_->du.front();
    return;
  }
  if (r >= x.back()) {
    u = r - sol_->a;
    du = 1.0;
    return;
  }
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double x0 = x[j - 1], h = x[j] - x0, t = (r - x0) / h;
  const double u0 = sol_->u[j - 1], u1 = sol_->u[j];
  const double m0 = sol_->du[j - 1] * h, m1 = sol_->du[j] * h;
  const double t2 = t * t, t3 = t2 * t;
  u = (2 * t3 - 3 * t2 + 1) * u0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * u1 +
      (t3 - t2) * m1;
  du = ((6 * t2 - 6 * t) * u0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * u1 +
        (3 * t2 - 2 * t) * m1) /
       h;
}

double HardWallProfile::operator()(double r) const {
  r = std::abs(r);
  if (r >= R_)
    return 1.0;
  double u, du;
  interpolate(r, u, du);
  if (r == 0.0)
    return norm_ * du;
  return norm_ * u / r;
}

double HardWallProfile::derivative(double r) const {
  r = std::abs(r);
  if (r >= R_ || r == 0.0)
    return 0.0;
  double u, du;
  interpolate(r, u, du);
  return norm_ * (du * r - u) / (r * r);
}

HardWallProfile hard_wall_profile(const ScatteringSolution3D &sol, double R) {
  return HardWallProfile(std::make_shared<const ScatteringSolution3D>(sol), R);
}

EffectiveW effective_w(const HardWallProfile &f, const Potential &v_a, const TransverseMode &mode,
                       double h, double rel_tol) {
  if (!(h > 0.0))
    throw InvalidInput("effective_w: h must be positive");
  const double R = f.R();
  const double s4 = mode.s4 * mode.h; // unit-scale moment
  const double pre = 2.0 * s4 / h;
  const double rc = f.core_radius();

  std::vector<double> rk(v_a.breakpoints().begin(), v_a.breakpoints().end());
  if (rc > 0.0)
    rk.push_back(rc);
  rk.push_back(R);

  const auto raw = [&f, &v_a, rc](double r) {
    if (r < rc)
      return 0.0;
    const double d = f.derivative(r);
    const double val = r > rc ? 0.5 * v_a(r) * f(r) * f(r) : 0.0;
    return d * d + (std::isfinite(val) ? val : 0.0);
  };
  // Values at roundoff level of the profile scale (at least R^-2) are zeroed so that a vanishing
  // density does not drive the relative-tolerance quadrature to full depth.
  double scale = 0.0;
  for (int k = 1; k < 2000; ++k)
    scale = std::max(scale, raw(rc + (R - rc) * k / 2000.0));
  const double floor = 1e-14 * std::max(scale, 1.0 / (R * R));
  // Copies: the returned W outlives the arguments.
  const auto density = [f, v_a, rc, floor](double r) {
    if (r < rc)
      return 0.0;
    const double d = f.derivative(r);
    const double val = r > rc ? 0.5 * v_a(r) * f(r) * f(r) : 0.0;
    const double out = d * d + (std::isfinite(val) ? val : 0.0);
    return out > floor ? out : 0.0;
  };

  struct Shared {
    double worst = 0.0;
  };
  auto shared = std::make_shared<Shared>();

  auto w_at = [=](double rho) {
    rho = std::abs(rho);
    if (rho >= R)
      return 0.0;
    std::vector<double> zk{0.0};
    for (double b : rk)
      if (b > rho && b < R)
        zk.push_back(std::sqrt(b * b - rho * rho));
    const double zmax = std::sqrt(R * R - rho * rho);
    zk.push_back(zmax);
    std::sort(zk.begin(), zk.end());
    double sum = 0.0, err = 0.0;
    const auto g = [&](double z) { return density(std::sqrt(rho * rho + z * z)); };
    for (std::size_t k = 0; k + 1 < zk.size(); ++k)
      sum += gk(g, zk[k], zk[k + 1], rel_tol, err);
    if (err > 1e-6 * std::abs(sum) + 1e-300)
      shared->worst = std::max(shared->worst, err / std::abs(sum));
    return 2.0 * pre * sum;
  };

  std::vector<double> wk = rk;
  Potential w(w_at, {.name = "effective-W", .range = R, .breakpoints = wk});

  std::vector<double> outer = knots_between(0.0, R, rk);
  double total = 0.0, err = 0.0;
  // W has a square-root cusp just below each knot b; rho = b - u^2 removes it.
  for (std::size_t k = 0; k + 1 < outer.size(); ++k) {
    const double b = outer[k + 1];
    const auto integrand = [&](double u) {
      const double rho = b - u * u;
      return 4.0 * pi * u * rho * w_at(rho);
    };
    total += gk(integrand, 0.0, std::sqrt(b - outer[k]), rel_tol, err);
  }
  if (shared->worst > 0.0 || err > 1e-6 * std::abs(total))
    throw InvalidInput("effective_w: quadrature did not resolve the core structure of v_a "
                       "(relative error estimate " +
                       std::to_string(std::max(shared->worst, err / std::abs(total))) + ")");

  EffectiveW out{.w = std::move(w), .integral = total};
  out.closed_form = 8.0 * pi * f.a() * s4 / (h * (1.0 - f.a() / R));
  return out;
}

ScatteringSolution2D solve_scattering_2d(const Potential &w, double R, double epsilon,
                                         const Scattering2DOptions &opt) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw InvalidInput("scatter2d: epsilon must lie in (0, 1]");
  const double RW = w.range();
  if (!std::isfinite(RW))
    throw InvalidInput("scatter2d: W must have finite support");
  if (!(R > 0.0) || R < RW)
    throw InvalidInput("scatter2d: R must be positive and at least the support radius of W");

  ScatteringSolution2D sol;
  sol.R = R;
  sol.epsilon = epsilon;
  const double dt = std::log(10.0) / static_cast<double>(std::max<std::size_t>(opt.points_per_decade, 10));

  if (RW <= 0.0) {
    sol.r = {R};
    sol.psi = {1.0};
    sol.ln_a_scatt = -std::numeric_limits<double>::infinity();
    return sol;
  }

  const double rc = w.hard_core_radius();
  const double start = rc > 0.0 ? rc : RW * std::pow(10.0, -opt.inner_decades);
  std::vector<double> tb;
  for (double b : w.breakpoints())
    if (b > 0.0)
      tb.push_back(std::log(b));
  const auto knots = knots_between(std::log(start), std::log(RW), tb);

  double psi_w, slope_w; // psi and d psi/dt just inside R_W
  std::vector<double> t_in, psi_in, dpsi_in;
  double ln_scale = 0.0;
  if (rc >= RW) {
    // Pure hard disc.
    psi_w = 0.0;
    slope_w = 1.0;
    t_in = {std::log(rc)};
    psi_in = {0.0};
    dpsi_in = {1.0};
  } else {
    const Grid1D tg = Grid1D::piecewise(knots, dt);
    const auto q = [&w, epsilon](double t) {
      const double r = std::exp(t);
      return r * r * w(r) / (2.0 * epsilon);
    };
    double u0 = 1.0, du0 = 0.0;
    if (rc > 0.0) {
      u0 = 0.0;
      du0 = 1.0;
    } else {
      const double w0 = w(start);
      du0 = start * start * (std::isfinite(w0) ? w0 : 0.0) / (4.0 * epsilon);
    }
    const auto ode = numerics::integrate_radial_ode(q, tg, u0, du0);
    t_in.assign(tg.points().begin(), tg.points().end());
    psi_in = ode.u;
    dpsi_in = ode.du;
    ln_scale = ode.ln_scale;
    psi_w = ode.u.back();
    slope_w = ode.du.back();
  }
  (void)ln_scale; // common factor, cancels in every ratio below

  const double B = epsilon * slope_w; // r psi_r just outside the support
  const double lnRW = std::log(RW);
  const double psi_R = psi_w + B * (std::log(R) - lnRW);
  if (!(B > 0.0) || !(psi_R > 0.0)) {
    // W vanishes on its nominal support.
    sol.r = {R};
    sol.psi = {1.0};
    sol.ln_a_scatt = -std::numeric_limits<double>::infinity();
    return sol;
  }
  sol.E_R = 2.0 * pi * B / psi_R;
  sol.ln_a_scatt = lnRW - psi_w / B;
  sol.too_strong = !(std::log(R) > sol.ln_a_scatt);

  // Functional by two-point Gauss quadrature on the cubic Hermite interpolant
  // of (psi, psi_t), normalized by psi(R)^2.
  double inner = 0.0;
  for (std::size_t i = 0; i + 1 < t_in.size(); ++i) {
    const double h = t_in[i + 1] - t_in[i];
    const double u0 = psi_in[i], u1 = psi_in[i + 1];
    const double m0 = dpsi_in[i] * h, m1 = dpsi_in[i + 1] * h;
    for (double s : {0.5 - std::sqrt(3.0) / 6.0, 0.5 + std::sqrt(3.0) / 6.0}) {
      const double s2 = s * s, s3 = s2 * s;
      const double p = (2 * s3 - 3 * s2 + 1) * u0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * u1 +
                       (s3 - s2) * m1;
      const double dp = ((6 * s2 - 6 * s) * (u0 - u1) + (3 * s2 - 4 * s + 1) * m0 + (3 * s2 - 2 * s) * m1) / h;
      const double r = std::exp(t_in[i] + s * h);
      const double wr = w(r);
      const double pot = std::isfinite(wr) ? 0.5 * r * r * wr * p * p : 0.0;
      inner += 0.5 * h * (epsilon * dp * dp + pot);
    }
  }
  const double outer = B * B * (std::log(R) - lnRW);
  sol.E_quadrature = 2.0 * pi * (inner + outer) / (psi_R * psi_R);

  // psi on r, continued analytically past the support.
  for (std::size_t i = 0; i < t_in.size(); ++i) {
    sol.r.push_back(std::exp(t_in[i]));
    sol.psi.push_back(psi_in[i] / psi_R);
  }
  const double tR = std::log(R);
  for (double t = lnRW + dt; t < tR; t += dt) {
    sol.r.push_back(std::exp(t));
    sol.psi.push_back((psi_w + B * (t - lnRW)) / psi_R);
  }
  if (R > RW) {
    sol.r.push_back(R);
    sol.psi.push_back(1.0);
  }
  return sol;
}

double perturbative_a_scatt(double lambda, double R) {
  if (!(lambda > 0.0))
    throw InvalidInput("perturbative_a_scatt: lambda must be positive");
  return R * std::exp(-4.0 * pi / lambda);
}

A2D effective_a2d(double h, double a, double s4) {
  if (!(h > 0.0))
    throw InvalidInput("a2d: h must be positive");
  if (!(a > 0.0))
    throw InvalidInput("a2d: a must be positive");
  if (!(s4 > 0.0))
    throw InvalidInput("a2d: s4 must be positive");
  return {.ln_ratio = -h / (2.0 * a * s4), .h = h};
}

} // namespace q2d
