#include "q2d/bounds.hpp"

#include "q2d/error.hpp"
#include "q2d/numerics/grid.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace q2d {

namespace {
constexpr double pi = std::numbers::pi;
}

TempleBound temple_bound(const TempleInput &in) {
  const double e = in.expectation;
  if (!(in.gap_floor > e))
    throw InvalidInput("temple: gap floor " + std::to_string(in.gap_floor) +
                       " does not exceed <H> = " + std::to_string(e) + "; no bound available");
  double var = in.second_moment - e * e;
  if (var < -1e-12 * std::max(1.0, e * e))
    throw InvalidInput("temple: <H^2> < <H>^2");
  var = std::max(var, 0.0);
  TempleBound b;
  b.variance = var;
  b.bound = e - var / (in.gap_floor - e);
  b.multiplicative = e != 0.0 ? e * (1.0 - var / (e * (in.gap_floor - e))) : b.bound;
  return b;
}

TempleInput operator_statistics(const numerics::SymTridiagonal &H, std::span<const double> psi,
                                double gap_floor) {
  if (psi.size() != H.size())
    throw InvalidInput("temple: trial vector and operator differ in size");
  std::vector<double> hp(psi.size());
  H.apply(psi, hp);
  double nn = 0.0, e = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    nn += psi[i] * psi[i];
    e += psi[i] * hp[i];
    e2 += hp[i] * hp[i];
  }
  if (!(nn > 0.0))
    throw InvalidInput("temple: zero trial vector");
  return {.expectation = e / nn, .second_moment = e2 / nn, .gap_floor = gap_floor};
}

Potential dyson_u3d(double R) {
  if (!(R > 0.0))
    throw InvalidInput("dyson_u3d: R must be positive");
  const double c = 24.0 / (7.0 * R * R * R);
  return Potential([c, R](double r) { return r > 0.5 * R && r < R ? c : 0.0; },
                   {.name = "dyson-U", .range = R, .breakpoints = {0.5 * R, R}});
}

double dyson_u3d_integral(double R) {
  const Potential u = dyson_u3d(R);
  const auto f = [&u](double r) { return 4.0 * pi * r * r * u(r); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  return GK::integrate(f, 0.0, 0.5 * R, 10, 1e-14) + GK::integrate(f, 0.5 * R, R, 10, 1e-14);
}

double e_r_epsilon(const Potential &w, double R, double epsilon) {
  return solve_scattering_2d(w, R, epsilon).E_R;
}

double e_r_epsilon_direct(const Potential &w, double Rp, double epsilon, std::size_t inner_cells) {
  const double RW = w.range();
  if (!std::isfinite(RW) || !(Rp >= RW) || !(Rp > 0.0))
    throw InvalidInput("e_r_epsilon_direct: need finite support R_W <= R'");
  if (!(epsilon > 0.0))
    throw InvalidInput("e_r_epsilon_direct: epsilon must be positive");
  if (RW <= 0.0)
    return 0.0;
  const double rc = w.hard_core_radius();

  std::vector<double> r;
  const std::size_t m = std::max<std::size_t>(inner_cells, 16);
  if (RW > rc)
    for (std::size_t i = 0; i <= m; ++i)
      r.push_back(rc + (RW - rc) * static_cast<double>(i) / static_cast<double>(m));
  else
    r.push_back(rc);
  if (Rp > RW) {
    const double decades = std::log10(Rp / RW);
    const auto k = static_cast<std::size_t>(std::ceil(std::max(decades, 1e-3) * 4000.0));
    for (std::size_t i = 1; i <= k; ++i)
      r.push_back(i == k ? Rp : RW * std::pow(Rp / RW, static_cast<double>(i) / static_cast<double>(k)));
  }
  const std::size_t n = r.size();
  if (n < 3)
    throw InvalidInput("e_r_epsilon_direct: R' too close to the hard core");
  std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
  const double gp = 0.5 / std::sqrt(3.0);
  for (std::size_t e = 0; e + 1 < n; ++e) {
    const double h = r[e + 1] - r[e], mid = 0.5 * (r[e] + r[e + 1]);
    const double kappa = mid < RW ? epsilon : 1.0;
    const double stiff = kappa * 2.0 * pi * mid / h;
    diag[e] += stiff;
    diag[e + 1] += stiff;
    off[e] -= stiff;
    for (double s : {-gp, gp}) {
      const double x = mid + s * h;
      const double wv = x < RW ? w(x) : 0.0;
      if (!std::isfinite(wv) || wv == 0.0)
        continue;
      const double n2 = (x - r[e]) / h, n1 = 1.0 - n2;
      const double c = 0.5 * wv * 2.0 * pi * x * 0.5 * h;
      diag[e] += c * n1 * n1;
      diag[e + 1] += c * n2 * n2;
      off[e] += c * n1 * n2;
    }
  }
  // Unknowns: nodes 1..n-2 when a hard core pins node 0, else 0..n-2; node n-1 is 1.
  const std::size_t first = rc > 0.0 ? 1 : 0;
  const std::size_t last = n - 1;
  const std::size_t k = last - first;
  std::vector<double> lo(k - 1), di(k), up(k - 1), rhs(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    di[i] = diag[first + i];
    if (i + 1 < k) {
      lo[i] = off[first + i];
      up[i] = off[first + i];
    }
  }
  rhs[k - 1] = -off[last - 1];
  const auto phi = numerics::solve_tridiagonal(lo, di, up, rhs);
  return diag[last] + off[last - 1] * phi[k - 1];
}

double dyson_recursion(double E, double R, double Rp) {
  if (!(R > 0.0) || !(Rp >= R))
    throw InvalidInput("dyson_recursion: need 0 < R <= R'");
  if (!(E >= 0.0))
    throw InvalidInput("dyson_recursion: E must be nonnegative");
  if (E == 0.0)
    return 0.0;
  return 2.0 * pi / (std::log(Rp / R) + 2.0 * pi / E);
}

DysonPotential2D dyson_u2d(double R, double Rt, double epsilon,
                           const std::function<double(double)> &E_of, double ln_a,
                           std::size_t ppd) {
  if (!(R > 0.0))
    throw InvalidInput("dyson_u2d: R must be positive");
  if (!(Rt > R))
    throw InvalidInput("dyson_u2d: R~ must exceed R (empty support)");
  const double t0 = std::log(R), t1 = std::log(Rt);
  auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / std::log(10.0) *
                                              static_cast<double>(std::max<std::size_t>(ppd, 64))));
  n = std::max<std::size_t>(n, 2);
  if (n % 2)
    ++n;
  const double dt = (t1 - t0) / static_cast<double>(n);
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double rp = std::exp(t0 + dt * static_cast<double>(i));
    const double E = E_of(rp);
    if (!(E > 0.0) || !std::isfinite(E))
      throw InvalidInput("dyson_u2d: E_{R',eps} must be positive on [R, R~]");
    f[i] = 2.0 * pi * rp * rp / E; // 2 pi E^{-1} R' dR' with dR' = R' dt
  }
  DysonPotential2D u{.R = R, .R_tilde = Rt, .epsilon = epsilon};
  u.nu = numerics::simpson(dt, f);
  if (!(u.nu > 0.0) || !std::isfinite(u.nu))
    throw InvalidInput("dyson_u2d: quadrature of nu failed");
  u.height = 1.0 / u.nu;
  for (auto &x : f)
    x *= u.height;
  u.admissibility = numerics::simpson(dt, f);
  if (std::isfinite(ln_a)) {
    u.asymptote = 0.5 * Rt * Rt * (std::log(Rt) - ln_a);
    u.deviation = std::abs(u.nu / u.asymptote - 1.0);
  }
  return u;
}

} // namespace q2d
