#include "q2d/thomas_fermi.hpp"

#include "q2d/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>

namespace q2d {

namespace {

constexpr double pi = std::numbers::pi;

template <class F> double integrate(F &&f, double a, double b) {
  if (!(b > a))
    return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

// Smallest r with V(r) >= mu (V assumed to grow without bound).
double edge(const Potential &v, double mu) {
  double hi = 1.0;
  int guard = 0;
  while (v(hi) < mu) {
    hi *= 2.0;
    if (++guard > 200)
      throw InvalidInput("tf: trap does not reach the chemical potential");
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (v(mid) < mu ? lo : hi) = mid;
  }
  return hi;
}

} // namespace

double TFResult::rho(double x) const {
  if (box)
    return std::abs(x) <= 0.5 * box_side ? N / (box_side * box_side) : 0.0;
  return std::max(mu_tf - trap(x), 0.0) / (8.0 * pi * coupling);
}

double TFResult::mu_identity_residual() const {
  return mu_tf - (E_tf + 4.0 * pi * coupling * rho_bar);
}

TFResult tf_solve(const Potential &v, double N, double c, const TFOptions &opt) {
  if (!(N > 0.0))
    throw InvalidInput("tf: N must be positive");
  if (!(c > 0.0))
    throw InvalidInput("tf: coupling must be positive (no TF minimizer at zero coupling)");
  TFResult out;
  out.N = N;
  out.coupling = c;
  out.trap = v.profile();
  if (v.is_box()) {
    const double side = v.box_side();
    out.box = true;
    out.box_side = side;
    out.radius = side;
    out.rho_bar = N / (side * side);
    out.E_tf = 4.0 * pi * c * out.rho_bar;
    out.mu_tf = 8.0 * pi * c * out.rho_bar;
    out.r = {0.0, 0.5 * side};
    out.rho_tf = {out.rho_bar, out.rho_bar};
    return out;
  }
  if (!v.homogeneity() && !opt.allow_nonhomogeneous)
    throw InvalidInput("tf: trap '" + v.name() +
                       "' is not homogeneous; pass allow_nonhomogeneous for the numeric path");

  const auto count = [&](double mu) {
    const double R = edge(v, mu);
    return integrate([&](double r) { return std::max(mu - v(r), 0.0) * r; }, 0.0, R) /
           (4.0 * c);
  };
  double hi = 1.0;
  while (count(hi) < N) {
    hi *= 2.0;
    if (hi > 1e300)
      throw InvalidInput("tf: normalization root not bracketed");
  }
  double lo = hi / 2.0;
  while (lo > 1e-300 && count(lo) > N)
    lo /= 2.0;
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [&](double mu) { return count(mu) - N; }, lo, hi, boost::math::tools::eps_tolerance<double>(52),
      iters);
  out.mu_tf = 0.5 * (a + b);
  out.radius = edge(v, out.mu_tf);

  const double mu = out.mu_tf, R = out.radius;
  const double k = 1.0 / (8.0 * pi * c);
  const double int_rho2 =
      integrate([&](double r) { const double p = std::max(mu - v(r), 0.0) * k; return 2.0 * pi * r * p * p; },
                0.0, R);
  const double int_vrho =
      integrate([&](double r) { return 2.0 * pi * r * v(r) * std::max(mu - v(r), 0.0) * k; }, 0.0, R);
  out.rho_bar = int_rho2 / N;
  out.E_tf = (int_vrho + 4.0 * pi * c * int_rho2) / N;

  const std::size_t m = std::max<std::size_t>(opt.samples, 2);
  out.r.resize(m);
  out.rho_tf.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.r[i] = R * static_cast<double>(i) / static_cast<double>(m - 1);
    out.rho_tf[i] = out.rho(out.r[i]);
  }
  return out;
}

} // namespace q2d
