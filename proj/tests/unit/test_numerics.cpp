#include "q2d/error.hpp"
#include "q2d/numerics/gradient_flow.hpp"
#include "q2d/numerics/grid.hpp"
#include "q2d/numerics/radial_ode.hpp"
#include "q2d/numerics/tridiagonal.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace q2d;
using namespace q2d::numerics;

namespace {
double norm_sq(const Grid1D &g, const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return s * g.spacing();
}
} // namespace

TEST_CASE("grid construction and invariants") {
  const auto u = Grid1D::uniform(-1.0, 1.0, 5);
  CHECK(u.size() == 5);
  CHECK(u.spacing() == doctest::Approx(0.5));
  const auto lg = Grid1D::log_radial(1e-3, 10.0, 41);
  CHECK(lg.front() > 0.0);
  for (std::size_t i = 1; i < lg.size(); ++i)
    CHECK(lg[i] > lg[i - 1]);
  const std::vector<double> knots{0.0, 0.3, 1.0};
  const auto pw = Grid1D::piecewise(knots, 0.1);
  bool hit = false;
  for (double x : pw.points())
    hit = hit || x == 0.3;
  CHECK(hit);
  CHECK_THROWS_AS(Grid1D::uniform(1.0, 0.0, 5), InvalidInput);
  CHECK_THROWS_AS(Grid1D::log_radial(0.0, 1.0, 5), InvalidInput);
}

TEST_CASE("quadrature") {
  const auto g = Grid1D::uniform(0.0, 1.0, 101);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = g[i] * g[i] * g[i];
  CHECK(simpson(g.spacing(), f) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(trapezoid(g, f) == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("eigs: harmonic oscillator spectrum") {
  const auto v = [](double z) { return z * z; };
  const auto g = Grid1D::uniform(-12.0, 12.0, 4000);
  const auto res = eigs_sturm_liouville(v, g, 2);
  REQUIRE(res.size() == 2);
  // Second-order FD at dz = 0.006 leaves errors of 2.3e-6 and 1.1e-5.
  CHECK(std::abs(res[0].eigenvalue - 1.0) < 1e-5);
  CHECK(std::abs(res[1].eigenvalue - 3.0) < 2e-5);
  CHECK(res[0].eigenvalue <= res[1].eigenvalue);
  const auto fine = eigs_sturm_liouville(v, Grid1D::uniform(-12.0, 12.0, 12001), 2);
  CHECK(std::abs(fine[0].eigenvalue - 1.0) < 1e-6);
  CHECK(std::abs(fine[1].eigenvalue - 3.0) < 2e-6);
  for (const auto &e : res)
    CHECK(std::abs(norm_sq(g, e.eigenvector) - 1.0) < 1e-12);
}

TEST_CASE("eigs: particle in a box") {
  const auto res = eigs_sturm_liouville([](double) { return 0.0; }, Grid1D::uniform(0.0, 1.0, 2001), 1);
  CHECK(res[0].eigenvalue == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("eigs: ground vector has no sign change") {
  const auto g = Grid1D::uniform(-6.0, 6.0, 801);
  const auto res = eigs_sturm_liouville([](double z) { return z * z * z * z - 2 * z * z; }, g, 1);
  const auto &v = res[0].eigenvector;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    CHECK(v[i] > 0.0);
}

TEST_CASE("eigs: Richardson ratio of successive refinements") {
  const auto v = [](double z) { return z * z + 0.5 * std::cos(z); };
  std::vector<double> e;
  for (std::size_t n : {401u, 801u, 1601u, 3201u})
    e.push_back(eigs_sturm_liouville(v, Grid1D::uniform(-10.0, 10.0, n), 1)[0].eigenvalue);
  // Error ratios against the Richardson limit of the two finest grids.
  const double limit = e[3] + (e[3] - e[2]) / 3.0;
  for (std::size_t i = 0; i + 2 < e.size(); ++i) {
    const double ratio = (e[i] - limit) / (e[i + 1] - limit);
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
}

TEST_CASE("eigs: rejects bad k and non-finite potential") {
  const auto g = Grid1D::uniform(0.0, 1.0, 10);
  CHECK_THROWS_AS(eigs_sturm_liouville([](double) { return 0.0; }, g, 0), InvalidInput);
  CHECK_THROWS_AS(eigs_sturm_liouville([](double) { return 0.0; }, g, 9), InvalidInput);
  CHECK_THROWS_AS(eigs_sturm_liouville([](double) { return NAN; }, g, 1), InvalidInput);
}

TEST_CASE("tridiagonal solve with pivoting") {
  const std::vector<double> lo{1.0, 2.0}, di{0.0, 1.0, 3.0}, up{4.0, 5.0}, b{4.0, 8.0, 5.0};
  const auto x = solve_tridiagonal(lo, di, up, b);
  // [[0,4,0],[1,1,5],[0,2,3]] x = b
  CHECK(4 * x[1] == doctest::Approx(4.0));
  CHECK(x[0] + x[1] + 5 * x[2] == doctest::Approx(8.0));
  CHECK(2 * x[1] + 3 * x[2] == doctest::Approx(5.0));
}

TEST_CASE("radial ODE: analytic solutions") {
  const auto g = Grid1D::uniform(0.0, 1.0, 1001);
  const auto lin = integrate_radial_ode([](double) { return 0.0; }, g, 0.0, 1.0);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(std::abs(lin.u[i] - g[i]) < 1e-10);
  const auto sh = integrate_radial_ode([](double) { return 1.0; }, g, 0.0, 1.0);
  CHECK(std::abs(sh.u.back() / std::sinh(1.0) - 1.0) < 1e-8);
  // Smooth coefficient: fourth order.
  const auto q = [](double x) { return 1.0 + 3.0 * x * x; };
  const auto a = integrate_radial_ode(q, Grid1D::uniform(0.0, 1.0, 11), 1.0, 0.0).u.back();
  const auto b = integrate_radial_ode(q, Grid1D::uniform(0.0, 1.0, 21), 1.0, 0.0).u.back();
  const auto c = integrate_radial_ode(q, Grid1D::uniform(0.0, 1.0, 41), 1.0, 0.0).u.back();
  CHECK((a - b) / (b - c) == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("radial ODE: matching at a coefficient jump") {
  const std::vector<double> knots{0.0, 0.5, 1.0};
  const auto g = Grid1D::piecewise(knots, 0.01);
  const auto q = [](double x) { return x < 0.5 ? 4.0 : -1.0; };
  const auto s = integrate_radial_ode(q, g, 0.0, 1.0);
  std::size_t k = 0;
  while (g[k] < 0.5)
    ++k;
  // Left limit from the analytic inner solution.
  const double uL = std::sinh(1.0) / 2.0, duL = std::cosh(1.0);
  CHECK(std::abs(s.u[k] - uL) < 1e-8);
  CHECK(std::abs(s.du[k] - duL) < 1e-8);
  const double uR = uL * std::cos(0.5) + duL * std::sin(0.5);
  CHECK(std::abs(s.u.back() - uR) < 1e-8);
}

TEST_CASE("radial ODE: large growth is rescaled") {
  const auto g = Grid1D::uniform(0.0, 1.0, 11);
  const auto s = integrate_radial_ode([](double) { return 1e6; }, g, 0.0, 1.0);
  CHECK(s.ln_scale > 0.0);
  const double ln_true = 1000.0 - std::log(2.0) - std::log(1000.0); // ln(sinh(1000)/1000)
  CHECK(std::log(s.u.back()) + s.ln_scale == doctest::Approx(ln_true).epsilon(1e-10));
}

TEST_CASE("gradient flow: linear problem matches the eigensolver") {
  const auto grid = Grid1D::uniform(-8.0, 8.0, 801);
  const auto v = [](double z) { return z * z; };
  const auto T = sturm_liouville_matrix(v, grid);
  const auto ref = eigs_sturm_liouville(v, grid, 1)[0].eigenvalue;
  const std::size_t n = T.size();
  const double dz = grid.spacing();
  FlowProblem p;
  p.weights.assign(n, dz);
  p.energy = [&](std::span<const double> x) {
    std::vector<double> y(n);
    T.apply(x, y);
    return weighted_dot(p.weights, x, y);
  };
  p.gradient = [&](std::span<const double> x, std::span<double> g) {
    T.apply(x, g);
    for (auto &gi : g)
      gi *= 2.0;
  };
  // Tridiagonal preconditioner (T + 1)^{-1}.
  p.precondition = [&](std::span<const double> r, std::span<double> d) {
    std::vector<double> di(T.diag);
    for (auto &x : di)
      x += 1.0;
    const auto x = solve_tridiagonal(T.off, di, T.off, r);
    std::copy(x.begin(), x.end(), d.begin());
  };
  std::vector<double> start(n);
  for (std::size_t i = 0; i < n; ++i)
    start[i] = 1.0 / (1.0 + grid[i + 1] * grid[i + 1]);
  const auto res = gradient_flow_minimize(p, start, {.tol = 1e-14});
  INFO(res.iterations, " ", res.energy - ref);
  CHECK(res.converged);
  CHECK(std::abs(res.energy - ref) < 1e-8);
  for (std::size_t i = 1; i < res.energy_history.size(); ++i)
    CHECK(res.energy_history[i] <= res.energy_history[i - 1]);

  // Starting at the minimizer stops almost immediately.
  const auto exact = eigs_sturm_liouville(v, grid, 1)[0].eigenvector;
  std::vector<double> interior(exact.begin() + 1, exact.end() - 1);
  const auto again = gradient_flow_minimize(p, interior, {.tol = 1e-10});
  CHECK(again.converged);
  CHECK(again.iterations <= 2);
}

TEST_CASE("gradient flow: step underflow reports non-convergence") {
  FlowProblem p;
  p.weights = {1.0, 1.0};
  // Energy that rejects every step: a gradient pointing the wrong way.
  p.energy = [](std::span<const double> x) { return x[0]; };
  p.gradient = [](std::span<const double> x, std::span<double> g) {
    g[0] = -1.0 - x[0];
    g[1] = x[1];
  };
  const auto res = gradient_flow_minimize(p, {0.6, 0.8}, {.min_step = 1e-3});
  CHECK_FALSE(res.converged);
  CHECK(res.energy_history.size() >= 1);
}
