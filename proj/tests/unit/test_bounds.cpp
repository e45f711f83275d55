#include "q2d/bounds.hpp"
#include "q2d/error.hpp"
#include "q2d/numerics/grid.hpp"
#include "q2d/numerics/tridiagonal.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace q2d;
using namespace q2d::numerics;
using std::numbers::pi;

namespace {
// Interior values of f on the grid.
std::vector<double> sample(const Grid1D &g, auto f) {
  std::vector<double> v(g.size() - 2);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = f(g[i + 1]);
  return v;
}
} // namespace

TEST_CASE("Temple: zero variance") {
  const auto b = temple_bound({.expectation = 1.5, .second_moment = 2.25, .gap_floor = 3.0});
  CHECK(b.bound == doctest::Approx(1.5));
  CHECK(b.multiplicative == doctest::Approx(1.5));
  CHECK(b.variance == doctest::Approx(0.0));
  CHECK_THROWS_AS(temple_bound({.expectation = 3.0, .second_moment = 9.5, .gap_floor = 3.0}), InvalidInput);
  CHECK_THROWS_AS(temple_bound({.expectation = 1.0, .second_moment = 0.5, .gap_floor = 3.0}), InvalidInput);
}

TEST_CASE("Temple sandwich for 1D Hamiltonians") {
  const auto grid = Grid1D::uniform(-10.0, 10.0, 4001);
  const std::vector<std::function<double(double)>> potentials{
      [](double z) { return z * z; }, [](double z) { return z * z * z * z; },
      [](double z) { return z * z + 3.0 * std::exp(-z * z / 0.5); }};
  for (const auto &v : potentials) {
    const auto H = sturm_liouville_matrix(v, grid);
    const auto ev = lowest_eigenpairs(H, 2);
    const double E0 = ev.values[0], E1 = ev.values[1];
    for (double width : {1.6, 1.3, 1.1, 1.02}) {
      const auto psi = sample(grid, [width](double z) { return std::exp(-z * z / (2.0 * width * width)); });
      const auto st = operator_statistics(H, psi, E1);
      if (st.expectation >= E1)
        continue;
      const auto b = temple_bound(st);
      CHECK(b.bound <= E0 + 1e-10);
      CHECK(E0 <= st.expectation + 1e-12);
      CHECK(b.multiplicative == doctest::Approx(b.bound).epsilon(1e-12));
    }
    // Approach along psi_0 + t w with w not an eigenvector: the bound converges
    // to E0. (For a mixture of psi_0 and psi_1 the bound would be exact.)
    const auto w = sample(grid, [](double z) { return z * std::exp(-z * z / 8.0) + std::exp(-(z - 1.0) * (z - 1.0)); });
    double prev = INFINITY;
    for (double t : {3e-2, 3e-3, 3e-4}) {
      std::vector<double> psi(ev.vectors[0]);
      for (std::size_t i = 0; i < psi.size(); ++i)
        psi[i] += t * w[i] * std::sqrt(grid.spacing());
      const auto b = temple_bound(operator_statistics(H, psi, E1));
      CHECK(E0 - b.bound < prev);
      CHECK(b.bound <= E0 + 1e-10);
      prev = E0 - b.bound;
    }
    const auto exact = temple_bound(operator_statistics(H, ev.vectors[0], E1));
    CHECK(std::abs(exact.bound - E0) < 1e-8);
  }
}

TEST_CASE("Temple: Gaussian trial for the oscillator") {
  const auto grid = Grid1D::uniform(-12.0, 12.0, 6001);
  const auto H = sturm_liouville_matrix([](double z) { return z * z; }, grid);
  const auto psi = sample(grid, [](double z) { return std::exp(-z * z / (2.0 * 1.21)); });
  const auto st = operator_statistics(H, psi, 3.0 - 1e-4);
  // <H> = 1/(2 s^2) + s^2/2 for width s = 1.1.
  CHECK(st.expectation == doctest::Approx(0.5 / 1.21 + 0.605).epsilon(1e-5));
  const auto b = temple_bound(st);
  CHECK(b.bound <= 1.0);
  CHECK(1.0 <= st.expectation);
}

TEST_CASE("3D Dyson potential") {
  CHECK(dyson_u3d(2.0)(1.5) == doctest::Approx(3.0 / 7.0));
  CHECK(dyson_u3d(2.0)(1.0 - 1e-9) == 0.0);
  CHECK(dyson_u3d(2.0)(2.0 + 1e-9) == 0.0);
  for (double R : {0.1, 1.0, 7.0}) {
    const double c = 24.0 / (7.0 * R * R * R);
    const double closed = 4.0 * pi / 3.0 * c * (R * R * R - R * R * R / 8.0);
    CHECK(std::abs(closed - 4.0 * pi) < 1e-12);
    CHECK(std::abs(dyson_u3d_integral(R) - 4.0 * pi) < 1e-6);
  }
  CHECK_THROWS_AS(dyson_u3d(0.0), InvalidInput);
}

TEST_CASE("E_{R,eps}: closed forms") {
  for (double eps : {0.3, 1.0}) {
    CHECK(e_r_epsilon(Potential::hard_core(1.0), 5.0, eps) == doctest::Approx(2.0 * pi / std::log(5.0)));
    CHECK(e_r_epsilon_direct(Potential::hard_core(1.0), 5.0, eps) ==
          doctest::Approx(2.0 * pi / std::log(5.0)).epsilon(1e-6));
    CHECK(e_r_epsilon(Potential::zero(), 2.0, eps) == 0.0);
  }
}

TEST_CASE("E_{R,eps}: two independent minimizations agree") {
  for (double lambda : {0.1, 2.0}) {
    for (double eps : {0.5, 1.0}) {
      const auto w = Potential::soft_2d("disc", lambda, 1.0);
      const double ode = e_r_epsilon(w, 1.0, eps);
      const double fe = e_r_epsilon_direct(w, 1.0, eps);
      CHECK(std::abs(fe / ode - 1.0) < 1e-4);
    }
  }
}

TEST_CASE("E_{R,eps}: monotone in epsilon and in W") {
  const auto w = Potential::soft_2d("cone", 3.0, 1.0);
  double prev = 0.0;
  for (double eps : {0.1, 0.3, 0.6, 1.0}) {
    const double e = e_r_epsilon(w, 2.0, eps);
    CHECK(e >= prev);
    prev = e;
  }
  prev = 0.0;
  for (double lambda : {0.5, 1.0, 5.0, 50.0}) {
    const double e = e_r_epsilon(Potential::soft_2d("parabolic", lambda, 1.0), 2.0, 0.7);
    CHECK(e >= prev);
    prev = e;
  }
}

TEST_CASE("Dyson recursion") {
  const double E = 2.0 * pi / std::log(3.0);
  CHECK(dyson_recursion(E, 3.0, 3.0) == doctest::Approx(E));
  CHECK(dyson_recursion(E, 3.0, 30.0) == doctest::Approx(2.0 * pi / std::log(30.0)));
  CHECK(dyson_recursion(0.0, 1.0, 2.0) == 0.0);
  CHECK_THROWS_AS(dyson_recursion(E, 2.0, 1.0), InvalidInput);

  for (const char *shape : {"disc", "shell"}) {
    for (double eps : {0.3, 1.0}) {
      const auto w = Potential::soft_2d(shape, 0.2, 1.0);
      const double E1 = e_r_epsilon(w, 1.0, eps);
      for (double Rp : {2.0, 10.0}) {
        const double rec = dyson_recursion(E1, 1.0, Rp);
        CHECK(std::abs(rec / e_r_epsilon(w, Rp, eps) - 1.0) < 1e-4);
        CHECK(std::abs(rec / e_r_epsilon_direct(w, Rp, eps) - 1.0) < 1e-4);
      }
    }
  }
}

TEST_CASE("2D Dyson potential for a hard disc") {
  const double a0 = 1.0, R = 2.0;
  const auto E = [a0](double r) { return 2.0 * pi / std::log(r / a0); };
  // nu = int_R^{R~} r ln(r/a0) dr.
  const auto nu_exact = [R](double Rt) {
    const auto F = [](double r) { return 0.5 * r * r * std::log(r) - 0.25 * r * r; };
    return F(Rt) - F(R);
  };
  double prev_nu = 0.0, prev_dev = INFINITY;
  for (double Rt : {1e2, 1e3, 1e4, 1e6}) {
    const auto u = dyson_u2d(R, Rt, 1.0, E, std::log(a0));
    CHECK(u.nu == doctest::Approx(nu_exact(Rt)).epsilon(1e-6));
    CHECK(std::abs(u.admissibility - 1.0) < 1e-8);
    CHECK(u.height == doctest::Approx(1.0 / u.nu));
    CHECK(u(0.5 * R) == 0.0);
    CHECK(u(2.0 * Rt) == 0.0);
    CHECK(u(R) == u.height);
    CHECK(u.asymptote == doctest::Approx(0.25 * Rt * Rt * std::log(Rt * Rt)));
    CHECK(u.deviation == doctest::Approx(std::abs(nu_exact(Rt) / u.asymptote - 1.0)).epsilon(1e-6));
    CHECK(u.nu > prev_nu);
    CHECK(u.deviation < prev_dev);
    prev_nu = u.nu;
    prev_dev = u.deviation;
  }
  CHECK(dyson_u2d(R, 1e3, 1.0, E, 0.0).deviation <= 0.10);
  CHECK_THROWS_AS(dyson_u2d(R, R, 1.0, E, 0.0), InvalidInput);
}
