#include "q2d/error.hpp"
#include "q2d/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace q2d;
using namespace q2d::experiments;

namespace {
bool same(const Table &a, const Table &b) {
  if (a.header != b.header || a.rows.size() != b.rows.size())
    return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    for (std::size_t j = 0; j < a.header.size(); ++j) {
      const Cell &x = a.rows[i][j], &y = b.rows[i][j];
      if (x.index() != y.index())
        return false;
      if (const auto *d = std::get_if<double>(&x)) {
        if (std::memcmp(d, std::get_if<double>(&y), sizeof(double)) != 0)
          return false;
      } else if (x != y) {
        return false;
      }
    }
  return true;
}
} // namespace

TEST_CASE("geometric ladder") {
  const auto v = geometric_ladder(0.2, 0.05, 3);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == 0.2);
  CHECK(v[1] == doctest::Approx(0.1));
  CHECK(v[2] == 0.05);
  CHECK_THROWS_AS(geometric_ladder(0.0, 1.0, 3), InvalidInput);
  CHECK_THROWS_AS(geometric_ladder(1.0, 2.0, 1), InvalidInput);
}

TEST_CASE("crossover sweep: non-interacting ladder") {
  SweepSpec s;
  s.h = {0.5, 0.25};
  s.g = 0.0;
  s.dr = 1.0 / 200;
  s.dz_over_h = 1.0 / 100;
  s.modes = 4;
  const auto r = run_crossover(s);
  CHECK(r.all_converged);
  CHECK(r.assertions_passed);
  for (const auto &row : r.rows)
    CHECK(std::abs(*row.number("ratio") - 1.0) < 1e-9);
}

TEST_CASE("crossover sweep: fixed g") {
  SweepSpec s;
  s.h = {0.2, 0.1};
  s.dr = 1.0 / 200;
  s.dz_over_h = 1.0 / 100;
  s.modes = 8;
  s.tol = 1e-12;
  const auto r = run_crossover(s);
  CHECK(r.all_converged);
  CHECK(r.assertions_passed);
  for (const auto &row : r.rows) {
    CHECK(std::get<bool>(*row.find("bound_holds")));
    CHECK(std::abs(*row.number("ratio") - 1.0) < 0.15);
    CHECK(*row.number("g") == doctest::Approx(0.5).epsilon(1e-5));
  }
  CHECK_NOTHROW(r.table());
}

TEST_CASE("scattering convergence sweep") {
  SweepSpec s;
  s.lambda = {0.5, 0.2, 0.1, 0.05};
  s.R = {1.0, 10.0};
  const auto r = run_scattering_convergence(s);
  CHECK(r.all_converged);
  CHECK(r.assertions_passed);
  REQUIRE(r.rows.size() == 8);
  CHECK(*r.rows[2].number("lambda") == 0.2);
  CHECK(*r.rows[3].number("R") == 10.0);

  s.lambda = {0.1, 0.0};
  s.R = {1.0};
  const auto z = run_scattering_convergence(s);
  CHECK(!z.all_converged);
  CHECK(std::get<bool>(*z.rows[1].find("converged")) == false);
  CHECK(!std::get<std::string>(*z.rows[1].find("error")).empty());
  CHECK(std::holds_alternative<std::monostate>(*z.rows[1].find("eta")));
  CHECK_NOTHROW(z.table());
}

TEST_CASE("TF limit sweep") {
  SweepSpec s;
  s.Ng = {0.0, 10.0, 100.0, 1000.0};
  const auto r = run_tf_limit(s);
  CHECK(r.all_converged);
  CHECK(r.assertions_passed);
  CHECK(std::holds_alternative<std::monostate>(*r.rows[0].find("ratio")));
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    CHECK(*r.rows[i].number("e_gp") >= *r.rows[i].number("e_tf"));
}

TEST_CASE("phase diagram") {
  const double s4 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  SweepSpec s;
  s.h_over_a = geometric_ladder(1e-4, 1e6, 21);
  s.rho_h2 = geometric_ladder(1e-12, 1e-1, 12);
  const auto r = run_phase_diagram(s);
  CHECK(r.all_converged);
  REQUIRE(r.rows.size() == 21 * 12);
  int deep = 0, cross = 0;
  double worst_ii = 0.0;
  for (const auto &row : r.rows) {
    const double q = *row.number("q");
    if (const auto d = row.number("limit_deviation")) {
      ++deep;
      if (q > 100.0) {
        CHECK(*d <= 0.01);
        CHECK(*d == doctest::Approx(1.0 - 1.0 / (1.0 + s4 / q)).epsilon(1e-4));
      } else {
        // Region II limit: the deviation is (q/s4)/(1 + q/s4), up to 2.4% at q = 0.01.
        CHECK(*d == doctest::Approx((q / s4) / (1.0 + q / s4)).epsilon(1e-4));
        worst_ii = std::max(worst_ii, *d);
      }
    }
    if (std::get<std::string>(*row.find("region")) == "CROSSOVER")
      ++cross;
  }
  CHECK(deep > 0);
  CHECK(cross > 0);
  CHECK(r.assertions_passed == (worst_ii <= 0.01));

  // Deep Region II cells only (q <= 0.004) meet 1%.
  s.h_over_a = geometric_ladder(1e-4, 1e-2, 5);
  s.rho_h2 = geometric_ladder(1e-12, 1e-6, 3);
  const auto d = run_phase_diagram(s);
  CHECK(d.assertions_passed);
}

TEST_CASE("sweeps are deterministic across thread counts") {
  SweepSpec s;
  s.lambda = {0.5, 0.2, 0.1};
  s.R = {1.0, 3.0};
  s.threads = 1;
  const auto a = run_scattering_convergence(s).table();
  s.threads = 3;
  const auto b = run_scattering_convergence(s).table();
  const auto c = run_scattering_convergence(s).table();
  CHECK(same(a, b));
  CHECK(same(b, c));

  SweepSpec t;
  t.Ng = {1.0, 5.0, 25.0};
  t.threads = 1;
  const auto x = run_tf_limit(t).table();
  t.threads = 4;
  CHECK(same(x, run_tf_limit(t).table()));
}

TEST_CASE("ladder validation") {
  SweepSpec s;
  CHECK_THROWS_AS(run_crossover(s), InvalidInput);
  s.h = {0.1, 0.2};
  CHECK_THROWS_AS(run_crossover(s), InvalidInput);
  s.Ng = {10.0, 1.0};
  CHECK_THROWS_AS(run_tf_limit(s), InvalidInput);
  s.h_over_a = {1.0, -1.0};
  s.rho_h2 = {0.1};
  CHECK_THROWS_AS(run_phase_diagram(s), InvalidInput);
  s.lambda = {0.1};
  s.R = {1.0};
  s.shape = "triangle";
  CHECK_THROWS_AS(run_scattering_convergence(s), InvalidInput);
}
