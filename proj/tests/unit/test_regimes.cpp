#include "q2d/error.hpp"
#include "q2d/regimes.hpp"
#include "q2d/scattering.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace q2d;
using std::numbers::pi;

namespace {
const double s4 = 1.0 / std::sqrt(2.0 * pi);
}

TEST_CASE("coupling constant") {
  CHECK(coupling_g(1e-4, 1.0, 0.1, s4) == doctest::Approx(1.0 / (9.2103404 + 25.0662827)).epsilon(1e-7));
  CHECK(coupling_g(1e-4, 1.0, 0.1, s4) == doctest::Approx(0.029175).epsilon(1e-4));
  CHECK_THROWS_AS(coupling_g(1.0, 1.0, 0.1, s4), InvalidInput);
  CHECK_THROWS_AS(coupling_g(2.0, 1.0, 0.1, s4), InvalidInput);
  CHECK_THROWS_AS(coupling_g(0.1, 1.0, 0.0, s4), InvalidInput);

  // Log-domain form agrees and survives Region II underflow.
  const auto a2d = effective_a2d(1.0, 1e-5, s4);
  CHECK(coupling_g_log(0.01, a2d.ln_value()) == doctest::Approx(coupling_g(0.01, 1.0, 1e-5, s4)).epsilon(1e-12));
  CHECK(std::isfinite(coupling_g_log(0.01, a2d.ln_value())));
}

TEST_CASE("coupling constant: limits") {
  const double rho = 0.01; // rho h^2 at h = 1
  // Region I: q > 100.
  for (double h_over_a : {1e4, 1e6}) {
    const double a = 1.0 / h_over_a;
    const double q = h_over_a / std::abs(std::log(rho));
    REQUIRE(q > 100.0);
    CHECK(std::abs(coupling_g(rho, 1.0, a, s4) / (s4 * a) - 1.0) < 0.01);
  }
  // Region II: q < 0.01.
  for (double h_over_a : {1e-2, 1e-4}) {
    const double a = 1.0 / h_over_a;
    REQUIRE(h_over_a / std::abs(std::log(rho)) < 0.01);
    CHECK(std::abs(coupling_g(rho, 1.0, a, s4) * std::abs(std::log(rho)) - 1.0) < 0.01);
  }
  // Monotone decreasing in h/a at fixed rho h^2.
  double prev = INFINITY;
  for (double x = 0.01; x < 1e5; x *= 1.7) {
    const double g = coupling_g(rho, 1.0, 1.0 / x, s4);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("classification") {
  const auto r1 = classify(0.01, 1.0, 0.01, s4);
  CHECK(r1.region == Region::region_i);
  CHECK(r1.confinement_parameter == "rho_bar*a*h");
  CHECK(r1.confinement_value == doctest::Approx(1e-4));
  CHECK(r1.strongly_confined);
  CHECK(to_string(r1.region) == "REGION_I");

  const auto r2 = classify(1e-10, 1.0, 0.2, s4);
  CHECK(r2.region == Region::region_ii);
  CHECK(r2.confinement_parameter == "rho_bar*h^2");
  CHECK(r2.strongly_confined);
  CHECK(to_string(r2.region) == "REGION_II");

  // q = 1 exactly.
  const double rho = std::exp(-5.0);
  const auto rc = classify(rho, 1.0, 0.2, s4);
  CHECK(rc.q == doctest::Approx(1.0));
  CHECK(rc.region == Region::crossover);
  CHECK(rc.confinement_parameter == "h^2*rho_bar*g");
  CHECK(rc.confinement_value == doctest::Approx(rho * rc.g));

  CHECK(!classify(0.9, 1.0, 5.0, s4).strongly_confined);
  CHECK(!classify(0.01, 1.0, 0.01, s4).ng_class.has_value());
  CHECK(classify(0.01, 1.0, 0.01, s4, 0.05).ng_class == NgClass::ideal);
  CHECK(classify(0.01, 1.0, 0.01, s4, 1.0).ng_class == NgClass::gp);
  CHECK(classify(0.01, 1.0, 0.01, s4, 50.0).ng_class == NgClass::tf);
  CHECK(to_string(NgClass::tf) == "TF");

  const RegimeBands wide{.region_factor = 50.0};
  CHECK(classify(0.01, 1.0, 0.01, s4, std::nullopt, wide).region == Region::crossover);
}

TEST_CASE("classification is scale invariant") {
  for (double c : {0.1, 3.0, 1e3}) {
    for (auto [rho, h, a] : {std::tuple{0.01, 1.0, 0.01}, {1e-10, 1.0, 0.2}, {std::exp(-5.0), 1.0, 0.2}}) {
      const auto x = classify(rho, h, a, s4);
      const auto y = classify(c * c * rho, h / c, a / c, s4);
      CHECK(x.region == y.region);
      CHECK(x.q == doctest::Approx(y.q).epsilon(1e-12));
      CHECK(x.g == doctest::Approx(y.g).epsilon(1e-12));
    }
  }
}

TEST_CASE("Region II spacing requirement") {
  for (double lrho = -40.0; lrho < -1.0; lrho += 3.0) {
    for (double a : {0.05, 0.2, 1.0, 5.0}) {
      const double rho = std::exp(lrho);
      const auto r = classify(rho, 1.0, a, s4);
      if (r.region == Region::region_ii)
        CHECK(-0.5 * lrho >= 1.0 / (4.0 * a));
    }
  }
}

TEST_CASE("dilute reference energies") {
  CHECK(dilute_energy_2d(1.0, -5.0) == doctest::Approx(4.0 * pi / 10.0));
  CHECK_THROWS_AS(dilute_energy_2d(1.0, 1.0), InvalidInput);
  const double ln_a = -30.0, rho = 1e-3;
  const double ratio = dilute_energy_2d(rho / std::exp(1.0), ln_a) / dilute_energy_2d(rho, ln_a);
  const double L = -std::log(rho) - 2.0 * ln_a;
  CHECK(std::abs(ratio - std::exp(-1.0) * L / (L + 1.0)) < 1e-10);

  // e_2D = 4 pi rho g at rho = rho_bar.
  const double g = coupling_g(1e-3, 1.0, 0.05, s4);
  CHECK(dilute_energy_2d(1e-3, effective_a2d(1.0, 0.05, s4).ln_value()) ==
        doctest::Approx(4.0 * pi * 1e-3 * g).epsilon(1e-12));

  CHECK(dilute_energy_3d(1.0, 0.01).energy == doctest::Approx(0.04 * pi));
  CHECK(dilute_energy_3d(1.0, 0.01).dilute);
  CHECK(!dilute_energy_3d(1.0, 1.0).dilute);
  CHECK(dilute_energy_3d(1.0, 0.0).energy == 0.0);

  // Region I matching with the 3D formula.
  for (double a : {1e-4, 1e-6}) {
    const double r = 1e-2, h = 1.0;
    const double e2 = dilute_energy_2d(r, effective_a2d(h, a, s4).ln_value());
    CHECK(std::abs(e2 / (4.0 * pi * r * s4 * a / h) - 1.0) <= 2.0 * std::abs(std::log(r * h * h)) * (a / h) * s4);
  }
}
