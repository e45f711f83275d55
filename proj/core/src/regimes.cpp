#include "q2d/regimes.hpp"

#include "q2d/error.hpp"

#include <cmath>
#include <numbers>

namespace q2d {

namespace {
constexpr double pi = std::numbers::pi;

void require_positive(double x, const char *name) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw InvalidInput(std::string(name) + " must be positive and finite");
}
} // namespace

std::string to_string(Region r) {
  switch (r) {
  case Region::region_i:
    return "REGION_I";
  case Region::region_ii:
    return "REGION_II";
  case Region::crossover:
    return "CROSSOVER";
  }
  return "?";
}

std::string to_string(NgClass c) {
  switch (c) {
  case NgClass::ideal:
    return "IDEAL";
  case NgClass::gp:
    return "GP";
  case NgClass::tf:
    return "TF";
  }
  return "?";
}

double coupling_g(double rho_bar, double h, double a, double s4) {
  require_positive(rho_bar, "rho_bar");
  require_positive(h, "h");
  require_positive(a, "a");
  require_positive(s4, "s4");
  const double ln_rh2 = std::log(rho_bar) + 2.0 * std::log(h);
  if (!(ln_rh2 < 0.0))
    throw InvalidInput("coupling_g: rho_bar h^2 = " + std::to_string(std::exp(ln_rh2)) +
                       " is not below 1");
  return 1.0 / std::abs(-ln_rh2 + h / (a * s4));
}

double coupling_g_log(double rho_bar, double ln_a2d) {
  require_positive(rho_bar, "rho_bar");
  const double x = std::log(rho_bar) + 2.0 * ln_a2d;
  if (!(x < 0.0))
    throw InvalidInput("coupling_g: rho_bar a_2D^2 is not below 1");
  return 1.0 / std::abs(x);
}

RegimeReport classify(double rho_bar, double h, double a, double s4, std::optional<double> Ng,
                      const RegimeBands &bands) {
  RegimeReport rep;
  rep.rho_bar = rho_bar;
  rep.h = h;
  rep.a = a;
  rep.g = coupling_g(rho_bar, h, a, s4);
  rep.ln_a2d = std::log(h) - h / (2.0 * a * s4);
  const double ln_rh2 = std::log(rho_bar) + 2.0 * std::log(h);
  rep.q = (h / a) / std::abs(ln_rh2);
  if (rep.q > bands.region_factor) {
    rep.region = Region::region_i;
    rep.confinement_parameter = "rho_bar*a*h";
    rep.confinement_value = rho_bar * a * h;
  } else if (rep.q < 1.0 / bands.region_factor) {
    rep.region = Region::region_ii;
    rep.confinement_parameter = "rho_bar*h^2";
    rep.confinement_value = rho_bar * h * h;
  } else {
    rep.region = Region::crossover;
    rep.confinement_parameter = "h^2*rho_bar*g";
    rep.confinement_value = h * h * rho_bar * rep.g;
  }
  rep.strongly_confined = rep.confinement_value < bands.small;
  if (Ng) {
    if (*Ng < bands.ng_low)
      rep.ng_class = NgClass::ideal;
    else if (*Ng > bands.ng_high)
      rep.ng_class = NgClass::tf;
    else
      rep.ng_class = NgClass::gp;
  }
  return rep;
}

double dilute_energy_2d(double rho, double ln_a2d) {
  require_positive(rho, "rho");
  const double x = std::log(rho) + 2.0 * ln_a2d;
  if (!(x < 0.0))
    throw InvalidInput("dilute_energy_2d: rho a_2D^2 = " + std::to_string(std::exp(x)) +
                       " is not in the dilute range");
  return 4.0 * pi * rho / std::abs(x);
}

Dilute3D dilute_energy_3d(double rho3, double a) {
  if (!(rho3 >= 0.0) || !(a >= 0.0))
    throw InvalidInput("dilute_energy_3d: rho and a must be >= 0");
  return {.energy = 4.0 * pi * rho3 * a, .dilute = rho3 * a * a * a < 0.1};
}

} // namespace q2d
