#pragma once

#include <optional>
#include <string>

namespace q2d {

enum class Region { region_i, region_ii, crossover };
enum class NgClass { ideal, gp, tf };

std::string to_string(Region r);
std::string to_string(NgClass c);

/// Threshold bands for the asymptotic conditions.
struct RegimeBands {
  double region_factor = 4.0; ///< q > factor: Region I, q < 1/factor: Region II
  double small = 0.1;         ///< strong confinement when the governing parameter is below this
  double ng_low = 0.1;        ///< Ng < ng_low: ideal gas
  double ng_high = 10.0;      ///< Ng > ng_high: Thomas-Fermi
};

struct RegimeReport {
  double rho_bar = 0.0;
  double h = 0.0;
  double a = 0.0;
  double g = 0.0;
  double ln_a2d = 0.0;
  double q = 0.0; ///< (h/a) / |ln(rho_bar h^2)|
  Region region = Region::crossover;
  std::optional<NgClass> ng_class; ///< present when Ng was supplied
  std::string confinement_parameter; ///< "rho_bar*a*h", "rho_bar*h^2" or "h^2*rho_bar*g"
  double confinement_value = 0.0;
  bool strongly_confined = false;
};

/// g = |-ln(rho_bar h^2) + h / (a s4)|^{-1}. Throws for rho_bar h^2 >= 1.
double coupling_g(double rho_bar, double h, double a, double s4);

/// g = |ln(rho_bar a_2D^2)|^{-1} from the log-domain a_2D. Throws when rho_bar a_2D^2 >= 1.
double coupling_g_log(double rho_bar, double ln_a2d);

RegimeReport classify(double rho_bar, double h, double a, double s4,
                      std::optional<double> Ng = std::nullopt, const RegimeBands &bands = {});

/// 4 pi rho / |ln(rho a_2D^2)|, with ln a_2D given. Throws when rho a_2D^2 >= 1.
double dilute_energy_2d(double rho, double ln_a2d);

struct Dilute3D {
  double energy = 0.0;
  bool dilute = true; ///< rho a^3 < 0.1
};

/// 4 pi rho_3D a.
Dilute3D dilute_energy_3d(double rho3, double a);

} // namespace q2d
