#pragma once

#include "q2d/numerics/tridiagonal.hpp"
#include "q2d/potential.hpp"
#include "q2d/scattering.hpp"

#include <functional>
#include <span>
#include <vector>

namespace q2d {

struct TempleInput {
  double expectation = 0.0;   ///< <H>
  double second_moment = 0.0; ///< <H^2>
  double gap_floor = 0.0;     ///< lower bound on E_1
};

struct TempleBound {
  double bound = 0.0;          ///< <H> - Var / (E_1 - <H>)
  double multiplicative = 0.0; ///< <H> (1 - Var / (<H> (E_1 - <H>)))
  double variance = 0.0;
};

/// Throws InvalidInput when gap_floor <= <H> or <H^2> < <H>^2 beyond rounding.
TempleBound temple_bound(const TempleInput &input);

/// <H> and <H^2> = ||H psi||^2 / ||psi||^2 for a discrete symmetric operator.
TempleInput operator_statistics(const numerics::SymTridiagonal &H, std::span<const double> psi,
                                double gap_floor);

/// U_R(r) = 24 / (7 R^3) on (R/2, R), zero elsewhere; int U_R d^3x = 4 pi.
Potential dyson_u3d(double R);

/// int U_R d^3x by adaptive quadrature.
double dyson_u3d_integral(double R);

/// E_{R,eps} of W at the outer radius R (ODE path).
double e_r_epsilon(const Potential &w, double R, double epsilon);

/// Independent evaluation of E_{R',eps}: exact minimum of the functional
/// discretized by linear finite elements on a radial grid (uniform inside the
/// support of W, geometric outside), solved as a tridiagonal system.
double e_r_epsilon_direct(const Potential &w, double R_prime, double epsilon,
                          std::size_t inner_cells = 20000);

/// 2 pi / (ln(R'/R) + 2 pi / E_{R,eps}); zero when E = 0.
double dyson_recursion(double E_R_eps, double R, double R_prime);

struct DysonPotential2D {
  double R = 0.0;
  double R_tilde = 0.0;
  double epsilon = 1.0;
  double nu = 0.0;            ///< 2 pi int_R^{R~} E_{R',eps}^{-1} R' dR'
  double height = 0.0;        ///< U~ = 1/nu on [R, R~]
  double admissibility = 0.0; ///< 2 pi int U~ E^{-1} r dr
  double asymptote = 0.0;     ///< R~^2 ln(R~^2 / a^2) / 4, when ln a is supplied
  double deviation = 0.0;     ///< |nu / asymptote - 1|

  double operator()(double r) const { return r >= R && r <= R_tilde ? height : 0.0; }
};

/// Builds U~ with Simpson quadrature in ln R' (>= points_per_decade points
/// per decade). `ln_a` (ln a_scatt) only feeds the asymptote diagnostic.
DysonPotential2D dyson_u2d(double R, double R_tilde, double epsilon,
                           const std::function<double(double)> &E_of_R_prime, double ln_a,
                           std::size_t points_per_decade = 64);

} // namespace q2d
