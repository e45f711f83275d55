#pragma once

#include "q2d/potential.hpp"
#include "q2d/transverse.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace q2d {

/// Zero-energy solution of u'' = (1/2) v_a(r) u, u(0) = 0 (or u = 0 at the
/// core radius), normalized so that u = r - a beyond the range.
struct ScatteringSolution3D {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> du;
  std::vector<double> f0;  ///< u / r
  std::vector<double> df0; ///< d f0 / dr
  double a = 0.0;
  double range = 0.0;        ///< support radius of v_a
  double fit_residual = 0.0; ///< rms misfit of the outer linear fit, relative to max |u|
};

struct Scattering3DOptions {
  std::size_t points_per_range = 4000;
  double fit_residual_limit = 1e-8;
};

/// Throws InvalidInput when the fit residual exceeds the limit (profile not
/// zero beyond its declared range).
ScatteringSolution3D solve_scattering_3d(const Potential &v, double a_scale = 1.0,
                                         const Scattering3DOptions &options = {});

/// f(r) = f0(r) / (1 - a/R) for r <= R and 1 beyond, with its derivative.
class HardWallProfile {
public:
  HardWallProfile(std::shared_ptr<const ScatteringSolution3D> sol, double R);

  double operator()(double r) const;
  double derivative(double r) const;
  double R() const noexcept { return R_; }
  double a() const noexcept { return sol_->a; }
  double core_radius() const noexcept { return sol_->r.front(); }

private:
  // u and u' at r by cubic Hermite interpolation (analytic beyond the grid).
  void interpolate(double r, double &u, double &du) const;

  std::shared_ptr<const ScatteringSolution3D> sol_;
  double R_;
  double norm_;
};

/// Throws InvalidInput for R <= a or R <= range.
HardWallProfile hard_wall_profile(const ScatteringSolution3D &sol, double R);

struct EffectiveW {
  Potential w;         ///< radial 2D potential, zero for |x| >= R
  double integral = 0; ///< numerical int_{R^2} W
  double closed_form = 0; ///< 8 pi a s4 / (h (1 - a/R))
};

/// W(x) = (2 s4 / h) int [f'(|(x,z)|)^2 + (1/2) v_a f^2] dz with s4 the
/// unit-scale moment of `mode`. Evaluates W by adaptive Gauss-Kronrod in z and
/// its integral by an outer adaptive rule, both split at the profile breakpoints.
EffectiveW effective_w(const HardWallProfile &f, const Potential &v_a, const TransverseMode &mode,
                       double h, double rel_tol = 1e-9);

/// Radial 2D zero-energy solution on a grid logarithmic in r.
struct ScatteringSolution2D {
  std::vector<double> r;
  std::vector<double> psi; ///< psi(R) = 1
  double ln_a_scatt = 0.0; ///< -inf when W = 0
  double E_R = 0.0;        ///< boundary-flux value of the functional
  double E_quadrature = 0.0; ///< direct quadrature of the functional
  double R = 0.0;
  double epsilon = 1.0;
  bool too_strong = false; ///< a_scatt >= R
};

struct Scattering2DOptions {
  std::size_t points_per_decade = 400;
  double inner_decades = 8.0; ///< soft potentials start at R_W * 10^{-inner_decades}
};

/// Minimizes int_{B_RW} eps |grad psi|^2 + W psi^2 / 2 + int_{B_R \ B_RW} |grad psi|^2
/// with psi(R) = 1, where R_W is the support radius of W (R >= R_W). Hard
/// discs are Dirichlet conditions at their radius.
ScatteringSolution2D solve_scattering_2d(const Potential &w, double R, double epsilon = 1.0,
                                         const Scattering2DOptions &options = {});

/// R exp(-4 pi / lambda).
double perturbative_a_scatt(double lambda, double R);

struct A2D {
  double ln_ratio = 0.0; ///< ln(a_2D / h) = -h / (2 a s4)
  double h = 0.0;
  double ln_value() const { return std::log(h) + ln_ratio; }
  /// Linear value; may underflow to 0 (use ln_value instead).
  double value() const { return h * std::exp(ln_ratio); }
};

A2D effective_a2d(double h, double a, double s4);

} // namespace q2d
