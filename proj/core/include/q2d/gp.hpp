#pragma once

#include "q2d/potential.hpp"

#include <cstddef>
#include <vector>

namespace q2d {

enum class GPGeometry { radial, periodic_box, cylindrical };

/// Normalized order parameter and its energies.
///
/// radial: phi(r_i) at cell centres r_i = (i + 1/2) dr.
/// periodic_box: a single constant value 1 / side.
/// cylindrical: phi(r_i, z_j) stored as phi[i * z.size() + j].
struct GPState {
  GPGeometry geometry = GPGeometry::radial;
  double dr = 0.0;
  std::vector<double> r;
  std::vector<double> z;
  std::vector<double> phi;
  double box_side = 0.0;

  double energy = 0.0;   ///< per particle
  double mu = 0.0;       ///< chemical potential
  double coupling = 0.0; ///< Ng (2D) or Na (3D)
  double quartic = 0.0;  ///< int |phi|^4
  bool converged = false;
  int iterations = 0;
  std::vector<double> energy_history;

  double r_max() const { return dr * static_cast<double>(r.size()); }
};

struct GP2DOptions {
  double dr = 0.0;    ///< 0: 10^-3 sqrt(max(1, E_guess / 2)), E_guess the best trial energy
  double r_max = 0.0; ///< 0: truncation rule
  double truncation_factor = 50.0;
  double tol = 1e-10;
  int max_iter = 200000;
  std::vector<double> initial; ///< optional start on the same grid
};

/// int |grad phi|^2 + V |phi|^2 + 4 pi Ng |phi|^4 by the state's quadrature.
double gp2d_energy(const GPState &state, const Potential &trap, double Ng);

/// Minimizer of the 2D functional for a rotationally symmetric trap of unit
/// length, or the constant state for a box (treated as periodic). The radial
/// domain ends where V reaches truncation_factor times the energy of the
/// initial guess. Non-convergence is reported through `converged`.
GPState minimize_gp2d(const Potential &trap, double Ng, const GP2DOptions &options = {});

struct ScaledEnergy {
  double per_particle = 0.0; ///< E(1, L, Ng) = E(1, 1, Ng) / L^2
  double total = 0.0;        ///< N * per_particle
  GPState unit_state;
};

/// E(N, L, g) via the unit problem at drive Ng.
ScaledEnergy gp2d_scaled(double N, double L, double g, const Potential &unit_trap,
                         const GP2DOptions &options = {});

/// N int |phi|^4.
double mean_density_gp(const GPState &state, double N);

} // namespace q2d
