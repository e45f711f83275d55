#pragma once

#include "q2d/numerics/grid.hpp"
#include "q2d/potential.hpp"

#include <vector>

namespace q2d {

/// Ground state of -d^2/dz^2 + V(z) and the moments used downstream.
struct TransverseMode {
  numerics::Grid1D grid;
  std::vector<double> s; ///< zero at the Dirichlet ends, sum s^2 dz = 1
  double e_perp = 0.0;
  double e_perp_excited = 0.0; ///< index-1 eigenvalue (full spectrum)
  double s4 = 0.0;             ///< int s^4
  double s_inf_sq = 0.0;       ///< max s^2
  double ds2_inf = 0.0;        ///< max |d(s^2)/dz|
  double h = 1.0;              ///< length scale the mode was scaled by
};

struct TransverseOptions {
  std::size_t points = 8001;
  double truncation_factor = 50.0; ///< V at both ends >= factor * e_perp
};

/// Solves on an automatically chosen domain. Box potentials use their walls
/// as Dirichlet ends; other potentials are truncated where V reaches
/// truncation_factor * e_perp on both sides. Throws InvalidInput when V does
/// not grow that far.
TransverseMode solve_transverse(const Potential &v_perp, const TransverseOptions &options = {});

/// Solves on a given uniform grid; rejects it when V at either end is below
/// 50 e_perp (box potentials excepted, whose walls must enclose the grid).
TransverseMode solve_transverse(const Potential &v_perp, const numerics::Grid1D &grid);

/// s_h(z) = h^{-1/2} s(z/h) and the matching energies and moments.
TransverseMode scale_mode(const TransverseMode &mode, double h);

/// The unit-scale moment int s^4 of the harmonic ground state, (2 pi)^{-1/2}.
double harmonic_s4();

} // namespace q2d
