#pragma once

#include "q2d/gp.hpp"
#include "q2d/potential.hpp"

#include <cstddef>
#include <vector>

namespace q2d {

struct GP3DOptions {
  double dr = 0.0;    ///< 0: 1/1000
  double r_max = 0.0; ///< 0: from the 2D truncation rule
  double dz = 0.0;    ///< 0: h/400
  std::size_t modes = 16;
  double tol = 1e-12;
  int max_iter = 100000;
  double truncation_factor = 50.0;
  bool keep_state = true; ///< store phi(r, z); large for fine grids
};

struct GP3DResult {
  GPState state;       ///< cylindrical (or empty phi when !keep_state)
  double zeta0 = 0.0;  ///< discrete ground energy of -d_z^2 + V_perp_h (the e_perp / h^2 term)
  double zeta1 = 0.0;
  double s4_h = 0.0;   ///< discrete int s_h^4 on the z grid
  double g = 0.0;      ///< Na * s4_h, the 2D coupling of the product ansatz
  GPState ansatz_2d;   ///< 2D minimizer at drive g on the same radial grid
  double upper_bound = 0.0; ///< zeta0 + E_2D(g): energy of the product start
  double r_max = 0.0;
  double z_half_width = 0.0;
};

/// Minimizes int |grad phi|^2 + (V_L(r) + V_perp_h(z)) |phi|^2 + 4 pi Na |phi|^4
/// over normalized phi(r, z), with V_L the unit-length trap and
/// V_perp_h(z) = h^{-2} V_perp(z / h).
///
/// phi is expanded in the lowest `modes` eigenvectors of the discrete z
/// operator; the radial part uses the 2D cell-centred grid. The flow starts
/// from the product of the 2D minimizer and the transverse ground state, so
/// the result never exceeds `upper_bound`.
///
/// Throws InvalidInput before solving when dz > h/40 or dr > 1/200.
GP3DResult minimize_gp3d(const Potential &trap, const Potential &v_perp, double h, double Na,
                         const GP3DOptions &options = {});

} // namespace q2d
