#pragma once

#include "q2d/potential.hpp"
#include "q2d/regimes.hpp"
#include "q2d/table.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace q2d::experiments {

/// Parameter ladders and fixed values shared by the sweeps. Each sweep reads
/// only the fields it needs.
struct SweepSpec {
  std::vector<double> h;        ///< crossover: descending
  std::vector<double> lambda;   ///< scattering convergence: descending, >= 0
  std::vector<double> R;        ///< scattering convergence: outer radii
  std::vector<double> Ng;       ///< TF limit: ascending, >= 0
  std::vector<double> h_over_a; ///< phase diagram columns
  std::vector<double> rho_h2;   ///< phase diagram rows

  double g = 0.5; ///< crossover: fixed 2D coupling, Na = g h / s4
  Potential trap = Potential::harmonic();
  Potential transverse = Potential::harmonic();
  std::string shape = "disc"; ///< soft 2D profile for the scattering sweep
  RegimeBands bands;

  // Grid and tolerance overrides; 0 keeps the solver default.
  double dr = 0.0;
  double dz_over_h = 0.0;
  std::size_t modes = 0;
  double tol = 0.0;

  std::size_t threads = 0; ///< 0: hardware concurrency
};

struct SweepResult {
  std::vector<std::string> columns;
  std::vector<Row> rows; ///< in ladder order
  bool all_converged = true;
  bool assertions_passed = true;
  std::vector<std::string> notes; ///< trend statistics and failed assertions

  Table table() const { return make_table(columns, rows); }
};

/// first, first*r, ..., last (count >= 2 points, geometric).
std::vector<double> geometric_ladder(double first, double last, std::size_t count);

/// (E_3D - zeta_0) / E_2D(1, 1, g) along the h ladder at fixed g.
/// Asserts the product upper bound on every row and a strictly decreasing
/// |ratio - 1|.
SweepResult run_crossover(const SweepSpec &spec);

/// eta(lambda) = lambda ln(R / a_scatt) - 4 pi for the rescaled soft family at
/// every (lambda, R). Asserts strictly decreasing |eta| along the ladder for
/// each R and R-independence to 1e-6.
SweepResult run_scattering_convergence(const SweepSpec &spec);

/// E_GP / E_TF along the Ng ladder. Asserts ratio >= 1 and strictly
/// decreasing.
SweepResult run_tf_limit(const SweepSpec &spec);

/// Region label and g over the (h/a, rho_bar h^2) grid at h = 1. Asserts the
/// 1% limits in deep cells (q > 100, q < 0.01) and that crossover cells are
/// contiguous in every grid row.
SweepResult run_phase_diagram(const SweepSpec &spec);

} // namespace q2d::experiments
