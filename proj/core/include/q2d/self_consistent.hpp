#pragma once

#include "q2d/gp.hpp"
#include "q2d/potential.hpp"
#include "q2d/transverse.hpp"

#include <vector>

namespace q2d {

struct SelfConsistentOptions {
  double damping = 0.5;
  double tol = 1e-8; ///< relative |F(g) - g|
  int max_iter = 60;
  std::size_t scan_points = 0; ///< > 1: scan [g/10, 10 g] for further sign changes
  GP2DOptions gp{.tol = 1e-14}; ///< tight: the quartic moment converges slower than the energy
};

struct SelfConsistentResult {
  double g = 0.0;
  double rho_bar = 0.0;        ///< N int |phi_Ng|^4 / L^2 with g = |ln(rho_bar a_2D^2)|^{-1} exactly
  double g_closed_form = 0.0;  ///< coupling formula with the coupling-1 TF mean density
  double rho_bar_tf = 0.0;     ///< TF mean density at coupling g (same trap, same N)
  int iterations = 0;          ///< evaluations of the map
  bool converged = false;
  bool used_bisection = false;
  std::vector<double> history; ///< iterates g_k
  std::vector<double> roots;    ///< all fixed points bracketed by the scan
  bool multiple_roots = false;
};

/// Fixed point of g -> |ln(rho_bar_{Ng} a_2D^2)|^{-1}, where rho_bar_{Ng} is
/// the mean density of the 2D minimizer in the trap V_L(x) = L^{-2} V(x/L)
/// and a_2D = h exp(-h / (2 a s4)), s4 taken from the unit-scale `mode`.
/// Damped iteration with bisection fallback; throws ConvergenceError with
/// the iterate history when both fail.
SelfConsistentResult self_consistent_g(double N, double L, double h, double a,
                                       const Potential &unit_trap, const TransverseMode &mode,
                                       const SelfConsistentOptions &options = {});

} // namespace q2d
