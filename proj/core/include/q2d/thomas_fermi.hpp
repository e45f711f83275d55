#pragma once

#include "q2d/potential.hpp"

#include <vector>

namespace q2d {

/// rho(r) = (mu - V(r))_+ / (8 pi c) with int rho = N, for a radial 2D trap.
struct TFResult {
  double N = 0.0;
  double coupling = 0.0;
  double mu_tf = 0.0;
  double rho_bar = 0.0; ///< N^{-1} int rho^2
  double E_tf = 0.0;    ///< per particle: N^{-1} int (V rho + 4 pi c rho^2)
  double radius = 0.0;  ///< edge of the support (box: side)
  bool box = false;
  double box_side = 0.0;
  std::vector<double> r;      ///< samples of the profile
  std::vector<double> rho_tf;

  double rho(double r) const;
  double mu_identity_residual() const; ///< mu - (E + 4 pi c rho_bar)

  Potential::Profile trap;
};

struct TFOptions {
  bool allow_nonhomogeneous = false;
  std::size_t samples = 1001;
};

/// Throws InvalidInput for a trap without homogeneity degree unless
/// `allow_nonhomogeneous`, and for coupling <= 0 or N <= 0.
TFResult tf_solve(const Potential &trap, double N, double coupling, const TFOptions &options = {});

} // namespace q2d
