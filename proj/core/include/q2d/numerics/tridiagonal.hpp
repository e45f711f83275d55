#pragma once

#include "q2d/numerics/grid.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace q2d::numerics {

/// Real symmetric tridiagonal matrix; `off[i]` couples rows i and i+1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
  void apply(std::span<const double> x, std::span<double> y) const;
  /// Infinity norm bound used for tolerances.
  double norm_bound() const;
};

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
std::size_t sturm_count(const SymTridiagonal &t, double x);

struct TridiagonalEigenpairs {
  std::vector<double> values;               ///< nondecreasing
  std::vector<std::vector<double>> vectors; ///< unit Euclidean norm
  int inverse_iterations = 0;               ///< total over all vectors
};

/// Lowest `k` eigenpairs by bisection and inverse iteration.
/// Throws InvalidInput if k == 0 or k > size, ConvergenceError if inverse
/// iteration cannot reach a small residual.
TridiagonalEigenpairs lowest_eigenpairs(const SymTridiagonal &t, std::size_t k,
                                        int max_inverse_iterations = 8);

/// Solve a general tridiagonal system with partial pivoting.
/// `lower` and `upper` have n-1 entries.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

struct EigenResult {
  double eigenvalue = 0.0;
  /// Values on every grid point (zero at the Dirichlet ends), with
  /// sum_i v_i^2 dx = 1.
  std::vector<double> eigenvector;
  std::size_t index = 0;
};

/// -d^2/dx^2 + V(x) with Dirichlet ends, second-order central differences.
SymTridiagonal sturm_liouville_matrix(const std::function<double(double)> &potential,
                                      const Grid1D &grid);

/// First `k` eigenpairs of the finite-difference Sturm-Liouville operator on a
/// uniform grid (ħ = 2m = 1, energies in 1/length^2).
std::vector<EigenResult> eigs_sturm_liouville(const std::function<double(double)> &potential,
                                              const Grid1D &grid, std::size_t k);

} // namespace q2d::numerics
