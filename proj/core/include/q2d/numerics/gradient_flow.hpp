#pragma once

#include <functional>
#include <span>
#include <vector>

namespace q2d::numerics {

using VectorMap = std::function<void(std::span<const double>, std::span<double>)>;

/// Energy functional on a weighted real vector space, <u, v> = sum_i w_i u_i v_i.
struct FlowProblem {
  std::function<double(std::span<const double>)> energy;
  /// Writes the L2 gradient g with dE = <g, dphi>.
  VectorMap gradient;
  std::vector<double> weights;
  /// Optional symmetric positive operator applied to the projected residual.
  VectorMap precondition;
};

struct FlowOptions {
  double tol = 1e-10;       ///< relative energy change per accepted step
  int max_iter = 20000;
  double initial_step = 0.5;
  double min_step = 1e-14;
  double max_step = 1e6;
};

struct FlowResult {
  std::vector<double> state;
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> energy_history; ///< energies of accepted iterates, nonincreasing
};

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);

/// Minimizes `problem.energy` on the unit sphere <phi, phi> = 1 by projected,
/// preconditioned gradient steps with Armijo backtracking. On step-size
/// underflow or iteration exhaustion the best state is returned with
/// `converged == false`.
FlowResult gradient_flow_minimize(const FlowProblem &problem, std::vector<double> initial,
                                  const FlowOptions &options = {});

} // namespace q2d::numerics
