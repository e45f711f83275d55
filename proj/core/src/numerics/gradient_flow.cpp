#include "q2d/numerics/gradient_flow.hpp"

#include "q2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace q2d::numerics {

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += w[i] * a[i] * b[i];
  return s;
}

namespace {

void normalize(std::span<const double> w, std::vector<double> &v) {
  const double n2 = weighted_dot(w, v, v);
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw InvalidInput("gradient flow: state has zero or non-finite norm");
  const double f = 1.0 / std::sqrt(n2);
  for (auto &x : v)
    x *= f;
}

} // namespace

FlowResult gradient_flow_minimize(const FlowProblem &problem, std::vector<double> initial,
                                  const FlowOptions &options) {
  const auto &w = problem.weights;
  const std::size_t n = w.size();
  if (initial.size() != n)
    throw InvalidInput("gradient flow: state and weights differ in length");
  constexpr double armijo = 1e-4;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  FlowResult res;
  res.state = std::move(initial);
  normalize(w, res.state);
  res.energy = problem.energy(res.state);
  res.energy_history.push_back(res.energy);

  std::vector<double> g(n), r(n), d(n), trial(n), trial2(n);
  double tau = options.initial_step;
  bool fresh = true; // gradient at the current state is stale otherwise

  while (res.iterations < options.max_iter) {
    if (fresh) {
      problem.gradient(res.state, g);
      const double lambda = weighted_dot(w, res.state, g);
      for (std::size_t i = 0; i < n; ++i)
        r[i] = g[i] - lambda * res.state[i];
      if (problem.precondition)
        problem.precondition(r, d);
      else
        d = r;
      const double c = weighted_dot(w, res.state, d);
      for (std::size_t i = 0; i < n; ++i)
        d[i] -= c * res.state[i];
      fresh = false;
    }
    const double slope = weighted_dot(w, r, d);
    const double scale = std::max(std::abs(res.energy), 1e-300);
    if (!(slope > 0.0) || slope <= 4.0 * eps * eps * scale) {
      res.converged = true; // stationary to working precision
      break;
    }

    ++res.iterations;
    const auto evaluate = [&](double step, std::vector<double> &out) {
      for (std::size_t i = 0; i < n; ++i)
        out[i] = res.state[i] - step * d[i];
      normalize(w, out);
      return problem.energy(out);
    };
    double e_new = evaluate(tau, trial);
    double step = tau;

    // Quadratic model E(t) ~ E - slope t + c t^2 along the direction; a second
    // evaluation at its minimizer keeps the step near optimal instead of
    // oscillating around twice the optimum.
    const double c = (e_new - res.energy + slope * tau) / (tau * tau);
    double next_tau = 2.0 * tau;
    if (std::isfinite(e_new) && c > 0.0) {
      const double t_q = std::clamp(slope / (2.0 * c), 0.1 * tau, 10.0 * tau);
      next_tau = t_q;
      if (t_q < 0.7 * tau || t_q > 1.5 * tau) {
        const double e_q = evaluate(t_q, trial2);
        if (std::isfinite(e_q) && (!(e_new <= e_q) || !std::isfinite(e_new))) {
          e_new = e_q;
          step = t_q;
          trial.swap(trial2);
        }
      }
    }

    if (std::isfinite(e_new) && e_new <= res.energy - armijo * step * slope) {
      const double change = res.energy - e_new;
      res.state.swap(trial);
      res.energy = e_new;
      res.energy_history.push_back(e_new);
      fresh = true;
      tau = std::clamp(next_tau, options.min_step, options.max_step);
      if (change <= options.tol * scale) {
        res.converged = true;
        break;
      }
      continue;
    }

    // Rejected. If even the predicted decrease is below the tolerance the
    // remaining gain is lost in rounding.
    if (tau * slope <= 1e-2 * options.tol * scale) {
      res.converged = true;
      break;
    }
    tau = std::min(0.5 * tau, next_tau);
    if (tau < options.min_step)
      break;
  }
  return res;
}

} // namespace q2d::numerics
