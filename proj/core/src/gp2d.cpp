#include "q2d/gp.hpp"

#include "detail/radial_operator.hpp"
#include "q2d/error.hpp"
#include "q2d/numerics/gradient_flow.hpp"
#include "q2d/numerics/tridiagonal.hpp"
#include "q2d/thomas_fermi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace q2d {

namespace {

constexpr double pi = std::numbers::pi;

struct Radial2D {
  detail::RadialOperator op;
  std::vector<double> v;
  double Ng;

  Radial2D(const Potential &trap, double Ng_, double dr, std::size_t n) : op(dr, n), v(n), Ng(Ng_) {
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = trap(op.r[i]);
      if (!std::isfinite(v[i]))
        throw InvalidInput("gp2d: trap is not finite at r = " + std::to_string(op.r[i]));
    }
  }

  double quartic(std::span<const double> phi) const {
    double s = 0.0;
    for (std::size_t i = 0; i < op.n; ++i)
      s += op.w[i] * phi[i] * phi[i] * phi[i] * phi[i];
    return s;
  }

  double energy(std::span<const double> phi) const {
    double pot = 0.0, q = 0.0;
    for (std::size_t i = 0; i < op.n; ++i) {
      const double p2 = phi[i] * phi[i];
      pot += op.w[i] * v[i] * p2;
      q += op.w[i] * p2 * p2;
    }
    return op.kinetic(phi) + pot + 4.0 * pi * Ng * q;
  }

  void gradient(std::span<const double> phi, std::span<double> g) const {
    op.apply(phi, g);
    for (std::size_t i = 0; i < op.n; ++i)
      g[i] = 2.0 * (g[i] / op.w[i] + v[i] * phi[i]) + 16.0 * pi * Ng * phi[i] * phi[i] * phi[i];
  }

  // d = (K + W (V + 8 pi Ng phi^2 + shift))^{-1} W r
  void precondition(std::span<const double> phi, std::span<const double> r, std::span<double> d,
                    double shift) const {
    std::vector<double> diag(op.n), rhs(op.n);
    for (std::size_t i = 0; i < op.n; ++i) {
      diag[i] = op.k_diag[i] + op.w[i] * (v[i] + 8.0 * pi * Ng * phi[i] * phi[i] + shift);
      rhs[i] = op.w[i] * r[i];
    }
    const auto x = numerics::solve_tridiagonal(op.k_off, diag, op.k_off, rhs);
    std::copy(x.begin(), x.end(), d.begin());
  }
};

// Trial shapes: unit Gaussian, Thomas-Fermi profile plus a Gaussian tail,
// and a Gaussian as wide as the Thomas-Fermi cloud.
constexpr int trial_count = 3;

std::vector<double> initial_guess(const Potential &trap, double Ng, std::span<const double> r, int kind) {
  std::vector<double> phi(r.size());
  double mu = 0.0, radius = 1.0;
  if (Ng > 0.0 && kind > 0) {
    try {
      const TFResult tf = tf_solve(trap, 1.0, Ng, {.allow_nonhomogeneous = true});
      mu = tf.mu_tf;
      radius = std::max(1.0, tf.radius / 2.0);
    } catch (const Error &) {
      mu = 0.0;
    }
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    double x = std::exp(-0.5 * r[i] * r[i] / (kind == 2 ? radius * radius : 1.0));
    if (kind == 1 && mu > 0.0)
      x += std::sqrt(std::max(mu - trap(r[i]), 0.0) / (8.0 * pi * Ng));
    phi[i] = x;
  }
  return phi;
}

void normalize(const detail::RadialOperator &op, std::vector<double> &phi) {
  double n2 = 0.0;
  for (std::size_t i = 0; i < op.n; ++i)
    n2 += op.w[i] * phi[i] * phi[i];
  const double f = 1.0 / std::sqrt(n2);
  for (auto &x : phi)
    x *= f;
}

GPState box_state(const Potential &trap, double Ng) {
  const double side = trap.box_side();
  GPState s;
  s.geometry = GPGeometry::periodic_box;
  s.box_side = side;
  s.phi = {1.0 / side};
  s.coupling = Ng;
  s.quartic = 1.0 / (side * side);
  s.energy = 4.0 * pi * Ng * s.quartic;
  s.mu = s.energy + 4.0 * pi * Ng * s.quartic;
  s.converged = true;
  s.energy_history = {s.energy};
  return s;
}

} // namespace

double gp2d_energy(const GPState &state, const Potential &trap, double Ng) {
  switch (state.geometry) {
  case GPGeometry::periodic_box: {
    const double side = state.box_side;
    const double p = state.phi.at(0);
    return 4.0 * pi * Ng * p * p * p * p * side * side;
  }
  case GPGeometry::radial: {
    const Radial2D prob(trap, Ng, state.dr, state.r.size());
    return prob.energy(state.phi);
  }
  case GPGeometry::cylindrical:
    break;
  }
  throw InvalidInput("gp2d_energy: state is not two-dimensional");
}

GPState minimize_gp2d(const Potential &trap, double Ng, const GP2DOptions &opt) {
  if (!(Ng >= 0.0) || !std::isfinite(Ng))
    throw InvalidInput("gp2d: Ng must be finite and >= 0");
  if (trap.is_box())
    return box_state(trap, Ng);
  // Lowest energy among the trial shapes on a probe grid. It sets the radial
  // extent (V(r_max) >= factor * E) and the default spacing, which coarsens
  // as the cloud spreads: dr = 10^-3 sqrt(max(1, E / 2)).
  constexpr double probe_dr = 1.0 / 200.0;
  double r_max = opt.r_max > 0.0 ? opt.r_max : 4.0;
  double e_guess = 0.0;
  int best = 0;
  for (int it = 0;; ++it) {
    const auto n = static_cast<std::size_t>(std::ceil(r_max / probe_dr));
    const Radial2D probe(trap, Ng, probe_dr, n);
    e_guess = INFINITY;
    for (int kind = 0; kind < trial_count; ++kind) {
      auto phi = initial_guess(trap, Ng, probe.op.r, kind);
      normalize(probe.op, phi);
      const double e = probe.energy(phi);
      if (e < e_guess) {
        e_guess = e;
        best = kind;
      }
    }
    if (opt.r_max > 0.0 || trap(r_max) >= opt.truncation_factor * e_guess)
      break;
    r_max *= 1.25;
    if (it > 200 || r_max > 1e7)
      throw InvalidInput("gp2d: trap '" + trap.name() + "' is not confining");
  }
  const double dr = opt.dr > 0.0 ? opt.dr : 1e-3 * std::sqrt(std::max(1.0, 0.5 * e_guess));
  const auto n = static_cast<std::size_t>(std::ceil(r_max / dr));
  if (n < 8)
    throw InvalidInput("gp2d: radial grid too coarse");
  const Radial2D prob(trap, Ng, dr, n);

  std::vector<double> phi =
      opt.initial.size() == n ? opt.initial : initial_guess(trap, Ng, prob.op.r, best);

  numerics::FlowProblem fp;
  fp.weights = prob.op.w;
  fp.energy = [&prob](std::span<const double> p) { return prob.energy(p); };
  std::vector<double> current;
  fp.gradient = [&prob, &current](std::span<const double> p, std::span<double> g) {
    current.assign(p.begin(), p.end());
    prob.gradient(p, g);
  };
  fp.precondition = [&prob, &current](std::span<const double> r, std::span<double> d) {
    prob.precondition(current, r, d, 1.0);
  };
  numerics::FlowOptions fo;
  fo.tol = opt.tol;
  fo.max_iter = opt.max_iter;
  fo.initial_step = 1.0;
  const auto res = numerics::gradient_flow_minimize(fp, std::move(phi), fo);

  GPState s;
  s.geometry = GPGeometry::radial;
  s.dr = dr;
  s.r = prob.op.r;
  s.phi = res.state;
  // The ground state is positive; fix a global sign flip.
  if (std::accumulate(s.phi.begin(), s.phi.end(), 0.0) < 0.0)
    for (auto &x : s.phi)
      x = -x;
  s.coupling = Ng;
  s.energy = res.energy;
  s.quartic = prob.quartic(s.phi);
  s.mu = s.energy + 4.0 * pi * Ng * s.quartic;
  s.converged = res.converged;
  s.iterations = res.iterations;
  s.energy_history = res.energy_history;
  return s;
}

ScaledEnergy gp2d_scaled(double N, double L, double g, const Potential &unit_trap,
                         const GP2DOptions &options) {
  if (!(L > 0.0))
    throw InvalidInput("gp2d: L must be positive");
  if (!(N > 0.0))
    throw InvalidInput("gp2d: N must be positive");
  ScaledEnergy out;
  out.unit_state = minimize_gp2d(unit_trap, N * g, options);
  out.per_particle = out.unit_state.energy / (L * L);
  out.total = N * out.per_particle;
  return out;
}

double mean_density_gp(const GPState &state, double N) { return N * state.quartic; }

} // namespace q2d
