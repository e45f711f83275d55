#include "q2d/self_consistent.hpp"

#include "q2d/error.hpp"
#include "q2d/regimes.hpp"
#include "q2d/thomas_fermi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace q2d {

SelfConsistentResult self_consistent_g(double N, double L, double h, double a,
                                       const Potential &trap, const TransverseMode &mode,
                                       const SelfConsistentOptions &opt) {
  for (auto [x, name] : {std::pair{N, "N"}, {L, "L"}, {h, "h"}, {a, "a"}})
    if (!(x > 0.0) || !std::isfinite(x))
      throw InvalidInput(std::string("selfg: ") + name + " must be positive");
  if (!(opt.damping > 0.0) || opt.damping > 1.0)
    throw InvalidInput("selfg: damping must lie in (0, 1]");
  const double s4 = mode.s4 * mode.h;
  const double ln_a2d = std::log(h) - h / (2.0 * a * s4);

  SelfConsistentResult res;
  std::map<double, double> memo; // g -> rho_bar
  const auto rho_of = [&](double g) {
    const auto it = memo.find(g);
    if (it != memo.end())
      return it->second;
    const GPState s = minimize_gp2d(trap, N * g, opt.gp);
    if (!s.converged)
      throw ConvergenceError("selfg: GP solve did not converge at Ng = " + std::to_string(N * g),
                             s.iterations);
    const double rho = mean_density_gp(s, N) / (L * L);
    memo.emplace(g, rho);
    return rho;
  };
  const auto F = [&](double g) {
    ++res.iterations;
    return coupling_g_log(rho_of(g), ln_a2d);
  };

  // Reference values from the Thomas-Fermi densities.
  const TFResult tf1 = tf_solve(trap, N, 1.0, {.allow_nonhomogeneous = true});
  const double rho_tf1 = tf1.rho_bar / (L * L);
  res.g_closed_form = coupling_g_log(rho_tf1, ln_a2d);

  double g = F(res.g_closed_form);
  double source = g; // the reported g is F(source)
  res.history.push_back(g);
  for (int k = 0; k < opt.max_iter; ++k) {
    const double f = F(g);
    if (std::abs(f - g) <= opt.tol * g) {
      source = g;
      g = f;
      res.converged = true;
      break;
    }
    g += opt.damping * (f - g);
    res.history.push_back(g);
  }

  // F is nonincreasing in g, so G(g) = F(g) - g has one sign change.
  const auto G = [&](double x) { return F(x) - x; };
  const auto bisect = [&](double lo, double hi) {
    double glo = G(lo);
    for (int it = 0; it < 100 && hi - lo > opt.tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = G(mid);
      if ((gm > 0.0) == (glo > 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  if (!res.converged) {
    double lo = *std::min_element(res.history.begin(), res.history.end());
    double hi = *std::max_element(res.history.begin(), res.history.end());
    for (int widen = 0; widen < 60 && !(G(lo) > 0.0 && G(hi) < 0.0); ++widen) {
      lo *= 0.5;
      hi *= 2.0;
    }
    if (G(lo) > 0.0 && G(hi) < 0.0) {
      source = bisect(lo, hi);
      g = F(source);
      res.used_bisection = true;
      res.converged = true;
    } else {
      std::ostringstream os;
      os << "selfg: no fixed point found; iterates:";
      for (double x : res.history)
        os << ' ' << x;
      throw ConvergenceError(os.str(), res.iterations);
    }
  }
  res.g = g;
  res.rho_bar = rho_of(source);
  res.roots = {g};

  if (opt.scan_points > 1) {
    std::vector<double> xs(opt.scan_points);
    for (std::size_t i = 0; i < xs.size(); ++i)
      xs[i] = g * std::pow(10.0, -1.0 + 2.0 * static_cast<double>(i) /
                                            static_cast<double>(xs.size() - 1));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double a0 = G(xs[i]), a1 = G(xs[i + 1]);
      if ((a0 > 0.0) != (a1 > 0.0) && !(xs[i] <= g && g <= xs[i + 1]))
        res.roots.push_back(bisect(xs[i], xs[i + 1]));
    }
    std::sort(res.roots.begin(), res.roots.end());
    res.multiple_roots = res.roots.size() > 1;
  }

  res.rho_bar_tf = tf_solve(trap, N, g, {.allow_nonhomogeneous = true}).rho_bar / (L * L);
  return res;
}

} // namespace q2d
