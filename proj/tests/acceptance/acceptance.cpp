// Acceptance run: one PASS/FAIL line per criterion, each driven by a config in
// configs/. Usage: q2d_acceptance [--expect-fail N]...
// Exit status is 0 when every criterion not listed with --expect-fail passes.

#include "q2d/cli/commands.hpp"
#include "q2d/cli/config.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace q2d;
using namespace q2d::cli;

namespace {

const std::filesystem::path config_dir = Q2D_CONFIG_DIR;

struct Run {
  CommandResult result;
  double seconds = 0.0;
};

Run run(const std::string &name) {
  const auto t0 = std::chrono::steady_clock::now();
  Run r;
  r.result = run_command(load_config(config_dir / name));
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double num(const Row &row, const std::string &col) {
  const auto v = row.number(col);
  if (!v)
    throw std::runtime_error("column " + col + " is not numeric");
  return *v;
}

std::string text(const Row &row, const std::string &col) {
  const Cell *c = row.find(col);
  if (!c || !std::holds_alternative<std::string>(*c))
    throw std::runtime_error("column " + col + " is not text");
  return std::get<std::string>(*c);
}

bool flag(const Row &row, const std::string &col) {
  const Cell *c = row.find(col);
  return c && std::holds_alternative<bool>(*c) && std::get<bool>(*c);
}

bool converged(const CommandResult &r) {
  return r.all_converged &&
         std::all_of(r.rows.begin(), r.rows.end(), [](const Row &x) { return flag(x, "converged"); });
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Collects sub-checks of one criterion.
struct Verdict {
  bool ok = true;
  std::vector<std::string> detail;

  void check(bool cond, const std::string &what) {
    if (!cond)
      ok = false;
    detail.push_back(what + (cond ? "" : " [x]"));
  }
  void time(double seconds, double limit) {
    check(seconds < limit, "runtime " + fmt(seconds) + " s < " + fmt(limit) + " s");
  }
};

constexpr double pi = std::numbers::pi;

Verdict transverse() {
  Verdict v;
  const Run r = run("01_transverse.conf");
  const Row &x = r.result.rows.at(0);
  const double d1 = std::abs(num(x, "e_perp") - 1.0), d3 = std::abs(num(x, "e_perp_excited") - 3.0),
               ds = std::abs(num(x, "s4") - 1.0 / std::sqrt(2.0 * pi));
  v.check(converged(r.result), "converged");
  v.check(d1 <= 1e-5, "|e - 1| = " + fmt(d1));
  v.check(d3 <= 1e-5, "|e1 - 3| = " + fmt(d3));
  v.check(ds <= 1e-5, "|s4 - (2 pi)^-1/2| = " + fmt(ds));
  v.time(r.seconds, 1.0);
  return v;
}

Verdict scatter3d() {
  Verdict v;
  const Run r = run("02_scatter3d.conf");
  v.check(converged(r.result), "converged");
  const double exact = 1.0 - std::tanh(2.0) / 2.0;
  double worst = -1.0;
  for (const Row &x : r.result.rows) {
    const std::string p = text(x, "potential");
    if (p.rfind("square-barrier", 0) == 0) {
      const double d = std::abs(num(x, "a") - exact);
      v.check(d <= 1e-5, "square barrier |a - (1 - tanh 2 / 2)| = " + fmt(d));
    } else {
      const double d = std::abs(num(x, "a") - num(x, "range"));
      v.check(d <= 1e-9 * num(x, "range"), "hard core |a - radius| = " + fmt(d));
    }
    worst = std::max({worst, num(x, "bound_violation"), -num(x, "f0_min"), num(x, "f0_max") - 1.0});
  }
  v.check(worst <= 1e-6, "worst bound excess " + fmt(worst) + " <= 1e-6");
  return v;
}

Verdict a2d() {
  Verdict v;
  const Run r = run("03_a2d.conf");
  v.check(converged(r.result), "converged");
  v.check(r.result.rows.size() == 5, std::to_string(r.result.rows.size()) + " triples");
  bool hard = false;
  double worst = 0.0;
  for (const Row &x : r.result.rows) {
    hard = hard || text(x, "potential").rfind("hard-core", 0) == 0;
    worst = std::max(worst, num(x, "w_rel_error"));
  }
  v.check(hard, "includes a hard core");
  v.check(worst <= 1e-3, "max relative error " + fmt(worst));
  v.time(r.seconds, 10.0);
  return v;
}

Verdict scatter2d() {
  Verdict v;
  const Run r = run("04_scatter2d.conf");
  v.check(converged(r.result), "converged");
  std::map<double, std::vector<double>> by_R;   // |eta| in lambda order
  std::map<double, std::vector<double>> by_lam; // eta across R
  for (const Row &x : r.result.rows) {
    by_R[num(x, "R")].push_back(num(x, "abs_eta"));
    by_lam[num(x, "lambda")].push_back(num(x, "eta"));
  }
  for (const auto &[R, e] : by_R) {
    bool dec = e.size() == 4;
    for (std::size_t i = 1; i < e.size(); ++i)
      dec = dec && e[i] < e[i - 1];
    v.check(dec, "|eta| strictly decreasing at R = " + fmt(R));
  }
  v.check(by_R.size() == 2, "two R values");
  double spread = 0.0;
  for (const auto &[lam, e] : by_lam)
    spread = std::max(spread, *std::max_element(e.begin(), e.end()) - *std::min_element(e.begin(), e.end()));
  v.check(spread <= 1e-6, "eta spread across R " + fmt(spread));
  v.time(r.seconds, 30.0);
  return v;
}

Verdict dyson() {
  Verdict v;
  const Run r = run("05_dyson.conf");
  v.check(converged(r.result), "converged");
  std::set<std::string> potentials;
  std::set<double> eps;
  double worst = 0.0;
  std::vector<std::pair<double, double>> nu; // (ratio, deviation)
  for (const Row &x : r.result.rows) {
    const std::string part = text(x, "part");
    if (part == "recursion") {
      potentials.insert(text(x, "potential"));
      eps.insert(num(x, "epsilon"));
      worst = std::max(worst, num(x, "rel_diff"));
    } else if (part == "nu") {
      nu.emplace_back(num(x, "R_tilde_over_a"), num(x, "deviation"));
    }
  }
  v.check(potentials.size() == 4 && eps == std::set<double>{0.3, 1.0},
          std::to_string(potentials.size()) + " potentials x " + std::to_string(eps.size()) + " epsilons");
  v.check(worst <= 1e-4, "recursion vs direct max relative difference " + fmt(worst));
  std::sort(nu.begin(), nu.end());
  bool dec = nu.size() >= 2;
  double at_1e3 = INFINITY;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (i > 0)
      dec = dec && std::abs(nu[i].second) < std::abs(nu[i - 1].second);
    if (std::abs(nu[i].first - 1e3) < 1e-9 * 1e3)
      at_1e3 = std::abs(nu[i].second);
  }
  v.check(at_1e3 <= 0.10, "nu deviation at 1e3: " + fmt(at_1e3));
  v.check(dec, "nu deviation decreasing along the ladder");
  v.time(r.seconds, 60.0);
  return v;
}

Verdict dyson_u3d() {
  Verdict v;
  const Run r = run("06_dyson_u3d.conf");
  v.check(converged(r.result), "converged");
  double closed = 0.0, quad = 0.0;
  for (const Row &x : r.result.rows) {
    closed = std::max(closed, std::abs(num(x, "integral_closed") - 4.0 * pi));
    quad = std::max(quad, std::abs(num(x, "integral_quadrature") - 4.0 * pi));
  }
  v.check(!r.result.rows.empty(), std::to_string(r.result.rows.size()) + " radii");
  v.check(closed <= 1e-12, "closed form |int - 4 pi| = " + fmt(closed));
  v.check(quad <= 1e-6, "quadrature |int - 4 pi| = " + fmt(quad));
  return v;
}

Verdict gp_oracles() {
  Verdict v;
  const Run r2 = run("07_gp2d.conf");
  v.check(converged(r2.result), "2D converged");
  std::vector<std::pair<double, double>> ladder; // harmonic (Ng, E)
  double box = 0.0, scaling = 0.0;
  for (const Row &x : r2.result.rows) {
    const std::string trap = text(x, "trap");
    const double Ng = num(x, "Ng"), E = num(x, "energy");
    if (trap == "harmonic") {
      ladder.emplace_back(Ng, E);
      scaling = std::max(scaling, num(x, "scaling_residual"));
      if (Ng == 0.0) {
        const double d = std::abs(E - 2.0);
        v.check(d <= 1e-6, "2D Ng = 0: |E - 2| = " + fmt(d));
      }
    } else {
      const double ex = num(x, "box_exact");
      box = std::max(box, std::abs(E - ex) / std::max(1.0, std::abs(ex)));
      // independent of the command: 4 pi rho g with rho = N / side^2, side 1
      const double mine = 4.0 * pi * num(x, "N") * num(x, "g");
      box = std::max(box, std::abs(E - mine) / std::max(1.0, std::abs(mine)));
    }
  }
  v.check(box <= 1e-12, "box E/N vs 4 pi rho g: " + fmt(box));
  v.check(scaling <= 1e-8, "scaling identity residual " + fmt(scaling));
  std::sort(ladder.begin(), ladder.end());
  bool concave = ladder.size() == 10;
  for (std::size_t i = 2; i < ladder.size(); ++i) {
    const double s0 = (ladder[i - 1].second - ladder[i - 2].second) / (ladder[i - 1].first - ladder[i - 2].first);
    const double s1 = (ladder[i].second - ladder[i - 1].second) / (ladder[i].first - ladder[i - 1].first);
    concave = concave && s1 <= s0;
  }
  v.check(concave, "E(1,1,Ng) concave on " + std::to_string(ladder.size()) + " points");

  const Run r3 = run("07_gp3d.conf");
  v.check(converged(r3.result), "3D converged");
  const double d6 = std::abs(num(r3.result.rows.at(0), "energy") - 6.0);
  v.check(d6 <= 1e-5, "3D Na = 0, h = 0.5: |E - 6| = " + fmt(d6));
  return v;
}

Verdict tf() {
  Verdict v;
  const Run o = run("08_tf_oracle.conf");
  const Row &x = o.result.rows.at(0);
  const double dmu = std::abs(num(x, "mu_tf") - 40.0),
               drho = std::abs(num(x, "rho_bar") - std::sqrt(100.0) / (3.0 * pi));
  v.check(dmu <= 1e-6, "|mu - 40| = " + fmt(dmu));
  v.check(drho <= 1e-6, "|rho_bar - 10 / (3 pi)| = " + fmt(drho));
  const Run r = run("08_tf.conf");
  v.check(converged(r.result), "converged");
  std::vector<double> ratio;
  for (const Row &y : r.result.rows)
    ratio.push_back(num(y, "ratio"));
  bool dec = ratio.size() == 4;
  for (std::size_t i = 0; i < ratio.size(); ++i)
    dec = dec && ratio[i] >= 1.0 && (i == 0 || ratio[i] < ratio[i - 1]);
  v.check(dec, "E_GP / E_TF decreasing toward 1");
  v.check(!ratio.empty() && ratio.back() <= 1.03, "ratio at Ng = 1e4: " + fmt(ratio.empty() ? NAN : ratio.back()));
  v.time(o.seconds + r.seconds, 120.0);
  return v;
}

Verdict crossover() {
  Verdict v;
  const Run r = run("09_crossover.conf");
  v.check(converged(r.result), "converged");
  std::vector<std::pair<double, double>> dev; // (h, |ratio - 1|), h descending
  bool bound = !r.result.rows.empty();
  for (const Row &x : r.result.rows) {
    dev.emplace_back(num(x, "h"), std::abs(num(x, "ratio") - 1.0));
    bound = bound && num(x, "e3d") <= num(x, "upper_bound");
  }
  std::sort(dev.begin(), dev.end(), [](auto a, auto b) { return a.first > b.first; });
  v.check(dev.size() == 3 && dev[0].first == 0.2 && dev[0].second <= 0.15,
          "|ratio - 1| at h = 0.2: " + fmt(dev.empty() ? NAN : dev[0].second));
  bool dec = dev.size() == 3;
  for (std::size_t i = 1; i < dev.size(); ++i)
    dec = dec && dev[i].second < dev[i - 1].second;
  v.check(dec, "strictly approaching 1 as h decreases");
  v.check(bound, "E_3D <= e/h^2 + E_2D at every h");
  v.time(r.seconds, 600.0);
  return v;
}

Verdict temple() {
  Verdict v;
  const Run r = run("10_temple.conf");
  v.check(converged(r.result), "converged");
  std::set<std::string> potentials;
  bool sandwich = true;
  std::size_t bounded = 0, exact = 0;
  double gap = 0.0;
  for (const Row &x : r.result.rows) {
    potentials.insert(text(x, "potential"));
    const double e0 = num(x, "e0"), q = num(x, "rayleigh");
    const double slack = 1e-10 * std::abs(e0);
    sandwich = sandwich && e0 <= q + slack;
    // no Temple bound when the Rayleigh quotient is not below e1
    const auto t = x.number("temple");
    if (!t)
      continue;
    ++bounded;
    sandwich = sandwich && *t <= e0 + slack;
    if (text(x, "trial") == "perturbed" && num(x, "parameter") == 0.0) {
      ++exact;
      gap = std::max(gap, std::abs(e0 - *t));
    }
  }
  v.check(bounded > 0, std::to_string(bounded) + " rows with a Temple bound");
  v.check(potentials.size() == 3, std::to_string(potentials.size()) + " Hamiltonians");
  v.check(sandwich, "temple <= E0 <= Rayleigh in every row");
  v.check(exact == potentials.size() && gap <= 1e-8, "|E0 - temple| at zero variance: " + fmt(gap));
  v.check(r.result.assertions_passed, "gap decreasing along each trial ladder");
  return v;
}

Verdict regimes() {
  Verdict v;
  const Run r = run("11_phase.conf");
  v.check(converged(r.result), "converged");
  double worst_i = 0.0, worst_ii = 0.0, q_ii = NAN;
  std::size_t n_i = 0, n_ii = 0;
  bool prefactor = true;
  for (const Row &x : r.result.rows) {
    const auto q = x.number("q"), g = x.number("g");
    if (!q || !g)
      continue;
    if (*q > 100.0) {
      ++n_i;
      worst_i = std::max(worst_i, std::abs(*g / num(x, "g_region_i") - 1.0));
    } else if (*q < 0.01) {
      ++n_ii;
      const double d = std::abs(*g / num(x, "g_region_ii") - 1.0);
      if (d > worst_ii) {
        worst_ii = d;
        q_ii = *q;
      }
    }
    const Cell *p = x.find("prefactor_bound_holds");
    if (p && std::holds_alternative<bool>(*p))
      prefactor = prefactor && std::get<bool>(*p);
  }
  v.check(n_i > 0 && worst_i <= 0.01,
          "Region I: max deviation " + fmt(worst_i) + " over " + std::to_string(n_i) + " cells with q > 100");
  v.check(n_ii > 0 && worst_ii <= 0.01, "Region II: max deviation " + fmt(worst_ii) + " at q = " + fmt(q_ii) +
                                            " over " + std::to_string(n_ii) + " cells with q < 0.01");
  v.check(prefactor, "prefactor bound for b in {a, sqrt(ah), h}");
  return v;
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> expected_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      expected_fail.insert(std::stoi(argv[++i]));
    } else {
      std::cerr << "usage: q2d_acceptance [--expect-fail N]...\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"transverse oracle", transverse},
      {"3D scattering oracle", scatter3d},
      {"effective potential normalization", a2d},
      {"soft disc eta trend", scatter2d},
      {"Dyson recursion and nu asymptote", dyson},
      {"Dyson 3D normalization", dyson_u3d},
      {"GP oracles", gp_oracles},
      {"TF oracle and limit", tf},
      {"3D to 2D crossover", crossover},
      {"Temple sandwich", temple},
      {"regime formulas", regimes},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception &e) {
      v.ok = false;
      v.detail.push_back(std::string("error: ") + e.what());
    }
    std::ostringstream line;
    line << (v.ok ? "PASS" : "FAIL") << ' ' << id << ' ' << criteria[i].first << ':';
    for (std::size_t k = 0; k < v.detail.size(); ++k)
      line << (k ? "; " : " ") << v.detail[k];
    if (!v.ok && expected_fail.count(id))
      line << " (expected failure)";
    std::cout << line.str() << std::endl;
    if (!v.ok && !expected_fail.count(id))
      ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
