#include "q2d/potential.hpp"

#include "q2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace q2d {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;
} // namespace

Potential::Potential(Profile profile, Traits traits)
    : profile_(std::move(profile)), traits_(std::move(traits)) {
  if (!profile_)
    throw InvalidInput("potential: empty profile");
}

Potential Potential::harmonic() {
  return Potential([](double x) { return x * x; }, {.name = "harmonic", .homogeneity = 2.0});
}

Potential Potential::power(double p) {
  if (!(p > 0.0))
    throw InvalidInput("potential: power exponent must be positive");
  if (p == 2.0)
    return harmonic();
  Traits t{.name = p == 4.0 ? "quartic" : "power", .homogeneity = p};
  return Potential([p](double x) { return std::pow(std::abs(x), p); }, std::move(t));
}

Potential Potential::box(double side) {
  if (!(side > 0.0))
    throw InvalidInput("potential: box side must be positive");
  Traits t{.name = "box", .homogeneity = inf, .box_side = side};
  const double half = 0.5 * side;
  return Potential([half](double x) { return std::abs(x) <= half ? 0.0 : inf; }, std::move(t));
}

Potential Potential::harmonic_bump(double amplitude, double width) {
  if (!(amplitude >= 0.0) || !(width > 0.0))
    throw InvalidInput("potential: bump needs amplitude >= 0 and width > 0");
  return Potential(
      [amplitude, width](double x) {
        return x * x + amplitude * std::exp(-x * x / (2.0 * width * width));
      },
      {.name = "harmonic-bump"});
}

Potential Potential::zero() {
  return Potential([](double) { return 0.0; }, {.name = "zero", .range = 0.0});
}

Potential Potential::square_barrier(double height, double range) {
  if (!(height >= 0.0) || !(range > 0.0))
    throw InvalidInput("potential: square barrier needs height >= 0 and range > 0");
  return Potential([height, range](double r) { return std::abs(r) <= range ? height : 0.0; },
                   {.name = "square-barrier", .range = range, .breakpoints = {range}});
}

Potential Potential::hard_core(double radius) {
  if (!(radius > 0.0))
    throw InvalidInput("potential: hard core radius must be positive");
  return Potential([radius](double r) { return std::abs(r) < radius ? inf : 0.0; },
                   {.name = "hard-core", .range = radius, .hard_core_radius = radius});
}

Potential Potential::soft_2d(const std::string &shape, double lambda, double R) {
  if (!(lambda >= 0.0) || !(R > 0.0))
    throw InvalidInput("potential: soft profile needs lambda >= 0 and R > 0");
  const double area = pi * R * R;
  Traits t{.name = shape, .range = R, .breakpoints = {R}};
  Profile f;
  if (shape == "disc") {
    const double c = lambda / area;
    f = [c, R](double r) { return std::abs(r) <= R ? c : 0.0; };
  } else if (shape == "parabolic") {
    const double c = 2.0 * lambda / area;
    f = [c, R](double r) {
      const double x = r / R;
      return std::abs(x) <= 1.0 ? c * (1.0 - x * x) : 0.0;
    };
  } else if (shape == "cone") {
    const double c = 3.0 * lambda / area;
    f = [c, R](double r) {
      const double x = std::abs(r) / R;
      return x <= 1.0 ? c * (1.0 - x) : 0.0;
    };
  } else if (shape == "shell") {
    const double c = 4.0 * lambda / (3.0 * area);
    t.breakpoints = {0.5 * R, R};
    f = [c, R](double r) {
      const double x = std::abs(r);
      return x >= 0.5 * R && x <= R ? c : 0.0;
    };
  } else {
    throw InvalidInput("potential: unknown soft shape '" + shape + "'");
  }
  return Potential(std::move(f), std::move(t));
}

Potential Potential::tabulated(std::vector<double> r, std::vector<double> v, std::string name) {
  if (r.size() != v.size() || r.size() < 2)
    throw InvalidInput("tabulated potential: need at least two (r, v) rows");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(v[i]))
      throw InvalidInput("tabulated potential: non-finite entry at row " + std::to_string(i + 1));
    if (v[i] < 0.0)
      throw InvalidInput("tabulated potential: negative value at row " + std::to_string(i + 1));
    if (i > 0 && !(r[i] > r[i - 1]))
      throw InvalidInput("tabulated potential: r not strictly increasing at row " +
                         std::to_string(i + 1));
  }
  if (r.front() < 0.0)
    throw InvalidInput("tabulated potential: negative radius");
  Traits t{.name = std::move(name), .range = r.back(), .breakpoints = r};
  auto rs = std::make_shared<const std::vector<double>>(std::move(r));
  auto vs = std::make_shared<const std::vector<double>>(std::move(v));
  Profile f = [rs, vs](double x) {
    x = std::abs(x);
    const auto &R = *rs;
    const auto &V = *vs;
    if (x > R.back())
      return 0.0;
    if (x <= R.front())
      return V.front();
    const auto it = std::upper_bound(R.begin(), R.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - R.begin());
    const double w = (x - R[j - 1]) / (R[j] - R[j - 1]);
    return (1.0 - w) * V[j - 1] + w * V[j];
  };
  return Potential(std::move(f), std::move(t));
}

Potential Potential::tabulated_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput("tabulated potential: cannot open " + path.string());
  std::vector<double> r, v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    for (auto &c : line)
      if (c == ',')
        c = ' ';
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) {
      continue; // blank or comment
    }
    std::string rest;
    if (!(ls >> b) || (ls >> rest))
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) +
                         ": expected two columns (r, v)");
    r.push_back(a);
    v.push_back(b);
  }
  return tabulated(std::move(r), std::move(v), path.filename().string());
}

Potential Potential::scaled(double length) const {
  if (!(length > 0.0))
    throw InvalidInput("potential: scale length must be positive");
  if (length == 1.0)
    return *this;
  Traits t = traits_;
  t.range *= length;
  t.hard_core_radius *= length;
  t.box_side *= length;
  for (auto &b : t.breakpoints)
    b *= length;
  const double inv = 1.0 / length;
  const double pre = inv * inv;
  return Potential([f = profile_, inv, pre](double x) { return pre * f(x * inv); }, std::move(t));
}

Potential potential_by_name(const std::string &name, double p1, double p2) {
  if (name == "harmonic")
    return Potential::harmonic();
  if (name == "quartic")
    return Potential::quartic();
  if (name == "power")
    return Potential::power(p1);
  if (name == "box")
    return Potential::box(p1);
  if (name == "zero")
    return Potential::zero();
  if (name == "square-barrier")
    return Potential::square_barrier(p1, p2);
  if (name == "hard-core")
    return Potential::hard_core(p1);
  if (name == "harmonic-bump")
    return Potential::harmonic_bump(p1, p2);
  throw InvalidInput("unknown potential '" + name + "'");
}

} // namespace q2d
