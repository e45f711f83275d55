#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace q2d {

/// Nonnegative potential of one real variable.
///
/// Radial potentials are evaluated at r = |x|; transverse ones at the signed
/// coordinate z. Values are +infinity inside a hard core or outside a box.
class Potential {
public:
  using Profile = std::function<double(double)>;

  struct Traits {
    std::string name;
    double range = std::numeric_limits<double>::infinity(); ///< support radius
    double hard_core_radius = 0.0;
    std::vector<double> breakpoints; ///< points where the profile or its slope jumps
    std::optional<double> homogeneity; ///< degree p; +inf for a box
    double box_side = 0.0;             ///< > 0 only for boxes
  };

  Potential(Profile profile, Traits traits);

  /// z^2 (or r^2), degree 2.
  static Potential harmonic();
  /// |x|^p, degree p.
  static Potential power(double p);
  static Potential quartic() { return power(4.0); }
  /// Zero on [-side/2, side/2] in 1D or on a side x side square in 2D, infinite outside.
  static Potential box(double side = 1.0);
  /// x^2 + amplitude * exp(-x^2 / (2 width^2)).
  static Potential harmonic_bump(double amplitude, double width);
  static Potential zero();
  /// height on [0, range], zero beyond.
  static Potential square_barrier(double height, double range);
  /// Hard core of the given radius, zero outside.
  static Potential hard_core(double radius);
  /// Compactly supported 2D profile lambda * w(r), w >= 0, int_{R^2} w = 1,
  /// support radius R. Shapes: "disc", "parabolic", "cone", "shell".
  static Potential soft_2d(const std::string &shape, double lambda, double R);
  /// Two-column table (r, v), linear interpolation, zero beyond the last point.
  static Potential tabulated(std::vector<double> r, std::vector<double> v,
                             std::string name = "tabulated");
  static Potential tabulated_file(const std::filesystem::path &path);

  double operator()(double x) const { return profile_(x); }
  const Profile &profile() const noexcept { return profile_; }
  const Traits &traits() const noexcept { return traits_; }
  const std::string &name() const noexcept { return traits_.name; }
  double range() const noexcept { return traits_.range; }
  double hard_core_radius() const noexcept { return traits_.hard_core_radius; }
  std::span<const double> breakpoints() const noexcept { return traits_.breakpoints; }
  std::optional<double> homogeneity() const noexcept { return traits_.homogeneity; }
  bool is_box() const noexcept { return traits_.box_side > 0.0; }
  double box_side() const noexcept { return traits_.box_side; }
  bool has_hard_core() const noexcept { return traits_.hard_core_radius > 0.0; }

  /// l^{-2} v(x / l): the scattering family v_a and the trap scalings V_L, V_h.
  Potential scaled(double length) const;

private:
  Profile profile_;
  Traits traits_;
};

/// Builds a potential from a name used on the command line and in config files:
/// harmonic, quartic, box, zero, square-barrier, hard-core, harmonic-bump,
/// power. `p1`, `p2` are the shape parameters (exponent, height, radius, ...).
Potential potential_by_name(const std::string &name, double p1 = 1.0, double p2 = 1.0);

} // namespace q2d
