#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace q2d::detail {

// Cell-centred radial discretization of -Laplacian in 2D:
// r_i = (i + 1/2) dr, Neumann at 0, phi = 0 at the ghost point r_n.
// K is the symmetric stiffness matrix, w_i = 2 pi r_i dr the mass weights.
struct RadialOperator {
  double dr = 0.0;
  std::size_t n = 0;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> k_off;  // K(i, i+1), n - 1 entries
  std::vector<double> k_diag; // K(i, i)

  RadialOperator(double dr_, std::size_t n_) : dr(dr_), n(n_), r(n_), w(n_), k_off(n_ - 1), k_diag(n_) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = (static_cast<double>(i) + 0.5) * dr;
      w[i] = two_pi * r[i] * dr;
      const double out = two_pi * (static_cast<double>(i) + 1.0); // 2 pi r_{i+1/2} / dr
      const double in = two_pi * static_cast<double>(i);
      k_diag[i] = out + in;
      if (i + 1 < n)
        k_off[i] = -out;
    }
  }

  // phi^T K phi.
  double kinetic(std::span<const double> phi) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double next = i + 1 < n ? phi[i + 1] : 0.0;
      const double d = next - phi[i];
      s += two_pi * (static_cast<double>(i) + 1.0) * d * d;
    }
    return s;
  }

  // y = K phi.
  void apply(std::span<const double> phi, std::span<double> y) const {
    for (std::size_t i = 0; i < n; ++i) {
      double v = k_diag[i] * phi[i];
      if (i > 0)
        v += k_off[i - 1] * phi[i - 1];
      if (i + 1 < n)
        v += k_off[i] * phi[i + 1];
      y[i] = v;
    }
  }
};

} // namespace q2d::detail
