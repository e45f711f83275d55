#include "q2d/numerics/tridiagonal.hpp"

#include "q2d/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace q2d::numerics {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Gershgorin interval containing the spectrum.
std::pair<double, double> gershgorin(const SymTridiagonal &t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0)
      r += std::abs(t.off[i - 1]);
    if (i + 1 < n)
      r += std::abs(t.off[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
double bisect_eigenvalue(const SymTridiagonal &t, std::size_t k, double lo, double hi) {
  for (int it = 0; it < 256; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)))
      break;
    if (sturm_count(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

void normalize(std::vector<double> &v) {
  const double n = std::sqrt(dot(v, v));
  for (auto &x : v)
    x /= n;
}

void fix_sign(std::vector<double> &v) {
  double big = 0.0;
  for (double x : v)
    big = std::max(big, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-3 * big) {
      if (x < 0.0)
        for (auto &y : v)
          y = -y;
      return;
    }
  }
}

} // namespace

void SymTridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0)
      s += off[i - 1] * x[i - 1];
    if (i + 1 < n)
      s += off[i] * x[i + 1];
    y[i] = s;
  }
}

double SymTridiagonal::norm_bound() const {
  const auto [lo, hi] = gershgorin(*this);
  return std::max(std::abs(lo), std::abs(hi));
}

std::size_t sturm_count(const SymTridiagonal &t, double x) {
  const std::size_t n = t.size();
  const double tiny = std::numeric_limits<double>::min() / eps;
  std::size_t count = 0;
  double q = t.diag[0] - x;
  for (std::size_t i = 0;;) {
    if (q == 0.0)
      q = -tiny;
    if (q < 0.0)
      ++count;
    if (++i == n)
      break;
    q = t.diag[i] - x - t.off[i - 1] * t.off[i - 1] / q;
  }
  return count;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (lower.size() + 1 != n || upper.size() + 1 != n || rhs.size() != n)
    throw InvalidInput("solve_tridiagonal: inconsistent band sizes");
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> dl(lower.begin(), lower.end());
  std::vector<double> du(upper.begin(), upper.end());
  std::vector<double> du2(n > 2 ? n - 2 : 0, 0.0);
  std::vector<unsigned char> swapped(n, 0);
  double scale = 0.0;
  for (double v : diag)
    scale = std::max(scale, std::abs(v));
  const double floor = std::max(scale, 1.0) * eps * eps;

  // LU with partial pivoting (row i or i+1), as in LAPACK dgttrf.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0)
        d[i] = floor;
      const double fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const double fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const double temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0)
    d[n - 1] = floor;

  std::vector<double> b(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      const double temp = b[i] - dl[i] * b[i + 1];
      b[i] = b[i + 1];
      b[i + 1] = temp;
    } else {
      b[i + 1] -= dl[i] * b[i];
    }
  }
  b[n - 1] /= d[n - 1];
  if (n > 1)
    b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;)
    b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  return b;
}

TridiagonalEigenpairs lowest_eigenpairs(const SymTridiagonal &t, std::size_t k,
                                        int max_inverse_iterations) {
  const std::size_t n = t.size();
  if (k == 0)
    throw InvalidInput("lowest_eigenpairs: k must be at least 1");
  if (k > n)
    throw InvalidInput("lowest_eigenpairs: k = " + std::to_string(k) + " exceeds matrix size " +
                       std::to_string(n));
  if (t.off.size() + 1 != n)
    throw InvalidInput("lowest_eigenpairs: off-diagonal has wrong length");

  const auto [glo, ghi] = gershgorin(t);
  const double norm = std::max({std::abs(glo), std::abs(ghi), 1e-300});
  const double pad = 1e-12 * norm + std::numeric_limits<double>::min();

  TridiagonalEigenpairs out;
  out.values.reserve(k);
  double lo = glo - pad;
  for (std::size_t j = 0; j < k; ++j) {
    const double v = bisect_eigenvalue(t, j, lo, ghi + pad);
    out.values.push_back(v);
    lo = v - pad;
  }

  const double cluster = 1e-3 * norm;
  const double residual_tol = 1e3 * eps * norm * std::sqrt(static_cast<double>(n));
  std::vector<double> lower(t.off), upper(t.off), shifted(n), y(n);
  for (std::size_t j = 0; j < k; ++j) {
    const double lambda = out.values[j];
    for (std::size_t i = 0; i < n; ++i)
      shifted[i] = t.diag[i] - lambda;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i + 1) + static_cast<double>(j));
    normalize(x);

    bool ok = false;
    int it = 0;
    for (; it < max_inverse_iterations && !ok; ++it) {
      x = solve_tridiagonal(lower, shifted, upper, x);
      for (std::size_t p = 0; p < j; ++p)
        if (std::abs(out.values[p] - lambda) < cluster) {
          const double c = dot(out.vectors[p], x);
          for (std::size_t i = 0; i < n; ++i)
            x[i] -= c * out.vectors[p][i];
        }
      normalize(x);
      t.apply(x, y);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        r = std::max(r, std::abs(y[i] - lambda * x[i]));
      ok = r <= residual_tol;
    }
    out.inverse_iterations += it;
    if (!ok)
      throw ConvergenceError("inverse iteration for eigenvalue " + std::to_string(j) +
                                 " did not reach residual tolerance",
                             it);
    fix_sign(x);
    out.vectors.push_back(std::move(x));
  }
  return out;
}

SymTridiagonal sturm_liouville_matrix(const std::function<double(double)> &potential,
                                      const Grid1D &grid) {
  if (grid.kind() != GridKind::uniform)
    throw InvalidInput("Sturm-Liouville discretization needs a uniform grid");
  if (grid.size() < 3)
    throw InvalidInput("Sturm-Liouville grid needs at least one interior point");
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const std::size_t n = grid.size() - 2;
  SymTridiagonal t;
  t.diag.resize(n);
  t.off.assign(n - 1, -inv_h2);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = potential(grid[i + 1]);
    if (!std::isfinite(v))
      throw InvalidInput("potential is not finite at interior grid point x = " +
                         std::to_string(grid[i + 1]));
    t.diag[i] = 2.0 * inv_h2 + v;
  }
  return t;
}

std::vector<EigenResult> eigs_sturm_liouville(const std::function<double(double)> &potential,
                                              const Grid1D &grid, std::size_t k) {
  const auto t = sturm_liouville_matrix(potential, grid);
  if (k > t.size())
    throw InvalidInput("eigs_sturm_liouville: k = " + std::to_string(k) +
                       " exceeds the number of interior points " + std::to_string(t.size()));
  const auto pairs = lowest_eigenpairs(t, k);
  const double scale = 1.0 / std::sqrt(grid.spacing());
  std::vector<EigenResult> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    EigenResult e;
    e.eigenvalue = pairs.values[j];
    e.index = j;
    e.eigenvector.assign(grid.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
      e.eigenvector[i + 1] = pairs.vectors[j][i] * scale;
    out.push_back(std::move(e));
  }
  return out;
}

} // namespace q2d::numerics
