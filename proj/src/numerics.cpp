#include "biofilm/numerics.hpp"

#include <cmath>

#include "biofilm/error.hpp"

namespace biofilm {

std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d) {
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n)
    throw DomainError("tridiagonal: size mismatch");
  std::vector<double> cp(n), dp(n), x(n);
  double piv = b[0];
  if (piv == 0.0 || !std::isfinite(piv)) throw SolverError("tridiagonal: zero pivot at row 0");
  cp[0] = c[0] / piv;
  dp[0] = d[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = b[i] - a[i] * cp[i - 1];
    if (piv == 0.0 || !std::isfinite(piv))
      throw SolverError("tridiagonal: zero pivot at row " + std::to_string(i));
    cp[i] = i + 1 < n ? c[i] / piv : 0.0;
    dp[i] = (d[i] - a[i] * dp[i - 1]) / piv;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

std::vector<double> linear_bvp_solve(const Grid& g, std::span<const double> Dcoef,
                                     std::span<const double> Bcoef, std::span<const double> sigma,
                                     std::span<const double> f, double phi_right) {
  const std::size_t n = g.n();
  if (Dcoef.size() != n || Bcoef.size() != n || sigma.size() != n || f.size() != n)
    throw DomainError("linear_bvp_solve: array sizes do not match grid");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(Dcoef[i] > 0.0)) throw DomainError("linear_bvp_solve: D must be positive");
    if (!(sigma[i] >= 0.0)) throw DomainError("linear_bvp_solve: sigma must be nonnegative");
  }
  const double h = g.h(), h2 = h * h;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
  // ghost node c_{-1} = c_1
  b[0] = 2.0 * Dcoef[0] / h2 + sigma[0];
  c[0] = -2.0 * Dcoef[0] / h2;
  d[0] = f[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = -Dcoef[i] / h2 + Bcoef[i] / (2.0 * h);
    b[i] = 2.0 * Dcoef[i] / h2 + sigma[i];
    c[i] = -Dcoef[i] / h2 - Bcoef[i] / (2.0 * h);
    d[i] = f[i];
  }
  b[n - 1] = 1.0;
  d[n - 1] = phi_right;
  return solve_tridiagonal(a, b, c, d);
}

std::vector<double> implicit_transport_const(const Grid& g, std::span<const double> c_old,
                                             double d, double b, double dt,
                                             std::span<const double> source, double right_value) {
  const std::size_t n = g.n();
  const double h = g.h(), h2 = h * h;
  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  di[0] = 1.0 / dt + 2.0 * d / h2;
  up[0] = -2.0 * d / h2;
  rhs[0] = c_old[0] / dt + source[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double adv = g.x(i) * b / (2.0 * h);
    lo[i] = -d / h2 + adv;
    di[i] = 1.0 / dt + 2.0 * d / h2;
    up[i] = -d / h2 - adv;
    rhs[i] = c_old[i] / dt + source[i];
  }
  di[n - 1] = 1.0;
  rhs[n - 1] = right_value;
  return solve_tridiagonal(lo, di, up, rhs);
}

std::vector<double> implicit_transport_var(const Grid& g, std::span<const double> c_old,
                                           std::span<const double> d_face, double b, double dt,
                                           std::span<const double> source, double right_value) {
  const std::size_t n = g.n();
  if (d_face.size() != n - 1) throw DomainError("face diffusivities must have n-1 entries");
  const double h = g.h(), h2 = h * h;
  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  di[0] = 1.0 / dt + 2.0 * d_face[0] / h2;
  up[0] = -2.0 * d_face[0] / h2;
  rhs[0] = c_old[0] / dt + source[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double adv = g.x(i) * b / (2.0 * h);
    const double dm = d_face[i - 1], dp = d_face[i];
    lo[i] = -dm / h2 + adv;
    di[i] = 1.0 / dt + (dm + dp) / h2;
    up[i] = -dp / h2 - adv;
    rhs[i] = c_old[i] / dt + source[i];
  }
  di[n - 1] = 1.0;
  rhs[n - 1] = right_value;
  return solve_tridiagonal(lo, di, up, rhs);
}

double right_gradient(std::span<const double> c, double h) {
  const std::size_t n = c.size();
  return (3.0 * c[n - 1] - 4.0 * c[n - 2] + c[n - 3]) / (2.0 * h);
}

std::vector<double> gradient(std::span<const double> c, double h) {
  const std::size_t n = c.size();
  std::vector<double> d(n);
  d[0] = (-3.0 * c[0] + 4.0 * c[1] - c[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (c[i + 1] - c[i - 1]) / (2.0 * h);
  d[n - 1] = right_gradient(c, h);
  return d;
}

}  // namespace biofilm
