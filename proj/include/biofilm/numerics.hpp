#pragma once
#include <span>
#include <vector>

#include "biofilm/transform.hpp"

namespace biofilm {

// Thomas algorithm; a = sub-diagonal (a[0] unused), c = super-diagonal (c[n-1] unused)
std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                      std::span<const double> c, std::span<const double> d);

// -D c'' - B c' + sigma c = f on [0,1], c'(0) = 0, c(1) = phi_right
std::vector<double> linear_bvp_solve(const Grid& g, std::span<const double> Dcoef,
                                     std::span<const double> Bcoef, std::span<const double> sigma,
                                     std::span<const double> f, double phi_right);

// Backward-Euler step of c_t = b x c_x + d c_xx + r, constant d
std::vector<double> implicit_transport_const(const Grid& g, std::span<const double> c_old,
                                             double d, double b, double dt,
                                             std::span<const double> source, double right_value);

// Same with conservative flux form: face diffusivities d_face[i] at x_{i+1/2}
std::vector<double> implicit_transport_var(const Grid& g, std::span<const double> c_old,
                                           std::span<const double> d_face, double b, double dt,
                                           std::span<const double> source, double right_value);

// second-order one-sided derivative at x = 1
double right_gradient(std::span<const double> c, double h);

// second-order derivative profile, one-sided at the ends
std::vector<double> gradient(std::span<const double> c, double h);

}  // namespace biofilm
