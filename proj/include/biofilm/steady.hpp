#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "biofilm/kinetics.hpp"
#include "biofilm/simulator.hpp"
#include "biofilm/transform.hpp"

namespace biofilm {

using Profiles = std::vector<std::vector<double>>;

struct BracketReport {
  // per sweep: max of the upper iterate, min of the lower iterate, L-inf gap
  std::vector<double> upper_max;
  std::vector<double> lower_min;
  std::vector<double> gap_trace;
  // full iterates, only with keep_profiles
  std::vector<Profiles> upper_seq;
  std::vector<Profiles> lower_seq;
  std::size_t sweeps = 0;
  bool converged = false;
  double gap = 0.0;
  bool initial_pair_ok = true;
  // pointwise violations of upper non-increasing / lower non-decreasing / lower <= upper
  std::size_t monotone_violations = 0;
  std::size_t order_violations = 0;
};

struct MonotoneOptions {
  double tol = 1e-10;
  std::size_t max_sweeps = 20000;
  bool keep_profiles = false;
  std::optional<double> rho_c3;  // upper start for C3, default Phi_3
};

struct MonotoneResult {
  Profiles C;
  BracketReport report;
};

// X: at least X1, X2 on the grid; Phi: Dirichlet data at x = 1
MonotoneResult monotone_elliptic_solve(const Grid& g, const Profiles& X, double L,
                                       const KineticsWG& p, const std::array<double, 3>& Phi,
                                       const MonotoneOptions& opt = {});

Profiles greens_solve(const Grid& g, const Profiles& X, double L, const KineticsWG& p,
                      const std::array<double, 3>& Phi, double tol = 1e-11,
                      std::size_t max_iter = 200000);

// the O(n) evaluation of Phi + int_0^1 G(x,xi) f(xi) dxi with G = 1 - max(x, xi), trapezoid
std::vector<double> greens_apply(const Grid& g, const std::vector<double>& f, double Phi);

struct BiomassProfile {
  Profiles X;             // X1, X2, X3
  std::vector<double> V;  // rescaled velocity, cumulative from x = 0
  std::vector<double> u;  // physical velocity u(z) = V/L
  double u_interface = 0.0;
  double residual = 0.0;  // max defect of the discrete steady biomass equations
  int interface_branch = 0;  // 0 trivial, 1 species 1, 2 species 2, 3 tie
};

BiomassProfile biomass_profile_solve(const Grid& g, const Profiles& C, double L,
                                     const KineticsWG& p);

// interface root of F(X) = 0 on the simplex picked by local stability
std::array<double, 3> interface_root(const RateCoeffs& r, int* branch = nullptr);

struct SteadyOptions {
  std::size_t n = 201;
  double tol = 1e-13;        // |u(L*)| target
  double inner_tol = 1e-12;  // joint C / X / Phi fixed point
  std::size_t max_inner = 500;
  std::size_t max_bisect = 200;
  double damping = 0.5;
  MonotoneOptions monotone{};
};

struct SteadyState {
  Grid grid;
  double L_star = 0.0;
  Profiles X_star;
  Profiles C_star;
  std::vector<double> u_star;
  std::array<double, 3> Phi_star{};
  // residual name -> L-inf defect
  std::vector<std::pair<std::string, double>> residuals;
  BracketReport bracket;
  std::size_t bisection_steps = 0;
  double mass_balance_defect = 0.0;  // max_i |int F_i| / L; zero only when k1 = k2 = 0
  int interface_branch = 0;
};

// Phi held at Gamma when reactor is absent
double steady_residual(const KineticsWG& p, const std::optional<ReactorParams>& r,
                       const std::array<double, 3>& Phi_fixed, double L, const SteadyOptions& opt,
                       SteadyState* out = nullptr);

SteadyState steady_thickness_find(const KineticsWG& p, const std::optional<ReactorParams>& r,
                                  const std::array<double, 3>& Phi_fixed, double L_lo, double L_hi,
                                  const SteadyOptions& opt = {});

// simulator state sitting on the steady solution
FieldState steady_to_state(const SteadyState& ss);

struct MultiplicityReport {
  double lambda0 = 0.0;
  bool applicable = false;  // lambda3 > 0
  bool condition_holds = false;
  bool possibly_multiple = false;
  std::vector<double> theta1, theta2, c_coef, Gamma, delta1, delta2;
};

// lambda0 = (pi/(2L))^2 and the per-node quadratic
MultiplicityReport multiplicity_check(const Grid& g, const Profiles& C, const Profiles& X,
                                      double L, const KineticsWG& p);

struct MultiplicityQuadratic {
  double a, b, c, Gamma, delta1, delta2;
  bool condition;
};
MultiplicityQuadratic multiplicity_quadratic(double lambda0, double lambda3, double lambda4,
                                             double lambda5, double lambda6, double gamma,
                                             double C1, double X1, double X2);

struct ZeroDirichletReport {
  Profiles C;  // C1, C2 identically zero
  bool unique = true;
  std::optional<std::size_t> violating_node;
};
ZeroDirichletReport zero_dirichlet_branch(const Grid& g, const KineticsWG& p, const Profiles& X);

}  // namespace biofilm
