#pragma once
#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "biofilm/kinetics.hpp"
#include "biofilm/simulator.hpp"
#include "biofilm/transform.hpp"

namespace biofilm {

struct SteadyState;

using cdouble = std::complex<double>;
using Matrix6c = Eigen::Matrix<cdouble, 6, 6>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Spectrum6 = std::array<cdouble, 6>;

double energy_E_profiles(const std::vector<std::vector<double>>& C,
                         const std::vector<std::vector<double>>& C_star, double h);
double energy_F_profiles(const std::vector<std::vector<double>>& C,
                         const std::vector<std::vector<double>>& C_star, double h);
double energy_E(const FieldState& s, const SteadyState& ss);
double energy_F(const FieldState& s, const SteadyState& ss);

struct LinearizedCoeffsWG {
  std::vector<double> Q1, Q2, N1, N2, M1, M2, M3;
  // the three printed contributions to M3 (beta3, beta5, beta6 terms)
  std::array<std::vector<double>, 3> M3_terms;
};
LinearizedCoeffsWG linearized_coeffs_wg(const SteadyState& ss, double y_star,
                                        const KineticsWG& p);

struct DecayFit {
  double K_amp = 0.0;
  double mu_rate = 0.0;
  double r2 = 0.0;
  double t_start = 0.0, t_end = 0.0;
  std::size_t samples = 0;
};
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& value, double t_start,
                   double t_end);

// initial state for a perturbation run: y* + log(1+delta), C*(1 - delta cos(pi x/2))
FieldState perturb_steady(const SteadyState& ss, double delta);

struct PerturbationRun {
  Trajectory traj;
  DecayFit fit;
  double L_star = 0.0;
  std::vector<double> t, dev;  // |L - L*|
  std::size_t E_violations = 0, F_violations = 0;
  bool ydot_bound_ok = true;
  double ydot_initial = 0.0, ydot_final = 0.0;
};
PerturbationRun wg_perturbation_run(const SteadyState& ss, const WgSetup& setup,
                                    const TimeStepConfig& cfg, double delta,
                                    double window_fraction = 0.6,
                                    double transient_fraction = 0.05);

// counts k with series[k+1] > series[k] + tol over the tail
std::size_t monotone_violations(const std::vector<double>& series, std::size_t first, double tol);

// ---- SRB local analysis

std::array<double, 6> local_equilibrium_srb(const KineticsSRB& p, double anchor);

enum class Verdict { NotAsymptoticallyStable, HyperbolicStable, Unstable };
const char* to_string(Verdict v);

struct JacobianReport {
  std::array<double, 6> equilibrium{};
  Matrix6d J;
  Spectrum6 xi{};
  Spectrum6 xi_oracle{};
  double max_mismatch = 0.0;
  Verdict verdict = Verdict::NotAsymptoticallyStable;
  double J52 = 0.0;
};
JacobianReport local_jacobian_srb(const KineticsSRB& p, double XE_star, double XA_star,
                                  const std::array<double, 6>& eq);

Spectrum6 eig6_oracle(const Matrix6c& M);
// max distance under the best of the 720 pairings
double spectrum_distance(const Spectrum6& a, const Spectrum6& b);
// eigenvalues of [[a, b], [c, d]]
std::array<cdouble, 2> eig2(cdouble a, cdouble b, cdouble c, cdouble d);

struct SrbSteadyProfiles {
  Grid grid;
  double L_star = 1.0;
  std::vector<double> XE, XA, fPo;
};

struct DispersionCoeffs {
  std::array<double, 6> D{}, B{};
  std::array<double, 9> a{};  // a[1]..a[8]
};
DispersionCoeffs dispersion_coeffs(std::size_t z_index, const SrbSteadyProfiles& prof,
                                   const KineticsSRB& p, const std::array<double, 6>& eq);

struct DispersionRow {
  double omega = 0.0;
  std::size_t z_index = 0;
  double z = 0.0;
  Matrix6c M;
  Spectrum6 eta{};
  Spectrum6 eta_oracle{};
  double max_mismatch = 0.0;
};
DispersionRow dispersion_matrix_srb(double omega, std::size_t z_index,
                                    const SrbSteadyProfiles& prof, const KineticsSRB& p,
                                    const std::array<double, 6>& eq);

struct StabilityVerdict {
  bool stable = false;
  bool ksp_condition = false;
  bool re_eta5_neg = true, re_eta6_neg = true, diag_nonpos = true;
  std::optional<std::size_t> row;  // first violating row
  int mode = 0;                    // 1-based eta index of the violation, 0 = ksp gate
  std::string reason;
};
StabilityVerdict stability_verdict(const std::vector<DispersionRow>& rows, const KineticsSRB& p,
                                   const std::array<double, 6>& eq);

struct DispersionReport {
  std::vector<double> omega_grid;
  std::vector<DispersionRow> rows;  // omega-major, z-minor
  StabilityVerdict verdict;
};
DispersionReport dispersion_sweep(const std::vector<double>& omega_grid,
                                  const SrbSteadyProfiles& prof, const KineticsSRB& p,
                                  const std::array<double, 6>& eq, std::size_t jobs = 1);

// solutions of the linearized steady system, order E, A, O, C, An, Cat
std::array<std::vector<double>, 6> linearized_steady_solve_srb(
    const SrbSteadyProfiles& prof, const KineticsSRB& p, const std::array<double, 6>& eq,
    const std::array<double, 6>& boundary);

}  // namespace biofilm
