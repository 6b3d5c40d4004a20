#include "biofilm/stability.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "biofilm/error.hpp"
#include "biofilm/numerics.hpp"
#include "biofilm/parallel.hpp"
#include "biofilm/steady.hpp"

namespace biofilm {

double energy_E_profiles(const std::vector<std::vector<double>>& C,
                         const std::vector<std::vector<double>>& C_star, double h) {
  if (C.size() != C_star.size()) throw DomainError("energy: substrate count mismatch");
  double e = 0.0;
  for (std::size_t j = 0; j < C.size(); ++j) {
    if (C[j].size() != C_star[j].size()) throw DomainError("energy: grid mismatch");
    std::vector<double> d(C[j].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (C[j][i] - C_star[j][i]) * (C[j][i] - C_star[j][i]);
    e += trapezoid(d, h);
  }
  return 0.5 * e;
}

double energy_F_profiles(const std::vector<std::vector<double>>& C,
                         const std::vector<std::vector<double>>& C_star, double h) {
  if (C.size() != C_star.size()) throw DomainError("energy: substrate count mismatch");
  double e = 0.0;
  for (std::size_t j = 0; j < C.size(); ++j) {
    if (C[j].size() != C_star[j].size()) throw DomainError("energy: grid mismatch");
    std::vector<double> d(C[j].size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = C[j][i] - C_star[j][i];
    auto g = gradient(d, h);
    for (double& v : g) v *= v;
    e += trapezoid(g, h);
  }
  return 0.5 * e;
}

double energy_E(const FieldState& s, const SteadyState& ss) {
  if (s.grid.n() != ss.grid.n()) throw DomainError("energy: grid mismatch");
  return energy_E_profiles(s.C, ss.C_star, s.grid.h());
}

double energy_F(const FieldState& s, const SteadyState& ss) {
  if (s.grid.n() != ss.grid.n()) throw DomainError("energy: grid mismatch");
  return energy_F_profiles(s.C, ss.C_star, s.grid.h());
}

LinearizedCoeffsWG linearized_coeffs_wg(const SteadyState& ss, double y_star,
                                        const KineticsWG& p) {
  const std::size_t n = ss.grid.n();
  const double ey = std::exp(y_star);
  const auto b = p.betas();
  LinearizedCoeffsWG c;
  for (auto* v : {&c.Q1, &c.Q2, &c.N1, &c.N2, &c.M1, &c.M2, &c.M3}) v->resize(n);
  for (auto& v : c.M3_terms) v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double C1 = ss.C_star[0][i], C2 = ss.C_star[1][i], C3 = ss.C_star[2][i];
    const double X1 = ss.X_star[0][i], X2 = ss.X_star[1][i];
    const double d11 = p.K11 / ((p.K11 + C1) * (p.K11 + C1));
    const double d22 = p.K22 / ((p.K22 + C2) * (p.K22 + C2));
    const double d13 = p.K13 / ((p.K13 + C3) * (p.K13 + C3));
    const double d23 = p.K23 / ((p.K23 + C3) * (p.K23 + C3));
    const double m11 = C1 / (p.K11 + C1), m22 = C2 / (p.K22 + C2);
    const double m13 = C3 / (p.K13 + C3), m23 = C3 / (p.K23 + C3);
    c.Q1[i] = ey * b[0] * d11 * m13 * X1;
    c.Q2[i] = ey * b[0] * m11 * d13 * X1;
    c.N1[i] = ey * b[1] * d22 * m23 * X2;
    c.N2[i] = ey * b[1] * m22 * d23 * X2;
    c.M1[i] = ey * b[2] * d11 * m23 * X2;
    c.M2[i] = ey * b[4] * d22 * m23 * X2 + ey * b[5] * m22 * d23 * X2;
    c.M3_terms[0][i] = ey * b[2] * d11 * m13 * X1;
    c.M3_terms[1][i] = ey * b[4] * m22 * d23 * X2;
    c.M3_terms[2][i] = ey * b[5] * m22 * d23 * X2;
    c.M3[i] = c.M3_terms[0][i] + c.M3_terms[1][i] + c.M3_terms[2][i];
  }
  return c;
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& value, double t_start,
                   double t_end) {
  if (t.size() != value.size()) throw DomainError("decay_fit: series length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_start || t[i] > t_end) continue;
    if (!(value[i] > 0.0))
      throw DomainError("decay_fit: nonpositive sample at t = " + std::to_string(t[i]));
    xs.push_back(t[i]);
    ys.push_back(std::log(value[i]));
  }
  if (xs.size() < 5) throw DomainError("decay_fit: fewer than 5 samples in window");
  const double m = static_cast<double>(xs.size());
  const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
    syy += (ys[i] - ybar) * (ys[i] - ybar);
  }
  if (sxx == 0.0) throw DomainError("decay_fit: window has a single time");
  const double slope = sxy / sxx;
  const double icpt = ybar - slope * xbar;
  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icpt + slope * xs[i]);
    ssr += r * r;
  }
  DecayFit f;
  f.K_amp = std::exp(icpt);
  f.mu_rate = -slope;
  f.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  f.t_start = xs.front();
  f.t_end = xs.back();
  f.samples = xs.size();
  return f;
}

FieldState perturb_steady(const SteadyState& ss, double delta) {
  if (!(delta > -1.0)) throw DomainError("perturbation must exceed -1");
  FieldState s = steady_to_state(ss);
  s.y += std::log1p(delta);
  for (auto& c : s.C)
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] *= 1.0 - delta * std::cos(0.5 * std::numbers::pi * s.grid.x(i));
  return s;
}

std::size_t monotone_violations(const std::vector<double>& series, std::size_t first, double tol) {
  std::size_t v = 0;
  for (std::size_t k = first; k + 1 < series.size(); ++k)
    if (series[k + 1] > series[k] + tol) ++v;
  return v;
}

PerturbationRun wg_perturbation_run(const SteadyState& ss, const WgSetup& setup,
                                    const TimeStepConfig& cfg, double delta,
                                    double window_fraction, double transient_fraction) {
  PerturbationRun run;
  run.L_star = ss.L_star;
  const FieldState init = perturb_steady(ss, delta);
  run.traj = simulate(init, cfg, setup, &ss.C_star);
  if (run.traj.aborted) throw NumericalAbort("perturbation run aborted: " + run.traj.abort_reason);
  std::vector<double> E, F;
  for (const auto& d : run.traj.diagnostics) {
    run.t.push_back(d.t);
    run.dev.push_back(std::abs(d.L - ss.L_star));
    E.push_back(d.E);
    F.push_back(d.F);
    if (std::abs(d.ydot) > d.ydot_bound * (1.0 + 1e-12)) run.ydot_bound_ok = false;
  }
  const double t0 = run.t.front(), t1 = run.t.back();
  run.fit = decay_fit(run.t, run.dev, t1 - window_fraction * (t1 - t0), t1);
  const auto first = static_cast<std::size_t>(transient_fraction * static_cast<double>(E.size()));
  const double etol = 1e-13 * (*std::max_element(E.begin(), E.end()) + 1e-300);
  const double ftol = 1e-13 * (*std::max_element(F.begin(), F.end()) + 1e-300);
  run.E_violations = monotone_violations(E, first, etol);
  run.F_violations = monotone_violations(F, first, ftol);
  run.ydot_initial = run.traj.diagnostics.front().ydot;
  run.ydot_final = run.traj.diagnostics.back().ydot;
  return run;
}

std::array<double, 6> local_equilibrium_srb(const KineticsSRB& p, double anchor) {
  if (!(anchor > 0.0)) throw DomainError("anchor S_An* must be positive");
  return {0.0, 0.0, p.KO / 2.0, 0.0, anchor, p.Ksp / anchor};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NotAsymptoticallyStable: return "NotAsymptoticallyStable";
    case Verdict::HyperbolicStable: return "HyperbolicStable";
    case Verdict::Unstable: return "Unstable";
  }
  return "?";
}

std::array<cdouble, 2> eig2(cdouble a, cdouble b, cdouble c, cdouble d) {
  const cdouble half_tr = 0.5 * (a + d);
  const cdouble root = 0.5 * std::sqrt((a - d) * (a - d) + 4.0 * b * c);
  return {half_tr + root, half_tr - root};
}

Spectrum6 eig6_oracle(const Matrix6c& M) {
  if (!M.allFinite()) throw DomainError("eig6_oracle: non-finite entry");
  Eigen::ComplexEigenSolver<Matrix6c> es(M, false);
  if (es.info() != Eigen::Success) throw SolverError("eig6_oracle: QR iteration did not converge");
  Spectrum6 out;
  for (int i = 0; i < 6; ++i) out[i] = es.eigenvalues()[i];
  return out;
}

double spectrum_distance(const Spectrum6& a, const Spectrum6& b) {
  std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
  double best = 1e300;
  do {
    double worst = 0.0;
    for (int i = 0; i < 6 && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

JacobianReport local_jacobian_srb(const KineticsSRB& p, double XE_star, double XA_star,
                                  const std::array<double, 6>& eq) {
  if (!(eq[sAn] > 0.0 && eq[sCat] > 0.0)) throw DomainError("equilibrium needs S_An*, S_Cat* > 0");
  const double SAn = eq[sAn], SCat = eq[sCat];
  const double den = p.KA * (2.0 * p.KI + p.KO);
  JacobianReport r;
  r.equilibrium = eq;
  r.J.setZero();
  auto& J = r.J;
  J(0, 0) = -p.muE / p.KE * XE_star;
  J(1, 0) = J(0, 0);
  J(1, 1) = -p.muA * 8.0 * p.KI * XA_star / (3.0 * den);
  J(2, 0) = -p.muE * (1.0 - p.YE) / (6.0 * p.YE * p.KE) * XE_star;
  J(2, 1) = -4.0 * p.muA * (1.0 - p.YA) * p.KI / (3.0 * p.YA * den) * XA_star;
  J(3, 1) = -2.0 * p.muA * (1.0 - p.YA) * p.KI / (3.0 * p.YA * den) * XA_star;
  J(4, 1) = p.alpha * XA_star / p.KPr;
  const double gate = 1.0 / (p.Ksp * SCat * SAn) - 1.0;
  J(4, 4) = J(5, 4) = -2.0 * p.k / p.Ksp / SCat * gate;
  J(4, 5) = J(5, 5) = -2.0 * p.k / p.Ksp / SAn * gate;
  r.J52 = J(4, 1);

  const auto blk = eig2(J(4, 4), J(4, 5), J(5, 4), J(5, 5));
  r.xi = {cdouble(J(0, 0)), cdouble(J(1, 1)), 0.0, 0.0, blk[0], blk[1]};
  r.xi_oracle = eig6_oracle(J.cast<cdouble>());
  r.max_mismatch = spectrum_distance(r.xi, r.xi_oracle);
  if (r.max_mismatch > 1e-10 * std::max(1.0, J.norm()))
    throw SolverError("Jacobian spectrum: closed form and oracle disagree");

  const double tol = 1e-12 * std::max(1.0, J.norm());
  bool pos = false, zero = false;
  for (const auto& x : r.xi) {
    if (x.real() > tol) pos = true;
    if (std::abs(x) <= tol) zero = true;
  }
  r.verdict = pos ? Verdict::Unstable : (zero ? Verdict::NotAsymptoticallyStable : Verdict::HyperbolicStable);
  return r;
}

DispersionCoeffs dispersion_coeffs(std::size_t z_index, const SrbSteadyProfiles& prof,
                                   const KineticsSRB& p, const std::array<double, 6>& eq) {
  const std::size_t n = prof.grid.n();
  if (z_index >= n) throw DomainError("z index outside grid");
  if (prof.XE.size() != n || prof.XA.size() != n || prof.fPo.size() != n)
    throw DomainError("steady SRB profiles do not match grid");
  DispersionCoeffs c;
  const double h = prof.grid.h();
  for (int j = 0; j < 6; ++j) {
    std::vector<double> Dj(n);
    for (std::size_t i = 0; i < n; ++i) Dj[i] = diffusion_coeff(prof.fPo[i], p.D0[j]);
    c.D[j] = Dj[z_index];
    double dx;
    if (z_index == 0)
      dx = (-3.0 * Dj[0] + 4.0 * Dj[1] - Dj[2]) / (2.0 * h);
    else if (z_index == n - 1)
      dx = (3.0 * Dj[n - 1] - 4.0 * Dj[n - 2] + Dj[n - 3]) / (2.0 * h);
    else
      dx = (Dj[z_index + 1] - Dj[z_index - 1]) / (2.0 * h);
    c.B[j] = dx / prof.L_star;
  }
  const double XE = prof.XE[z_index], XA = prof.XA[z_index];
  const double SAn = eq[sAn], SCat = eq[sCat];
  const double den = p.KA * (2.0 * p.KI + p.KO);
  auto& a = c.a;
  a[1] = p.muE / (p.YE * p.KE) * XE;
  a[2] = 8.0 * p.muA * p.KI / (3.0 * den) * XA;
  a[3] = p.a3_consistent ? p.muE * (1.0 - p.YE) / (6.0 * p.YE * p.KE) * XE : a[1] / 6.0;
  a[4] = 4.0 / 3.0 * p.muA * (1.0 - p.YA) / p.YA * p.KI / den * XA;
  a[5] = 0.75 * a[4];
  const double gate = 1.0 / (p.Ksp * SAn * SCat) - 1.0;
  a[6] = 2.0 * p.k / SCat * gate;
  a[7] = 2.0 * p.k / SAn * gate;
  a[8] = p.alpha * XA / p.KPr;
  return c;
}

DispersionRow dispersion_matrix_srb(double omega, std::size_t z_index,
                                    const SrbSteadyProfiles& prof, const KineticsSRB& p,
                                    const std::array<double, 6>& eq) {
  const auto c = dispersion_coeffs(z_index, prof, p, eq);
  const cdouble I(0.0, 1.0);
  auto diag = [&](int j) { return -c.D[j] * omega * omega + I * c.B[j] * omega; };
  DispersionRow row;
  row.omega = omega;
  row.z_index = z_index;
  row.z = prof.grid.x(z_index) * prof.L_star;
  auto& M = row.M;
  M.setZero();
  M(0, 0) = diag(sE) - c.a[1];
  M(1, 0) = -c.a[1];
  M(1, 1) = diag(sA) - c.a[2];
  M(2, 0) = -c.a[3];
  M(2, 1) = -c.a[4];
  M(2, 2) = diag(sO);
  M(3, 1) = -c.a[5];
  M(3, 3) = diag(sC);
  M(4, 1) = c.a[8];
  M(4, 4) = diag(sAn) - c.a[6];
  M(4, 5) = -c.a[7];
  M(5, 4) = -c.a[6];
  M(5, 5) = diag(sCat) - c.a[7];
  const auto blk = eig2(M(4, 4), M(4, 5), M(5, 4), M(5, 5));
  row.eta = {M(0, 0), M(1, 1), M(2, 2), M(3, 3), blk[0], blk[1]};
  row.eta_oracle = eig6_oracle(M);
  row.max_mismatch = spectrum_distance(row.eta, row.eta_oracle);
  if (row.max_mismatch > 1e-10 * std::max(1.0, M.norm()))
    throw SolverError("dispersion spectrum: closed form and oracle disagree");
  return row;
}

StabilityVerdict stability_verdict(const std::vector<DispersionRow>& rows, const KineticsSRB& p,
                                   const std::array<double, 6>& eq) {
  if (rows.empty()) throw DomainError("stability_verdict: empty grid");
  StabilityVerdict v;
  v.ksp_condition = 1.0 > p.Ksp * eq[sAn] * eq[sCat];
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& e = rows[r].eta;
    for (int i = 0; i < 6; ++i) {
      const bool bad = i < 4 ? e[i].real() > 0.0 : !(e[i].real() < 0.0);
      if (!bad) continue;
      if (i < 4) v.diag_nonpos = false;
      if (i == 4) v.re_eta5_neg = false;
      if (i == 5) v.re_eta6_neg = false;
      if (!v.row) {
        v.row = r;
        v.mode = i + 1;
      }
    }
  }
  v.stable = v.ksp_condition && v.re_eta5_neg && v.re_eta6_neg && v.diag_nonpos;
  if (!v.ksp_condition) {
    v.reason = "ksp_condition violated: Ksp*S_An*S_Cat >= 1";
    v.mode = 0;
    v.row.reset();
  } else if (v.row) {
    const auto& rr = rows[*v.row];
    v.reason = "Re eta" + std::to_string(v.mode) + " not negative at omega=" +
               std::to_string(rr.omega) + " z_index=" + std::to_string(rr.z_index);
  } else {
    v.reason = "all conditions hold";
  }
  return v;
}

DispersionReport dispersion_sweep(const std::vector<double>& omega_grid,
                                  const SrbSteadyProfiles& prof, const KineticsSRB& p,
                                  const std::array<double, 6>& eq, std::size_t jobs) {
  if (omega_grid.empty()) throw DomainError("empty omega grid");
  const std::size_t nz = prof.grid.n();
  DispersionReport rep;
  rep.omega_grid = omega_grid;
  rep.rows.resize(omega_grid.size() * nz);
  parallel_for(omega_grid.size(), jobs, [&](std::size_t k) {
    for (std::size_t z = 0; z < nz; ++z)
      rep.rows[k * nz + z] = dispersion_matrix_srb(omega_grid[k], z, prof, p, eq);
  });
  rep.verdict = stability_verdict(rep.rows, p, eq);
  return rep;
}

std::array<std::vector<double>, 6> linearized_steady_solve_srb(
    const SrbSteadyProfiles& prof, const KineticsSRB& p, const std::array<double, 6>& eq,
    const std::array<double, 6>& boundary) {
  const Grid& g = prof.grid;
  const std::size_t n = g.n();
  const double L = prof.L_star;
  std::vector<DispersionCoeffs> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = dispersion_coeffs(i, prof, p, eq);
  auto field = [&](auto fn) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = fn(i);
    return v;
  };
  // on x = z/L: -(D/L^2) s'' - (B/L) s' + sigma s = f
  auto Dx = [&](int j) { return field([&](std::size_t i) { return c[i].D[j] / (L * L); }); };
  auto Bx = [&](int j) { return field([&](std::size_t i) { return c[i].B[j] / L; }); };
  auto a = [&](int k) { return field([&](std::size_t i) { return c[i].a[k]; }); };
  const std::vector<double> zero(n, 0.0);

  std::array<std::vector<double>, 6> S;
  S[sE] = linear_bvp_solve(g, Dx(sE), Bx(sE), a(1), zero, boundary[sE]);
  const auto a1 = a(1), a3 = a(3), a4 = a(4), a5 = a(5), a8 = a(8);
  S[sA] = linear_bvp_solve(g, Dx(sA), Bx(sA), a(2),
                           field([&](std::size_t i) { return -a1[i] * S[sE][i]; }), boundary[sA]);
  S[sO] = linear_bvp_solve(g, Dx(sO), Bx(sO), zero,
                           field([&](std::size_t i) { return -a3[i] * S[sE][i] - a4[i] * S[sA][i]; }),
                           boundary[sO]);
  S[sC] = linear_bvp_solve(g, Dx(sC), Bx(sC), zero,
                           field([&](std::size_t i) { return -a5[i] * S[sA][i]; }), boundary[sC]);

  // An/Cat pair: unknowns interleaved (An_i, Cat_i)
  const auto DAn = Dx(sAn), BAn = Bx(sAn), DCat = Dx(sCat), BCat = Bx(sCat);
  const auto a6 = a(6), a7 = a(7);
  const double h = g.h(), h2 = h * h;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * n);
  auto add_row = [&](std::size_t i, int comp, const std::vector<double>& D,
                     const std::vector<double>& B, double f) {
    const int row = static_cast<int>(2 * i) + comp;
    if (i == n - 1) {
      trip.emplace_back(row, row, 1.0);
      rhs[row] = comp == 0 ? boundary[sAn] : boundary[sCat];
      return;
    }
    if (i == 0) {
      trip.emplace_back(row, comp, 2.0 * D[0] / h2);
      trip.emplace_back(row, 2 + comp, -2.0 * D[0] / h2);
    } else {
      trip.emplace_back(row, static_cast<int>(2 * (i - 1)) + comp, -D[i] / h2 + B[i] / (2.0 * h));
      trip.emplace_back(row, row, 2.0 * D[i] / h2);
      trip.emplace_back(row, static_cast<int>(2 * (i + 1)) + comp, -D[i] / h2 - B[i] / (2.0 * h));
    }
    trip.emplace_back(row, static_cast<int>(2 * i), a6[i]);
    trip.emplace_back(row, static_cast<int>(2 * i) + 1, a7[i]);
    rhs[row] = f;
  };
  for (std::size_t i = 0; i < n; ++i) {
    add_row(i, 0, DAn, BAn, a8[i] * S[sA][i]);
    add_row(i, 1, DCat, BCat, 0.0);
  }
  Eigen::SparseMatrix<double> A(2 * n, 2 * n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SolverError("coupled An/Cat system is singular");
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw SolverError("coupled An/Cat solve failed");
  S[sAn].resize(n);
  S[sCat].resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    S[sAn][i] = sol[2 * i];
    S[sCat][i] = sol[2 * i + 1];
  }
  return S;
}

}  // namespace biofilm
