#include "biofilm/steady.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "biofilm/error.hpp"
#include "biofilm/numerics.hpp"

namespace biofilm {

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const Profiles& a, const Profiles& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, max_abs_diff(a[j], b[j]));
  return m;
}

std::array<double, 3> H_at(const Profiles& X, std::size_t i, double S1, double S2, double S3,
                           const KineticsWG& p) {
  return substrate_rhs_wg(X[0][i], X[1][i], {std::max(S1, 0.0), std::max(S2, 0.0),
                                              std::max(S3, 0.0)}, p);
}

void check_inputs(const Grid& g, const Profiles& X, double L) {
  if (!(L > 0.0)) throw DomainError("thickness must be positive");
  if (X.size() < 2) throw DomainError("need X1 and X2 profiles");
  for (std::size_t k = 0; k < 2; ++k) {
    if (X[k].size() != g.n()) throw DomainError("biomass profile does not match grid");
    for (double v : X[k])
      if (!(v >= 0.0)) throw DomainError("biomass profile must be nonnegative");
  }
}

// L^2 sup |dH_j/dC_j| over the box, from |d/ds s/(K+s)| <= 1/K
std::array<double, 3> monotone_shifts(const Profiles& X, double L, const KineticsWG& p) {
  const auto b = p.betas();
  const double L2 = L * L;
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  for (std::size_t i = 0; i < X[0].size(); ++i) {
    k1 = std::max(k1, std::abs(b[0]) * X[0][i] / p.K11);
    k2 = std::max(k2, std::abs(b[1]) * X[1][i] / p.K22);
    k3 = std::max(k3, (std::abs(b[2]) + std::abs(b[3])) * X[0][i] / p.K13 +
                          (std::abs(b[4]) + std::abs(b[5])) * X[1][i] / p.K23);
  }
  return {L2 * k1, L2 * k2, L2 * k3};
}

}  // namespace

MonotoneResult monotone_elliptic_solve(const Grid& g, const Profiles& X, double L,
                                       const KineticsWG& p, const std::array<double, 3>& Phi,
                                       const MonotoneOptions& opt) {
  check_inputs(g, X, L);
  for (double v : Phi)
    if (!(v >= 0.0)) throw DomainError("boundary values must be nonnegative");
  const std::size_t n = g.n();
  const double L2 = L * L;
  const auto K = monotone_shifts(X, L, p);
  const auto b = p.betas();
  // cross dependence: true when H_j increases with the other argument
  const bool h1_inc_c3 = b[0] >= 0.0;
  const bool h2_inc_c3 = b[1] >= 0.0;
  const bool h3_inc_c1 = b[2] >= 0.0;
  const bool h3_inc_c2 = -b[4] >= 0.0;

  const double rho3 = opt.rho_c3.value_or(Phi[2]);
  if (rho3 < Phi[2]) throw DomainError("rho_c3 must be >= Phi_3");
  Profiles up = {std::vector<double>(n, Phi[0]), std::vector<double>(n, Phi[1]),
                 std::vector<double>(n, rho3)};
  Profiles lo(3, std::vector<double>(n, 0.0));

  MonotoneResult res;
  auto& rep = res.report;
  const double scale = std::max({Phi[0], Phi[1], rho3, 1.0});
  const double slack = 1e-12 * scale;

  // residuals of the starting pair: -u'' >= L^2 H for upper, <= for lower (constants)
  for (std::size_t i = 0; i < n; ++i) {
    const auto Hu1 = H_at(X, i, up[0][i], 0.0, h1_inc_c3 ? up[2][i] : lo[2][i], p);
    const auto Hu2 = H_at(X, i, 0.0, up[1][i], h2_inc_c3 ? up[2][i] : lo[2][i], p);
    const auto Hu3 = H_at(X, i, h3_inc_c1 ? up[0][i] : lo[0][i], h3_inc_c2 ? up[1][i] : lo[1][i],
                          up[2][i], p);
    if (Hu1[0] > slack || Hu2[1] > slack || Hu3[2] > slack) rep.initial_pair_ok = false;
    const auto Hl1 = H_at(X, i, 0.0, 0.0, h1_inc_c3 ? lo[2][i] : up[2][i], p);
    const auto Hl2 = H_at(X, i, 0.0, 0.0, h2_inc_c3 ? lo[2][i] : up[2][i], p);
    const auto Hl3 = H_at(X, i, h3_inc_c1 ? lo[0][i] : up[0][i], h3_inc_c2 ? lo[1][i] : up[1][i],
                          0.0, p);
    if (Hl1[0] < -slack || Hl2[1] < -slack || Hl3[2] < -slack) rep.initial_pair_ok = false;
  }

  const std::vector<double> D(n, 1.0), B(n, 0.0);
  std::array<std::vector<double>, 3> sigma;
  for (int j = 0; j < 3; ++j) sigma[j].assign(n, K[j]);
  std::vector<double> f(n);

  auto sweep = [&](const Profiles& own, const Profiles& other) {
    // own: the sequence being advanced; other: the companion sequence
    auto pick = [&](bool increasing, std::size_t j, std::size_t i) {
      return increasing ? own[j][i] : other[j][i];
    };
    Profiles next(3);
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        double S[3];
        S[j] = own[j][i];
        if (j == 0) {
          S[1] = own[1][i];
          S[2] = pick(h1_inc_c3, 2, i);
        } else if (j == 1) {
          S[0] = own[0][i];
          S[2] = pick(h2_inc_c3, 2, i);
        } else {
          S[0] = pick(h3_inc_c1, 0, i);
          S[1] = pick(h3_inc_c2, 1, i);
        }
        const auto H = H_at(X, i, S[0], S[1], S[2], p);
        f[i] = K[j] * own[j][i] + L2 * H[j];
      }
      next[j] = linear_bvp_solve(g, D, B, sigma[j], f, Phi[j]);
    }
    return next;
  };

  for (std::size_t k = 0; k < opt.max_sweeps; ++k) {
    Profiles up_next = sweep(up, lo);
    Profiles lo_next = sweep(lo, up);
    double gap = 0.0, umax = -1e300, lmin = 1e300;
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        if (up_next[j][i] > up[j][i] + slack) ++rep.monotone_violations;
        if (lo_next[j][i] < lo[j][i] - slack) ++rep.monotone_violations;
        if (lo_next[j][i] > up_next[j][i] + slack) ++rep.order_violations;
        gap = std::max(gap, std::abs(up_next[j][i] - lo_next[j][i]));
        umax = std::max(umax, up_next[j][i]);
        lmin = std::min(lmin, lo_next[j][i]);
      }
    up = std::move(up_next);
    lo = std::move(lo_next);
    rep.upper_max.push_back(umax);
    rep.lower_min.push_back(lmin);
    rep.gap_trace.push_back(gap);
    if (opt.keep_profiles) {
      rep.upper_seq.push_back(up);
      rep.lower_seq.push_back(lo);
    }
    rep.sweeps = k + 1;
    rep.gap = gap;
    if (gap < opt.tol) {
      rep.converged = true;
      break;
    }
  }
  res.C.resize(3);
  for (std::size_t j = 0; j < 3; ++j) {
    res.C[j].resize(n);
    for (std::size_t i = 0; i < n; ++i) res.C[j][i] = 0.5 * (up[j][i] + lo[j][i]);
  }
  if (!rep.converged)
    throw SolverError("monotone iteration did not close the bracket: gap " +
                      std::to_string(rep.gap) + " after " + std::to_string(rep.sweeps) +
                      " sweeps");
  return res;
}

std::vector<double> greens_apply(const Grid& g, const std::vector<double>& f, double Phi) {
  const std::size_t n = g.n();
  const double h = g.h();
  // c(x) = Phi + (1-x) int_0^x f + int_x^1 (1-xi) f(xi) dxi
  std::vector<double> left(n, 0.0), right(n, 0.0), c(n);
  for (std::size_t i = 1; i < n; ++i) left[i] = left[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  for (std::size_t i = n - 1; i-- > 0;)
    right[i] = right[i + 1] + 0.5 * h * ((1.0 - g.x(i)) * f[i] + (1.0 - g.x(i + 1)) * f[i + 1]);
  for (std::size_t i = 0; i < n; ++i) c[i] = Phi + (1.0 - g.x(i)) * left[i] + right[i];
  return c;
}

Profiles greens_solve(const Grid& g, const Profiles& X, double L, const KineticsWG& p,
                      const std::array<double, 3>& Phi, double tol, std::size_t max_iter) {
  check_inputs(g, X, L);
  const std::size_t n = g.n();
  const double L2 = L * L;
  const auto K = monotone_shifts(X, L, p);
  const double lambda0 = std::numbers::pi * std::numbers::pi / 4.0;
  const double ell = std::max({K[0], K[1], K[2]}) / lambda0;
  const double omega = 1.0 / (1.0 + ell);
  Profiles C = {std::vector<double>(n, Phi[0]), std::vector<double>(n, Phi[1]),
                std::vector<double>(n, Phi[2])};
  std::array<std::vector<double>, 3> f;
  for (auto& v : f) v.resize(n);
  double first = -1.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto H = H_at(X, i, C[0][i], C[1][i], C[2][i], p);
      for (int j = 0; j < 3; ++j) f[j][i] = L2 * H[j];
    }
    double diff = 0.0;
    Profiles T(3);
    for (int j = 0; j < 3; ++j) {
      T[j] = greens_apply(g, f[j], Phi[j]);
      diff = std::max(diff, max_abs_diff(T[j], C[j]));
    }
    if (diff < tol) return T;
    if (first < 0.0) first = diff;
    if (!std::isfinite(diff) || diff > 1e3 * std::max(first, 1e-300))
      throw SolverError("Picard iteration diverges; the multiplicity regime may apply");
    for (int j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < n; ++i) C[j][i] += omega * (T[j][i] - C[j][i]);
  }
  throw SolverError("Picard iteration did not converge");
}

std::array<double, 3> interface_root(const RateCoeffs& r, int* branch) {
  int br = 0;
  std::array<double, 3> X{0.0, 0.0, 1.0};
  const double scale = std::max({std::abs(r.A1), std::abs(r.A2), 1e-300});
  if (r.A1 <= 0.0 && r.A2 <= 0.0) {
    br = 0;
  } else if (std::abs(r.A1 - r.A2) <= 1e-14 * scale) {
    const double v = r.A1 / (r.A + r.B);
    X = {v, v, 1.0 - 2.0 * v};
    br = 3;
  } else if (r.A1 > r.A2) {
    X = {r.A1 / r.A, 0.0, 1.0 - r.A1 / r.A};
    br = 1;
  } else {
    X = {0.0, r.A2 / r.B, 1.0 - r.A2 / r.B};
    br = 2;
  }
  if (branch) *branch = br;
  return X;
}

BiomassProfile biomass_profile_solve(const Grid& g, const Profiles& C, double L,
                                     const KineticsWG& p) {
  if (!(L > 0.0)) throw DomainError("thickness must be positive");
  const std::size_t n = g.n();
  const double h = g.h();
  const double L2 = L * L;
  std::vector<RateCoeffs> rc(n);
  for (std::size_t i = 0; i < n; ++i)
    rc[i] = rate_coeffs_wg(std::max(C[0][i], 0.0), std::max(C[1][i], 0.0),
                           std::max(C[2][i], 0.0), p);

  BiomassProfile out;
  out.X.assign(3, std::vector<double>(n, 0.0));
  auto& X1 = out.X[0];
  auto& X2 = out.X[1];
  auto top = interface_root(rc[n - 1], &out.interface_branch);
  X1[n - 1] = top[0];
  X2[n - 1] = top[1];

  auto Gof = [&](std::size_t i, double a, double b) { return L2 * (rc[i].A * a + rc[i].B * b); };

  // march from the interface: v_j (X_{j+1} - X_j)/h = L^2 F(X_j), v_j = -int_{x_j}^1 G
  double I_next = 0.0;
  double G_next = Gof(n - 1, X1[n - 1], X2[n - 1]);
  double resid = 0.0;
  for (std::size_t j = n - 1; j-- > 0;) {
    const auto& r = rc[j];
    const double n1 = X1[j + 1], n2 = X2[j + 1];
    double a = n1, b = n2;
    auto residual = [&](double a_, double b_, double& R1, double& R2, double& w) {
      w = -(I_next + 0.5 * h * (Gof(j, a_, b_) + G_next));
      const double gsum = r.A * a_ + r.B * b_;
      R1 = w * (n1 - a_) / h - L2 * a_ * (r.A1 - gsum);
      R2 = w * (n2 - b_) / h - L2 * b_ * (r.A2 - gsum);
    };
    double R1, R2, w;
    residual(a, b, R1, R2, w);
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      const double rn = std::max(std::abs(R1), std::abs(R2));
      if (rn <= 1e-15 * (1.0 + L2 * (std::abs(r.A) + std::abs(r.B)))) {
        ok = true;
        break;
      }
      const double dwa = -0.5 * h * L2 * r.A, dwb = -0.5 * h * L2 * r.B;
      const double gsum = r.A * a + r.B * b;
      const double J11 = dwa * (n1 - a) / h - w / h - L2 * (r.A1 - gsum - r.A * a);
      const double J12 = dwb * (n1 - a) / h + L2 * a * r.B;
      const double J21 = dwa * (n2 - b) / h + L2 * b * r.A;
      const double J22 = dwb * (n2 - b) / h - w / h - L2 * (r.A2 - gsum - r.B * b);
      const double det = J11 * J22 - J12 * J21;
      if (det == 0.0 || !std::isfinite(det)) break;
      const double da = -(J22 * R1 - J12 * R2) / det;
      const double db = -(-J21 * R1 + J11 * R2) / det;
      double t = 1.0;
      double an = a + da, bn = b + db;
      // stay on the simplex
      for (int k = 0; k < 60 && (an < 0.0 || bn < 0.0 || an + bn > 1.0); ++k) {
        t *= 0.5;
        an = a + t * da;
        bn = b + t * db;
      }
      an = std::max(an, 0.0);
      bn = std::max(bn, 0.0);
      const double step_size = std::max(std::abs(an - a), std::abs(bn - b));
      a = an;
      b = bn;
      residual(a, b, R1, R2, w);
      if (step_size <= 1e-16) {
        ok = std::max(std::abs(R1), std::abs(R2)) <= 1e-10;
        break;
      }
    }
    if (!ok) {
      const double rn = std::max(std::abs(R1), std::abs(R2));
      if (!(rn <= 1e-10))
        throw SolverError("biomass march: Newton failed at node " + std::to_string(j));
    }
    resid = std::max(resid, std::max(std::abs(R1), std::abs(R2)));
    X1[j] = a;
    X2[j] = b;
    const double Gj = Gof(j, a, b);
    I_next += 0.5 * h * (Gj + G_next);
    G_next = Gj;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (X1[i] < 0.0 || X2[i] < 0.0 || X1[i] + X2[i] > 1.0 + 1e-12)
      throw SolverError("biomass profile left the simplex at node " + std::to_string(i));
    out.X[2][i] = std::max(0.0, 1.0 - X1[i] - X2[i]);
  }
  const auto& rt = rc[n - 1];
  const double gt = rt.A * X1[n - 1] + rt.B * X2[n - 1];
  resid = std::max({resid, std::abs(X1[n - 1] * (rt.A1 - gt)), std::abs(X2[n - 1] * (rt.A2 - gt))});
  out.residual = resid;

  std::vector<double> G(n);
  for (std::size_t i = 0; i < n; ++i) G[i] = Gof(i, X1[i], X2[i]);
  out.V = velocity_profile_from_integrand(g, G).V;
  out.u.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.u[i] = out.V[i] / L;
  out.u_interface = out.u.back();
  return out;
}

namespace {

double elliptic_defect(const Grid& g, const Profiles& C, const Profiles& X, double L,
                       const KineticsWG& p) {
  const std::size_t n = g.n();
  const double h2 = g.h() * g.h(), L2 = L * L;
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto H = H_at(X, i, C[0][i], C[1][i], C[2][i], p);
    for (int j = 0; j < 3; ++j) {
      const double lap = i == 0 ? 2.0 * (C[j][1] - C[j][0]) / h2
                                : (C[j][i + 1] - 2.0 * C[j][i] + C[j][i - 1]) / h2;
      d = std::max(d, std::abs(-lap - L2 * H[j]));
    }
  }
  return d;
}

}  // namespace

double steady_residual(const KineticsWG& p, const std::optional<ReactorParams>& r,
                       const std::array<double, 3>& Phi_fixed, double L, const SteadyOptions& opt,
                       SteadyState* out) {
  p.validate();
  if (r) r->validate(3);
  const Grid g(opt.n);
  const std::size_t n = g.n();
  std::array<double, 3> Phi = Phi_fixed;
  if (r) Phi = {r->Gamma[0], r->Gamma[1], r->Gamma[2]};
  Profiles C = {std::vector<double>(n, Phi[0]), std::vector<double>(n, Phi[1]),
                std::vector<double>(n, Phi[2])};
  BiomassProfile bp = biomass_profile_solve(g, C, L, p);
  MonotoneResult mono;
  double change = 0.0;
  bool converged = false;
  for (std::size_t it = 0; it < opt.max_inner; ++it) {
    mono = monotone_elliptic_solve(g, bp.X, L, p, Phi, opt.monotone);
    BiomassProfile bp_new = biomass_profile_solve(g, mono.C, L, p);
    change = max_abs_diff(bp_new.X, bp.X);
    change = std::max(change, max_abs_diff(mono.C, C));
    if (r) {
      for (int j = 0; j < 3; ++j) {
        const double flux = right_gradient(mono.C[j], g.h()) / L;
        const double target = std::max(0.0, r->Gamma[j] - r->A_surface / r->Q_flow * flux);
        const double next = (1.0 - opt.damping) * Phi[j] + opt.damping * target;
        change = std::max(change, std::abs(next - Phi[j]));
        Phi[j] = next;
      }
    }
    C = mono.C;
    bp = std::move(bp_new);
    if (change < opt.inner_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw SolverError("steady inner fixed point did not converge at L = " + std::to_string(L));
  // final consistent pass at the converged boundary values
  mono = monotone_elliptic_solve(g, bp.X, L, p, Phi, opt.monotone);
  C = mono.C;
  bp = biomass_profile_solve(g, C, L, p);

  if (out) {
    out->grid = g;
    out->L_star = L;
    out->X_star = bp.X;
    out->C_star = C;
    out->u_star = bp.u;
    out->Phi_star = Phi;
    out->bracket = mono.report;
    out->interface_branch = bp.interface_branch;
    out->residuals.clear();
    out->residuals.emplace_back("u_interface", std::abs(bp.u_interface));
    out->residuals.emplace_back("substrate_equation", elliptic_defect(g, C, bp.X, L, p));
    out->residuals.emplace_back("biomass_equation", bp.residual);
    double bulk = 0.0;
    if (r)
      for (int j = 0; j < 3; ++j) {
        const double flux = right_gradient(C[j], g.h()) / L;
        bulk = std::max(bulk, std::abs(Phi[j] - std::max(0.0, r->Gamma[j] -
                                                                  r->A_surface / r->Q_flow * flux)));
      }
    out->residuals.emplace_back("bulk_balance", bulk);
    out->residuals.emplace_back("fixed_point", change);
    // species-wise volume balance int F_i; only k1 = k2 = 0 admits zero
    double mb = 0.0;
    for (int k = 0; k < 3; ++k) {
      std::vector<double> Fk(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 3> Xi{bp.X[0][i], bp.X[1][i], bp.X[2][i]};
        const std::array<double, 3> Si{std::max(C[0][i], 0.0), std::max(C[1][i], 0.0),
                                       std::max(C[2][i], 0.0)};
        Fk[i] = biomass_rhs_wg(Xi, Si, p)[k];
      }
      mb = std::max(mb, std::abs(trapezoid(Fk, g.h())));
    }
    out->mass_balance_defect = mb * L;
  }
  return bp.u_interface;
}

SteadyState steady_thickness_find(const KineticsWG& p, const std::optional<ReactorParams>& r,
                                  const std::array<double, 3>& Phi_fixed, double L_lo, double L_hi,
                                  const SteadyOptions& opt) {
  if (!(L_lo > 0.0 && L_hi > L_lo)) throw DomainError("bracket must satisfy 0 < L_lo < L_hi");
  const double r_lo = steady_residual(p, r, Phi_fixed, L_lo, opt);
  const double r_hi = steady_residual(p, r, Phi_fixed, L_hi, opt);
  SteadyState ss;
  if (std::abs(r_lo) <= opt.tol) {
    steady_residual(p, r, Phi_fixed, L_lo, opt, &ss);
    return ss;
  }
  if (std::abs(r_hi) <= opt.tol) {
    steady_residual(p, r, Phi_fixed, L_hi, opt, &ss);
    return ss;
  }
  if ((r_lo > 0.0) == (r_hi > 0.0))
    throw SolverError("no steady thickness in bracket [" + std::to_string(L_lo) + ", " +
                      std::to_string(L_hi) + "]: u(L) does not change sign");
  double lo = L_lo, hi = L_hi;
  const bool lo_positive = r_lo > 0.0;
  for (std::size_t k = 0; k < opt.max_bisect; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double rm = steady_residual(p, r, Phi_fixed, mid, opt, &ss);
    ss.bisection_steps = k + 1;
    if (std::abs(rm) <= opt.tol || hi - lo <= 4e-16 * hi) return ss;
    if ((rm > 0.0) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  throw SolverError("bisection on L did not reach the tolerance");
}

FieldState steady_to_state(const SteadyState& ss) {
  FieldState s = FieldState::zeros(Model::WG, ss.grid);
  s.y = std::log(ss.L_star);
  s.X = ss.X_star;
  s.C = ss.C_star;
  s.Phi = {ss.Phi_star[0], ss.Phi_star[1], ss.Phi_star[2]};
  return s;
}

MultiplicityQuadratic multiplicity_quadratic(double lambda0, double lambda3, double lambda4,
                                             double lambda5, double lambda6, double gamma,
                                             double C1, double X1, double X2) {
  MultiplicityQuadratic q{};
  const double m = C1 / (C1 + 1.0);
  const double th1 = (m - lambda4 / lambda3) * X1;
  const double th2 = (lambda5 / lambda3 * m - lambda6 / lambda3) * X2;
  q.a = lambda0;
  q.b = (gamma + 1.0) * lambda0 - lambda3 * (th1 - th2);
  q.c = lambda0 * gamma - lambda3 * (th1 * gamma - th2);
  q.Gamma = q.b * q.b - 4.0 * q.a * q.c;
  if (q.Gamma >= 0.0) {
    const double s = std::sqrt(q.Gamma);
    q.delta1 = (-q.b - s) / (2.0 * q.a);
    q.delta2 = (-q.b + s) / (2.0 * q.a);
  } else {
    q.delta1 = q.delta2 = std::nan("");
  }
  q.condition = lambda3 > 0.0 && q.c <= 0.0;
  return q;
}

MultiplicityReport multiplicity_check(const Grid& g, const Profiles& C, const Profiles& X,
                                      double L, const KineticsWG& p) {
  if (!(L > 0.0)) throw DomainError("thickness must be positive");
  MultiplicityReport rep;
  const double q = std::numbers::pi / (2.0 * L);
  rep.lambda0 = q * q;
  const auto rs = rescaled_wg(p);
  const auto& lam = rs.lambda;
  rep.applicable = lam[2] > 0.0;
  const std::size_t n = g.n();
  if (!rep.applicable) return rep;
  rep.condition_holds = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double C1 = std::max(C[0][i], 0.0) / p.K11;
    const auto qd = multiplicity_quadratic(rep.lambda0, lam[2], lam[3], lam[4], lam[5], rs.gamma,
                                           C1, X[0][i], X[1][i]);
    const double m = C1 / (C1 + 1.0);
    rep.theta1.push_back((m - lam[3] / lam[2]) * X[0][i]);
    rep.theta2.push_back((lam[4] / lam[2] * m - lam[5] / lam[2]) * X[1][i]);
    rep.c_coef.push_back(qd.c);
    rep.Gamma.push_back(qd.Gamma);
    rep.delta1.push_back(qd.delta1);
    rep.delta2.push_back(qd.delta2);
    rep.condition_holds = rep.condition_holds && qd.condition;
  }
  rep.possibly_multiple = rep.condition_holds;
  return rep;
}

ZeroDirichletReport zero_dirichlet_branch(const Grid& g, const KineticsWG& p, const Profiles& X) {
  const std::size_t n = g.n();
  ZeroDirichletReport rep;
  rep.C = {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  const auto rs = rescaled_wg(p);
  for (std::size_t i = 0; i < n; ++i) {
    if (rs.gamma * rs.lambda[4] * X[0][i] > rs.lambda[5] * X[1][i]) {
      rep.unique = false;
      rep.violating_node = i;
      break;
    }
  }
  return rep;
}

}  // namespace biofilm
