#include "biofilm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "biofilm/error.hpp"
#include "biofilm/numerics.hpp"
#include "biofilm/stability.hpp"

namespace biofilm {

void ReactorParams::validate(std::size_t n_substrates) const {
  if (!(A_surface > 0.0)) throw ConfigError("A_surface must be > 0");
  if (!(V_bulk > 0.0)) throw ConfigError("V_bulk must be > 0");
  if (!(Q_flow > 0.0)) throw ConfigError("Q_flow must be > 0");
  if (Gamma.size() != n_substrates) throw ConfigError("Gamma needs one value per substrate");
  for (double g : Gamma)
    if (!(g > 0.0)) throw ConfigError("Gamma must be > 0");
}

void TimeStepConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(t_end > 0.0)) throw ConfigError("t_end must be > 0");
  if (!(cfl_max > 0.0 && cfl_max <= 1.0)) throw ConfigError("cfl_max must lie in (0,1]");
  if (snapshot_every == 0) throw ConfigError("snapshot_every must be >= 1");
  if (detach_lambda && !(*detach_lambda >= 0.0)) throw ConfigError("detach_lambda must be >= 0");
}

void validate_state(const FieldState& s) {
  const std::size_t n = s.grid.n();
  const std::size_t nx = s.model == Model::WG ? 3 : 5;
  const std::size_t nc = s.model == Model::WG ? 3 : 6;
  if (s.X.size() != nx || s.C.size() != nc || s.Phi.size() != nc)
    throw DomainError("state has the wrong number of fields for its model");
  for (const auto& f : s.X)
    if (f.size() != n) throw DomainError("biomass field does not match grid");
  for (const auto& f : s.C)
    if (f.size() != n) throw DomainError("substrate field does not match grid");
  if (!std::isfinite(s.y)) throw DomainError("log-thickness is not finite");
}

namespace {

void check_cfl(const VelocityProfile& prof, double dt, double h, double cfl_max) {
  double vmax = 0.0;
  for (double v : prof.v) vmax = std::max(vmax, std::abs(v));
  const double courant = vmax * dt / h;
  if (courant > cfl_max) {
    std::ostringstream os;
    os << "CFL violation: courant " << courant << " > " << cfl_max;
    throw CflViolation(os.str(), courant);
  }
}

// upwind derivative by the sign of v
double upwind(const std::vector<double>& f, const std::vector<double>& v, std::size_t i, double h) {
  if (v[i] > 0.0) return (f[i] - f[i - 1]) / h;
  if (v[i] < 0.0) return (f[i + 1] - f[i]) / h;
  return 0.0;
}

std::array<double, 3> clamped3(const std::vector<std::vector<double>>& C, std::size_t i) {
  return {std::max(C[0][i], 0.0), std::max(C[1][i], 0.0), std::max(C[2][i], 0.0)};
}

void clamp_fields(std::vector<std::vector<double>>& fields, bool enabled, SubstepStats* stats) {
  for (auto& f : fields)
    for (double& v : f) {
      if (stats) stats->min_before_clamp = std::min(stats->min_before_clamp, v);
      if (v < 0.0 && enabled) {
        v = 0.0;
        if (stats) ++stats->clamps;
      }
    }
}

bool all_finite(const FieldState& s) {
  if (!std::isfinite(s.y)) return false;
  for (const auto& f : s.X)
    for (double v : f)
      if (!std::isfinite(v)) return false;
  for (const auto& f : s.C)
    for (double v : f)
      if (!std::isfinite(v)) return false;
  for (double v : s.Phi)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

std::vector<std::vector<double>> hyperbolic_step(const FieldState& s, const VelocityProfile& prof,
                                                 double dt, const KineticsWG& p, double cfl_max) {
  const std::size_t n = s.grid.n();
  const double h = s.grid.h();
  check_cfl(prof, dt, h, cfl_max);
  const double L2 = std::exp(2.0 * s.y);
  auto X = s.X;
  for (std::size_t i = 0; i < n; ++i) {
    const std::array<double, 3> Xi{std::max(s.X[0][i], 0.0), std::max(s.X[1][i], 0.0),
                                   std::max(s.X[2][i], 0.0)};
    const auto F = biomass_rhs_wg(Xi, clamped3(s.C, i), p);
    for (int k = 0; k < 3; ++k)
      X[k][i] = s.X[k][i] - dt * prof.v[i] * upwind(s.X[k], prof.v, i, h) + dt * L2 * F[k];
  }
  return X;
}

ParabolicResult parabolic_step(const FieldState& s, const VelocityProfile& prof, double dt,
                               const WgSetup& setup) {
  const std::size_t n = s.grid.n();
  const double h = s.grid.h();
  const double L = s.L(), L2 = L * L;
  const auto& p = setup.kin;
  const std::array<double, 3> D{p.D1, p.D2, p.D3};
  ParabolicResult out;
  out.Phi = s.Phi;
  if (setup.reactor) {
    const auto& r = *setup.reactor;
    for (int j = 0; j < 3; ++j) {
      // relaxation implicit, interface flux explicit
      const double flux = right_gradient(s.C[j], h) / L;
      const double a = r.A_surface / (D[j] * r.V_bulk);
      const double q = r.Q_flow / (D[j] * r.V_bulk);
      out.Phi[j] = (s.Phi[j] + dt * L2 * (-a * flux + q * r.Gamma[j])) / (1.0 + dt * L2 * q);
    }
  }
  std::vector<std::vector<double>> src(3, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto H = substrate_rhs_wg(std::max(s.X[0][i], 0.0), std::max(s.X[1][i], 0.0),
                                    clamped3(s.C, i), p);
    for (int j = 0; j < 3; ++j) src[j][i] = L2 * H[j];
  }
  out.C.resize(3);
  for (int j = 0; j < 3; ++j)
    out.C[j] = implicit_transport_const(s.grid, s.C[j], 1.0, prof.ydot, dt, src[j], out.Phi[j]);
  return out;
}

FieldState step(const FieldState& s, double dt, const TimeStepConfig& cfg, const WgSetup& setup,
                SubstepStats* stats) {
  const auto prof = velocity_profile(s, setup.kin);
  FieldState next = s;
  next.X = hyperbolic_step(s, prof, dt, setup.kin, cfg.cfl_max);
  next.t = s.t + dt;
  if (!all_finite(next)) return next;  // caller aborts
  clamp_fields(next.X, cfg.clamp_negative, stats);
  auto par = parabolic_step(next, prof, dt, setup);
  next.C = std::move(par.C);
  next.Phi = std::move(par.Phi);
  clamp_fields(next.C, cfg.clamp_negative, stats);
  next.y = s.y + dt * thickness_rate(s, prof, cfg.detach_lambda);
  next.t = s.t + dt;
  const std::size_t n = s.grid.n();
  for (std::size_t i = 0; i < n; ++i) {
    const double sum = next.X[0][i] + next.X[1][i] + next.X[2][i];
    const double drift = std::abs(sum - 1.0);
    if (stats) stats->mass_drift = std::max(stats->mass_drift, drift);
    if (drift > 1e-12 && sum > 0.0) {
      for (int k = 0; k < 3; ++k) next.X[k][i] /= sum;
      if (stats) stats->renormalized = true;
    }
  }
  return next;
}

std::vector<double> srb_face_diffusivity(const FieldState& s, std::size_t substrate,
                                         const KineticsSRB& p, std::size_t* clamps) {
  const std::size_t n = s.grid.n();
  const double L2 = std::exp(2.0 * s.y);
  std::vector<double> node(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = s.X[kPo][i] / p.rho[kPo];
    if (f < 0.0 || f > 1.0) {
      f = std::clamp(f, 0.0, 1.0);
      if (clamps) ++*clamps;
    }
    node[i] = diffusion_coeff(f, p.D0[substrate]);
  }
  std::vector<double> face(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) face[i] = 0.5 * (node[i] + node[i + 1]) / L2;
  return face;
}

FieldState srb_field_update(const FieldState& s, double dt, const TimeStepConfig& cfg,
                            const SrbSetup& setup, const SrbUpdateOptions& opt,
                            SubstepStats* stats) {
  const auto& p = setup.kin;
  const std::size_t n = s.grid.n();
  const double h = s.grid.h();
  const auto prof = velocity_profile(s, p);
  FieldState next = s;

  std::vector<std::array<double, 5>> Xn(n);
  std::vector<std::array<double, 6>> Sn(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 5; ++k) Xn[i][k] = std::max(s.X[k][i], 0.0);
    for (int k = 0; k < 6; ++k) Sn[i][k] = std::max(s.C[k][i], 0.0);
  }

  if (!opt.freeze_biomass) {
    check_cfl(prof, dt, h, cfg.cfl_max);
    for (std::size_t i = 0; i < n; ++i) {
      const auto F = opt.disable_reaction ? std::array<double, 5>{} : biomass_rhs_srb(Xn[i], Sn[i], p);
      double div = 0.0;
      for (int k = 0; k < 5; ++k) div += F[k] / p.rho[k];
      for (int k = 0; k < 5; ++k)
        next.X[k][i] = s.X[k][i] - dt * prof.v[i] * upwind(s.X[k], prof.v, i, h) +
                       dt * (F[k] - Xn[i][k] * div);
    }
    next.t = s.t + dt;
    if (!all_finite(next)) return next;
    clamp_fields(next.X, cfg.clamp_negative, stats);
  }

  const double b = opt.freeze_thickness ? 0.0 : prof.ydot;
  for (std::size_t j = 0; j < 6; ++j) {
    std::vector<double> src(n, 0.0);
    if (!opt.disable_reaction)
      for (std::size_t i = 0; i < n; ++i) src[i] = substrate_rhs_srb(Xn[i], Sn[i], p)[j];
    if (j < opt.extra_source.size() && !opt.extra_source[j].empty())
      for (std::size_t i = 0; i < n; ++i) src[i] += opt.extra_source[j][i];
    std::size_t fclamps = 0;
    const auto face = srb_face_diffusivity(s, j, p, &fclamps);
    if (stats) stats->clamps += fclamps;
    next.C[j] = implicit_transport_var(s.grid, s.C[j], face, b, dt, src, s.Phi[j]);
  }
  clamp_fields(next.C, cfg.clamp_negative, stats);

  if (!opt.freeze_thickness) next.y = s.y + dt * thickness_rate(s, prof, cfg.detach_lambda);
  next.t = s.t + dt;
  return next;
}

double mass_error(const FieldState& s, const KineticsSRB* srb) {
  double err = 0.0;
  for (std::size_t i = 0; i < s.grid.n(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < s.X.size(); ++k) sum += srb ? s.X[k][i] / srb->rho[k] : s.X[k][i];
    err = std::max(err, std::abs(sum - 1.0));
  }
  return err;
}

namespace {

template <class StepFn, class DiagFn>
Trajectory run(const FieldState& init, const TimeStepConfig& cfg, StepFn&& do_step, DiagFn&& diag_fill) {
  cfg.validate();
  validate_state(init);
  Trajectory tr;
  FieldState cur = init;
  StepDiagnostics d0;
  diag_fill(cur, d0);
  d0.t = cur.t;
  d0.L = cur.L();
  tr.diagnostics.push_back(d0);
  tr.times.push_back(cur.t);
  tr.snapshots.push_back(cur);
  const double t_stop = init.t + cfg.t_end;
  std::size_t count = 0;
  while (cur.t < t_stop - 1e-12 * cfg.dt) {
    double dt = std::min(cfg.dt, t_stop - cur.t);
    FieldState next;
    SubstepStats stats;
    int halvings = 0;
    for (;;) {
      try {
        stats = {};
        next = do_step(cur, dt, stats);
        break;
      } catch (const CflViolation&) {
        if (++halvings > 20) throw NumericalAbort("CFL: step rejected 20 times");
        dt *= 0.5;
      }
    }
    if (!all_finite(next)) {
      tr.aborted = true;
      tr.abort_reason = "non-finite value at t = " + std::to_string(next.t);
      break;
    }
    cur = std::move(next);
    StepDiagnostics d;
    d.t = cur.t;
    d.L = cur.L();
    d.clamps = stats.clamps;
    d.min_before_clamp = stats.min_before_clamp;
    d.dt = dt;
    d.renormalized = stats.renormalized;
    diag_fill(cur, d);
    d.mass_err = std::max(d.mass_err, stats.mass_drift);
    tr.diagnostics.push_back(d);
    ++count;
    if (count % cfg.snapshot_every == 0 || cur.t >= t_stop - 1e-12 * cfg.dt) {
      tr.times.push_back(cur.t);
      tr.snapshots.push_back(cur);
    }
    if (cur.L() < cfg.L_floor) {
      tr.aborted = true;
      tr.abort_reason = "thickness fell below floor";
      break;
    }
  }
  if (tr.aborted && tr.times.back() != cur.t && all_finite(cur)) {
    tr.times.push_back(cur.t);
    tr.snapshots.push_back(cur);
  }
  return tr;
}

}  // namespace

Trajectory simulate(const FieldState& init, const TimeStepConfig& cfg, const WgSetup& setup,
                    const std::vector<std::vector<double>>* C_reference) {
  if (init.model != Model::WG) throw DomainError("simulate: WG setup needs a WG state");
  setup.kin.validate();
  if (setup.reactor) setup.reactor->validate(3);
  auto do_step = [&](const FieldState& s, double dt, SubstepStats& st) {
    return step(s, dt, cfg, setup, &st);
  };
  auto diag = [&](const FieldState& s, StepDiagnostics& d) {
    const auto prof = velocity_profile(s, setup.kin);
    d.ydot = thickness_rate(s, prof, cfg.detach_lambda);
    d.mass_err = mass_error(s);
    d.ydot_bound = ydot_bound(s, setup.kin);
    if (C_reference) {
      d.E = energy_E_profiles(s.C, *C_reference, s.grid.h());
      d.F = energy_F_profiles(s.C, *C_reference, s.grid.h());
    } else {
      d.E = std::nan("");
      d.F = std::nan("");
    }
  };
  return run(init, cfg, do_step, diag);
}

Trajectory simulate(const FieldState& init, const TimeStepConfig& cfg, const SrbSetup& setup) {
  if (init.model != Model::SRB) throw DomainError("simulate: SRB setup needs an SRB state");
  setup.kin.validate();
  auto do_step = [&](const FieldState& s, double dt, SubstepStats& st) {
    return srb_field_update(s, dt, cfg, setup, {}, &st);
  };
  auto diag = [&](const FieldState& s, StepDiagnostics& d) {
    const auto prof = velocity_profile(s, setup.kin);
    d.ydot = thickness_rate(s, prof, cfg.detach_lambda);
    d.mass_err = mass_error(s, &setup.kin);
    d.E = std::nan("");
    d.F = std::nan("");
  };
  return run(init, cfg, do_step, diag);
}

}  // namespace biofilm
