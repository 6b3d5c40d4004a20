#include "biofilm/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biofilm/error.hpp"
#include "biofilm/parallel.hpp"
#include "biofilm/stability.hpp"

namespace biofilm {

namespace fs = std::filesystem;

namespace {

const char* const kWgX[] = {"X1", "X2", "X3"};
const char* const kWgC[] = {"C1", "C2", "C3"};
const char* const kSrbX[] = {"XE", "XA", "XI", "XPr", "XPo"};
const char* const kSrbC[] = {"SE", "SA", "SO", "SC", "SAn", "SCat"};

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::string kv(const std::string& key, double v) { return key + "=" + format_double(v) + "\n"; }
std::string kv(const std::string& key, const std::string& v) { return key + "=" + v + "\n"; }
std::string kv_bool(const std::string& key, bool v) { return key + "=" + (v ? "true" : "false") + "\n"; }
std::string kv_size(const std::string& key, std::size_t v) {
  return key + "=" + std::to_string(v) + "\n";
}

std::string snapshots_csv(const Trajectory& tr, const RunConfig& cfg) {
  const bool wg = cfg.model == Model::WG;
  std::ostringstream os;
  os << "t,x";
  for (std::size_t k = 0; k < (wg ? 3u : 5u); ++k) os << ',' << (wg ? kWgX[k] : kSrbX[k]);
  for (std::size_t k = 0; k < (wg ? 3u : 6u); ++k) os << ',' << (wg ? kWgC[k] : kSrbC[k]);
  os << ",V,v\n";
  for (const auto& s : tr.snapshots) {
    const VelocityProfile prof = wg ? velocity_profile(s, cfg.wg) : velocity_profile(s, cfg.srb);
    for (std::size_t i = 0; i < s.grid.n(); ++i) {
      os << format_double(s.t) << ',' << format_double(s.grid.x(i));
      for (const auto& f : s.X) os << ',' << format_double(f[i]);
      for (const auto& f : s.C) os << ',' << format_double(f[i]);
      os << ',' << format_double(prof.V[i]) << ',' << format_double(prof.v[i]) << '\n';
    }
  }
  return os.str();
}

std::string diagnostics_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t,L,ydot,mass_err,E,F,clamps\n";
  for (const auto& d : tr.diagnostics)
    os << format_double(d.t) << ',' << format_double(d.L) << ',' << format_double(d.ydot) << ','
       << format_double(d.mass_err) << ',' << format_double(d.E) << ',' << format_double(d.F)
       << ',' << d.clamps << '\n';
  return os.str();
}

std::string clock_label(Model m) {
  return m == Model::WG ? "rescaled t* = t/L^2" : "physical t";
}

std::string steady_csv(const SteadyState& ss) {
  std::ostringstream os;
  os << "x,X1,X2,X3,u,C1,C2,C3\n";
  for (std::size_t i = 0; i < ss.grid.n(); ++i) {
    os << format_double(ss.grid.x(i));
    for (const auto& f : ss.X_star) os << ',' << format_double(f[i]);
    os << ',' << format_double(ss.u_star[i]);
    for (const auto& f : ss.C_star) os << ',' << format_double(f[i]);
    os << '\n';
  }
  return os.str();
}

std::string steady_report(const SteadyState& ss, const KineticsWG& p) {
  std::string r;
  r += kv("L_star", ss.L_star);
  for (int j = 0; j < 3; ++j) r += kv("Phi_" + std::to_string(j + 1), ss.Phi_star[j]);
  r += kv_size("bisection_steps", ss.bisection_steps);
  r += kv_size("interface_branch", static_cast<std::size_t>(ss.interface_branch));
  r += kv("mass_balance_defect", ss.mass_balance_defect);
  for (const auto& [name, v] : ss.residuals) r += kv("residual_" + name, v);
  const auto& b = ss.bracket;
  r += kv_size("bracket_sweeps", b.sweeps);
  r += kv_bool("bracket_converged", b.converged);
  r += kv("bracket_gap", b.gap);
  r += kv_bool("bracket_initial_pair_ok", b.initial_pair_ok);
  r += kv_size("bracket_monotone_violations", b.monotone_violations);
  r += kv_size("bracket_order_violations", b.order_violations);
  double cmin = 0.0, excess = 0.0;
  for (int j = 0; j < 3; ++j)
    for (double c : ss.C_star[j]) {
      cmin = std::min(cmin, c);
      excess = std::max(excess, c - ss.Phi_star[j]);
    }
  r += kv("max_principle_min", cmin);
  r += kv("max_principle_excess", excess);
  const auto m = multiplicity_check(ss.grid, ss.C_star, ss.X_star, ss.L_star, p);
  r += kv("multiplicity_lambda0", m.lambda0);
  r += kv_bool("multiplicity_applicable", m.applicable);
  r += kv_bool("multiplicity_condition_holds", m.condition_holds);
  r += kv_bool("multiplicity_possibly_multiple", m.possibly_multiple);
  const auto z = zero_dirichlet_branch(ss.grid, p, ss.X_star);
  r += kv_bool("zero_dirichlet_unique", z.unique);
  return r;
}

std::string bracket_csv(const BracketReport& b) {
  std::ostringstream os;
  os << "sweep,upper_max,lower_min,gap\n";
  for (std::size_t k = 0; k < b.gap_trace.size(); ++k)
    os << k << ',' << format_double(b.upper_max[k]) << ',' << format_double(b.lower_min[k]) << ','
       << format_double(b.gap_trace[k]) << '\n';
  return os.str();
}

std::vector<double> omega_grid(const RunConfig& cfg) {
  std::vector<double> w(cfg.omega_count);
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = w.size() == 1 ? cfg.omega_min
                         : cfg.omega_min + (cfg.omega_max - cfg.omega_min) * static_cast<double>(i) /
                                               static_cast<double>(w.size() - 1);
  return w;
}

SrbSteadyProfiles srb_profiles(const RunConfig& cfg) {
  SrbSteadyProfiles prof{Grid(cfg.n), cfg.L_star, {}, {}, {}};
  for (double x : prof.grid.nodes()) {
    prof.XE.push_back(cfg.profile_XE(x));
    prof.XA.push_back(cfg.profile_XA(x));
    prof.fPo.push_back(cfg.profile_fPo(x));
  }
  for (std::size_t i = 0; i < prof.fPo.size(); ++i) {
    if (prof.XE[i] < 0.0 || prof.XA[i] < 0.0)
      throw ConfigError("profile_XE/profile_XA must be nonnegative on [0,1]");
    if (prof.fPo[i] < 0.0 || prof.fPo[i] > 1.0)
      throw ConfigError("profile_fPo must lie in [0,1] on [0,1]");
  }
  return prof;
}

std::string spectrum_line(const Spectrum6& s) {
  std::string r;
  for (std::size_t i = 0; i < 6; ++i)
    r += (i ? ";" : "") + format_double(s[i].real()) + (s[i].imag() < 0 ? "" : "+") +
         format_double(s[i].imag()) + "i";
  return r;
}

CommandResult stability_srb(const RunConfig& cfg, const fs::path& dir, std::size_t jobs) {
  const auto eq = local_equilibrium_srb(cfg.srb, cfg.anchor);
  const auto jac = local_jacobian_srb(cfg.srb, cfg.XE_star, cfg.XA_star, eq);
  std::string jr;
  for (std::size_t j = 0; j < 6; ++j) jr += kv(std::string("equilibrium_") + kSrbC[j], eq[j]);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      jr += kv("J" + std::to_string(r + 1) + std::to_string(c + 1), jac.J(r, c));
  jr += kv("J52", jac.J52);
  jr += kv("J52_sign", jac.J52 > 0 ? "positive" : (jac.J52 < 0 ? "negative" : "zero"));
  jr += kv("xi_closed_form", spectrum_line(jac.xi));
  jr += kv("xi_oracle", spectrum_line(jac.xi_oracle));
  jr += kv("max_mismatch", jac.max_mismatch);
  jr += kv("verdict", to_string(jac.verdict));
  write_file(dir / "jacobian_report.txt", jr);

  const auto prof = srb_profiles(cfg);
  const auto rep = dispersion_sweep(omega_grid(cfg), prof, cfg.srb, eq, jobs);
  std::ostringstream os;
  os << "omega,z";
  for (int i = 1; i <= 6; ++i) os << ",Re_eta" << i;
  for (int i = 1; i <= 6; ++i) os << ",Im_eta" << i;
  os << ",stable\n";
  for (const auto& row : rep.rows) {
    os << format_double(row.omega) << ',' << format_double(row.z);
    bool ok = true;
    for (const auto& e : row.eta) {
      os << ',' << format_double(e.real());
      ok = ok && e.real() < 0.0;
    }
    for (const auto& e : row.eta) os << ',' << format_double(e.imag());
    os << ',' << (ok ? 1 : 0) << '\n';
  }
  write_file(dir / "dispersion.csv", os.str());

  const auto& v = rep.verdict;
  CommandResult res;
  res.verdict = v.stable ? "stable" : "unstable";
  std::string sr;
  sr += kv("model", "SRB");
  sr += kv("verdict", res.verdict);
  sr += kv_bool("ksp_condition", v.ksp_condition);
  sr += kv("saturation_product", cfg.srb.Ksp * eq[sAn] * eq[sCat]);
  sr += kv_bool("re_eta5_negative", v.re_eta5_neg);
  sr += kv_bool("re_eta6_negative", v.re_eta6_neg);
  sr += kv_bool("diagonal_nonpositive", v.diag_nonpos);
  sr += kv_size("violating_mode", static_cast<std::size_t>(v.mode));
  sr += kv("violating_row", v.row ? std::to_string(*v.row) : std::string("none"));
  sr += kv("reason", v.reason);
  sr += kv_size("omega_count", rep.omega_grid.size());
  sr += kv_size("rows", rep.rows.size());
  double mism = 0.0;
  for (const auto& row : rep.rows) mism = std::max(mism, row.max_mismatch);
  sr += kv("max_mismatch", mism);
  sr += kv("local_verdict", to_string(jac.verdict));
  write_file(dir / "stability_report.txt", sr);
  return res;
}

CommandResult stability_wg(const RunConfig& cfg, const fs::path& dir) {
  const SteadyState ss = solve_steady(cfg);
  TimeStepConfig tc = time_config(cfg);
  tc.t_end = cfg.run_t_end;
  const auto run = wg_perturbation_run(ss, wg_setup(cfg), tc, cfg.delta, cfg.fit_window);
  write_file(dir / "diagnostics.csv", diagnostics_csv(run.traj));
  write_file(dir / "run_info.txt", kv("model", "WG") + kv("clock", clock_label(Model::WG)));
  CommandResult res;
  res.L_star = ss.L_star;
  res.mu = run.fit.mu_rate;
  res.verdict = run.fit.mu_rate > 0.0 ? "decaying" : "not_decaying";
  std::string sr;
  sr += kv("model", "WG");
  sr += kv("clock", clock_label(Model::WG));
  sr += kv("L_star", ss.L_star);
  sr += kv("delta", cfg.delta);
  sr += kv("mu", run.fit.mu_rate);
  sr += kv("K", run.fit.K_amp);
  sr += kv("r2", run.fit.r2);
  sr += kv("fit_t_start", run.fit.t_start);
  sr += kv("fit_t_end", run.fit.t_end);
  sr += kv_size("fit_samples", run.fit.samples);
  sr += kv_size("E_violations", run.E_violations);
  sr += kv_size("F_violations", run.F_violations);
  sr += kv_bool("ydot_bound_ok", run.ydot_bound_ok);
  sr += kv("ydot_initial", run.ydot_initial);
  sr += kv("ydot_final", run.ydot_final);
  sr += kv("beta3", cfg.wg.beta3());
  sr += kv("verdict", res.verdict);
  write_file(dir / "stability_report.txt", sr);
  return res;
}

CommandResult run_one(const std::string& name, const RunConfig& cfg, const std::string& out,
                      std::size_t jobs) {
  if (name == "simulate") return cmd_simulate(cfg, out);
  if (name == "steady") return cmd_steady(cfg, out);
  if (name == "stability") return cmd_stability(cfg, out, jobs);
  if (name == "sweep") return cmd_sweep(cfg, out, jobs);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace

WgSetup wg_setup(const RunConfig& cfg) {
  WgSetup s{cfg.wg, std::nullopt};
  if (cfg.reactor_enabled) s.reactor = cfg.reactor;
  return s;
}

TimeStepConfig time_config(const RunConfig& cfg) {
  TimeStepConfig t = cfg.time;
  t.detach_lambda = cfg.detach ? std::optional<double>(cfg.detach_lambda) : std::nullopt;
  return t;
}

SteadyOptions steady_options(const RunConfig& cfg) {
  SteadyOptions o;
  o.n = cfg.n;
  o.tol = cfg.steady_tol;
  o.inner_tol = cfg.inner_tol;
  o.monotone.max_sweeps = cfg.max_sweeps;
  if (cfg.rho_c3 > 0.0) o.monotone.rho_c3 = cfg.rho_c3;
  return o;
}

std::array<double, 3> phi_fixed(const RunConfig& cfg) {
  return {cfg.wg_C[0](1.0), cfg.wg_C[1](1.0), cfg.wg_C[2](1.0)};
}

SteadyState solve_steady(const RunConfig& cfg) {
  if (cfg.model != Model::WG) throw ConfigError("type: steady solves need model WG");
  const auto setup = wg_setup(cfg);
  return steady_thickness_find(cfg.wg, setup.reactor, phi_fixed(cfg), cfg.L_lo, cfg.L_hi,
                               steady_options(cfg));
}

CommandResult cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const fs::path dir = prepare_dir(out_dir);
  const TimeStepConfig tc = time_config(cfg);
  Trajectory tr;
  if (cfg.model == Model::WG) {
    if (cfg.initial_source == "steady") {
      const SteadyState ss = solve_steady(cfg);
      tr = simulate(perturb_steady(ss, cfg.initial_delta), tc, wg_setup(cfg), &ss.C_star);
    } else {
      tr = simulate(initial_state(cfg), tc, wg_setup(cfg));
    }
  } else {
    tr = simulate(initial_state(cfg), tc, SrbSetup{cfg.srb});
  }
  write_file(dir / "snapshots.csv", snapshots_csv(tr, cfg));
  write_file(dir / "diagnostics.csv", diagnostics_csv(tr));
  std::string info;
  info += kv("model", cfg.model == Model::WG ? "WG" : "SRB");
  info += kv("clock", clock_label(cfg.model));
  info += kv_size("steps", tr.diagnostics.size() - 1);
  info += kv("t_final", tr.diagnostics.back().t);
  info += kv("L_final", tr.diagnostics.back().L);
  info += kv_bool("aborted", tr.aborted);
  info += kv("abort_reason", tr.aborted ? tr.abort_reason : std::string("none"));
  write_file(dir / "run_info.txt", info);
  CommandResult res;
  res.L_star = tr.diagnostics.back().L;
  if (tr.aborted) {
    res.exit_code = kExitNumerical;
    res.message = "simulation aborted: " + tr.abort_reason;
  }
  return res;
}

CommandResult cmd_steady(const RunConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const fs::path dir = prepare_dir(out_dir);
  const SteadyState ss = solve_steady(cfg);
  write_file(dir / "steady.csv", steady_csv(ss));
  write_file(dir / "steady_report.txt", steady_report(ss, cfg.wg));
  write_file(dir / "bracket_trace.csv", bracket_csv(ss.bracket));
  CommandResult res;
  res.L_star = ss.L_star;
  return res;
}

CommandResult cmd_stability(const RunConfig& cfg, const std::string& out_dir, std::size_t jobs) {
  cfg.validate();
  const fs::path dir = prepare_dir(out_dir);
  return cfg.model == Model::WG ? stability_wg(cfg, dir) : stability_srb(cfg, dir, jobs);
}

CommandResult cmd_sweep(const RunConfig& cfg, const std::string& out_dir, std::size_t jobs) {
  cfg.validate();
  const auto values = sweep_values(cfg);
  if (values.empty()) throw ConfigError("values: sweep needs at least one value");
  get_config_value(cfg, cfg.sweep_parameter);  // path must resolve
  const fs::path dir = prepare_dir(out_dir);
  std::vector<CommandResult> results(values.size());
  parallel_for(values.size(), jobs, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "item_%03zu", i);
    RunConfig item = cfg;
    char text[40];
    std::snprintf(text, sizeof text, "%.17g", values[i]);
    try {
      set_config_value(item, cfg.sweep_parameter, text);
    } catch (const std::exception& e) {
      results[i].exit_code = exit_code_for(e);
      results[i].message = e.what();
      return;
    }
    results[i] = run_command(cfg.sweep_command, item, (dir / name).string(), 1);
  });
  std::ostringstream os;
  os << "index,value,exit_code,L_star,mu,verdict\n";
  CommandResult res;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& r = results[i];
    os << i << ',' << format_double(values[i]) << ',' << r.exit_code << ','
       << format_double(r.L_star) << ',' << format_double(r.mu) << ','
       << (r.verdict.empty() ? "none" : r.verdict) << '\n';
    if (r.exit_code != 0) {
      res.exit_code = kExitPartial;
      res.message += "item " + std::to_string(i) + ": " + r.message + "\n";
    }
  }
  write_file(dir / "sweep_summary.csv", os.str());
  return res;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const SolverError*>(&e)) return kExitSolver;
  return kExitNumerical;
}

CommandResult run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                          std::size_t jobs) {
  try {
    return run_one(name, cfg, out_dir, jobs);
  } catch (const std::exception& e) {
    CommandResult r;
    r.exit_code = exit_code_for(e);
    r.message = e.what();
    return r;
  }
}

}  // namespace biofilm
