#include "biofilm/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "biofilm/error.hpp"

namespace biofilm {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

namespace {

std::string short_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double out = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || t.empty())
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key + ": expected a nonnegative integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::string list_str(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + short_double(v[i]);
  return s;
}

// ---- polynomial expressions: + - * ^ ( ) numbers and x

Polynomial poly_add(const Polynomial& a, const Polynomial& b, double sign) {
  Polynomial r;
  r.coef.assign(std::max(a.coef.size(), b.coef.size()), 0.0);
  for (std::size_t i = 0; i < a.coef.size(); ++i) r.coef[i] += a.coef[i];
  for (std::size_t i = 0; i < b.coef.size(); ++i) r.coef[i] += sign * b.coef[i];
  return r;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  r.coef.assign(a.coef.size() + b.coef.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coef.size(); ++i)
    for (std::size_t j = 0; j < b.coef.size(); ++j) r.coef[i + j] += a.coef[i] * b.coef[j];
  return r;
}

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  [[noreturn]] void fail(const std::string& m) {
    throw ConfigError("expression '" + s_ + "': " + m);
  }
  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      skip();
      if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
        const double sign = s_[i_++] == '+' ? 1.0 : -1.0;
        p = poly_add(p, term(), sign);
      } else {
        return p;
      }
    }
  }
  Polynomial term() {
    Polynomial p = power();
    for (;;) {
      skip();
      if (i_ < s_.size() && s_[i_] == '*') {
        ++i_;
        p = poly_mul(p, power());
      } else {
        return p;
      }
    }
  }
  Polynomial power() {
    Polynomial base = unary();
    skip();
    if (i_ < s_.size() && s_[i_] == '^') {
      ++i_;
      skip();
      std::size_t e = 0;
      auto [ptr, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), e);
      if (ec != std::errc()) fail("exponent must be a nonnegative integer");
      i_ = static_cast<std::size_t>(ptr - s_.data());
      Polynomial r = Polynomial::constant(1.0);
      for (std::size_t k = 0; k < e; ++k) r = poly_mul(r, base);
      return r;
    }
    return base;
  }
  Polynomial unary() {
    skip();
    if (i_ < s_.size() && s_[i_] == '-') {
      ++i_;
      Polynomial p = unary();
      for (double& c : p.coef) c = -c;
      return p;
    }
    if (i_ < s_.size() && s_[i_] == '+') {
      ++i_;
      return unary();
    }
    return primary();
  }
  Polynomial primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    if (s_[i_] == '(') {
      ++i_;
      Polynomial p = expr();
      skip();
      if (i_ >= s_.size() || s_[i_] != ')') fail("missing ')'");
      ++i_;
      return p;
    }
    if (s_[i_] == 'x') {
      ++i_;
      return Polynomial{{0.0, 1.0}};
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected a number or x");
    i_ = static_cast<std::size_t>(ptr - s_.data());
    return Polynomial::constant(v);
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

// ---- key registry

struct Field {
  std::string section, key, doc;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class T>
Field num(const char* sec, const char* key, T RunConfig::*m, const char* doc) {
  return {sec, key, doc, [m](const RunConfig& c) { return short_double(c.*m); },
          [m, key](RunConfig& c, const std::string& v) { c.*m = parse_double(key, v); }};
}

#define WG_FIELD(name, doc)                                                                    \
  Field {                                                                                      \
    "wg", #name, doc, [](const RunConfig& c) { return short_double(c.wg.name); },              \
        [](RunConfig& c, const std::string& v) { c.wg.name = parse_double(#name, v); }         \
  }
#define SRB_FIELD(name, doc)                                                                   \
  Field {                                                                                      \
    "srb", #name, doc, [](const RunConfig& c) { return short_double(c.srb.name); },            \
        [](RunConfig& c, const std::string& v) { c.srb.name = parse_double(#name, v); }        \
  }

Field size_field(const char* sec, const char* key, std::size_t RunConfig::*m, const char* doc) {
  return {sec, key, doc, [m](const RunConfig& c) { return std::to_string(c.*m); },
          [m, key](RunConfig& c, const std::string& v) { c.*m = parse_size(key, v); }};
}

Field bool_field(const char* sec, const char* key, bool RunConfig::*m, const char* doc) {
  return {sec, key, doc, [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [m, key](RunConfig& c, const std::string& v) { c.*m = parse_bool(key, v); }};
}

Field string_field(const char* sec, const char* key, std::string RunConfig::*m, const char* doc) {
  return {sec, key, doc, [m](const RunConfig& c) { return c.*m; },
          [m](RunConfig& c, const std::string& v) { c.*m = trim(v); }};
}

Field poly_field(const char* sec, const char* key, std::vector<Polynomial> RunConfig::*m,
                 std::size_t idx, const char* doc) {
  return {sec, key, doc, [m, idx](const RunConfig& c) { return (c.*m)[idx].str(); },
          [m, idx](RunConfig& c, const std::string& v) { (c.*m)[idx] = Polynomial::parse(v); }};
}

Field poly1_field(const char* sec, const char* key, Polynomial RunConfig::*m, const char* doc) {
  return {sec, key, doc, [m](const RunConfig& c) { return (c.*m).str(); },
          [m](RunConfig& c, const std::string& v) { c.*m = Polynomial::parse(v); }};
}

const std::vector<Field>& registry() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"model", "type", "WG or SRB",
                 [](const RunConfig& c) { return std::string(c.model == Model::WG ? "WG" : "SRB"); },
                 [](RunConfig& c, const std::string& s) {
                   const auto t = trim(s);
                   if (t == "WG") c.model = Model::WG;
                   else if (t == "SRB") c.model = Model::SRB;
                   else throw ConfigError("type: expected WG or SRB, got '" + s + "'");
                 }});
    v.push_back(WG_FIELD(mu1, "max growth rate, species 1"));
    v.push_back(WG_FIELD(mu2, "max growth rate, species 2"));
    v.push_back(WG_FIELD(K11, "half-saturation of species 1 on substrate 1"));
    v.push_back(WG_FIELD(K13, "half-saturation of species 1 on oxygen"));
    v.push_back(WG_FIELD(K22, "half-saturation of species 2 on substrate 2"));
    v.push_back(WG_FIELD(K23, "half-saturation of species 2 on oxygen"));
    v.push_back(WG_FIELD(b1, "endogenous respiration, species 1"));
    v.push_back(WG_FIELD(b2, "endogenous respiration, species 2"));
    v.push_back(WG_FIELD(k1, "inactivation, species 1 (k1 = k2 = 0 needed for steady states)"));
    v.push_back(WG_FIELD(k2, "inactivation, species 2"));
    v.push_back(WG_FIELD(D1, "diffusivity, substrate 1"));
    v.push_back(WG_FIELD(D2, "diffusivity, substrate 2"));
    v.push_back(WG_FIELD(D3, "diffusivity, oxygen"));
    v.push_back(WG_FIELD(Y1, "yield, species 1"));
    v.push_back(WG_FIELD(Y2, "yield, species 2"));
    v.push_back(WG_FIELD(alpha1, "nutrient conversion, species 1"));
    v.push_back(WG_FIELD(alpha2, "nutrient conversion, species 2"));
    v.push_back({"wg", "beta5_with_D3", "multiply beta5 by D3 like beta4 and beta6",
                 [](const RunConfig& c) { return std::string(c.wg.beta5_with_D3 ? "true" : "false"); },
                 [](RunConfig& c, const std::string& s) { c.wg.beta5_with_D3 = parse_bool("beta5_with_D3", s); }});
    v.push_back(SRB_FIELD(muE, "growth rate, ethanol oxidizers"));
    v.push_back(SRB_FIELD(muA, "growth rate, acetate oxidizers"));
    v.push_back(SRB_FIELD(KE, "half-saturation, ethanol"));
    v.push_back(SRB_FIELD(KA, "half-saturation, acetate"));
    v.push_back(SRB_FIELD(KO, "half-saturation, oxygen"));
    v.push_back(SRB_FIELD(KI, "inhibition constant"));
    v.push_back(SRB_FIELD(KPr, "half-saturation of anion release"));
    v.push_back(SRB_FIELD(kE, "decay rate E"));
    v.push_back(SRB_FIELD(kA, "decay rate A"));
    v.push_back(SRB_FIELD(YE, "yield E"));
    v.push_back(SRB_FIELD(YA, "yield A"));
    v.push_back(SRB_FIELD(YAC, "yield on carbonate"));
    v.push_back(SRB_FIELD(k, "precipitation rate constant"));
    v.push_back(SRB_FIELD(Ksp, "solubility product"));
    v.push_back(SRB_FIELD(alpha, "anion release coefficient"));
    v.push_back(SRB_FIELD(XPo_bar, "initial porosity"));
    static const char* sub[] = {"E", "A", "O", "C", "An", "Cat"};
    for (int j = 0; j < 6; ++j) {
      const std::string key = std::string("D0_") + sub[j];
      v.push_back({"srb", key, "base diffusivity",
                   [j](const RunConfig& c) { return short_double(c.srb.D0[j]); },
                   [j, key](RunConfig& c, const std::string& s) { c.srb.D0[j] = parse_double(key, s); }});
    }
    static const char* bio[] = {"E", "A", "I", "Pr", "Po"};
    for (int j = 0; j < 5; ++j) {
      const std::string key = std::string("rho_") + bio[j];
      v.push_back({"srb", key, "density",
                   [j](const RunConfig& c) { return short_double(c.srb.rho[j]); },
                   [j, key](RunConfig& c, const std::string& s) { c.srb.rho[j] = parse_double(key, s); }});
    }
    v.push_back({"srb", "a3_consistent", "use the J31-consistent a3 instead of a1/6",
                 [](const RunConfig& c) { return std::string(c.srb.a3_consistent ? "true" : "false"); },
                 [](RunConfig& c, const std::string& s) { c.srb.a3_consistent = parse_bool("a3_consistent", s); }});

    v.push_back(bool_field("reactor", "enabled", &RunConfig::reactor_enabled,
                           "evolve Phi by the bulk balance (WG); false holds Phi fixed"));
    v.push_back({"reactor", "A_surface", "biofilm area",
                 [](const RunConfig& c) { return short_double(c.reactor.A_surface); },
                 [](RunConfig& c, const std::string& s) { c.reactor.A_surface = parse_double("A_surface", s); }});
    v.push_back({"reactor", "V_bulk", "bulk volume",
                 [](const RunConfig& c) { return short_double(c.reactor.V_bulk); },
                 [](RunConfig& c, const std::string& s) { c.reactor.V_bulk = parse_double("V_bulk", s); }});
    v.push_back({"reactor", "Q_flow", "flow rate",
                 [](const RunConfig& c) { return short_double(c.reactor.Q_flow); },
                 [](RunConfig& c, const std::string& s) { c.reactor.Q_flow = parse_double("Q_flow", s); }});
    v.push_back({"reactor", "Gamma", "influent concentrations, comma separated",
                 [](const RunConfig& c) { return list_str(c.reactor.Gamma); },
                 [](RunConfig& c, const std::string& s) { c.reactor.Gamma = parse_list("Gamma", s); }});

    v.push_back(size_field("grid", "n", &RunConfig::n, "node count"));

    v.push_back({"time", "dt", "base step",
                 [](const RunConfig& c) { return short_double(c.time.dt); },
                 [](RunConfig& c, const std::string& s) { c.time.dt = parse_double("dt", s); }});
    v.push_back({"time", "t_end", "horizon (rescaled clock for WG, physical for SRB)",
                 [](const RunConfig& c) { return short_double(c.time.t_end); },
                 [](RunConfig& c, const std::string& s) { c.time.t_end = parse_double("t_end", s); }});
    v.push_back({"time", "cfl_max", "Courant bound",
                 [](const RunConfig& c) { return short_double(c.time.cfl_max); },
                 [](RunConfig& c, const std::string& s) { c.time.cfl_max = parse_double("cfl_max", s); }});
    v.push_back({"time", "snapshot_every", "steps between snapshots",
                 [](const RunConfig& c) { return std::to_string(c.time.snapshot_every); },
                 [](RunConfig& c, const std::string& s) { c.time.snapshot_every = parse_size("snapshot_every", s); }});
    v.push_back({"time", "clamp_negative", "clamp negative values to zero",
                 [](const RunConfig& c) { return std::string(c.time.clamp_negative ? "true" : "false"); },
                 [](RunConfig& c, const std::string& s) { c.time.clamp_negative = parse_bool("clamp_negative", s); }});
    v.push_back({"time", "L_floor", "abort when L falls below",
                 [](const RunConfig& c) { return short_double(c.time.L_floor); },
                 [](RunConfig& c, const std::string& s) { c.time.L_floor = parse_double("L_floor", s); }});
    v.push_back(bool_field("time", "detach", &RunConfig::detach, "enable detachment dL/dt = u(L) - lambda L^2"));
    v.push_back(num("time", "detach_lambda", &RunConfig::detach_lambda, "detachment rate"));

    v.push_back(string_field("initial", "source", &RunConfig::initial_source,
                             "expr (expressions below) or steady (WG steady state)"));
    v.push_back(num("initial", "delta", &RunConfig::initial_delta,
                    "perturbation applied to a steady start"));
    v.push_back(num("initial", "L0", &RunConfig::L0, "initial thickness"));
    for (int j = 0; j < 3; ++j) {
      static const char* xk[] = {"X1", "X2", "X3"};
      static const char* ck[] = {"C1", "C2", "C3"};
      v.push_back(poly_field("initial", xk[j], &RunConfig::wg_X, j, "WG biomass fraction in x"));
      v.push_back(poly_field("initial", ck[j], &RunConfig::wg_C, j, "WG substrate in x; Phi_0 = value at x=1"));
    }
    for (int j = 0; j < 5; ++j) {
      static const char* xk[] = {"XE", "XA", "XI", "XPr", "XPo"};
      v.push_back(poly_field("initial", xk[j], &RunConfig::srb_X, j, "SRB biomass in x"));
    }
    for (int j = 0; j < 6; ++j) {
      static const char* ck[] = {"SE", "SA", "SO", "SC", "SAn", "SCat"};
      v.push_back(poly_field("initial", ck[j], &RunConfig::srb_C, j, "SRB substrate in x"));
    }

    v.push_back(num("steady", "L_lo", &RunConfig::L_lo, "bracket lower end"));
    v.push_back(num("steady", "L_hi", &RunConfig::L_hi, "bracket upper end"));
    v.push_back(num("steady", "tol", &RunConfig::steady_tol, "tolerance on |u(L*)|"));
    v.push_back(num("steady", "inner_tol", &RunConfig::inner_tol, "inner fixed-point tolerance"));
    v.push_back(size_field("steady", "max_sweeps", &RunConfig::max_sweeps, "monotone sweeps cap"));
    v.push_back(num("steady", "rho_c3", &RunConfig::rho_c3, "upper start for C3 (0: Phi_3)"));

    v.push_back(num("stability", "delta", &RunConfig::delta, "WG perturbation amplitude"));
    v.push_back(num("stability", "run_t_end", &RunConfig::run_t_end, "WG perturbation run length"));
    v.push_back(num("stability", "fit_window", &RunConfig::fit_window, "fraction of run used by the decay fit"));
    v.push_back(num("stability", "omega_min", &RunConfig::omega_min, "first wavenumber"));
    v.push_back(num("stability", "omega_max", &RunConfig::omega_max, "last wavenumber"));
    v.push_back(size_field("stability", "omega_count", &RunConfig::omega_count, "wavenumbers in the grid"));
    v.push_back(num("stability", "anchor", &RunConfig::anchor, "S_An* of the local equilibrium"));
    v.push_back(num("stability", "XE_star", &RunConfig::XE_star, "X_E* for the local Jacobian"));
    v.push_back(num("stability", "XA_star", &RunConfig::XA_star, "X_A* for the local Jacobian"));
    v.push_back(num("stability", "L_star", &RunConfig::L_star, "steady SRB thickness"));
    v.push_back(poly1_field("stability", "profile_XE", &RunConfig::profile_XE, "steady X_E in x"));
    v.push_back(poly1_field("stability", "profile_XA", &RunConfig::profile_XA, "steady X_A in x"));
    v.push_back(poly1_field("stability", "profile_fPo", &RunConfig::profile_fPo, "steady porosity in x"));

    v.push_back(string_field("sweep", "parameter", &RunConfig::sweep_parameter, "dotted key to vary"));
    v.push_back({"sweep", "values", "explicit values (empty: use lo/hi/count)",
                 [](const RunConfig& c) { return list_str(c.sweep_values); },
                 [](RunConfig& c, const std::string& s) { c.sweep_values = parse_list("values", s); }});
    v.push_back(num("sweep", "lo", &RunConfig::sweep_lo, "range start"));
    v.push_back(num("sweep", "hi", &RunConfig::sweep_hi, "range end"));
    v.push_back(size_field("sweep", "count", &RunConfig::sweep_count, "range size"));
    v.push_back(string_field("sweep", "command", &RunConfig::sweep_command, "simulate, steady or stability"));

    v.push_back(string_field("output", "dir", &RunConfig::out_dir, "output directory"));
    v.push_back({"output", "seed", "seed for randomized sweeps",
                 [](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& s) { c.seed = parse_size("seed", s); }});
    return v;
  }();
  return f;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : registry())
    if (f.section == section && f.key == key) return &f;
  return nullptr;
}

}  // namespace

double Polynomial::operator()(double x) const {
  double r = 0.0;
  for (std::size_t i = coef.size(); i-- > 0;) r = r * x + coef[i];
  return r;
}

std::string Polynomial::str() const {
  std::string s;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (i > 0 && coef[i] == 0.0) continue;
    if (!s.empty()) s += " + ";
    s += short_double(coef[i]);
    if (i == 1) s += "*x";
    if (i > 1) s += "*x^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

Polynomial Polynomial::parse(const std::string& text) {
  Polynomial p = PolyParser(text).parse();
  while (p.coef.size() > 1 && p.coef.back() == 0.0) p.coef.pop_back();
  if (p.coef.empty()) p.coef.push_back(0.0);
  return p;
}

void RunConfig::validate() const {
  if (n < 3) throw ConfigError("n must be >= 3");
  time.validate();
  if (detach && !(detach_lambda >= 0.0)) throw ConfigError("detach_lambda must be >= 0");
  // both kinetics blocks are checked so a sweep can't smuggle in a bad value
  wg.validate();
  srb.validate();
  if (reactor_enabled) reactor.validate(3);
  if (initial_source != "expr" && initial_source != "steady")
    throw ConfigError("source: expected expr or steady");
  if (initial_source == "steady" && model != Model::WG)
    throw ConfigError("source: steady start is only available for WG");
  if (!(L0 > 0.0)) throw ConfigError("L0 must be > 0");
  if (!(L_lo > 0.0 && L_hi > L_lo)) throw ConfigError("L_lo/L_hi must satisfy 0 < L_lo < L_hi");
  if (!(steady_tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(inner_tol > 0.0)) throw ConfigError("inner_tol must be > 0");
  if (!(rho_c3 >= 0.0)) throw ConfigError("rho_c3 must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (!(run_t_end > 0.0)) throw ConfigError("run_t_end must be > 0");
  if (!(fit_window > 0.0 && fit_window <= 1.0)) throw ConfigError("fit_window must lie in (0,1]");
  if (omega_count == 0) throw ConfigError("omega_count must be >= 1");
  if (!(omega_min >= 0.0 && omega_max >= omega_min)) throw ConfigError("omega_min/omega_max out of order");
  if (!(anchor > 0.0)) throw ConfigError("anchor must be > 0");
  if (!(XE_star >= 0.0)) throw ConfigError("XE_star must be >= 0");
  if (!(XA_star >= 0.0)) throw ConfigError("XA_star must be >= 0");
  if (!(L_star > 0.0)) throw ConfigError("L_star must be > 0");
  if (sweep_command != "simulate" && sweep_command != "steady" && sweep_command != "stability")
    throw ConfigError("command: expected simulate, steady or stability");
  if (sweep_values.empty() && sweep_count == 0) throw ConfigError("count must be >= 1");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  // gamma is derived (K23/K13); accepted only as a checked restatement
  std::optional<std::pair<double, std::size_t>> gamma;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& f : registry()) known = known || f.section == section;
      if (!known) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section == "wg" && key == "gamma") {
      const double g = parse_double("gamma", value);
      if (!(g > 0.0)) throw ConfigError(where + "gamma must be > 0");
      gamma = {g, lineno};
      continue;
    }
    const Field* f = find_field(section, key);
    if (!f) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second)
      throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      f->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  cfg.validate();
  if (gamma) {
    const double derived = rescaled_wg(cfg.wg).gamma;
    if (std::abs(gamma->first - derived) > 1e-12 * derived)
      throw ConfigError("line " + std::to_string(gamma->second) + ": gamma = " +
                        short_double(gamma->first) + " disagrees with K23/K13 = " +
                        short_double(derived));
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : registry()) {
    if (f.section != section) {
      section = f.section;
      out += (out.empty() ? "" : "\n") + std::string("[") + section + "]\n";
    }
    out += "# " + f.doc + "\n";
    out += f.key + " = " + f.get(cfg) + "\n";
    if (f.section == "wg" && f.key == "alpha2") {
      out += "# derived K23/K13; optional, checked when present\n";
      out += "gamma = " + short_double(rescaled_wg(cfg.wg).gamma) + "\n";
    }
  }
  return out;
}

void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError("parameter path must be section.key");
  const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!f) throw ConfigError("parameter path '" + dotted_key + "' does not resolve");
  f->set(cfg, value);
}

std::string get_config_value(const RunConfig& cfg, const std::string& dotted_key) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) throw ConfigError("parameter path must be section.key");
  const Field* f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
  if (!f) throw ConfigError("parameter path '" + dotted_key + "' does not resolve");
  return f->get(cfg);
}

FieldState initial_state(const RunConfig& cfg) {
  const Grid g(cfg.n);
  FieldState s = FieldState::zeros(cfg.model, g);
  s.y = std::log(cfg.L0);
  const auto& Xp = cfg.model == Model::WG ? cfg.wg_X : cfg.srb_X;
  const auto& Cp = cfg.model == Model::WG ? cfg.wg_C : cfg.srb_C;
  for (std::size_t k = 0; k < s.X.size(); ++k)
    for (std::size_t i = 0; i < g.n(); ++i) s.X[k][i] = Xp[k](g.x(i));
  for (std::size_t k = 0; k < s.C.size(); ++k) {
    for (std::size_t i = 0; i < g.n(); ++i) {
      s.C[k][i] = Cp[k](g.x(i));
      if (s.C[k][i] < 0.0) throw ConfigError("initial substrate expression is negative");
    }
    s.Phi[k] = s.C[k].back();
  }
  for (const auto& f : s.X)
    for (double v : f)
      if (v < 0.0) throw ConfigError("initial biomass expression is negative");
  return s;
}

std::vector<double> sweep_values(const RunConfig& cfg) {
  if (!cfg.sweep_values.empty()) return cfg.sweep_values;
  std::vector<double> v(cfg.sweep_count);
  for (std::size_t i = 0; i < cfg.sweep_count; ++i)
    v[i] = cfg.sweep_count == 1 ? cfg.sweep_lo
                                : cfg.sweep_lo + (cfg.sweep_hi - cfg.sweep_lo) * static_cast<double>(i) /
                                                     static_cast<double>(cfg.sweep_count - 1);
  return v;
}

}  // namespace biofilm
