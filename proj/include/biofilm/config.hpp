#pragma once
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biofilm/kinetics.hpp"
#include "biofilm/simulator.hpp"
#include "biofilm/transform.hpp"

namespace biofilm {

// polynomial in x, coefficients in increasing degree
struct Polynomial {
  std::vector<double> coef;

  double operator()(double x) const;
  std::string str() const;
  static Polynomial parse(const std::string& text);
  static Polynomial constant(double c) { return Polynomial{{c}}; }
  bool operator==(const Polynomial&) const = default;
};

struct RunConfig {
  Model model = Model::WG;
  KineticsWG wg;
  KineticsSRB srb;
  bool reactor_enabled = true;
  ReactorParams reactor;
  std::size_t n = 201;
  TimeStepConfig time;
  bool detach = false;
  double detach_lambda = 0.0;

  // initial block; Phi_0 is read off C(1)
  std::string initial_source = "expr";  // expr | steady
  double initial_delta = 0.0;
  double L0 = 0.5;
  std::vector<Polynomial> wg_X = {Polynomial::constant(0.9), Polynomial::constant(0.1),
                                  Polynomial::constant(0.0)};
  std::vector<Polynomial> wg_C = {Polynomial::constant(1.0), Polynomial::constant(1.0),
                                  Polynomial::constant(5.0)};
  std::vector<Polynomial> srb_X = {Polynomial::constant(0.3), Polynomial::constant(0.2),
                                   Polynomial::constant(0.0), Polynomial::constant(0.0),
                                   Polynomial::constant(0.5)};
  std::vector<Polynomial> srb_C = {Polynomial::constant(1.0), Polynomial::constant(0.5),
                                   Polynomial::constant(2.0), Polynomial::constant(0.0),
                                   Polynomial::constant(1.0), Polynomial::constant(0.5)};

  // steady block
  double L_lo = 0.05;
  double L_hi = 5.0;
  double steady_tol = 1e-13;
  double inner_tol = 1e-12;
  std::size_t max_sweeps = 20000;
  double rho_c3 = 0.0;  // 0: use Phi_3

  // stability block
  double delta = 1e-2;
  double run_t_end = 10.0;
  double fit_window = 0.6;
  double omega_min = 0.1;
  double omega_max = 10.0;
  std::size_t omega_count = 50;
  double anchor = 1.0;
  double XE_star = 0.3;
  double XA_star = 0.2;
  double L_star = 1.0;
  Polynomial profile_XE = Polynomial::constant(0.3);
  Polynomial profile_XA = Polynomial::constant(0.2);
  Polynomial profile_fPo = Polynomial{{0.5, 0.0, 0.3}};

  // sweep block
  std::string sweep_parameter = "srb.Ksp";
  std::vector<double> sweep_values;
  double sweep_lo = 0.5;
  double sweep_hi = 1.5;
  std::size_t sweep_count = 11;
  std::string sweep_command = "stability";

  std::string out_dir = "out";
  std::uint64_t seed = 12345;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);
std::string emit_config(const RunConfig& cfg);

// set one dotted key, e.g. "wg.mu1", from its text form
void set_config_value(RunConfig& cfg, const std::string& dotted_key, const std::string& value);
std::string get_config_value(const RunConfig& cfg, const std::string& dotted_key);

// initial state from the [initial] expressions
FieldState initial_state(const RunConfig& cfg);
std::vector<double> sweep_values(const RunConfig& cfg);

std::string format_double(double v);

}  // namespace biofilm
