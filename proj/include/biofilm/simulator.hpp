#pragma once
#include <optional>
#include <string>
#include <vector>

#include "biofilm/kinetics.hpp"
#include "biofilm/transform.hpp"

namespace biofilm {

struct ReactorParams {
  double A_surface = 1.0;
  double V_bulk = 1.0;
  double Q_flow = 10.0;
  std::vector<double> Gamma = {1.0, 1.0, 5.0};

  void validate(std::size_t n_substrates) const;
  bool operator==(const ReactorParams&) const = default;
};

struct TimeStepConfig {
  double dt = 0.005;
  double t_end = 10.0;
  double cfl_max = 0.9;
  std::size_t snapshot_every = 100;
  bool clamp_negative = true;
  double L_floor = 1e-6;
  std::optional<double> detach_lambda;

  void validate() const;
  bool operator==(const TimeStepConfig&) const = default;
};

struct WgSetup {
  KineticsWG kin;
  std::optional<ReactorParams> reactor;  // absent: Phi held constant
};

struct SrbSetup {
  KineticsSRB kin;
};

struct StepDiagnostics {
  double t = 0.0;
  double L = 0.0;
  double ydot = 0.0;
  double mass_err = 0.0;
  double E = 0.0;
  double F = 0.0;
  std::size_t clamps = 0;
  double min_before_clamp = 0.0;
  double ydot_bound = 0.0;
  double dt = 0.0;
  bool renormalized = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FieldState> snapshots;
  std::vector<StepDiagnostics> diagnostics;  // one per accepted step, plus t = 0
  bool aborted = false;
  std::string abort_reason;
};

// reports from the split substeps
struct SubstepStats {
  std::size_t clamps = 0;
  double min_before_clamp = 0.0;
  double mass_drift = 0.0;  // max |sum X - 1| before renormalization
  bool renormalized = false;
};

std::vector<std::vector<double>> hyperbolic_step(const FieldState& s, const VelocityProfile& prof,
                                                 double dt, const KineticsWG& p,
                                                 double cfl_max = 1.0);

struct ParabolicResult {
  std::vector<std::vector<double>> C;
  std::vector<double> Phi;
};
ParabolicResult parabolic_step(const FieldState& s, const VelocityProfile& prof, double dt,
                               const WgSetup& setup);

// one split step of length dt (no dt control); returns the new state
FieldState step(const FieldState& s, double dt, const TimeStepConfig& cfg, const WgSetup& setup,
                SubstepStats* stats = nullptr);

struct SrbUpdateOptions {
  bool freeze_biomass = false;
  bool freeze_thickness = false;
  bool disable_reaction = false;
  // extra source per substrate (n-vector), added to the reaction term
  std::vector<std::vector<double>> extra_source;
};

FieldState srb_field_update(const FieldState& s, double dt, const TimeStepConfig& cfg,
                            const SrbSetup& setup, const SrbUpdateOptions& opt = {},
                            SubstepStats* stats = nullptr);

// face diffusivity D0 D(f_Po)/L^2 averaged onto x_{i+1/2}
std::vector<double> srb_face_diffusivity(const FieldState& s, std::size_t substrate,
                                         const KineticsSRB& p, std::size_t* clamps = nullptr);

Trajectory simulate(const FieldState& init, const TimeStepConfig& cfg, const WgSetup& setup,
                    const std::vector<std::vector<double>>* C_reference = nullptr);
Trajectory simulate(const FieldState& init, const TimeStepConfig& cfg, const SrbSetup& setup);

double mass_error(const FieldState& s, const KineticsSRB* srb = nullptr);

void validate_state(const FieldState& s);

}  // namespace biofilm
