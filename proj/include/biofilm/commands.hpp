#pragma once
#include <array>
#include <cstddef>
#include <exception>
#include <limits>
#include <string>

#include "biofilm/config.hpp"
#include "biofilm/steady.hpp"

namespace biofilm {

// headline scalars of one command, NaN / empty when not produced
struct CommandResult {
  int exit_code = 0;
  std::string message;
  double L_star = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  std::string verdict;
};

CommandResult cmd_simulate(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_steady(const RunConfig& cfg, const std::string& out_dir);
CommandResult cmd_stability(const RunConfig& cfg, const std::string& out_dir, std::size_t jobs = 1);
CommandResult cmd_sweep(const RunConfig& cfg, const std::string& out_dir, std::size_t jobs = 1);

// dispatch by name with the exception -> exit code mapping applied
CommandResult run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                          std::size_t jobs = 1);
int exit_code_for(const std::exception& e);

// shared plumbing, also used by the bindings
WgSetup wg_setup(const RunConfig& cfg);
TimeStepConfig time_config(const RunConfig& cfg);
SteadyOptions steady_options(const RunConfig& cfg);
std::array<double, 3> phi_fixed(const RunConfig& cfg);
SteadyState solve_steady(const RunConfig& cfg);

}  // namespace biofilm
