#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biofilm/commands.hpp"
#include "biofilm/config.hpp"
#include "biofilm/error.hpp"
#include "biofilm/simulator.hpp"
#include "biofilm/stability.hpp"
#include "biofilm/steady.hpp"

namespace py = pybind11;
using namespace biofilm;

namespace {

py::dict state_dict(const FieldState& s) {
  py::dict d;
  d["model"] = s.model == Model::WG ? "WG" : "SRB";
  d["x"] = s.grid.nodes();
  d["t"] = s.t;
  d["L"] = s.L();
  d["X"] = s.X;
  d["C"] = s.C;
  d["Phi"] = s.Phi;
  return d;
}

py::dict steady_dict(const SteadyState& ss) {
  py::dict d;
  d["L_star"] = ss.L_star;
  d["x"] = ss.grid.nodes();
  d["X"] = ss.X_star;
  d["C"] = ss.C_star;
  d["u"] = ss.u_star;
  d["Phi"] = ss.Phi_star;
  py::dict res;
  for (const auto& [k, v] : ss.residuals) res[k.c_str()] = v;
  d["residuals"] = res;
  d["bisection_steps"] = ss.bisection_steps;
  return d;
}

py::dict trajectory_dict(const Trajectory& tr) {
  std::vector<double> t, L, ydot, mass, E, F, bound;
  for (const auto& s : tr.diagnostics) {
    t.push_back(s.t);
    L.push_back(s.L);
    ydot.push_back(s.ydot);
    mass.push_back(s.mass_err);
    E.push_back(s.E);
    F.push_back(s.F);
    bound.push_back(s.ydot_bound);
  }
  py::dict d;
  d["t"] = t;
  d["L"] = L;
  d["ydot"] = ydot;
  d["mass_err"] = mass;
  d["E"] = E;
  d["F"] = F;
  d["ydot_bound"] = bound;
  d["aborted"] = tr.aborted;
  d["abort_reason"] = tr.abort_reason;
  d["final"] = tr.snapshots.empty() ? py::none() : py::object(state_dict(tr.snapshots.back()));
  return d;
}

Trajectory run_simulation(const RunConfig& cfg) {
  cfg.validate();
  const TimeStepConfig tc = time_config(cfg);
  if (cfg.model == Model::SRB) return simulate(initial_state(cfg), tc, SrbSetup{cfg.srb});
  if (cfg.initial_source == "steady") {
    const SteadyState ss = solve_steady(cfg);
    return simulate(perturb_steady(ss, cfg.initial_delta), tc, wg_setup(cfg), &ss.C_star);
  }
  return simulate(initial_state(cfg), tc, wg_setup(cfg));
}

}  // namespace

PYBIND11_MODULE(_biofilm, m) {
  m.doc() = "biofilm free boundary solvers";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_RuntimeError);

  py::class_<RunConfig>(m, "Config")
      .def(py::init<>())
      .def_static("from_file", &parse_config, py::arg("path"))
      .def_static("from_text", &parse_config_text, py::arg("text"))
      .def("__getitem__", &get_config_value)
      .def("__setitem__", &set_config_value)
      .def("validate", &RunConfig::validate)
      .def("emit", &emit_config)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });

  m.def("steady", [](const RunConfig& cfg) {
        SteadyState ss;
        {
          py::gil_scoped_release nogil;
          ss = solve_steady(cfg);
        }
        return steady_dict(ss);
      },
      py::arg("config"), "steady thickness and profiles");
  m.def("simulate", [](const RunConfig& cfg) {
        Trajectory tr;
        {
          py::gil_scoped_release nogil;
          tr = run_simulation(cfg);
        }
        return trajectory_dict(tr);
      },
      py::arg("config"));
  m.def("initial_state", [](const RunConfig& cfg) { return state_dict(initial_state(cfg)); },
        py::arg("config"));
  m.def("run",
        [](const std::string& command, const RunConfig& cfg, const std::string& out_dir,
           std::size_t jobs) {
          CommandResult r;
          {
            py::gil_scoped_release nogil;
            r = run_command(command, cfg, out_dir, jobs);
          }
          py::dict d;
          d["exit_code"] = r.exit_code;
          d["message"] = r.message;
          d["L_star"] = r.L_star;
          d["mu"] = r.mu;
          d["verdict"] = r.verdict;
          return d;
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir"), py::arg("jobs") = 1,
        "run a CLI command; errors come back as exit codes");
}
