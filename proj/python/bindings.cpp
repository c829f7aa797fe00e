#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apc/field.hpp"
#include "apc/kinetics.hpp"
#include "apc/ode.hpp"
#include "apc/scenario.hpp"
#include "apc/solver.hpp"
#include "apc/validate.hpp"

namespace py = pybind11;

namespace {

apc::OdeMethod method_from_name(const std::string& name) {
    if (name == "rk4") return apc::OdeMethod::Rk4;
    if (name == "euler") return apc::OdeMethod::Euler;
    throw apc::ConfigError("method must be 'rk4' or 'euler'");
}

py::dict summarize(const apc::RunResult& res) {
    py::dict d;
    d["steps"] = res.stats.steps;
    d["dt"] = res.stats.dt;
    d["initial_mass"] = res.stats.initial_mass;
    d["final_mass"] = res.ledger.interior_mass;
    d["outflow_cum"] = res.ledger.exit_outflow_cum();
    d["mortality_cum"] = res.ledger.mortality_cum();
    d["closure_residual"] = res.ledger.closure_residual(res.stats.initial_mass);
    d["min_density"] = res.stats.min_density;
    d["max_rho_tilde"] = res.stats.max_rho_tilde;
    d["max_mass_step_increase"] = res.stats.max_mass_step_increase;
    d["clamp_activations"] = res.stats.clamp_activations;
    d["clip_count"] = res.stats.clip_count;
    d["direction_max_divergence"] = res.stats.direction_max_divergence;
    d["wall_facing_cells"] = res.stats.wall_facing_cells;
    d["peak_exit_panic"] = apc::exit_region_peak(res.final_field, res.grid, apc::kPanic);
    py::list ts, us;
    for (const apc::TimeseriesRow& row : res.series) {
        ts.append(row.t);
        us.append(row.total_mass);
    }
    d["series_t"] = ts;
    d["series_U"] = us;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Finite-volume simulator for alert/panic/control crowd dynamics";

    py::register_exception<apc::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<apc::SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<apc::BehaviorParams>(m, "BehaviorParams")
        .def(py::init<>())
        .def_readwrite("b1", &apc::BehaviorParams::b1)
        .def_readwrite("b2", &apc::BehaviorParams::b2)
        .def_readwrite("b3", &apc::BehaviorParams::b3)
        .def_readwrite("b4", &apc::BehaviorParams::b4)
        .def_readwrite("c1", &apc::BehaviorParams::c1)
        .def_readwrite("c2", &apc::BehaviorParams::c2)
        .def_readwrite("delta1", &apc::BehaviorParams::delta1)
        .def_readwrite("delta2", &apc::BehaviorParams::delta2)
        .def_readwrite("delta3", &apc::BehaviorParams::delta3)
        .def_readwrite("alpha13", &apc::BehaviorParams::alpha13)
        .def_readwrite("alpha12", &apc::BehaviorParams::alpha12)
        .def_readwrite("alpha23", &apc::BehaviorParams::alpha23)
        .def_readwrite("alpha32", &apc::BehaviorParams::alpha32)
        .def_readwrite("epsilon", &apc::BehaviorParams::epsilon);

    py::class_<apc::TransitionSchedule>(m, "TransitionSchedule")
        .def(py::init<>())
        .def_static("constants",
                    [](double gamma, double phi) {
                        apc::TransitionSchedule s;
                        s.gamma = {apc::Ramp::Kind::Constant, gamma, 0.0, 1.0};
                        s.phi = {apc::Ramp::Kind::Constant, phi, 0.0, 1.0};
                        return s;
                    },
                    py::arg("gamma") = 1.0, py::arg("phi") = 0.0)
        .def_static("smoothsteps",
                    [](double gamma_t0, double gamma_t1, double phi_t0, double phi_t1) {
                        apc::TransitionSchedule s;
                        s.gamma = {apc::Ramp::Kind::Smoothstep, 0.0, gamma_t0, gamma_t1};
                        s.phi = {apc::Ramp::Kind::Smoothstep, 0.0, phi_t0, phi_t1};
                        return s;
                    },
                    py::arg("gamma_t0"), py::arg("gamma_t1"), py::arg("phi_t0"),
                    py::arg("phi_t1"));

    m.def("xi", &apc::xi, py::arg("w"));
    m.def("zeta", &apc::zeta, py::arg("t"), py::arg("z0"), py::arg("z1"));
    m.def("gamma_at", &apc::gamma_at, py::arg("t"), py::arg("schedule"));
    m.def("phi_at", &apc::phi_at, py::arg("t"), py::arg("schedule"));
    m.def("imitation_f", &apc::imitation_f, py::arg("rho1"), py::arg("rho3"), py::arg("params"));
    m.def("imitation_g", &apc::imitation_g, py::arg("rho1"), py::arg("rho2"), py::arg("params"));
    m.def("imitation_h", &apc::imitation_h, py::arg("rho2"), py::arg("rho3"), py::arg("params"));
    m.def("reaction_rhs", &apc::reaction_rhs, py::arg("t"), py::arg("state"),
          py::arg("schedule"), py::arg("params"));
    m.def("reaction_rhs_pde", &apc::reaction_rhs_pde, py::arg("t"), py::arg("rho"),
          py::arg("schedule"), py::arg("params"));

    py::class_<apc::OdeTrajectory>(m, "OdeTrajectory")
        .def_readonly("times", &apc::OdeTrajectory::times)
        .def_readonly("states", &apc::OdeTrajectory::states);

    m.def(
        "integrate",
        [](double t0, double t1, double dt, const std::string& method,
           const apc::State6& initial, int store_every, const apc::TransitionSchedule& sched,
           const apc::BehaviorParams& params) {
            apc::OdeRun run;
            run.t0 = t0;
            run.t1 = t1;
            run.dt = dt;
            run.method = method_from_name(method);
            run.initial = initial;
            run.store_every = store_every;
            return apc::integrate(run, sched, params);
        },
        py::arg("t0") = 0.0, py::arg("t1") = 250.0, py::arg("dt") = 0.01,
        py::arg("method") = "rk4",
        py::arg("initial") = apc::State6{0, 0, 0, 1, 0, 0}, py::arg("store_every") = 1,
        py::arg("schedule") = apc::TransitionSchedule{},
        py::arg("params") = apc::BehaviorParams{});
    m.def("conservation_report", &apc::conservation_report, py::arg("trajectory"));

    py::class_<apc::ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def("__eq__",
             [](const apc::ScenarioConfig& a, const apc::ScenarioConfig& b) { return a == b; });

    m.def(
        "parse_config",
        [](const std::string& text, const std::vector<std::string>& overrides) {
            return apc::parse_config(text, overrides);
        },
        py::arg("text"), py::arg("overrides") = std::vector<std::string>{});
    m.def(
        "builtin_scenario",
        [](const std::string& name, const std::vector<std::string>& overrides) {
            return apc::builtin_scenario(name, overrides);
        },
        py::arg("name"), py::arg("overrides") = std::vector<std::string>{});
    m.def("echo_config", &apc::echo_config, py::arg("config"));

    m.def(
        "run_scenario",
        [](const apc::ScenarioConfig& cfg) { return summarize(apc::run_scenario(cfg)); },
        py::arg("config"),
        "Run a scenario and return the summary diagnostics as a dict.");

    m.def("validate", []() {
        py::list out;
        for (const apc::CheckResult& r : apc::run_validation()) {
            py::dict d;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            out.append(d);
        }
        return out;
    });
}
