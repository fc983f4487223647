#include "wakefc/aero.hpp"
#include "wakefc/config.hpp"
#include "wakefc/error.hpp"
#include "wakefc/farmopt.hpp"
#include "wakefc/gridsim.hpp"
#include "wakefc/studio.hpp"
#include "wakefc/wake.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace wakefc;

namespace {

FarmSolution solve(double v_free_mps, std::vector<double> dm, const TurbineParams& tp, const WakeParams& wp,
                   std::uint64_t seed, std::size_t multistart, const std::string& p_opt_reference)
{
    FarmProblem pb;
    pb.n = dm.size();
    pb.tp = tp;
    pb.wp = wp;
    pb.v_free_mps = v_free_mps;
    pb.dm = std::move(dm);
    pb.solver.seed = seed;
    pb.solver.multistart = multistart;
    if (p_opt_reference == "base_case") {
        pb.solver.p_opt_reference = PoptReference::base_case;
    } else if (p_opt_reference != "current_inflow") {
        throw DomainError("p_opt_reference must be current_inflow or base_case");
    }
    return solve_farm(pb);
}

std::string point_repr(const OperatingPoint& p)
{
    std::ostringstream os;
    os << "OperatingPoint(v=" << p.v_mps << ", omega=" << p.omega_pu << ", beta=" << p.beta_deg
       << ", p=" << p.p_mech_w << ")";
    return os.str();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Rotor kinetic-energy reserve optimiser and frequency simulator";

    auto base = py::register_exception<Error>(m, "WakefcError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
    py::register_exception<DegenerateWakeError>(m, "DegenerateWakeError", base.ptr());
    py::register_exception<SimulationError>(m, "SimulationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<TurbineParams>(m, "TurbineParams")
        .def(py::init<>())
        .def_readwrite("radius_m", &TurbineParams::radius_m)
        .def_readwrite("air_density", &TurbineParams::air_density)
        .def_readwrite("inertia_s", &TurbineParams::inertia_s)
        .def_readwrite("rated_power_w", &TurbineParams::rated_power_w)
        .def_readwrite("omega_rated_radps", &TurbineParams::omega_rated_radps)
        .def_readwrite("omega_min_pu", &TurbineParams::omega_min_pu)
        .def_readwrite("omega_max_pu", &TurbineParams::omega_max_pu)
        .def_readwrite("beta_max_deg", &TurbineParams::beta_max_deg)
        .def_readwrite("v_cutin_mps", &TurbineParams::v_cutin_mps)
        .def_readwrite("v_cutout_mps", &TurbineParams::v_cutout_mps)
        .def("validate", &TurbineParams::validate);

    py::class_<WakeParams>(m, "WakeParams")
        .def(py::init<>())
        .def_readwrite("k_prime", &WakeParams::k_prime)
        .def_readwrite("k", &WakeParams::k)
        .def("validate", &WakeParams::validate);

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def_readonly("v_mps", &OperatingPoint::v_mps)
        .def_readonly("omega_pu", &OperatingPoint::omega_pu)
        .def_readonly("beta_deg", &OperatingPoint::beta_deg)
        .def_readonly("tip_speed_ratio", &OperatingPoint::lambda)
        .def_readonly("cp", &OperatingPoint::cp)
        .def_readonly("ct", &OperatingPoint::ct)
        .def_readonly("p_mech_w", &OperatingPoint::p_mech_w)
        .def_readonly("e_kin_pus", &OperatingPoint::e_kin_pus)
        .def("__repr__", &point_repr);

    const TurbineParams dtp{};
    const WakeParams dwp{};

    m.def("tip_speed_ratio", &tip_speed_ratio, py::arg("omega_pu"), py::arg("v_mps"), py::arg("tp") = dtp);
    m.def("cp_surface", &cp_surface, py::arg("tip_speed_ratio"), py::arg("beta_deg"), py::arg("tp") = dtp);
    m.def("cp_from_ct", &cp_from_ct, py::arg("ct"));
    m.def("ct_from_cp", &ct_from_cp, py::arg("cp"));
    m.def("mech_power", &mech_power, py::arg("v_mps"), py::arg("omega_pu"), py::arg("beta_deg"), py::arg("tp") = dtp);
    m.def("thrust", &thrust, py::arg("v_mps"), py::arg("omega_pu"), py::arg("beta_deg"), py::arg("tp") = dtp);
    m.def("kinetic_energy", &kinetic_energy, py::arg("omega_pu"), py::arg("tp") = dtp);
    m.def("optimal_tip_speed_ratio", &optimal_tip_speed_ratio, py::arg("tp") = dtp);
    m.def("zone", &zone, py::arg("v_mps"), py::arg("tp") = dtp);
    m.def("mppt", py::overload_cast<double, const TurbineParams&>(&mppt), py::arg("v_mps"), py::arg("tp") = dtp);
    m.def("evaluate_point", &evaluate_point, py::arg("v_mps"), py::arg("omega_pu"), py::arg("beta_deg"),
          py::arg("tp") = dtp);

    m.def("next_wind", &next_wind, py::arg("v_free"), py::arg("v_i"), py::arg("ct_i"), py::arg("wp") = dwp);
    m.def(
        "propagate_row",
        [](double v_free, const std::vector<std::pair<double, double>>& setpoints, const TurbineParams& tp,
           const WakeParams& wp) {
            std::vector<Setpoint> sp;
            for (const auto& [w, b] : setpoints) {
                sp.push_back({w, b});
            }
            return propagate_row(v_free, sp, tp, wp).points;
        },
        py::arg("v_free"), py::arg("setpoints"), py::arg("tp") = dtp, py::arg("wp") = dwp,
        "Operating points down the row for (omega_pu, beta_deg) setpoints.");

    py::class_<SolverDiagnostics>(m, "SolverDiagnostics")
        .def_readonly("iterations", &SolverDiagnostics::iterations)
        .def_readonly("evaluations", &SolverDiagnostics::evaluations)
        .def_readonly("final_mesh", &SolverDiagnostics::final_mesh)
        .def_readonly("budget_exhausted", &SolverDiagnostics::budget_exhausted)
        .def_readonly("starts", &SolverDiagnostics::starts)
        .def_readonly("best_start", &SolverDiagnostics::best_start)
        .def_readonly("max_power_residual", &SolverDiagnostics::max_power_residual);

    py::class_<FarmSolution>(m, "FarmSolution")
        .def_readonly("turbines", &FarmSolution::turbines)
        .def_readonly("dm", &FarmSolution::dm)
        .def_readonly("p_target_w", &FarmSolution::p_target_w)
        .def_readonly("total_kinetic_pus", &FarmSolution::total_kinetic_pus)
        .def_readonly("total_power_w", &FarmSolution::total_power_w)
        .def_readonly("diagnostics", &FarmSolution::diagnostics);

    m.def("base_case", &base_case, py::arg("v_free_mps"), py::arg("n"), py::arg("tp") = dtp, py::arg("wp") = dwp);
    m.def("deload_curve", &deload_curve, py::arg("v_inflow_mps"), py::arg("dm"), py::arg("omega_pu"),
          py::arg("tp") = dtp);
    m.def("solve_farm", &solve, py::arg("v_free_mps"), py::arg("dm"), py::arg("tp") = dtp, py::arg("wp") = dwp,
          py::arg("seed") = 1, py::arg("multistart") = 5, py::arg("p_opt_reference") = "current_inflow",
          py::call_guard<py::gil_scoped_release>());

    py::class_<StudyConfig>(m, "StudyConfig")
        .def_readwrite("turbine", &StudyConfig::turbine)
        .def_readwrite("wake", &StudyConfig::wake)
        .def_readwrite("seed", &StudyConfig::seed)
        .def_property_readonly("case_ids", [](const StudyConfig& c) {
            std::vector<std::string> ids;
            for (const auto& k : c.farm.cases) {
                ids.push_back(k.id);
            }
            return ids;
        });
    m.def("default_config", &default_config);
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));

    py::class_<NadirMetrics>(m, "NadirMetrics")
        .def_readonly("present", &NadirMetrics::present)
        .def_readonly("nadir_hz", &NadirMetrics::nadir_hz)
        .def_readonly("nadir_time_s", &NadirMetrics::nadir_time_s)
        .def_readonly("delay_vs_reference_s", &NadirMetrics::delay_vs_reference_s)
        .def_readonly("peak_after_event_hz", &NadirMetrics::peak_after_event_hz)
        .def_readonly("final_hz", &NadirMetrics::final_hz);

    py::class_<SimTrace>(m, "SimTrace")
        .def_readonly("t_s", &SimTrace::t_s)
        .def_readonly("f_hz", &SimTrace::f_hz)
        .def_readonly("gen_names", &SimTrace::gen_names)
        .def_readonly("gen_p_mw", &SimTrace::gen_p_mw)
        .def_readonly("wind_p_elec_mw", &SimTrace::wind_p_elec_mw)
        .def_readonly("wind_p_aero_mw", &SimTrace::wind_p_aero_mw)
        .def_readonly("omega_pu", &SimTrace::omega_pu)
        .def_readonly("beta_deg", &SimTrace::beta_deg)
        .def_readonly("balance_residual_pu", &SimTrace::balance_residual_pu);

    py::class_<CaseRun>(m, "CaseRun")
        .def_readonly("case_id", &CaseRun::case_id)
        .def_readonly("trace", &CaseRun::trace)
        .def_readonly("metrics", &CaseRun::metrics);

    m.def("run_cases", &run_cases, py::arg("config"), py::arg("case_ids"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "sweep",
        [](const StudyConfig& cfg, const std::string& out_dir) {
            std::ostringstream log;
            return cmd_sweep(cfg, out_dir, log);
        },
        py::arg("config"), py::arg("out_dir"), py::call_guard<py::gil_scoped_release>(),
        "Runs the configured sweep and writes sweep.csv and plots; returns the exit code.");
    m.def(
        "simulate",
        [](const StudyConfig& cfg, const std::vector<std::string>& ids, const std::string& out_dir) {
            std::ostringstream log;
            return cmd_simulate(cfg, ids, out_dir, log);
        },
        py::arg("config"), py::arg("case_ids"), py::arg("out_dir"), py::call_guard<py::gil_scoped_release>(),
        "Runs the frequency experiment and writes traces, plots and metrics; returns the exit code.");
}
