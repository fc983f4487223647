#include "wakefc/studio.hpp"

#include "wakefc/error.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace wakefc {

namespace {

const std::vector<std::string> kSweepHeader{"case_id", "v_free",    "turbine_index", "omega_pu",
                                            "beta_deg", "v_inflow", "cp",            "ct",
                                            "p_mech_w", "e_kin_pus", "error"};

std::vector<std::string> turbine_row(const std::string& case_id, double v, std::size_t i, const OperatingPoint& p)
{
    return {case_id,
            format_double(v),
            std::to_string(i + 1),
            format_double(p.omega_pu),
            format_double(p.beta_deg),
            format_double(p.v_mps),
            format_double(p.cp),
            format_double(p.ct),
            format_double(p.p_mech_w),
            format_double(p.e_kin_pus),
            ""};
}

std::vector<std::string> total_row(const std::string& case_id, double v, const FarmSolution* s,
                                   const std::string& error)
{
    std::vector<std::string> r{case_id, format_double(v), "total", "", "", "", "", "", "", "", error};
    if (s) {
        r[8] = format_double(s->total_power_w);
        r[9] = format_double(s->total_kinetic_pus);
    }
    return r;
}

double cell_value(const std::string& s)
{
    return s.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(s);
}

std::filesystem::path prepare_dir(const std::string& out_dir)
{
    std::filesystem::path p(out_dir);
    std::filesystem::create_directories(p);
    return p;
}

std::string file_tag(double v)
{
    return "v" + format_double(v);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    f << text;
}

std::string solution_summary(const FarmSolution& s, const std::string& case_id, double v)
{
    std::ostringstream os;
    os << "case " << case_id << " at v_free = " << format_double(v) << " m/s\n";
    os << "turbine  omega_pu  beta_deg  v_inflow  p_mech_MW  e_kin_pus\n";
    for (std::size_t i = 0; i < s.turbines.size(); ++i) {
        const auto& p = s.turbines[i];
        char line[160];
        std::snprintf(line, sizeof line, "%7zu  %8.5f  %8.4f  %8.4f  %9.5f  %9.5f\n", i + 1, p.omega_pu, p.beta_deg,
                      p.v_mps, p.p_mech_w / 1e6, p.e_kin_pus);
        os << line;
    }
    char tail[256];
    std::snprintf(tail, sizeof tail,
                  "total kinetic energy %.6f pu*s, total power %.6f MW\n"
                  "starts %zu (best %zu), evaluations %zu, final mesh %.3g, max power residual %.3g%s\n",
                  s.total_kinetic_pus, s.total_power_w / 1e6, s.diagnostics.starts, s.diagnostics.best_start,
                  s.diagnostics.evaluations, s.diagnostics.final_mesh, s.diagnostics.max_power_residual,
                  s.diagnostics.budget_exhausted ? ", evaluation budget exhausted" : "");
    os << tail;
    return os.str();
}

} // namespace

Table solution_table(const FarmSolution& s, const std::string& case_id, double v_free_mps)
{
    Table t;
    t.header = kSweepHeader;
    for (std::size_t i = 0; i < s.turbines.size(); ++i) {
        t.rows.push_back(turbine_row(case_id, v_free_mps, i, s.turbines[i]));
    }
    t.rows.push_back(total_row(case_id, v_free_mps, &s, ""));
    return t;
}

Table sweep_table(const SweepResult& r)
{
    Table t;
    t.header = kSweepHeader;
    for (const auto& cell : r.cells) {
        if (cell.solution) {
            for (std::size_t i = 0; i < cell.solution->turbines.size(); ++i) {
                t.rows.push_back(turbine_row(cell.case_id, cell.v_free_mps, i, cell.solution->turbines[i]));
            }
        }
        t.rows.push_back(total_row(cell.case_id, cell.v_free_mps, cell.solution ? &*cell.solution : nullptr,
                                   cell.error));
    }
    return t;
}

Table trace_table(const SimTrace& tr)
{
    Table t;
    t.header = {"t_s", "f_hz"};
    for (const auto& g : tr.gen_names) {
        t.header.push_back(g + "_p_mw");
    }
    t.header.push_back("wind_p_elec_mw");
    t.header.push_back("wind_p_aero_mw");
    for (std::size_t i = 0; i < tr.omega_pu.size(); ++i) {
        t.header.push_back("wt" + std::to_string(i + 1) + "_omega_pu");
    }
    for (std::size_t i = 0; i < tr.beta_deg.size(); ++i) {
        t.header.push_back("wt" + std::to_string(i + 1) + "_beta_deg");
    }
    t.header.push_back("balance_residual_pu");
    t.header.push_back("event");
    std::size_t next_event = 0;
    for (std::size_t k = 0; k < tr.t_s.size(); ++k) {
        std::vector<std::string> r{format_double(tr.t_s[k]), format_double(tr.f_hz[k])};
        for (const auto& g : tr.gen_p_mw) {
            r.push_back(format_double(g[k]));
        }
        r.push_back(format_double(tr.wind_p_elec_mw[k]));
        r.push_back(format_double(tr.wind_p_aero_mw[k]));
        for (const auto& w : tr.omega_pu) {
            r.push_back(format_double(w[k]));
        }
        for (const auto& b : tr.beta_deg) {
            r.push_back(format_double(b[k]));
        }
        r.push_back(format_double(tr.balance_residual_pu[k]));
        std::string ev;
        while (next_event < tr.events.size() && tr.events[next_event].t_s <= tr.t_s[k]) {
            ev += (ev.empty() ? "" : "; ") + tr.events[next_event].label;
            ++next_event;
        }
        r.push_back(ev);
        t.rows.push_back(std::move(r));
    }
    return t;
}

std::vector<std::pair<std::string, PlotSpec>> sweep_plots(const Table& csv)
{
    const std::size_t c_case = csv.column("case_id");
    const std::size_t c_v = csv.column("v_free");
    const std::size_t c_idx = csv.column("turbine_index");
    const std::size_t c_w = csv.column("omega_pu");
    const std::size_t c_b = csv.column("beta_deg");
    const std::size_t c_p = csv.column("p_mech_w");
    const std::size_t c_e = csv.column("e_kin_pus");

    std::vector<PlotSeries> w, b, e, p;
    const auto series = [&](std::vector<PlotSeries>& s, const std::string& id) -> PlotSeries& {
        for (auto& x : s) {
            if (x.name == id) {
                return x;
            }
        }
        s.push_back({id, {}, {}});
        return s.back();
    };
    for (const auto& row : csv.rows) {
        const std::string& id = row[c_case];
        const double v = parse_double(row[c_v]);
        if (row[c_idx] == "1") {
            auto& sw = series(w, id);
            sw.x.push_back(v);
            sw.y.push_back(cell_value(row[c_w]));
            auto& sb = series(b, id);
            sb.x.push_back(v);
            sb.y.push_back(cell_value(row[c_b]));
        } else if (row[c_idx] == "total") {
            auto& se = series(e, id);
            se.x.push_back(v);
            se.y.push_back(cell_value(row[c_e]));
            auto& sp = series(p, id);
            sp.x.push_back(v);
            sp.y.push_back(cell_value(row[c_p]) / 1e6);
        }
    }
    return {
        {"sweep_omega.svg", {"Rotor speed of WT1", "free wind speed (m/s)", "omega (pu)", w}},
        {"sweep_beta.svg", {"Pitch angle of WT1", "free wind speed (m/s)", "beta (deg)", b}},
        {"sweep_kinetic_energy.svg", {"Total rotor kinetic energy", "free wind speed (m/s)", "E_k (pu*s)", e}},
        {"sweep_power.svg", {"Total row power", "free wind speed (m/s)", "P (MW)", p}},
    };
}

PlotSpec frequency_plot(const std::vector<std::pair<std::string, Table>>& traces)
{
    PlotSpec spec{"System frequency", "time (s)", "f (Hz)", {}};
    for (const auto& [id, t] : traces) {
        const std::size_t ct = t.column("t_s");
        const std::size_t cf = t.column("f_hz");
        PlotSeries s{"case " + id, {}, {}};
        for (const auto& r : t.rows) {
            s.x.push_back(parse_double(r[ct]));
            s.y.push_back(parse_double(r[cf]));
        }
        spec.series.push_back(std::move(s));
    }
    return spec;
}

PlotSpec rotor_plot(const std::string& case_id, const Table& t)
{
    PlotSpec spec{"Rotor speeds, case " + case_id, "time (s)", "omega (pu)", {}};
    const std::size_t ct = t.column("t_s");
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        const std::string& h = t.header[c];
        if (h.size() < 9 || h.compare(h.size() - 9, 9, "_omega_pu") != 0) {
            continue;
        }
        PlotSeries s{h.substr(0, h.size() - 9), {}, {}};
        for (const auto& r : t.rows) {
            s.x.push_back(parse_double(r[ct]));
            s.y.push_back(parse_double(r[c]));
        }
        spec.series.push_back(std::move(s));
    }
    return spec;
}

GridScenario build_scenario(const StudyConfig& cfg, const DmCase& c)
{
    GridScenario sc = cfg.grid.scenario;
    sc.tp = cfg.turbine;
    sc.wp = cfg.wake;
    if (cfg.grid.wind_enabled) {
        FarmProblem pb;
        pb.n = cfg.farm.n;
        pb.tp = cfg.turbine;
        pb.wp = cfg.wake;
        pb.v_free_mps = cfg.farm.v_free_mps;
        pb.dm = c.dm;
        pb.solver = cfg.farm.solver;
        WindRow w = cfg.grid.wind;
        w.v_free_mps = cfg.farm.v_free_mps;
        w.sub_solution = solve_farm(pb);
        w.opt_solution = base_case(cfg.farm.v_free_mps, cfg.farm.n, cfg.turbine, cfg.wake);
        sc.wind = std::move(w);
    }
    if (cfg.grid.balance_with) {
        sc.balance_with(*cfg.grid.balance_with);
    }
    return sc;
}

std::vector<CaseRun> run_cases(const StudyConfig& cfg, const std::vector<std::string>& case_ids)
{
    std::vector<CaseRun> runs;
    for (const auto& id : case_ids) {
        CaseRun r;
        r.case_id = id;
        r.trace = simulate(build_scenario(cfg, cfg.farm.find_case(id)));
        runs.push_back(std::move(r));
    }
    const std::string& ref_id = cfg.farm.cases.front().id;
    const SimTrace* ref = nullptr;
    for (const auto& r : runs) {
        if (r.case_id == ref_id) {
            ref = &r.trace;
        }
    }
    for (auto& r : runs) {
        r.metrics = nadir_metrics(r.trace, r.case_id == ref_id ? nullptr : ref);
    }
    return runs;
}

std::string metrics_summary(const std::vector<CaseRun>& runs)
{
    std::ostringstream os;
    for (const auto& r : runs) {
        const NadirMetrics& m = r.metrics;
        os << "case " << r.case_id << "\n";
        if (!m.present) {
            os << "  nadir: absent\n";
        } else {
            os << "  nadir_hz: " << format_double(m.nadir_hz) << "\n";
            os << "  nadir_time_s: " << format_double(m.nadir_time_s) << "\n";
            os << "  delay_vs_reference_s: "
               << (m.delay_vs_reference_s ? format_double(*m.delay_vs_reference_s) : std::string("absent")) << "\n";
            os << "  peak_after_event_hz: " << format_double(m.peak_after_event_hz) << "\n";
        }
        os << "  final_hz: " << format_double(m.final_hz) << "\n";
    }
    return os.str();
}

int cmd_optimize(const StudyConfig& cfg, double v, const std::string& case_id, const std::string& out_dir,
                 std::ostream& log)
{
    const DmCase& c = cfg.farm.find_case(case_id);
    FarmProblem pb;
    pb.n = cfg.farm.n;
    pb.tp = cfg.turbine;
    pb.wp = cfg.wake;
    pb.v_free_mps = v;
    pb.dm = c.dm;
    pb.solver = cfg.farm.solver;
    FarmSolution s;
    try {
        s = solve_farm(pb);
    } catch (const InfeasibleError& e) {
        log << "infeasible: " << e.what() << "\n";
        return exit_code::failed;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return exit_code::failed;
    }
    const auto dir = prepare_dir(out_dir);
    const std::string stem = "optimize_" + case_id + "_" + file_tag(v);
    write_csv_file((dir / (stem + ".csv")).string(), solution_table(s, case_id, v));
    const std::string summary = solution_summary(s, case_id, v);
    write_text(dir / (stem + ".txt"), summary);
    log << summary;
    return exit_code::ok;
}

int cmd_sweep(const StudyConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    const std::vector<double> vs = cfg.farm.sweep.values();
    const SweepResult r = sweep(vs, cfg.farm.cases, cfg.farm.n, cfg.turbine, cfg.wake, cfg.farm.solver,
                                cfg.farm.threads);
    std::size_t ok = 0;
    for (const auto& c : r.cells) {
        if (c.solution) {
            ++ok;
        } else {
            log << "cell " << c.case_id << " @ " << format_double(c.v_free_mps) << " m/s failed: " << c.error << "\n";
        }
    }
    const auto dir = prepare_dir(out_dir);
    const Table t = sweep_table(r);
    write_csv_file((dir / "sweep.csv").string(), t);
    if (cfg.output.svg) {
        for (const auto& [name, spec] : sweep_plots(t)) {
            write_svg_file((dir / name).string(), spec);
        }
    }
    log << "sweep: " << ok << " of " << r.cells.size() << " cells solved, written to " << dir.string() << "\n";
    return ok > 0 ? exit_code::ok : exit_code::failed;
}

int cmd_simulate(const StudyConfig& cfg, const std::vector<std::string>& case_ids, const std::string& out_dir,
                 std::ostream& log)
{
    std::vector<std::string> ids = case_ids;
    if (ids.empty()) {
        for (const auto& c : cfg.farm.cases) {
            ids.push_back(c.id);
        }
    }
    for (const auto& id : ids) {
        (void)cfg.farm.find_case(id);
    }
    std::vector<CaseRun> runs;
    try {
        runs = run_cases(cfg, ids);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        log << "simulation failed: " << e.what() << "\n";
        return exit_code::failed;
    }
    const auto dir = prepare_dir(out_dir);
    std::vector<std::pair<std::string, Table>> tables;
    for (const auto& r : runs) {
        Table t = trace_table(r.trace);
        write_csv_file((dir / ("trace_" + r.case_id + ".csv")).string(), t);
        if (cfg.output.svg) {
            write_svg_file((dir / ("rotor_" + r.case_id + ".svg")).string(), rotor_plot(r.case_id, t));
        }
        tables.emplace_back(r.case_id, std::move(t));
    }
    if (cfg.output.svg) {
        write_svg_file((dir / "frequency.svg").string(), frequency_plot(tables));
    }
    const std::string summary = metrics_summary(runs);
    if (cfg.output.metrics) {
        write_text(dir / "metrics.txt", summary);
    }
    log << summary;
    return exit_code::ok;
}

} // namespace wakefc
