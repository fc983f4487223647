#include "wakefc/config.hpp"

#include "wakefc/error.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace wakefc {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw ConfigError(key + ": " + what);
}

void allow_keys(const YAML::Node& node, const std::string& path, std::initializer_list<const char*> keys)
{
    if (!node.IsMap()) {
        fail(path.empty() ? "<root>" : path, "expected a mapping");
    }
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& kv : node) {
        const auto k = kv.first.as<std::string>();
        if (!ok.count(k)) {
            fail(path.empty() ? k : path + "." + k, "unknown key");
        }
    }
}

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

template <class T>
void read(const YAML::Node& node, const std::string& path, const char* key, T& out)
{
    const YAML::Node v = node[key];
    if (!v) {
        return;
    }
    try {
        out = v.as<T>();
    } catch (const YAML::Exception&) {
        fail(join(path, key), "has the wrong type");
    }
}

void read_size(const YAML::Node& node, const std::string& path, const char* key, std::size_t& out)
{
    long long v = static_cast<long long>(out);
    read(node, path, key, v);
    if (v < 0) {
        fail(join(path, key), "must be >= 0");
    }
    out = static_cast<std::size_t>(v);
}

void rethrow_as_config(const std::string& path, const std::function<void()>& f)
{
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

void parse_turbine(const YAML::Node& n, TurbineParams& tp)
{
    const std::string p = "turbine";
    allow_keys(n, p,
               {"radius_m", "air_density", "inertia_s", "rated_power_w", "omega_rated_radps", "omega_min_pu",
                "omega_max_pu", "beta_max_deg", "v_cutin_mps", "v_cutout_mps", "cp_coeffs"});
    read(n, p, "radius_m", tp.radius_m);
    read(n, p, "air_density", tp.air_density);
    read(n, p, "inertia_s", tp.inertia_s);
    read(n, p, "rated_power_w", tp.rated_power_w);
    read(n, p, "omega_rated_radps", tp.omega_rated_radps);
    read(n, p, "omega_min_pu", tp.omega_min_pu);
    read(n, p, "omega_max_pu", tp.omega_max_pu);
    read(n, p, "beta_max_deg", tp.beta_max_deg);
    read(n, p, "v_cutin_mps", tp.v_cutin_mps);
    read(n, p, "v_cutout_mps", tp.v_cutout_mps);
    if (const YAML::Node c = n["cp_coeffs"]) {
        const std::string pc = "turbine.cp_coeffs";
        allow_keys(c, pc, {"c", "lambda_i_pitch", "lambda_i_cubic"});
        std::vector<double> cs(tp.cp_coeffs.c.begin(), tp.cp_coeffs.c.end());
        read(c, pc, "c", cs);
        if (cs.size() != 6) {
            fail(pc + ".c", "needs exactly 6 coefficients");
        }
        std::copy(cs.begin(), cs.end(), tp.cp_coeffs.c.begin());
        read(c, pc, "lambda_i_pitch", tp.cp_coeffs.lambda_i_pitch);
        read(c, pc, "lambda_i_cubic", tp.cp_coeffs.lambda_i_cubic);
    }
}

void parse_solver(const YAML::Node& n, SolverOptions& s)
{
    const std::string p = "farm.solver";
    allow_keys(n, p,
               {"initial_mesh", "mesh_tolerance", "expansion", "contraction", "max_evaluations", "penalty", "poll",
                "multistart", "p_opt_reference"});
    read(n, p, "initial_mesh", s.search.initial_mesh);
    read(n, p, "mesh_tolerance", s.search.mesh_tolerance);
    read(n, p, "expansion", s.search.expansion);
    read(n, p, "contraction", s.search.contraction);
    read_size(n, p, "max_evaluations", s.search.max_evaluations);
    read(n, p, "penalty", s.search.penalty);
    read_size(n, p, "multistart", s.multistart);
    std::string poll = s.search.poll == PollOrder::complete ? "complete" : "opportunistic";
    read(n, p, "poll", poll);
    if (poll == "complete") {
        s.search.poll = PollOrder::complete;
    } else if (poll == "opportunistic") {
        s.search.poll = PollOrder::opportunistic;
    } else {
        fail(p + ".poll", "must be complete or opportunistic");
    }
    std::string ref = s.p_opt_reference == PoptReference::current_inflow ? "current_inflow" : "base_case";
    read(n, p, "p_opt_reference", ref);
    if (ref == "current_inflow") {
        s.p_opt_reference = PoptReference::current_inflow;
    } else if (ref == "base_case") {
        s.p_opt_reference = PoptReference::base_case;
    } else {
        fail(p + ".p_opt_reference", "must be current_inflow or base_case");
    }
}

void parse_farm(const YAML::Node& n, FarmConfig& f, bool& cases_given)
{
    const std::string p = "farm";
    allow_keys(n, p, {"n", "v_free_mps", "sweep", "cases", "solver", "threads"});
    read_size(n, p, "n", f.n);
    read(n, p, "v_free_mps", f.v_free_mps);
    read(n, p, "threads", f.threads);
    if (const YAML::Node s = n["sweep"]) {
        allow_keys(s, "farm.sweep", {"v_start_mps", "v_stop_mps", "v_step_mps"});
        read(s, "farm.sweep", "v_start_mps", f.sweep.v_start_mps);
        read(s, "farm.sweep", "v_stop_mps", f.sweep.v_stop_mps);
        read(s, "farm.sweep", "v_step_mps", f.sweep.v_step_mps);
    }
    if (const YAML::Node s = n["solver"]) {
        parse_solver(s, f.solver);
    }
    if (const YAML::Node cs = n["cases"]) {
        if (!cs.IsSequence()) {
            fail("farm.cases", "expected a list");
        }
        cases_given = true;
        f.cases.clear();
        for (std::size_t k = 0; k < cs.size(); ++k) {
            const std::string pk = "farm.cases[" + std::to_string(k) + "]";
            allow_keys(cs[k], pk, {"id", "dm"});
            DmCase c;
            read(cs[k], pk, "id", c.id);
            read(cs[k], pk, "dm", c.dm);
            if (c.id.empty()) {
                fail(pk + ".id", "is required");
            }
            if (!cs[k]["dm"]) {
                fail(pk + ".dm", "is required");
            }
            f.cases.push_back(std::move(c));
        }
    }
}

Ieeeg1Params parse_ieeeg1(const YAML::Node& n, const std::string& p)
{
    Ieeeg1Params g;
    allow_keys(n, p,
               {"type", "t_servo_s", "rate_open_pu_s", "rate_close_pu_s", "p_min_pu", "t4_s", "t5_s", "t6_s", "k1",
                "k3", "k5"});
    read(n, p, "t_servo_s", g.t_servo_s);
    read(n, p, "rate_open_pu_s", g.rate_open_pu_s);
    read(n, p, "rate_close_pu_s", g.rate_close_pu_s);
    read(n, p, "p_min_pu", g.p_min_pu);
    read(n, p, "t4_s", g.t4_s);
    read(n, p, "t5_s", g.t5_s);
    read(n, p, "t6_s", g.t6_s);
    read(n, p, "k1", g.k1);
    read(n, p, "k3", g.k3);
    read(n, p, "k5", g.k5);
    return g;
}

Tgov1Params parse_tgov1(const YAML::Node& n, const std::string& p)
{
    Tgov1Params g;
    allow_keys(n, p, {"type", "t_valve_s", "t_gate_s", "t_lead_s", "t_lag_s", "p_min_pu"});
    read(n, p, "t_valve_s", g.t_valve_s);
    read(n, p, "t_gate_s", g.t_gate_s);
    read(n, p, "t_lead_s", g.t_lead_s);
    read(n, p, "t_lag_s", g.t_lag_s);
    read(n, p, "p_min_pu", g.p_min_pu);
    return g;
}

SyncGen parse_gen(const YAML::Node& n, const std::string& p)
{
    allow_keys(n, p,
               {"name", "kind", "p_out_mw", "p_max_mw", "governor", "droop_frac", "inertia_s", "rating_mva", "online"});
    SyncGen g;
    read(n, p, "name", g.name);
    if (g.name.empty()) {
        fail(p + ".name", "is required");
    }
    std::string kind = "gas";
    read(n, p, "kind", kind);
    if (kind == "steam") {
        g.kind = GenKind::steam;
        g.inertia_s = 4.0;
        g.governor = Ieeeg1Params{};
    } else if (kind == "gas") {
        g.kind = GenKind::gas;
        g.inertia_s = 5.0;
        g.governor = Tgov1Params{};
    } else {
        fail(p + ".kind", "must be steam or gas");
    }
    read(n, p, "p_out_mw", g.p_out_mw);
    read(n, p, "p_max_mw", g.p_max_mw);
    read(n, p, "droop_frac", g.droop_frac);
    read(n, p, "inertia_s", g.inertia_s);
    read(n, p, "rating_mva", g.rating_mva);
    read(n, p, "online", g.online);
    if (const YAML::Node gov = n["governor"]) {
        std::string type;
        read(gov, p + ".governor", "type", type);
        if (type == "IEEEG1") {
            g.governor = parse_ieeeg1(gov, p + ".governor");
        } else if (type == "TGOV1") {
            g.governor = parse_tgov1(gov, p + ".governor");
        } else {
            fail(p + ".governor.type", "must be IEEEG1 or TGOV1");
        }
    }
    return g;
}

void parse_wind(const YAML::Node& n, GridConfig& g)
{
    const std::string p = "grid.wind";
    allow_keys(n, p,
               {"enabled", "row_count", "wt_droop_frac", "droop_enabled", "release_ramp_s", "speed_gain_pu",
                "release_limit_pu", "pitch_rate_deg_s", "pitch_time_constant_s", "overspeed_margin_pu"});
    WindRow& w = g.wind;
    read(n, p, "enabled", g.wind_enabled);
    read_size(n, p, "row_count", w.row_count);
    read(n, p, "wt_droop_frac", w.wt_droop_frac);
    read(n, p, "droop_enabled", w.droop_enabled);
    read(n, p, "release_ramp_s", w.release_ramp_s);
    read(n, p, "speed_gain_pu", w.speed_gain_pu);
    read(n, p, "release_limit_pu", w.release_limit_pu);
    read(n, p, "pitch_rate_deg_s", w.pitch_rate_deg_s);
    read(n, p, "pitch_time_constant_s", w.pitch_time_constant_s);
    read(n, p, "overspeed_margin_pu", w.overspeed_margin_pu);
}

void parse_grid(const YAML::Node& n, GridConfig& g)
{
    const std::string p = "grid";
    allow_keys(n, p,
               {"f_nominal_hz", "s_base_mva", "load_mw", "load_damping", "t_end_s", "dt_s", "balance_with",
                "generators", "wind", "events"});
    GridScenario& sc = g.scenario;
    read(n, p, "f_nominal_hz", sc.f_nominal_hz);
    read(n, p, "s_base_mva", sc.s_base_mva);
    read(n, p, "load_mw", sc.load_mw);
    read(n, p, "load_damping", sc.load_damping);
    read(n, p, "t_end_s", sc.t_end_s);
    read(n, p, "dt_s", sc.dt_s);
    if (const YAML::Node b = n["balance_with"]) {
        if (b.IsNull()) {
            g.balance_with.reset();
        } else {
            g.balance_with = b.as<std::string>();
        }
    }
    if (const YAML::Node gens = n["generators"]) {
        if (!gens.IsSequence()) {
            fail("grid.generators", "expected a list");
        }
        sc.gens.clear();
        for (std::size_t k = 0; k < gens.size(); ++k) {
            sc.gens.push_back(parse_gen(gens[k], "grid.generators[" + std::to_string(k) + "]"));
        }
    }
    if (const YAML::Node w = n["wind"]) {
        parse_wind(w, g);
    }
    if (const YAML::Node ev = n["events"]) {
        if (!ev.IsSequence()) {
            fail("grid.events", "expected a list");
        }
        sc.events.clear();
        for (std::size_t k = 0; k < ev.size(); ++k) {
            const std::string pk = "grid.events[" + std::to_string(k) + "]";
            allow_keys(ev[k], pk, {"type", "t_s", "gen"});
            std::string type;
            double t = 0.0;
            read(ev[k], pk, "type", type);
            read(ev[k], pk, "t_s", t);
            if (!ev[k]["t_s"]) {
                fail(pk + ".t_s", "is required");
            }
            if (type == "trip") {
                TripEvent e{t, ""};
                read(ev[k], pk, "gen", e.gen);
                if (e.gen.empty()) {
                    fail(pk + ".gen", "is required for a trip");
                }
                sc.events.emplace_back(e);
            } else if (type == "switch") {
                if (ev[k]["gen"]) {
                    fail(pk + ".gen", "not allowed on a switch event");
                }
                sc.events.emplace_back(SwitchEvent{t});
            } else {
                fail(pk + ".type", "must be trip or switch");
            }
        }
    }
}

void parse_output(const YAML::Node& n, OutputConfig& o)
{
    allow_keys(n, "output", {"directory", "formats"});
    read(n, "output", "directory", o.directory);
    if (const YAML::Node f = n["formats"]) {
        std::vector<std::string> formats;
        read(n, "output", "formats", formats);
        o.csv = o.svg = o.metrics = false;
        for (const auto& s : formats) {
            if (s == "csv") {
                o.csv = true;
            } else if (s == "svg-plot") {
                o.svg = true;
            } else if (s == "metrics-summary") {
                o.metrics = true;
            } else {
                fail("output.formats", "unknown format '" + s + "' (csv, svg-plot, metrics-summary)");
            }
        }
        if (!o.csv) {
            fail("output.formats", "csv is the authoritative output and cannot be disabled");
        }
    }
}

std::vector<DmCase> default_cases(std::size_t n)
{
    std::vector<DmCase> out;
    const std::pair<const char*, double> defs[] = {{"I", 0.0}, {"II", 0.05}, {"III", 0.10}};
    for (const auto& [id, d] : defs) {
        DmCase c{id, std::vector<double>(n, d)};
        c.dm.back() = 0.0;
        out.push_back(std::move(c));
    }
    return out;
}

void validate(StudyConfig& c)
{
    rethrow_as_config("turbine", [&] { c.turbine.validate(); });
    rethrow_as_config("wake", [&] { c.wake.validate(); });
    FarmConfig& f = c.farm;
    if (f.n < 1) {
        fail("farm.n", "must be >= 1");
    }
    if (!(f.v_free_mps >= c.turbine.v_cutin_mps && f.v_free_mps <= c.turbine.v_cutout_mps)) {
        fail("farm.v_free_mps", "must lie between cut-in and cut-out");
    }
    const SweepRange& s = f.sweep;
    if (!(s.v_step_mps > 0.0 && s.v_stop_mps >= s.v_start_mps)) {
        fail("farm.sweep", "need v_step_mps > 0 and v_stop_mps >= v_start_mps");
    }
    if (!(s.v_start_mps >= c.turbine.v_cutin_mps && s.v_stop_mps <= c.turbine.v_cutout_mps)) {
        fail("farm.sweep", "range must lie between cut-in and cut-out");
    }
    if (f.cases.empty()) {
        fail("farm.cases", "at least one case is required");
    }
    std::set<std::string> ids;
    for (std::size_t k = 0; k < f.cases.size(); ++k) {
        const std::string pk = "farm.cases[" + std::to_string(k) + "]";
        const DmCase& dc = f.cases[k];
        if (!ids.insert(dc.id).second) {
            fail(pk + ".id", "duplicate case id " + dc.id);
        }
        if (dc.dm.size() != f.n) {
            fail(pk + ".dm", "needs " + std::to_string(f.n) + " entries (one per turbine)");
        }
        for (double d : dc.dm) {
            if (!(d >= 0.0 && d < 1.0)) {
                fail(pk + ".dm", "entries must lie in [0, 1)");
            }
        }
        if (dc.dm.back() != 0.0) {
            fail(pk + ".dm",
                 "last entry must be 0: the last turbine maximises its power production without de-loading");
        }
    }
    const PatternSearchOptions& o = f.solver.search;
    if (!(o.initial_mesh > 0.0 && o.mesh_tolerance > 0.0 && o.expansion >= 1.0 && o.contraction > 0.0
          && o.contraction < 1.0 && o.max_evaluations > 0 && o.penalty > 0.0)) {
        fail("farm.solver", "invalid pattern-search settings");
    }
    if (f.solver.multistart < 1) {
        fail("farm.solver.multistart", "must be >= 1");
    }

    GridScenario& sc = c.grid.scenario;
    if (!(sc.dt_s > 0.0 && sc.t_end_s > 0.0)) {
        fail("grid", "dt_s and t_end_s must be > 0");
    }
    if (!(sc.f_nominal_hz > 0.0 && sc.s_base_mva > 0.0 && sc.load_damping >= 0.0 && sc.load_mw >= 0.0)) {
        fail("grid", "f_nominal_hz and s_base_mva must be > 0; load_mw and load_damping >= 0");
    }
    std::set<std::string> names;
    for (std::size_t k = 0; k < sc.gens.size(); ++k) {
        rethrow_as_config("grid.generators[" + std::to_string(k) + "]", [&] { sc.gens[k].validate(); });
        if (!names.insert(sc.gens[k].name).second) {
            fail("grid.generators[" + std::to_string(k) + "].name", "duplicate generator name");
        }
        std::visit([&](const auto& g) {
            rethrow_as_config("grid.generators[" + std::to_string(k) + "].governor", [&] {
                auto copy = g;
                copy.droop = sc.gens[k].droop_frac;
                copy.validate();
            });
        }, sc.gens[k].governor);
    }
    if (c.grid.balance_with && !names.count(*c.grid.balance_with)) {
        fail("grid.balance_with", "names unknown generator " + *c.grid.balance_with);
    }
    for (std::size_t k = 0; k < sc.events.size(); ++k) {
        if (const auto* t = std::get_if<TripEvent>(&sc.events[k]); t && !names.count(t->gen)) {
            fail("grid.events[" + std::to_string(k) + "].gen", "names unknown generator " + t->gen);
        }
        const double t_s = std::visit([](const auto& e) { return e.t_s; }, sc.events[k]);
        if (!(t_s >= 0.0)) {
            fail("grid.events[" + std::to_string(k) + "].t_s", "must be >= 0");
        }
    }
    const WindRow& w = c.grid.wind;
    if (w.row_count < 1) {
        fail("grid.wind.row_count", "must be >= 1");
    }
    if (!(w.wt_droop_frac > 0.0 && w.speed_gain_pu > 0.0 && w.release_limit_pu > 0.0 && w.pitch_rate_deg_s > 0.0
          && w.pitch_time_constant_s > 0.0 && w.release_ramp_s >= 0.0 && w.overspeed_margin_pu >= 0.0)) {
        fail("grid.wind", "gains, limits and time constants must be positive");
    }
}

} // namespace

std::vector<double> SweepRange::values() const
{
    std::vector<double> v;
    const auto count = static_cast<long long>(std::floor((v_stop_mps - v_start_mps) / v_step_mps + 1e-9));
    for (long long i = 0; i <= count; ++i) {
        v.push_back(v_start_mps + static_cast<double>(i) * v_step_mps);
    }
    return v;
}

const DmCase& FarmConfig::find_case(const std::string& id) const
{
    for (const auto& c : cases) {
        if (c.id == id) {
            return c;
        }
    }
    throw ConfigError("unknown case id " + id);
}

GridScenario default_grid_scenario()
{
    GridScenario sc;
    SyncGen sg1{"SG1", GenKind::steam, 25.5, 45.0, Ieeeg1Params{}, 0.20, 4.0};
    SyncGen sg2{"SG2", GenKind::gas, 45.0, 50.0, Tgov1Params{}, 0.05, 5.0};
    SyncGen sg3{"SG3", GenKind::gas, 20.0, 25.0, Tgov1Params{}, 0.05, 5.0};
    sc.gens = {sg1, sg2, sg3};
    sc.load_mw = 130.0;
    sc.s_base_mva = 130.0;
    sc.events = {TripEvent{10.0, "SG3"}, SwitchEvent{10.0}};
    return sc;
}

StudyConfig default_config()
{
    StudyConfig c;
    c.grid.scenario = default_grid_scenario();
    c.grid.wind.row_count = 5;
    c.farm.cases = default_cases(c.farm.n);
    c.farm.solver.seed = c.seed;
    return c;
}

StudyConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    StudyConfig c = default_config();
    bool cases_given = false;
    if (root.IsNull()) {
        validate(c);
        return c;
    }
    allow_keys(root, "", {"seed", "turbine", "wake", "farm", "grid", "output"});
    try {
        if (const YAML::Node s = root["seed"]) {
            long long seed = 0;
            read(root, "", "seed", seed);
            if (seed < 0) {
                fail("seed", "must be >= 0");
            }
            c.seed = static_cast<std::uint64_t>(seed);
        }
        if (const YAML::Node n = root["turbine"]) {
            parse_turbine(n, c.turbine);
        }
        if (const YAML::Node n = root["wake"]) {
            allow_keys(n, "wake", {"k_prime", "k"});
            read(n, "wake", "k_prime", c.wake.k_prime);
            read(n, "wake", "k", c.wake.k);
        }
        if (const YAML::Node n = root["farm"]) {
            parse_farm(n, c.farm, cases_given);
        }
        if (const YAML::Node n = root["grid"]) {
            parse_grid(n, c.grid);
        }
        if (const YAML::Node n = root["output"]) {
            parse_output(n, c.output);
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed value: ") + e.what());
    }
    if (!cases_given) {
        c.farm.cases = default_cases(c.farm.n);
    }
    c.farm.solver.seed = c.seed;
    validate(c);
    return c;
}

StudyConfig load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot open config file " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

} // namespace wakefc
