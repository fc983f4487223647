#include "wakefc/gridsim.hpp"

#include "wakefc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace wakefc {

namespace {

struct WindOut {
    double p_elec_w = 0.0; // one row
    double p_aero_w = 0.0;
};

double ramp_fraction(const WindRow& row, WtMode mode, double elapsed)
{
    if (mode == WtMode::sub_optimal) {
        return 0.0;
    }
    if (row.release_ramp_s <= 0.0) {
        return 1.0;
    }
    return std::clamp(elapsed / row.release_ramp_s, 0.0, 1.0);
}

// Right-hand side of one row's rotor and pitch dynamics.
WindOut wind_rhs(const WindRow& row, const TurbineParams& tp, const WakeParams& wp, const double* omega,
                 const double* beta, WtMode mode, double elapsed, double f_dev_pu, double* d_omega, double* d_beta)
{
    const auto& sub = row.sub_solution.turbines;
    const auto& opt = row.opt_solution.turbines;
    const std::size_t n = sub.size();
    const double r = ramp_fraction(row, mode, elapsed);
    const double s_turb = tp.rated_power_w;
    WindOut out;
    double v = row.v_free_mps;
    for (std::size_t i = 0; i < n; ++i) {
        const bool deloaded = row.sub_solution.dm[i] > 0.0;
        double w_ref = sub[i].omega_pu;
        double b_ref = sub[i].beta_deg;
        if (deloaded && r > 0.0) {
            w_ref += r * (opt[i].omega_pu - sub[i].omega_pu);
            b_ref += r * (opt[i].beta_deg - sub[i].beta_deg);
        }
        const double b = std::clamp(beta[i], 0.0, tp.beta_max_deg);
        const double lambda = tip_speed_ratio(omega[i], v, tp);
        const double cp = cp_surface(lambda, b, tp);
        const double p_aero = 0.5 * tp.air_density * tp.swept_area() * v * v * v * cp;

        double p_elec = p_aero + s_turb * std::clamp(row.speed_gain_pu * (omega[i] - w_ref), -row.release_limit_pu,
                                                     row.release_limit_pu);
        if (row.droop_enabled && deloaded && mode == WtMode::sub_optimal) {
            const double headroom = std::max(opt[i].p_mech_w - sub[i].p_mech_w, 0.0);
            p_elec += std::clamp(-f_dev_pu / row.wt_droop_frac * s_turb, -headroom, headroom);
        }
        if (d_omega) {
            d_omega[i] = (p_aero - p_elec) / s_turb / (2.0 * tp.inertia_s * omega[i]);
            d_beta[i] = std::clamp((b_ref - beta[i]) / row.pitch_time_constant_s, -row.pitch_rate_deg_s,
                                   row.pitch_rate_deg_s);
        }
        out.p_elec_w += p_elec;
        out.p_aero_w += p_aero;
        if (i + 1 < n) {
            v = next_wind(row.v_free_mps, v, ct_from_cp(cp), wp);
        }
    }
    return out;
}

void check_rotor(const WindRow& row, const TurbineParams& tp, std::span<const double> omega, double t)
{
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!(omega[i] >= tp.omega_min_pu - 1e-9 && omega[i] <= tp.omega_max_pu + row.overspeed_margin_pu)) {
            std::ostringstream os;
            os << "rotor speed of turbine " << i + 1 << " left its limits (" << omega[i] << " pu) at t = " << t
               << " s";
            throw SimulationError(os.str());
        }
    }
}

// Governor block with the machine's droop and limits substituted.
struct Machine {
    std::variant<Ieeeg1Params, Tgov1Params> gov;
    double rating = 0.0;
    double inertia = 0.0;
    bool online = true;

    std::array<double, 4> deriv(const GovernorState& s, double f_dev) const
    {
        return std::visit(
            [&](const auto& p) {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, Ieeeg1Params>) {
                    return ieeeg1_deriv(s, f_dev, p);
                } else {
                    return tgov1_deriv(s, f_dev, p);
                }
            },
            gov);
    }
    double output(const GovernorState& s) const
    {
        return std::visit(
            [&](const auto& p) {
                if constexpr (std::is_same_v<std::decay_t<decltype(p)>, Ieeeg1Params>) {
                    return ieeeg1_output(s, p);
                } else {
                    return tgov1_output(s, p);
                }
            },
            gov);
    }
};

Machine make_machine(const SyncGen& g)
{
    Machine m;
    m.rating = g.rating();
    m.inertia = g.inertia_s;
    m.online = g.online;
    m.gov = std::visit(
        [&](auto p) -> std::variant<Ieeeg1Params, Tgov1Params> {
            p.droop = g.droop_frac;
            p.p_max_pu = g.p_max_mw / m.rating;
            p.validate();
            return p;
        },
        g.governor);
    return m;
}

double wind_initial_mw(const GridScenario& sc)
{
    if (!sc.wind) {
        return 0.0;
    }
    return sc.wind->sub_solution.total_power_w * static_cast<double>(sc.wind->row_count) / 1e6;
}

} // namespace

void SyncGen::validate() const
{
    if (!(p_max_mw > 0.0)) {
        throw DomainError("generator " + name + ": p_max_mw must be > 0");
    }
    if (!(p_out_mw >= 0.0 && p_out_mw <= p_max_mw)) {
        throw DomainError("generator " + name + ": need 0 <= p_out_mw <= p_max_mw");
    }
    if (!(droop_frac > 0.0)) {
        throw DomainError("generator " + name + ": droop_frac must be > 0");
    }
    if (!(inertia_s > 0.0)) {
        throw DomainError("generator " + name + ": inertia_s must be > 0");
    }
    if (rating_mva < 0.0) {
        throw DomainError("generator " + name + ": rating_mva must be >= 0");
    }
}

void WindRow::validate() const
{
    const std::size_t n = sub_solution.turbines.size();
    if (n == 0 || opt_solution.turbines.size() != n || sub_solution.dm.size() != n) {
        throw DomainError("WindRow: sub and opt solutions must describe the same nonempty row");
    }
    if (row_count < 1) {
        throw DomainError("WindRow: row_count must be >= 1");
    }
    if (!(wt_droop_frac > 0.0 && speed_gain_pu > 0.0 && release_limit_pu > 0.0)) {
        throw DomainError("WindRow: droop, speed gain and release limit must be > 0");
    }
    if (!(pitch_rate_deg_s > 0.0 && pitch_time_constant_s > 0.0 && release_ramp_s >= 0.0
          && overspeed_margin_pu >= 0.0)) {
        throw DomainError("WindRow: invalid pitch or ramp settings");
    }
    if (!(v_free_mps > 0.0)) {
        throw DomainError("WindRow: free wind speed must be > 0");
    }
}

void GridScenario::validate() const
{
    if (!(dt_s > 0.0 && t_end_s > 0.0)) {
        throw DomainError("GridScenario: dt_s and t_end_s must be > 0");
    }
    if (!(f_nominal_hz > 0.0 && s_base_mva > 0.0 && load_damping >= 0.0 && load_mw >= 0.0)) {
        throw DomainError("GridScenario: invalid system constants");
    }
    std::set<std::string> names;
    for (const auto& g : gens) {
        g.validate();
        if (!names.insert(g.name).second) {
            throw DomainError("GridScenario: duplicate generator name " + g.name);
        }
    }
    if (wind) {
        wind->validate();
        tp.validate();
        wp.validate();
    }
    for (const auto& e : events) {
        if (const auto* trip = std::get_if<TripEvent>(&e); trip && !names.count(trip->gen)) {
            throw DomainError("GridScenario: trip event names unknown generator " + trip->gen);
        }
    }
    double gen = wind_initial_mw(*this);
    for (const auto& g : gens) {
        gen += g.online ? g.p_out_mw : 0.0;
    }
    if (std::abs(gen - load_mw) > 1e-6 * std::max(load_mw, 1.0)) {
        std::ostringstream os;
        os << "GridScenario: initial generation " << gen << " MW does not match load " << load_mw << " MW";
        throw DomainError(os.str());
    }
}

void GridScenario::balance_with(const std::string& gen_name)
{
    auto it = std::find_if(gens.begin(), gens.end(), [&](const SyncGen& g) { return g.name == gen_name; });
    if (it == gens.end()) {
        throw DomainError("balance_with: unknown generator " + gen_name);
    }
    double others = wind_initial_mw(*this);
    for (const auto& g : gens) {
        if (&g != &*it && g.online) {
            others += g.p_out_mw;
        }
    }
    const double p = load_mw - others;
    if (!(p >= 0.0 && p <= it->p_max_mw)) {
        std::ostringstream os;
        os << "balance_with: " << gen_name << " would need " << p << " MW, outside [0, " << it->p_max_mw << "]";
        throw DomainError(os.str());
    }
    it->p_out_mw = p;
}

WtState wt_init(const WindRow& row)
{
    WtState s;
    for (const auto& p : row.sub_solution.turbines) {
        s.omega_pu.push_back(p.omega_pu);
        s.beta_deg.push_back(p.beta_deg);
    }
    return s;
}

WtStep wt_step(const WtState& s, double f_dev_pu, WtMode mode, const WindRow& row, const TurbineParams& tp,
               const WakeParams& wp, double dt)
{
    const std::size_t n = s.omega_pu.size();
    std::vector<double> y(2 * n), k(4 * 2 * n), tmp(2 * n);
    std::copy(s.omega_pu.begin(), s.omega_pu.end(), y.begin());
    std::copy(s.beta_deg.begin(), s.beta_deg.end(), y.begin() + static_cast<std::ptrdiff_t>(n));
    const double elapsed0 = mode == s.mode ? s.release_elapsed_s : 0.0;
    const double c[4] = {0.0, 0.5, 0.5, 1.0};
    for (int stage = 0; stage < 4; ++stage) {
        for (std::size_t j = 0; j < 2 * n; ++j) {
            tmp[j] = stage == 0 ? y[j] : y[j] + c[stage] * dt * k[(stage - 1) * 2 * n + j];
        }
        double* ks = &k[stage * 2 * n];
        wind_rhs(row, tp, wp, tmp.data(), tmp.data() + n, mode, elapsed0 + c[stage] * dt, f_dev_pu, ks, ks + n);
    }
    for (std::size_t j = 0; j < 2 * n; ++j) {
        y[j] += dt / 6.0 * (k[j] + 2.0 * k[2 * n + j] + 2.0 * k[4 * n + j] + k[6 * n + j]);
    }
    WtStep out;
    out.state.omega_pu.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    out.state.beta_deg.assign(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    out.state.mode = mode;
    out.state.release_elapsed_s = mode == WtMode::optimal ? elapsed0 + dt : 0.0;
    check_rotor(row, tp, out.state.omega_pu, dt);
    const WindOut w = wind_rhs(row, tp, wp, out.state.omega_pu.data(), out.state.beta_deg.data(), mode,
                               out.state.release_elapsed_s, f_dev_pu, nullptr, nullptr);
    const double rows = static_cast<double>(row.row_count);
    out.p_elec_mw = w.p_elec_w * rows / 1e6;
    out.p_aero_mw = w.p_aero_w * rows / 1e6;
    return out;
}

double swing_step(double f_dev_pu, double p_gen_pu, double p_load_pu, double h_sys_s, double d_load, double dt)
{
    if (!(h_sys_s > 0.0)) {
        throw DomainError("swing_step: system inertia must be > 0");
    }
    const auto rhs = [&](double f) { return (p_gen_pu - p_load_pu - d_load * f) / (2.0 * h_sys_s); };
    const double k1 = rhs(f_dev_pu);
    const double k2 = rhs(f_dev_pu + 0.5 * dt * k1);
    const double k3 = rhs(f_dev_pu + 0.5 * dt * k2);
    const double k4 = rhs(f_dev_pu + dt * k3);
    return f_dev_pu + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SimTrace simulate(const GridScenario& sc)
{
    sc.validate();
    const std::size_t ng = sc.gens.size();
    const std::size_t nt = sc.wind ? sc.wind->sub_solution.turbines.size() : 0;
    std::vector<Machine> machines;
    for (const auto& g : sc.gens) {
        machines.push_back(make_machine(g));
    }

    // State layout: Δf, 4 governor states per machine, rotor speeds, pitch angles.
    const std::size_t gen0 = 1;
    const std::size_t om0 = gen0 + 4 * ng;
    const std::size_t be0 = om0 + nt;
    const std::size_t dim = be0 + nt;
    std::vector<double> y(dim, 0.0);
    std::vector<double> p_ref(ng);
    for (std::size_t g = 0; g < ng; ++g) {
        p_ref[g] = sc.gens[g].p_out_mw / machines[g].rating;
        const GovernorState s = std::holds_alternative<Ieeeg1Params>(machines[g].gov)
                                    ? ieeeg1_init(p_ref[g], std::get<Ieeeg1Params>(machines[g].gov))
                                    : tgov1_init(p_ref[g], std::get<Tgov1Params>(machines[g].gov));
        std::copy(s.x.begin(), s.x.end(), y.begin() + static_cast<std::ptrdiff_t>(gen0 + 4 * g));
    }
    if (sc.wind) {
        const WtState w0 = wt_init(*sc.wind);
        std::copy(w0.omega_pu.begin(), w0.omega_pu.end(), y.begin() + static_cast<std::ptrdiff_t>(om0));
        std::copy(w0.beta_deg.begin(), w0.beta_deg.end(), y.begin() + static_cast<std::ptrdiff_t>(be0));
    }

    WtMode mode = WtMode::sub_optimal;
    double elapsed = 0.0;
    const double rows = sc.wind ? static_cast<double>(sc.wind->row_count) : 0.0;
    double h_sys = 0.0;
    const auto update_inertia = [&] {
        h_sys = 0.0;
        for (const auto& m : machines) {
            h_sys += m.online ? m.inertia * m.rating / sc.s_base_mva : 0.0;
        }
        if (!(h_sys > 0.0)) {
            throw SimulationError("no synchronous inertia left online");
        }
    };
    update_inertia();

    struct Outputs {
        std::vector<double> gen_mw;
        double wind_elec_mw = 0.0;
        double wind_aero_mw = 0.0;
    };
    Outputs outs;
    outs.gen_mw.resize(ng);
    const auto rhs = [&](const std::vector<double>& x, double tau, std::vector<double>& dx, Outputs& o) {
        const double f = x[0];
        double p_gen = 0.0;
        for (std::size_t g = 0; g < ng; ++g) {
            double* d = &dx[gen0 + 4 * g];
            if (!machines[g].online) {
                std::fill(d, d + 4, 0.0);
                o.gen_mw[g] = 0.0;
                continue;
            }
            GovernorState s;
            s.p_ref_pu = p_ref[g];
            std::copy(x.begin() + static_cast<std::ptrdiff_t>(gen0 + 4 * g),
                      x.begin() + static_cast<std::ptrdiff_t>(gen0 + 4 * g + 4), s.x.begin());
            const auto ds = machines[g].deriv(s, f);
            std::copy(ds.begin(), ds.end(), d);
            o.gen_mw[g] = machines[g].output(s) * machines[g].rating;
            p_gen += o.gen_mw[g];
        }
        o.wind_elec_mw = 0.0;
        o.wind_aero_mw = 0.0;
        if (sc.wind) {
            const WindOut w = wind_rhs(*sc.wind, sc.tp, sc.wp, &x[om0], &x[be0], mode, elapsed + tau, f, &dx[om0],
                                       &dx[be0]);
            o.wind_elec_mw = w.p_elec_w * rows / 1e6;
            o.wind_aero_mw = w.p_aero_w * rows / 1e6;
        }
        dx[0] = ((p_gen + o.wind_elec_mw - sc.load_mw) / sc.s_base_mva - sc.load_damping * f) / (2.0 * h_sys);
    };

    std::vector<std::pair<double, Event>> pending;
    for (const auto& e : sc.events) {
        pending.emplace_back(std::visit([](const auto& ev) { return ev.t_s; }, e), e);
    }
    std::stable_sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t next_event = 0;

    SimTrace tr;
    tr.f_nominal_hz = sc.f_nominal_hz;
    for (const auto& g : sc.gens) {
        tr.gen_names.push_back(g.name);
    }
    tr.gen_p_mw.resize(ng);
    tr.omega_pu.resize(nt);
    tr.beta_deg.resize(nt);

    const auto steps = static_cast<std::size_t>(std::llround(sc.t_end_s / sc.dt_s));
    const double dt = sc.dt_s;
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    Outputs scratch;
    scratch.gen_mw.resize(ng);
    for (std::size_t step = 0;; ++step) {
        const double t = static_cast<double>(step) * dt;
        while (next_event < pending.size() && pending[next_event].first <= t + 1e-9 * dt) {
            const Event& ev = pending[next_event].second;
            if (const auto* trip = std::get_if<TripEvent>(&ev)) {
                for (std::size_t g = 0; g < ng; ++g) {
                    if (sc.gens[g].name == trip->gen) {
                        machines[g].online = false;
                    }
                }
                update_inertia();
                tr.events.push_back({t, "trip " + trip->gen});
            } else if (sc.wind) {
                mode = WtMode::optimal;
                elapsed = 0.0;
                tr.events.push_back({t, "switch wind to optimal"});
            }
            ++next_event;
        }

        rhs(y, 0.0, k1, outs);
        tr.t_s.push_back(t);
        tr.f_hz.push_back(sc.f_nominal_hz * (1.0 + y[0]));
        double gen_sum = 0.0;
        for (std::size_t g = 0; g < ng; ++g) {
            tr.gen_p_mw[g].push_back(outs.gen_mw[g]);
            gen_sum += outs.gen_mw[g];
        }
        tr.wind_p_elec_mw.push_back(outs.wind_elec_mw);
        tr.wind_p_aero_mw.push_back(outs.wind_aero_mw);
        for (std::size_t i = 0; i < nt; ++i) {
            tr.omega_pu[i].push_back(y[om0 + i]);
            tr.beta_deg[i].push_back(y[be0 + i]);
        }
        tr.balance_residual_pu.push_back((gen_sum + outs.wind_elec_mw - sc.load_mw) / sc.s_base_mva
                                         - sc.load_damping * y[0] - 2.0 * h_sys * k1[0]);
        if (step == steps) {
            break;
        }

        for (std::size_t j = 0; j < dim; ++j) {
            tmp[j] = y[j] + 0.5 * dt * k1[j];
        }
        rhs(tmp, 0.5 * dt, k2, scratch);
        for (std::size_t j = 0; j < dim; ++j) {
            tmp[j] = y[j] + 0.5 * dt * k2[j];
        }
        rhs(tmp, 0.5 * dt, k3, scratch);
        for (std::size_t j = 0; j < dim; ++j) {
            tmp[j] = y[j] + dt * k3[j];
        }
        rhs(tmp, dt, k4, scratch);
        for (std::size_t j = 0; j < dim; ++j) {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if (!std::isfinite(y[j])) {
                std::ostringstream os;
                os << "state became non-finite at t = " << t + dt << " s (step " << step + 1 << ")";
                throw SimulationError(os.str());
            }
        }
        if (sc.wind) {
            check_rotor(*sc.wind, sc.tp, std::span<const double>(&y[om0], nt), t + dt);
        }
        if (mode == WtMode::optimal) {
            elapsed += dt;
        }
    }
    return tr;
}

NadirMetrics nadir_metrics(const SimTrace& tr, const SimTrace* reference)
{
    NadirMetrics m;
    if (tr.t_s.empty()) {
        return m;
    }
    const double t0 = tr.events.empty() ? tr.t_s.front() : tr.events.front().t_s;
    std::size_t idx = tr.t_s.size();
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < tr.t_s.size(); ++k) {
        if (tr.t_s[k] < t0) {
            continue;
        }
        if (idx == tr.t_s.size() || tr.f_hz[k] < tr.f_hz[idx]) {
            idx = k;
        }
        peak = std::max(peak, tr.f_hz[k]);
    }
    m.final_hz = tr.f_hz.back();
    if (idx == tr.t_s.size() || !(tr.f_hz[idx] < tr.f_nominal_hz)) {
        return m;
    }
    m.present = true;
    m.nadir_hz = tr.f_hz[idx];
    m.nadir_time_s = tr.t_s[idx];
    m.peak_after_event_hz = peak;
    if (reference) {
        const NadirMetrics r = nadir_metrics(*reference);
        if (r.present) {
            m.delay_vs_reference_s = m.nadir_time_s - r.nadir_time_s;
        }
    }
    return m;
}

} // namespace wakefc
