#pragma once

#include "wakefc/aero.hpp"
#include "wakefc/farmopt.hpp"
#include "wakefc/governors.hpp"
#include "wakefc/wake.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wakefc {

enum class GenKind { steam, gas };

struct SyncGen {
    std::string name;
    GenKind kind = GenKind::gas;
    double p_out_mw = 0.0;
    double p_max_mw = 0.0;
    std::variant<Ieeeg1Params, Tgov1Params> governor = Tgov1Params{};
    double droop_frac = 0.05; // overrides the governor block's droop
    double inertia_s = 5.0;
    double rating_mva = 0.0;  // 0 means p_max_mw
    bool online = true;

    void validate() const;
    double rating() const { return rating_mva > 0.0 ? rating_mva : p_max_mw; }
};

struct WindRow {
    FarmSolution sub_solution;
    FarmSolution opt_solution;
    double v_free_mps = 8.0;
    std::size_t row_count = 1;
    double wt_droop_frac = 0.01;   // on the aggregate farm rating
    bool droop_enabled = true;
    double release_ramp_s = 0.0;
    double speed_gain_pu = 2.0;    // electrical power per unit rotor-speed error
    double release_limit_pu = 0.22;
    double pitch_rate_deg_s = 8.0;
    double pitch_time_constant_s = 0.1;
    double overspeed_margin_pu = 0.1;

    void validate() const;
};

enum class WtMode { sub_optimal, optimal };

struct TripEvent {
    double t_s = 0.0;
    std::string gen;
};

struct SwitchEvent {
    double t_s = 0.0;
};

using Event = std::variant<TripEvent, SwitchEvent>;

struct GridScenario {
    double f_nominal_hz = 50.0;
    double s_base_mva = 130.0;
    double load_damping = 1.0;
    std::vector<SyncGen> gens;
    std::optional<WindRow> wind;
    TurbineParams tp{};
    WakeParams wp{};
    double load_mw = 130.0;
    std::vector<Event> events;
    double t_end_s = 60.0;
    double dt_s = 0.01;

    void validate() const;
    /// Sets the named generator's output so that generation equals load.
    void balance_with(const std::string& gen_name);
};

struct EventMark {
    double t_s = 0.0;
    std::string label;
};

struct SimTrace {
    std::vector<double> t_s;
    std::vector<double> f_hz;
    std::vector<std::string> gen_names;
    std::vector<std::vector<double>> gen_p_mw;   // [gen][sample]; 0 once tripped
    std::vector<double> wind_p_elec_mw;
    std::vector<double> wind_p_aero_mw;
    std::vector<std::vector<double>> omega_pu;   // [turbine][sample]
    std::vector<std::vector<double>> beta_deg;   // [turbine][sample]
    std::vector<double> balance_residual_pu;
    std::vector<EventMark> events;
    double f_nominal_hz = 50.0;
};

struct WtState {
    std::vector<double> omega_pu;
    std::vector<double> beta_deg;
    WtMode mode = WtMode::sub_optimal;
    double release_elapsed_s = 0.0;
};

struct WtStep {
    WtState state;
    double p_elec_mw = 0.0; // all rows
    double p_aero_mw = 0.0;
};

WtState wt_init(const WindRow& row);

/// One fourth-order step of one row's rotor and pitch dynamics with the
/// frequency deviation held; powers are scaled by the row count.
WtStep wt_step(const WtState& s, double f_dev_pu, WtMode mode, const WindRow& row, const TurbineParams& tp,
               const WakeParams& wp, double dt);

/// One fourth-order step of 2H·dΔf/dt = p_gen − p_load − D·Δf.
double swing_step(double f_dev_pu, double p_gen_pu, double p_load_pu, double h_sys_s, double d_load, double dt);

SimTrace simulate(const GridScenario& scenario);

struct NadirMetrics {
    bool present = false;
    double nadir_hz = 0.0;
    double nadir_time_s = 0.0;
    std::optional<double> delay_vs_reference_s;
    double peak_after_event_hz = 0.0;
    double final_hz = 0.0;
};

NadirMetrics nadir_metrics(const SimTrace& trace, const SimTrace* reference = nullptr);

} // namespace wakefc
