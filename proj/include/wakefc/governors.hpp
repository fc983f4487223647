#pragma once

#include <array>

namespace wakefc {

// All powers in per-unit of the machine rating; frequency deviation in
// per-unit of nominal.

struct Tgov1Params {
    double droop = 0.05;
    double t_valve_s = 0.5;
    double t_gate_s = 1.0;
    double t_lead_s = 3.0;
    double t_lag_s = 10.0;
    double p_min_pu = 0.0;
    double p_max_pu = 1.0;

    void validate() const;
};

struct Ieeeg1Params {
    double droop = 0.20;
    double t_servo_s = 0.2;
    double rate_open_pu_s = 1.0;
    double rate_close_pu_s = -1.0;
    double p_min_pu = 0.0;
    double p_max_pu = 1.0;
    double t4_s = 0.3;
    double t5_s = 7.0;
    double t6_s = 0.6;
    double k1 = 0.3;
    double k3 = 0.4;
    double k5 = 0.3;

    void validate() const;
};

// p_ref is the dispatch setpoint; x holds the dynamic states.
struct GovernorState {
    double p_ref_pu = 0.0;
    std::array<double, 4> x{};
};

GovernorState tgov1_init(double p_pu, const Tgov1Params& p);
std::array<double, 4> tgov1_deriv(const GovernorState& s, double f_dev_pu, const Tgov1Params& p);
double tgov1_output(const GovernorState& s, const Tgov1Params& p);

GovernorState ieeeg1_init(double p_pu, const Ieeeg1Params& p);
std::array<double, 4> ieeeg1_deriv(const GovernorState& s, double f_dev_pu, const Ieeeg1Params& p);
double ieeeg1_output(const GovernorState& s, const Ieeeg1Params& p);

struct GovernorStep {
    GovernorState state;
    double p_mech_pu = 0.0;
};

/// One fourth-order Runge-Kutta step with the frequency deviation held.
GovernorStep tgov1_step(const GovernorState& s, double f_dev_pu, const Tgov1Params& p, double dt);
GovernorStep ieeeg1_step(const GovernorState& s, double f_dev_pu, const Ieeeg1Params& p, double dt);

} // namespace wakefc
