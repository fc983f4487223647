#include "wakefc/governors.hpp"

#include "wakefc/error.hpp"

#include <algorithm>

namespace wakefc {

namespace {

template <class Deriv>
GovernorState rk4(const GovernorState& s, double dt, Deriv&& deriv)
{
    const auto shifted = [&](const std::array<double, 4>& k, double h) {
        GovernorState t = s;
        for (std::size_t i = 0; i < 4; ++i) {
            t.x[i] += h * k[i];
        }
        return t;
    };
    const auto k1 = deriv(s);
    const auto k2 = deriv(shifted(k1, 0.5 * dt));
    const auto k3 = deriv(shifted(k2, 0.5 * dt));
    const auto k4 = deriv(shifted(k3, dt));
    GovernorState out = s;
    for (std::size_t i = 0; i < 4; ++i) {
        out.x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

} // namespace

void Tgov1Params::validate() const
{
    if (!(droop > 0.0)) {
        throw DomainError("TGOV1: droop must be > 0");
    }
    if (!(t_valve_s > 0.0 && t_gate_s > 0.0 && t_lag_s > 0.0 && t_lead_s >= 0.0)) {
        throw DomainError("TGOV1: time constants must be positive");
    }
    if (!(p_min_pu <= p_max_pu)) {
        throw DomainError("TGOV1: need p_min_pu <= p_max_pu");
    }
}

void Ieeeg1Params::validate() const
{
    if (!(droop > 0.0)) {
        throw DomainError("IEEEG1: droop must be > 0");
    }
    if (!(t_servo_s > 0.0 && t4_s > 0.0 && t5_s > 0.0 && t6_s > 0.0)) {
        throw DomainError("IEEEG1: time constants must be positive");
    }
    if (!(rate_open_pu_s > 0.0 && rate_close_pu_s < 0.0)) {
        throw DomainError("IEEEG1: need rate_open > 0 > rate_close");
    }
    if (!(p_min_pu <= p_max_pu)) {
        throw DomainError("IEEEG1: need p_min_pu <= p_max_pu");
    }
}

// x = {valve, gate, lead-lag lag state, unused}
GovernorState tgov1_init(double p_pu, const Tgov1Params&)
{
    return {p_pu, {p_pu, p_pu, p_pu, 0.0}};
}

std::array<double, 4> tgov1_deriv(const GovernorState& s, double f_dev_pu, const Tgov1Params& p)
{
    const double cmd = std::clamp(s.p_ref_pu - f_dev_pu / p.droop, p.p_min_pu, p.p_max_pu);
    return {(cmd - s.x[0]) / p.t_valve_s, (s.x[0] - s.x[1]) / p.t_gate_s, (s.x[1] - s.x[2]) / p.t_lag_s, 0.0};
}

double tgov1_output(const GovernorState& s, const Tgov1Params& p)
{
    const double a = p.t_lead_s / p.t_lag_s;
    return a * s.x[1] + (1.0 - a) * s.x[2];
}

// x = {servo position, stage 1, stage 2, stage 3}
GovernorState ieeeg1_init(double p_pu, const Ieeeg1Params&)
{
    return {p_pu, {p_pu, p_pu, p_pu, p_pu}};
}

std::array<double, 4> ieeeg1_deriv(const GovernorState& s, double f_dev_pu, const Ieeeg1Params& p)
{
    const double cmd = std::clamp(s.p_ref_pu - f_dev_pu / p.droop, p.p_min_pu, p.p_max_pu);
    const double servo = std::clamp((cmd - s.x[0]) / p.t_servo_s, p.rate_close_pu_s, p.rate_open_pu_s);
    return {servo, (s.x[0] - s.x[1]) / p.t4_s, (s.x[1] - s.x[2]) / p.t5_s, (s.x[2] - s.x[3]) / p.t6_s};
}

double ieeeg1_output(const GovernorState& s, const Ieeeg1Params& p)
{
    return p.k1 * s.x[1] + p.k3 * s.x[2] + p.k5 * s.x[3];
}

GovernorStep tgov1_step(const GovernorState& s, double f_dev_pu, const Tgov1Params& p, double dt)
{
    GovernorStep out;
    out.state = rk4(s, dt, [&](const GovernorState& t) { return tgov1_deriv(t, f_dev_pu, p); });
    out.p_mech_pu = tgov1_output(out.state, p);
    return out;
}

GovernorStep ieeeg1_step(const GovernorState& s, double f_dev_pu, const Ieeeg1Params& p, double dt)
{
    GovernorStep out;
    out.state = rk4(s, dt, [&](const GovernorState& t) { return ieeeg1_deriv(t, f_dev_pu, p); });
    out.p_mech_pu = ieeeg1_output(out.state, p);
    return out;
}

} // namespace wakefc
