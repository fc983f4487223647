#include "wakefc/wake.hpp"

#include "wakefc/error.hpp"

#include <string>

namespace wakefc {

void WakeParams::validate() const
{
    if (!(k > 0.0 && k < k_prime && k_prime < 1.0)) {
        throw DomainError("WakeParams: need 0 < k < k_prime < 1");
    }
}

double next_wind(double v_free, double v_i, double ct_i, const WakeParams& wp)
{
    if (!(v_free > 0.0)) {
        throw DomainError("next_wind: free wind speed must be > 0");
    }
    // Rounding in an upstream step may leave v_i a hair above v_free.
    if (!(v_i > 0.0 && v_i <= v_free * (1.0 + 1e-12))) {
        throw DomainError("next_wind: inflow must lie in (0, v_free]");
    }
    if (!(ct_i >= 0.0 && ct_i < kCtLimit)) {
        throw DomainError("next_wind: thrust coefficient must lie in [0, 8/9)");
    }
    const double v_next = v_i + wp.k_prime * (v_free - v_i) - wp.k * v_free * ct_i;
    if (!(v_next > 0.0)) {
        throw DegenerateWakeError("next_wind: computed inflow " + std::to_string(v_next)
                                  + " m/s is not positive; wake constants outside model validity");
    }
    return v_next;
}

RowState propagate_row(double v_free, std::span<const Setpoint> setpoints, const TurbineParams& tp,
                       const WakeParams& wp)
{
    if (setpoints.empty()) {
        throw DomainError("propagate_row: empty setpoint list");
    }
    RowState row;
    row.inflow.v_free_mps = v_free;
    row.inflow.v_mps.reserve(setpoints.size());
    row.points.reserve(setpoints.size());

    double v = v_free;
    for (std::size_t i = 0; i < setpoints.size(); ++i) {
        const auto& sp = setpoints[i];
        if (!(sp.omega_pu >= tp.omega_min_pu && sp.omega_pu <= tp.omega_max_pu)) {
            throw DomainError("propagate_row: rotor speed of turbine " + std::to_string(i) + " out of bounds");
        }
        row.inflow.v_mps.push_back(v);
        row.points.push_back(evaluate_point(v, sp.omega_pu, sp.beta_deg, tp));
        if (i + 1 < setpoints.size()) {
            v = next_wind(v_free, v, row.points.back().ct, wp);
        }
    }
    return row;
}

} // namespace wakefc
