#pragma once

#include "wakefc/aero.hpp"

#include <span>
#include <vector>

namespace wakefc {

/// Constants of the stationary row-wake recursion
///   v[i+1] = v[i] + k'(v_free − v[i]) − k·v_free·Ct[i].
struct WakeParams {
    double k_prime = 0.35; // recovery towards the free stream
    double k = 0.10;       // deficit per unit thrust coefficient

    void validate() const;
};

struct RowInflow {
    double v_free_mps = 0.0;
    std::vector<double> v_mps;
};

struct Setpoint {
    double omega_pu = 0.0;
    double beta_deg = 0.0;
};

struct RowState {
    RowInflow inflow;
    std::vector<OperatingPoint> points;
};

double next_wind(double v_free, double v_i, double ct_i, const WakeParams& wp);

/// Evaluates each turbine at its own inflow and feeds its thrust
/// coefficient to the next one down the row.
RowState propagate_row(double v_free, std::span<const Setpoint> setpoints, const TurbineParams& tp,
                       const WakeParams& wp);

} // namespace wakefc
