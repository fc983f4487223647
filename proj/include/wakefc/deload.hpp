#pragma once

#include "wakefc/aero.hpp"

#include <string_view>

namespace wakefc {

enum class DeloadStrategy { overspeed, pitch_only, combined };

std::string_view to_string(DeloadStrategy s);

struct DeloadTarget {
    double dm = 0.0; // fraction of the maximum-power output held back, [0, 1)
    double v_mps = 0.0;
    DeloadStrategy strategy = DeloadStrategy::combined;

    void validate() const;
};

// Zero pitch, rotor sped up past the optimum until power drops to (1 − dm)
// of the maximum. Only the high-speed branch is ever returned.
OperatingPoint deload_overspeed(double v_mps, double dm, const TurbineParams& tp);

// Rotor speed held at its maximum-power value, pitch raised to shed dm.
OperatingPoint deload_pitch(double v_mps, double dm, const TurbineParams& tp);

} // namespace wakefc
