#include "wakefc/deload.hpp"

#include "wakefc/error.hpp"
#include "wakefc/roots.hpp"

#include <string>

namespace wakefc {

namespace {

void check_margin(double dm)
{
    if (!(dm >= 0.0 && dm < 1.0)) {
        throw DomainError("de-loading margin must lie in [0, 1)");
    }
}

} // namespace

std::string_view to_string(DeloadStrategy s)
{
    switch (s) {
    case DeloadStrategy::overspeed:
        return "overspeed";
    case DeloadStrategy::pitch_only:
        return "pitch-only";
    case DeloadStrategy::combined:
        return "combined";
    }
    return "unknown";
}

void DeloadTarget::validate() const
{
    check_margin(dm);
    if (!(v_mps > 0.0)) {
        throw DomainError("DeloadTarget: wind speed must be > 0");
    }
}

OperatingPoint deload_overspeed(double v_mps, double dm, const TurbineParams& tp)
{
    check_margin(dm);
    const OperatingPoint opt = mppt(v_mps, tp);
    if (dm == 0.0) {
        return opt;
    }
    if (opt.omega_pu >= tp.omega_max_pu) {
        throw InfeasibleError("deload_overspeed: rotor already at its speed limit at v = " + std::to_string(v_mps));
    }
    const double target = (1.0 - dm) * opt.p_mech_w;
    const auto excess = [&](double w) { return mech_power(v_mps, w, 0.0, tp) - target; };
    if (excess(tp.omega_max_pu) > 0.0) {
        throw InfeasibleError("deload_overspeed: margin " + std::to_string(dm)
                              + " not reachable below the rotor speed limit at v = " + std::to_string(v_mps));
    }
    const double w = detail::bisect(excess, opt.omega_pu, tp.omega_max_pu, 1e-10);
    return evaluate_point(v_mps, w, 0.0, tp);
}

OperatingPoint deload_pitch(double v_mps, double dm, const TurbineParams& tp)
{
    check_margin(dm);
    const OperatingPoint opt = mppt(v_mps, tp);
    if (dm == 0.0) {
        return opt;
    }
    const double target = (1.0 - dm) * opt.p_mech_w;
    const PitchSolve ps = smallest_pitch_for_power(v_mps, opt.omega_pu, target, tp, opt.beta_deg);
    if (!ps.found) {
        throw ConvergenceError("deload_pitch: no pitch up to beta_max sheds margin " + std::to_string(dm));
    }
    return evaluate_point(v_mps, opt.omega_pu, ps.beta_deg, tp);
}

} // namespace wakefc
