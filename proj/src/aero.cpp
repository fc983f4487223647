#include "wakefc/aero.hpp"

#include "wakefc/error.hpp"
#include "wakefc/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace wakefc {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) {
        throw DomainError(std::string("TurbineParams: ") + what);
    }
}

double power_in_wind(double v_mps, const TurbineParams& tp)
{
    return 0.5 * tp.air_density * tp.swept_area() * v_mps * v_mps * v_mps;
}

double mppt_speed_unclamped(double v_mps, const TurbineParams& tp, double lambda_opt)
{
    return lambda_opt * v_mps / (tp.radius_m * tp.omega_rated_radps);
}

void require_operating_range(double v_mps, const TurbineParams& tp)
{
    if (!(v_mps >= tp.v_cutin_mps && v_mps <= tp.v_cutout_mps)) {
        throw DomainError("wind speed " + std::to_string(v_mps) + " m/s outside cut-in/cut-out range");
    }
}

} // namespace

void TurbineParams::validate() const
{
    require(radius_m > 0.0, "radius_m must be > 0");
    require(air_density > 0.0, "air_density must be > 0");
    require(inertia_s > 0.0, "inertia_s must be > 0");
    require(rated_power_w > 0.0, "rated_power_w must be > 0");
    require(omega_rated_radps > 0.0, "omega_rated_radps must be > 0");
    require(omega_min_pu > 0.0 && omega_min_pu < omega_max_pu, "need 0 < omega_min_pu < omega_max_pu");
    require(beta_max_deg > 0.0, "beta_max_deg must be > 0");
    require(v_cutin_mps > 0.0 && v_cutin_mps < v_cutout_mps, "need 0 < v_cutin_mps < v_cutout_mps");
}

double TurbineParams::swept_area() const
{
    return std::numbers::pi * radius_m * radius_m;
}

double tip_speed_ratio(double omega_pu, double v_mps, const TurbineParams& tp)
{
    if (!(v_mps > 0.0)) {
        throw DomainError("tip_speed_ratio: wind speed must be > 0");
    }
    if (!(omega_pu > 0.0)) {
        throw DomainError("tip_speed_ratio: rotor speed must be > 0");
    }
    return tp.radius_m * omega_pu * tp.omega_rated_radps / v_mps;
}

double cp_surface_raw(double lambda, double beta_deg, const CpCoefficients& k)
{
    const auto& c = k.c;
    const double inv_li = 1.0 / (lambda + k.lambda_i_pitch * beta_deg)
                          - k.lambda_i_cubic / (beta_deg * beta_deg * beta_deg + 1.0);
    return c[0] * (c[1] * inv_li - c[2] * beta_deg - c[3]) * std::exp(-c[4] * inv_li) + c[5] * lambda;
}

double cp_surface(double lambda, double beta_deg, const TurbineParams& tp)
{
    if (!(lambda > 0.0)) {
        throw DomainError("cp_surface: tip speed ratio must be > 0");
    }
    if (!(beta_deg >= 0.0 && beta_deg <= tp.beta_max_deg)) {
        throw DomainError("cp_surface: pitch " + std::to_string(beta_deg) + " deg outside [0, beta_max]");
    }
    return std::clamp(cp_surface_raw(lambda, beta_deg, tp.cp_coeffs), 0.0, kBetzCp);
}

double cp_from_ct(double ct)
{
    if (!(ct >= 0.0 && ct <= kCtLimit)) {
        throw DomainError("cp_from_ct: thrust coefficient outside [0, 8/9]");
    }
    return 0.5 * (1.0 + std::sqrt(1.0 - ct)) * ct;
}

double ct_from_cp(double cp)
{
    const double top = cp_from_ct(kCtLimit);
    if (!(cp >= 0.0 && cp <= std::max(kBetzCp, top))) {
        throw DomainError("ct_from_cp: power coefficient outside [0, 16/27]");
    }
    if (cp == 0.0) {
        return 0.0;
    }
    // The map is flat at the Betz end; anything at or above its rounded
    // maximum inverts to the endpoint itself.
    if (cp >= top) {
        return kCtLimit;
    }
    return detail::bisect([cp](double ct) { return cp_from_ct(ct) - cp; }, 0.0, kCtLimit, 1e-12);
}

double mech_power(double v_mps, double omega_pu, double beta_deg, const TurbineParams& tp)
{
    const double lambda = tip_speed_ratio(omega_pu, v_mps, tp);
    return power_in_wind(v_mps, tp) * cp_surface(lambda, beta_deg, tp);
}

double thrust(double v_mps, double omega_pu, double beta_deg, const TurbineParams& tp)
{
    const double lambda = tip_speed_ratio(omega_pu, v_mps, tp);
    const double ct = ct_from_cp(cp_surface(lambda, beta_deg, tp));
    return 0.5 * tp.air_density * tp.swept_area() * v_mps * v_mps * ct;
}

double kinetic_energy(double omega_pu, const TurbineParams& tp)
{
    if (omega_pu < 0.0) {
        throw DomainError("kinetic_energy: rotor speed must be >= 0");
    }
    return tp.inertia_s * omega_pu * omega_pu;
}

double optimal_tip_speed_ratio(const TurbineParams& tp)
{
    return detail::golden_max([&](double l) { return cp_surface_raw(l, 0.0, tp.cp_coeffs); }, 1.0, 20.0, 1e-9);
}

int zone(double v_mps, const TurbineParams& tp)
{
    require_operating_range(v_mps, tp);
    const double w = mppt_speed_unclamped(v_mps, tp, optimal_tip_speed_ratio(tp));
    const double w_clamped = std::clamp(w, tp.omega_min_pu, tp.omega_max_pu);
    if (mech_power(v_mps, w_clamped, 0.0, tp) >= tp.rated_power_w) {
        return 4;
    }
    if (w < tp.omega_min_pu) {
        return 1;
    }
    if (w > tp.omega_max_pu) {
        return 3;
    }
    return 2;
}

OperatingPoint evaluate_point(double v_mps, double omega_pu, double beta_deg, const TurbineParams& tp)
{
    OperatingPoint op;
    op.v_mps = v_mps;
    op.omega_pu = omega_pu;
    op.beta_deg = beta_deg;
    op.lambda = tip_speed_ratio(omega_pu, v_mps, tp);
    op.cp = cp_surface(op.lambda, beta_deg, tp);
    op.ct = ct_from_cp(op.cp);
    op.p_mech_w = power_in_wind(v_mps, tp) * op.cp;
    op.e_kin_pus = kinetic_energy(omega_pu, tp);
    return op;
}

PitchSolve smallest_pitch_for_power(double v_mps, double omega_pu, double target_w, const TurbineParams& tp,
                                    double beta_from_deg, double scan_step_deg, double rel_tol)
{
    PitchSolve out;
    const auto excess = [&](double beta) { return mech_power(v_mps, omega_pu, beta, tp) - target_w; };
    const double tol_w = rel_tol * std::max(std::abs(target_w), 1.0);

    double beta_prev = beta_from_deg;
    double f_prev = excess(beta_prev);
    out.best_power_w = f_prev + target_w;
    if (std::abs(f_prev) <= tol_w) {
        out.found = true;
        out.beta_deg = beta_prev;
        return out;
    }
    while (beta_prev < tp.beta_max_deg) {
        const double beta = std::min(beta_prev + scan_step_deg, tp.beta_max_deg);
        const double f = excess(beta);
        out.best_power_w = std::max(out.best_power_w, f + target_w);
        if (std::signbit(f) != std::signbit(f_prev) || f == 0.0) {
            out.found = true;
            out.beta_deg = detail::bisect(excess, beta_prev, beta, 1e-10);
            return out;
        }
        beta_prev = beta;
        f_prev = f;
    }
    return out;
}

OperatingPoint mppt(double v_mps, const TurbineParams& tp)
{
    return mppt(v_mps, tp, optimal_tip_speed_ratio(tp));
}

OperatingPoint mppt(double v_mps, const TurbineParams& tp, double lambda_opt)
{
    require_operating_range(v_mps, tp);
    const double w = std::clamp(mppt_speed_unclamped(v_mps, tp, lambda_opt), tp.omega_min_pu, tp.omega_max_pu);
    if (mech_power(v_mps, w, 0.0, tp) <= tp.rated_power_w) {
        return evaluate_point(v_mps, w, 0.0, tp);
    }
    // Zone 4: speed pinned at its upper limit, pitch sheds the surplus.
    const double w_top = tp.omega_max_pu;
    const PitchSolve ps = smallest_pitch_for_power(v_mps, w_top, tp.rated_power_w, tp, 0.0, 0.05, 1e-12);
    if (!ps.found) {
        throw ConvergenceError("mppt: no pitch angle limits power to rated at v = " + std::to_string(v_mps));
    }
    return evaluate_point(v_mps, w_top, ps.beta_deg, tp);
}

} // namespace wakefc
