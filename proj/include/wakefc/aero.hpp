#pragma once

#include <array>

namespace wakefc {

/// Coefficients of the exponential power-coefficient fit
///
///   Cp(λ, β) = c1 (c2/λi − c3 β − c4) exp(−c5/λi) + c6 λ
///   1/λi     = 1/(λ + a β) − b/(β³ + 1)
///
/// with the shape constants a = `lambda_i_pitch`, b = `lambda_i_cubic`.
struct CpCoefficients {
    std::array<double, 6> c{0.5176, 116.0, 0.4, 5.0, 21.0, 0.0068};
    double lambda_i_pitch = 0.08;
    double lambda_i_cubic = 0.035;
};

/// Physical and limit constants of one variable-speed turbine.
///
/// Rotor speed is carried in per-unit of `omega_rated_radps`, so the rotor
/// kinetic energy H·ω² is in per-unit·seconds on the machine power base.
struct TurbineParams {
    double radius_m = 63.0;
    double air_density = 1.225;
    double inertia_s = 7.03;
    double rated_power_w = 5.0e6;
    double omega_rated_radps = 12.1 * 2.0 * 3.14159265358979323846 / 60.0;
    double omega_min_pu = 6.9 / 12.1;
    double omega_max_pu = 1.0;
    double beta_max_deg = 35.0; // the fit needs ~33 deg to hold rated power at cut-out
    double v_cutin_mps = 3.0;
    double v_cutout_mps = 25.0;
    CpCoefficients cp_coeffs{};

    /// Throws DomainError naming the first violated invariant.
    void validate() const;
    double swept_area() const;
};

/// One turbine's steady operating state and everything derived from it.
struct OperatingPoint {
    double v_mps = 0.0;
    double omega_pu = 0.0;
    double beta_deg = 0.0;
    double lambda = 0.0;
    double cp = 0.0;
    double ct = 0.0;
    double p_mech_w = 0.0;
    double e_kin_pus = 0.0;
};

inline constexpr double kBetzCp = 16.0 / 27.0;
inline constexpr double kCtLimit = 8.0 / 9.0;

double tip_speed_ratio(double omega_pu, double v_mps, const TurbineParams& tp);

// Clamped to [0, 16/27]; the raw fit goes negative far from the ridge.
double cp_surface(double lambda, double beta_deg, const TurbineParams& tp);
double cp_surface_raw(double lambda, double beta_deg, const CpCoefficients& coeffs);

double cp_from_ct(double ct);
double ct_from_cp(double cp);

double mech_power(double v_mps, double omega_pu, double beta_deg, const TurbineParams& tp);
double thrust(double v_mps, double omega_pu, double beta_deg, const TurbineParams& tp);

double kinetic_energy(double omega_pu, const TurbineParams& tp);

/// Tip-speed ratio maximising Cp at zero pitch.
double optimal_tip_speed_ratio(const TurbineParams& tp);

/// Operating zone 1..4 of the maximum-power characteristic at wind speed v.
int zone(double v_mps, const TurbineParams& tp);

/// Maximum-power operating point at wind speed v (pitch-limited to rated
/// power above zone 3).
OperatingPoint mppt(double v_mps, const TurbineParams& tp);
// Same, with the optimal tip-speed ratio supplied by a caller that evaluates
// many wind speeds against one parameter set.
OperatingPoint mppt(double v_mps, const TurbineParams& tp, double lambda_opt);

/// Populates every derived field for the given (v, ω, β).
OperatingPoint evaluate_point(double v_mps, double omega_pu, double beta_deg, const TurbineParams& tp);

/// Result of searching for the smallest pitch angle that brings mechanical
/// power to a target at fixed (v, ω).
struct PitchSolve {
    bool found = false;
    double beta_deg = 0.0;
    // Largest power seen on the scan; used to score infeasible targets.
    double best_power_w = 0.0;
};

/// Scans β upward from `beta_from_deg` in `scan_step_deg` increments for the
/// first crossing of P(v, ω, β) = target and refines it by bisection to
/// 1e-10 degrees. A start point already within `rel_tol` of the target is
/// returned as is.
PitchSolve smallest_pitch_for_power(double v_mps, double omega_pu, double target_w, const TurbineParams& tp,
                                    double beta_from_deg = 0.0, double scan_step_deg = 0.05,
                                    double rel_tol = 1e-9);

} // namespace wakefc
