#include "oracles.hpp"

#include "wakefc/aero.hpp"
#include "wakefc/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace wakefc;
using doctest::Approx;

TEST_CASE("tip speed ratio")
{
    const TurbineParams tp;
    CHECK(tip_speed_ratio(1.0 / tp.omega_rated_radps, 63.0, tp) == Approx(1.0).epsilon(1e-12));
    CHECK(tip_speed_ratio(1.0, 8.0, tp) == Approx(1.2671090369478832 * 63.0 / 8.0).epsilon(1e-12));
    CHECK_THROWS_AS(tip_speed_ratio(1.0, 0.0, tp), DomainError);
    CHECK_THROWS_AS(tip_speed_ratio(1.0, -1.0, tp), DomainError);
}

TEST_CASE("cp surface matches the longhand fit and clamps at zero")
{
    const TurbineParams tp;
    for (double l = 2.0; l <= 14.0; l += 0.7) {
        for (double b = 0.0; b <= 25.0; b += 1.3) {
            CHECK(cp_surface(l, b, tp) == Approx(oracle::cp(l, b)).epsilon(1e-12));
            CHECK(cp_surface_raw(l, b, tp.cp_coeffs) == Approx(oracle::cp_raw(l, b)).epsilon(1e-12));
        }
    }
    // Far off the ridge the fit goes negative.
    const double lam = tip_speed_ratio(1.0, 3.0, tp);
    CHECK(cp_surface_raw(lam, 25.0, tp.cp_coeffs) < 0.0);
    CHECK(cp_surface(lam, 25.0, tp) == 0.0);
}

TEST_CASE("optimal tip speed ratio against a dense grid")
{
    const TurbineParams tp;
    const double lopt = optimal_tip_speed_ratio(tp);
    CHECK(lopt == Approx(oracle::lambda_opt_grid()).epsilon(2e-4));
    CHECK(lopt == Approx(8.1).epsilon(0.01));
    // No point of a 0.005 x 0.05 grid beats the ridge value.
    const double top = cp_surface(lopt, 0.0, tp);
    for (double l = 0.5; l <= 15.0; l += 0.005) {
        for (double b = 0.0; b <= 25.0; b += 0.05) {
            REQUIRE(oracle::cp(l, b) <= top + 1e-12);
        }
    }
    // Pitching away from zero at the optimum only loses power.
    double prev = top;
    for (double b = 0.1; b <= 5.0; b += 0.1) {
        const double c = cp_surface(lopt, b, tp);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("cp and ct inversion")
{
    CHECK(cp_from_ct(0.0) == 0.0);
    CHECK(cp_from_ct(0.5) == Approx(0.4267767).epsilon(1e-6));
    CHECK(cp_from_ct(8.0 / 9.0) == Approx(16.0 / 27.0).epsilon(1e-12));
    CHECK(ct_from_cp(0.0) == 0.0);
    CHECK(ct_from_cp(0.4267767) == Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(cp_from_ct(-0.01), DomainError);
    CHECK_THROWS_AS(cp_from_ct(0.9), DomainError);
    CHECK_THROWS_AS(ct_from_cp(-0.01), DomainError);
    CHECK_THROWS_AS(ct_from_cp(0.6), DomainError);

    for (int i = 0; i <= 1000; ++i) {
        const double ct = (8.0 / 9.0) * i / 1000.0;
        REQUIRE(ct_from_cp(cp_from_ct(ct)) == Approx(ct).epsilon(1e-10).scale(1.0));
    }
    for (double c = 0.0; c < 16.0 / 27.0; c += 0.013) {
        CHECK(ct_from_cp(c) == Approx(oracle::ct_of_cp(c)).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("power and thrust by hand")
{
    const TurbineParams tp;
    const double area = oracle::pi * 63.0 * 63.0;
    // Half rho A v^3 times a Cp of 0.48 at 8 m/s.
    CHECK(0.5 * 1.225 * area * 512.0 * 0.48 == Approx(1.877e6).epsilon(1e-3));
    CHECK(0.5 * 1.225 * area * 64.0 * 0.8 == Approx(0.391e6).epsilon(1e-3));
    CHECK(tp.swept_area() == Approx(area).epsilon(1e-14));

    for (double v : {5.0, 8.0, 11.0}) {
        for (double w : {0.6, 0.8, 1.0}) {
            for (double b : {0.0, 2.0, 7.0}) {
                const double c = oracle::cp(oracle::lambda(w, v), b);
                CHECK(mech_power(v, w, b, tp) == Approx(oracle::power(v, w, b)).epsilon(1e-12));
                CHECK(thrust(v, w, b, tp)
                      == Approx(0.5 * 1.225 * area * v * v * oracle::ct_of_cp(c)).epsilon(1e-9));
            }
        }
    }
    // Same tip-speed ratio at twice the wind: 8x power, 4x thrust.
    CHECK(mech_power(8.0, 1.0, 0.0, tp) == Approx(8.0 * mech_power(4.0, 0.5, 0.0, tp)).epsilon(1e-12));
    CHECK(thrust(8.0, 1.0, 0.0, tp) == Approx(4.0 * thrust(4.0, 0.5, 0.0, tp)).epsilon(1e-12));
    // Zero Cp gives zero thrust.
    CHECK(mech_power(3.0, 1.0, 25.0, tp) == 0.0);
    CHECK(thrust(3.0, 1.0, 25.0, tp) == 0.0);
}

TEST_CASE("evaluate_point fills every field consistently")
{
    const TurbineParams tp;
    const OperatingPoint p = evaluate_point(9.0, 0.9, 1.5, tp);
    CHECK(p.v_mps == 9.0);
    CHECK(p.lambda == Approx(oracle::lambda(0.9, 9.0)));
    CHECK(p.cp == Approx(oracle::cp(p.lambda, 1.5)));
    CHECK(p.ct == Approx(oracle::ct_of_cp(p.cp)).epsilon(1e-10));
    CHECK(p.p_mech_w == Approx(oracle::power(9.0, 0.9, 1.5)));
    CHECK(p.e_kin_pus == Approx(7.03 * 0.81));
}

TEST_CASE("kinetic energy")
{
    TurbineParams tp;
    tp.inertia_s = 5.0;
    CHECK(kinetic_energy(1.0, tp) == Approx(5.0));
    CHECK(kinetic_energy(1.2, tp) == Approx(7.2));
    CHECK(kinetic_energy(0.0, tp) == 0.0);
    double prev = -1.0;
    for (double w = 0.0; w <= 1.2; w += 0.05) {
        CHECK(kinetic_energy(w, tp) > prev);
        prev = kinetic_energy(w, tp);
    }
}

TEST_CASE("zones are contiguous and ordered")
{
    const TurbineParams tp;
    CHECK(zone(3.05, tp) == 1);
    CHECK(zone(8.0, tp) == 2);
    CHECK(zone(12.0, tp) == 4);
    int prev = 1;
    bool seen[5] = {};
    for (double v = 3.0; v <= 25.0; v += 0.01) {
        const int z = zone(v, tp);
        REQUIRE(z >= prev);
        REQUIRE(z - prev <= 1);
        seen[z] = true;
        prev = z;
    }
    CHECK((seen[1] && seen[2] && seen[3] && seen[4]));
    CHECK_THROWS_AS(zone(2.0, tp), DomainError);
    CHECK_THROWS_AS(zone(26.0, tp), DomainError);
}

TEST_CASE("mppt operating points")
{
    const TurbineParams tp;
    const double lopt = oracle::lambda_opt_grid();
    const auto zone2 = mppt(8.0, tp);
    CHECK(zone2.beta_deg == 0.0);
    CHECK(zone2.lambda == Approx(lopt).epsilon(2e-4));
    CHECK(zone2.omega_pu == Approx(lopt * 8.0 / (oracle::omega_rated * 63.0)).epsilon(2e-4));

    // Nothing on a 200 x 50 grid of admissible speeds and pitches does better.
    for (double v : {6.5, 8.0, 9.5}) {
        const double best = mppt(v, tp).p_mech_w;
        for (int i = 0; i < 200; ++i) {
            const double w = tp.omega_min_pu + (tp.omega_max_pu - tp.omega_min_pu) * i / 199.0;
            for (int j = 0; j < 50; ++j) {
                REQUIRE(oracle::power(v, w, 25.0 * j / 49.0) <= best * (1.0 + 1e-12));
            }
        }
    }

    const auto zone4 = mppt(15.0, tp);
    CHECK(zone4.p_mech_w == Approx(5.0e6).epsilon(1e-4));
    CHECK(zone4.beta_deg > 0.0);
    CHECK(zone4.omega_pu == 1.0);

    const auto zone1 = mppt(4.0, tp);
    CHECK(zone1.omega_pu == Approx(tp.omega_min_pu));

    double prev = 0.0;
    for (double v = 3.0; v <= 25.0; v += 0.1) {
        const double p = mppt(v, tp).p_mech_w;
        REQUIRE(p >= prev * (1.0 - 1e-9));
        REQUIRE(p <= 5.0e6 * (1.0 + 1e-6));
        prev = p;
    }
}

TEST_CASE("admissible points stay below the Betz limits")
{
    const TurbineParams tp;
    for (double v = 3.0; v <= 25.0; v += 1.1) {
        for (double w = tp.omega_min_pu; w <= 1.0; w += 0.04) {
            for (double b = 0.0; b <= 25.0; b += 2.5) {
                const auto p = evaluate_point(v, w, b, tp);
                REQUIRE(p.cp <= kBetzCp);
                REQUIRE(p.ct < kCtLimit);
            }
        }
    }
}

TEST_CASE("smallest pitch for a power target")
{
    const TurbineParams tp;
    const auto o = mppt(11.0, tp);
    const double target = 0.9 * o.p_mech_w;
    const PitchSolve s = smallest_pitch_for_power(11.0, o.omega_pu, target, tp);
    REQUIRE(s.found);
    CHECK(oracle::power(11.0, o.omega_pu, s.beta_deg) == Approx(target).epsilon(1e-9));
    // Every smaller pitch on a fine grid is above the target.
    for (double b = 0.0; b < s.beta_deg - 1e-6; b += 1e-3) {
        REQUIRE(oracle::power(11.0, o.omega_pu, b) > target);
    }
    const PitchSolve none = smallest_pitch_for_power(11.0, o.omega_pu, 2.0 * o.p_mech_w, tp);
    CHECK_FALSE(none.found);
}

TEST_CASE("parameter validation")
{
    TurbineParams tp;
    CHECK_NOTHROW(tp.validate());
    tp.radius_m = -1.0;
    CHECK_THROWS_AS(tp.validate(), DomainError);
    tp = {};
    tp.omega_min_pu = 1.2;
    CHECK_THROWS_AS(tp.validate(), DomainError);
    tp = {};
    tp.inertia_s = 0.0;
    CHECK_THROWS_AS(tp.validate(), DomainError);
    tp = {};
    tp.v_cutin_mps = 30.0;
    CHECK_THROWS_AS(tp.validate(), DomainError);
}
