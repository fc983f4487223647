#include "oracles.hpp"

#include "wakefc/error.hpp"
#include "wakefc/farmopt.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace wakefc;
using doctest::Approx;

namespace {

FarmProblem problem(double v, std::vector<double> dm)
{
    FarmProblem pb;
    pb.n = dm.size();
    pb.v_free_mps = v;
    pb.dm = std::move(dm);
    return pb;
}

} // namespace

TEST_CASE("base case is MPPT down the row")
{
    const TurbineParams tp;
    const WakeParams wp;
    const auto one = base_case(8.0, 1, tp, wp);
    CHECK(one.turbines[0].p_mech_w == Approx(mppt(8.0, tp).p_mech_w));
    const auto row = base_case(8.0, 5, tp, wp);
    std::vector<double> ct;
    for (const auto& p : row.turbines) {
        ct.push_back(p.ct);
        CHECK(p.beta_deg == 0.0);
    }
    const auto v = oracle::row_inflows(8.0, ct);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(row.turbines[i].v_mps == Approx(v[i]).epsilon(1e-12));
        if (i > 0) {
            CHECK(row.turbines[i].v_mps < row.turbines[i - 1].v_mps);
        }
    }
}

TEST_CASE("all-zero margins reproduce the base case")
{
    for (double v : {7.0, 9.0, 11.0}) {
        const auto s = solve_farm(problem(v, {0, 0, 0, 0, 0}));
        const auto b = base_case(v, 5, TurbineParams{}, WakeParams{});
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(s.turbines[i].omega_pu == Approx(b.turbines[i].omega_pu).epsilon(1e-12));
            CHECK(s.turbines[i].beta_deg == 0.0);
        }
        CHECK(s.total_kinetic_pus == Approx(b.total_kinetic_pus));
    }
}

TEST_CASE("deload_curve")
{
    const TurbineParams tp;
    const auto o = mppt(8.0, tp);
    CHECK(deload_curve(8.0, 0.0, o.omega_pu, tp) == Approx(0.0).epsilon(1e-9).scale(1.0));
    const double b = deload_curve(8.0, 0.05, o.omega_pu + 0.01, tp);
    CHECK(b > 0.5);
    CHECK(b < 2.0);
    CHECK(b == Approx(oracle::pitch_for(8.0, o.omega_pu + 0.01, 0.95 * o.p_mech_w)).epsilon(1e-6));
    // At 6 m/s the rotor at full speed is far past the Cp ridge.
    CHECK_THROWS_AS(deload_curve(6.0, 0.10, 1.0, tp), InfeasibleError);
    CHECK_THROWS_AS(deload_curve(8.0, 0.05, o.omega_pu - 0.05, tp), DomainError);
}

TEST_CASE("two turbines against an exhaustive grid")
{
    for (double v : {7.0, 8.0, 9.0}) {
        for (double dm : {0.05, 0.10}) {
            CAPTURE(v);
            CAPTURE(dm);
            const auto s = solve_farm(problem(v, {dm, 0.0}));
            const double grid = oracle::two_turbine_grid_optimum(v, dm);
            CHECK(s.total_kinetic_pus >= grid * (1.0 - 0.005));
            CHECK(s.total_kinetic_pus <= grid * (1.0 + 0.005));
        }
    }
}

TEST_CASE("solutions are feasible and self-consistent")
{
    const TurbineParams tp;
    const WakeParams wp;
    for (double v : {7.0, 8.0, 9.5, 11.0}) {
        const auto pb = problem(v, {0.1, 0.1, 0.1, 0.1, 0.0});
        const auto s = solve_farm(pb);
        CHECK(s.diagnostics.max_power_residual < 1e-6);
        CHECK(s.total_kinetic_pus >= s.diagnostics.start_objective - 1e-12);

        const RowState again = propagate_row(v, s.setpoints(), tp, wp);
        double e = 0.0, p = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            const auto& t = s.turbines[i];
            CHECK(again.inflow.v_mps[i] == Approx(t.v_mps).epsilon(1e-9));
            const auto o = mppt(t.v_mps, tp);
            CHECK(t.omega_pu >= o.omega_pu - 1e-9);
            CHECK(t.omega_pu <= tp.omega_max_pu);
            CHECK(t.beta_deg >= 0.0);
            CHECK(s.p_target_w[i] == Approx((1.0 - pb.dm[i]) * o.p_mech_w).epsilon(1e-12));
            CHECK(t.p_mech_w == Approx(s.p_target_w[i]).epsilon(1e-6));
            e += t.e_kin_pus;
            p += t.p_mech_w;
        }
        CHECK(s.total_kinetic_pus == Approx(e));
        CHECK(s.total_power_w == Approx(p));
        // The last turbine runs at maximum power.
        CHECK(s.turbines[4].omega_pu == Approx(mppt(s.turbines[4].v_mps, tp).omega_pu));
    }
}

TEST_CASE("speeds pinned at the maximum make the margin irrelevant")
{
    const auto a = solve_farm(problem(12.0, {0.05, 0.05, 0.05, 0.05, 0.0}));
    const auto b = solve_farm(problem(12.0, {0.10, 0.10, 0.10, 0.10, 0.0}));
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.turbines[i].omega_pu == Approx(1.0));
        CHECK(b.turbines[i].omega_pu == Approx(1.0));
    }
    CHECK(a.total_kinetic_pus == Approx(b.total_kinetic_pus).epsilon(1e-3));
}

TEST_CASE("repeated solves are bit-identical")
{
    const auto pb = problem(8.5, {0.07, 0.1, 0.03, 0.05, 0.0});
    const auto a = solve_farm(pb);
    const auto b = solve_farm(pb);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.turbines[i].omega_pu == b.turbines[i].omega_pu);
        CHECK(a.turbines[i].beta_deg == b.turbines[i].beta_deg);
    }
    CHECK(a.diagnostics.evaluations == b.diagnostics.evaluations);
}

TEST_CASE("base-case power reference")
{
    auto pb = problem(8.0, {0.05, 0.05, 0.05, 0.05, 0.0});
    pb.solver.p_opt_reference = PoptReference::base_case;
    const auto s = solve_farm(pb);
    const auto b = base_case(8.0, 5, pb.tp, pb.wp);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(s.p_target_w[i] == Approx(0.95 * b.turbines[i].p_mech_w).epsilon(1e-12));
        CHECK(s.turbines[i].p_mech_w == Approx(s.p_target_w[i]).epsilon(1e-6));
    }
}

TEST_CASE("problem validation")
{
    CHECK_THROWS_AS(solve_farm(problem(8.0, {0.05, 0.05})), DomainError);
    CHECK_THROWS_AS(solve_farm(problem(8.0, {1.0, 0.0})), DomainError);
    CHECK_THROWS_AS(solve_farm(problem(30.0, {0.0, 0.0})), DomainError);
    auto pb = problem(8.0, {0.05, 0.0});
    pb.dm.pop_back();
    CHECK_THROWS_AS(solve_farm(pb), DomainError);
    pb = problem(8.0, {0.05, 0.0});
    pb.solver.multistart = 0;
    CHECK_THROWS_AS(solve_farm(pb), DomainError);
}

TEST_CASE("sweep records failures per cell and ignores the thread count")
{
    const std::vector<double> v{2.0, 8.0, 10.0};
    const std::vector<DmCase> cases{{"I", {0, 0, 0}}, {"II", {0.05, 0.05, 0.0}}};
    const TurbineParams tp;
    const WakeParams wp;
    const auto one = sweep(v, cases, 3, tp, wp, {}, 1);
    const auto many = sweep(v, cases, 3, tp, wp, {}, 4);
    REQUIRE(one.cells.size() == 6);
    CHECK(one.cells[0].case_id == "I");
    CHECK(one.cells[3].case_id == "II");
    CHECK(one.cells[4].v_free_mps == 8.0);
    CHECK_FALSE(one.cells[0].solution);
    CHECK_FALSE(one.cells[0].error.empty());
    for (std::size_t c = 0; c < 6; ++c) {
        REQUIRE(one.cells[c].solution.has_value() == many.cells[c].solution.has_value());
        if (!one.cells[c].solution) {
            continue;
        }
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(one.cells[c].solution->turbines[i].omega_pu == many.cells[c].solution->turbines[i].omega_pu);
            CHECK(one.cells[c].solution->turbines[i].beta_deg == many.cells[c].solution->turbines[i].beta_deg);
        }
    }
    const auto b = base_case(8.0, 3, tp, wp);
    CHECK(one.cells[1].solution->total_kinetic_pus == Approx(b.total_kinetic_pus));
    CHECK_THROWS_AS(sweep({}, cases, 3, tp, wp), DomainError);
}
