#include "wakefc/farmopt.hpp"

#include "wakefc/error.hpp"
#include "wakefc/roots.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

namespace wakefc {

namespace {

struct Context {
    const FarmProblem& pb;
    double lambda_opt = 0.0;
    std::vector<int> var_of;      // turbine -> decision index, −1 when not a decision
    std::vector<double> base_p_w; // base-case MPPT powers, filled for the base-case reference
};

struct RowWalk {
    std::vector<OperatingPoint> points;
    std::vector<double> targets;
    std::vector<double> x;
    double energy = 0.0;
    double violation = 0.0;
    double max_residual = 0.0;
};

// Chooses the rotor speed of decision variable j given its inflow and its
// maximum-power point there.
using SpeedChooser = std::function<double(std::size_t j, double v, const OperatingPoint& opt, double target_w)>;

RowWalk walk_row(const Context& ctx, const SpeedChooser& choose)
{
    const FarmProblem& pb = ctx.pb;
    const TurbineParams& tp = pb.tp;
    RowWalk out;
    out.points.reserve(pb.n);
    out.targets.reserve(pb.n);
    double v = pb.v_free_mps;
    for (std::size_t i = 0; i < pb.n; ++i) {
        const OperatingPoint opt = mppt(v, tp, ctx.lambda_opt);
        OperatingPoint pt = opt;
        double target = opt.p_mech_w;
        if (ctx.var_of[i] >= 0) {
            const double ref = ctx.base_p_w.empty() ? opt.p_mech_w : ctx.base_p_w[i];
            target = (1.0 - pb.dm[i]) * ref;
            const double w = choose(static_cast<std::size_t>(ctx.var_of[i]), v, opt, target);
            out.x.push_back(w);
            if (w < opt.omega_pu) {
                out.violation += opt.omega_pu - w;
            }
            const PitchSolve ps = smallest_pitch_for_power(v, w, target, tp);
            if (ps.found) {
                pt = evaluate_point(v, w, ps.beta_deg, tp);
                out.max_residual = std::max(out.max_residual, std::abs(pt.p_mech_w - target) / target);
            } else if (ps.best_power_w < target) {
                out.violation += (target - ps.best_power_w) / target;
                pt = evaluate_point(v, w, 0.0, tp);
            } else {
                pt = evaluate_point(v, w, tp.beta_max_deg, tp);
                out.violation += (pt.p_mech_w - target) / target;
            }
        }
        out.points.push_back(pt);
        out.targets.push_back(target);
        out.energy += pt.e_kin_pus;
        if (i + 1 < pb.n) {
            v = next_wind(pb.v_free_mps, v, pt.ct, pb.wp);
        }
    }
    return out;
}

double overspeed_speed(double v, const OperatingPoint& opt, double target, const TurbineParams& tp)
{
    if (opt.omega_pu >= tp.omega_max_pu) {
        return opt.omega_pu;
    }
    const auto excess = [&](double w) { return mech_power(v, w, 0.0, tp) - target; };
    if (excess(tp.omega_max_pu) > 0.0 || excess(opt.omega_pu) < 0.0) {
        return opt.omega_pu;
    }
    return detail::bisect(excess, opt.omega_pu, tp.omega_max_pu, 1e-10);
}

// Uniform in [0, 1) from the top 53 bits, identical on every standard library.
double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

FarmSolution assemble(const RowWalk& w, const std::vector<double>& dm)
{
    FarmSolution s;
    s.dm = dm;
    s.turbines = w.points;
    s.p_target_w = w.targets;
    for (const auto& p : s.turbines) {
        s.total_kinetic_pus += p.e_kin_pus;
        s.total_power_w += p.p_mech_w;
    }
    s.diagnostics.max_power_residual = w.max_residual;
    return s;
}

} // namespace

void FarmProblem::validate() const
{
    if (n < 1) {
        throw DomainError("FarmProblem: n must be >= 1");
    }
    tp.validate();
    wp.validate();
    if (dm.size() != n) {
        throw DomainError("FarmProblem: dm needs one entry per turbine");
    }
    for (double d : dm) {
        if (!(d >= 0.0 && d < 1.0)) {
            throw DomainError("FarmProblem: dm entries must lie in [0, 1)");
        }
    }
    if (dm.back() != 0.0) {
        throw DomainError("FarmProblem: the last turbine maximises its power production without de-loading (dm = 0)");
    }
    if (!(v_free_mps >= tp.v_cutin_mps && v_free_mps <= tp.v_cutout_mps)) {
        throw DomainError("FarmProblem: free wind speed outside cut-in/cut-out range");
    }
    if (solver.multistart < 1) {
        throw DomainError("FarmProblem: multistart must be >= 1");
    }
}

std::vector<Setpoint> FarmSolution::setpoints() const
{
    std::vector<Setpoint> out;
    out.reserve(turbines.size());
    for (const auto& p : turbines) {
        out.push_back({p.omega_pu, p.beta_deg});
    }
    return out;
}

FarmSolution base_case(double v_free_mps, std::size_t n, const TurbineParams& tp, const WakeParams& wp)
{
    FarmProblem pb;
    pb.n = n;
    pb.tp = tp;
    pb.wp = wp;
    pb.v_free_mps = v_free_mps;
    pb.dm.assign(n, 0.0);
    pb.validate();
    Context ctx{pb, optimal_tip_speed_ratio(tp), std::vector<int>(n, -1), {}};
    return assemble(walk_row(ctx, nullptr), pb.dm);
}

double deload_curve(double v_inflow_mps, double dm, double omega_pu, const TurbineParams& tp)
{
    if (!(dm >= 0.0 && dm < 1.0)) {
        throw DomainError("deload_curve: margin must lie in [0, 1)");
    }
    const OperatingPoint opt = mppt(v_inflow_mps, tp);
    if (!(omega_pu >= opt.omega_pu && omega_pu <= tp.omega_max_pu)) {
        throw DomainError("deload_curve: rotor speed outside [omega_opt, omega_max]");
    }
    const double target = (1.0 - dm) * opt.p_mech_w;
    const PitchSolve ps = smallest_pitch_for_power(v_inflow_mps, omega_pu, target, tp);
    if (!ps.found) {
        throw InfeasibleError("deload_curve: no pitch in [0, beta_max] reaches " + std::to_string(1.0 - dm)
                              + " of maximum power at omega = " + std::to_string(omega_pu));
    }
    return ps.beta_deg;
}

FarmSolution solve_farm(const FarmProblem& pb)
{
    pb.validate();
    Context ctx{pb, optimal_tip_speed_ratio(pb.tp), std::vector<int>(pb.n, -1), {}};
    std::size_t dim = 0;
    for (std::size_t i = 0; i + 1 < pb.n; ++i) {
        if (pb.dm[i] > 0.0) {
            ctx.var_of[i] = static_cast<int>(dim++);
        }
    }
    if (pb.solver.p_opt_reference == PoptReference::base_case) {
        for (const auto& p : base_case(pb.v_free_mps, pb.n, pb.tp, pb.wp).turbines) {
            ctx.base_p_w.push_back(p.p_mech_w);
        }
    }
    if (dim == 0) {
        return assemble(walk_row(ctx, nullptr), pb.dm);
    }

    const TurbineParams& tp = pb.tp;
    std::mt19937_64 rng(pb.solver.seed);
    std::vector<std::vector<double>> starts;
    for (std::size_t s = 0; s < pb.solver.multistart; ++s) {
        SpeedChooser choose;
        switch (s) {
        case 0:
            choose = [](std::size_t, double, const OperatingPoint& opt, double) { return opt.omega_pu; };
            break;
        case 1:
            choose = [&](std::size_t, double v, const OperatingPoint& opt, double target) {
                return overspeed_speed(v, opt, target, tp);
            };
            break;
        case 2:
            choose = [&](std::size_t, double, const OperatingPoint&, double) { return tp.omega_max_pu; };
            break;
        default:
            choose = [&](std::size_t, double, const OperatingPoint& opt, double) {
                return opt.omega_pu + unit_draw(rng) * (tp.omega_max_pu - opt.omega_pu);
            };
            break;
        }
        std::vector<double> x = walk_row(ctx, choose).x;
        for (double& w : x) {
            w = std::clamp(w, tp.omega_min_pu, tp.omega_max_pu);
        }
        starts.push_back(std::move(x));
    }

    const ConstrainedObjective objective = [&](std::span<const double> x) {
        try {
            const RowWalk w = walk_row(ctx, [&](std::size_t j, double, const OperatingPoint&, double) { return x[j]; });
            return Evaluation{w.energy, w.violation};
        } catch (const Error&) {
            return Evaluation{-std::numeric_limits<double>::infinity(), 1.0};
        }
    };

    const std::vector<double> lower(dim, tp.omega_min_pu);
    const std::vector<double> upper(dim, tp.omega_max_pu);
    SolverDiagnostics diag;
    std::optional<PatternSearchResult> best;
    bool any_feasible_start = false;
    double start_best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const Evaluation e0 = objective(starts[s]);
        if (!std::isfinite(e0.value)) {
            continue;
        }
        if (e0.violation <= 0.0) {
            any_feasible_start = true;
            start_best = std::max(start_best, e0.value);
        }
        PatternSearchResult r = pattern_search(objective, starts[s], lower, upper, pb.solver.search);
        ++diag.starts;
        diag.iterations += r.iterations;
        diag.evaluations += r.evaluations;
        diag.budget_exhausted = diag.budget_exhausted || r.budget_exhausted;
        if (r.feasible && (!best || r.value > best->value)) {
            best = std::move(r);
            diag.best_start = s;
        }
    }
    if (!best) {
        throw InfeasibleError(any_feasible_start ? "solve_farm: search left the feasible region"
                                                 : "solve_farm: no feasible start point for these margins");
    }

    const std::vector<double>& xb = best->x;
    FarmSolution sol = assemble(walk_row(ctx, [&](std::size_t j, double, const OperatingPoint&, double) { return xb[j]; }), pb.dm);
    diag.final_mesh = best->final_mesh;
    diag.start_objective = start_best;
    diag.max_power_residual = sol.diagnostics.max_power_residual;
    sol.diagnostics = diag;
    return sol;
}

SweepResult sweep(std::span<const double> v_range, std::span<const DmCase> cases, std::size_t n,
                  const TurbineParams& tp, const WakeParams& wp, const SolverOptions& options, unsigned threads)
{
    if (v_range.empty() || cases.empty()) {
        throw DomainError("sweep: wind-speed range and case list must be nonempty");
    }
    SweepResult out;
    out.cells.resize(v_range.size() * cases.size());
    for (std::size_t c = 0; c < cases.size(); ++c) {
        for (std::size_t k = 0; k < v_range.size(); ++k) {
            auto& cell = out.cells[c * v_range.size() + k];
            cell.case_id = cases[c].id;
            cell.v_free_mps = v_range[k];
        }
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t idx = next++; idx < out.cells.size(); idx = next++) {
            auto& cell = out.cells[idx];
            FarmProblem pb;
            pb.n = n;
            pb.tp = tp;
            pb.wp = wp;
            pb.v_free_mps = cell.v_free_mps;
            pb.dm = cases[idx / v_range.size()].dm;
            pb.solver = options;
            try {
                cell.solution = solve_farm(pb);
            } catch (const Error& e) {
                cell.error = e.what();
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, out.cells.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    return out;
}

} // namespace wakefc
