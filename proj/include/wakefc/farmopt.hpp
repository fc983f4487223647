#pragma once

#include "wakefc/aero.hpp"
#include "wakefc/pattern_search.hpp"
#include "wakefc/wake.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wakefc {

/// Which maximum-power output a de-loading margin is measured against.
enum class PoptReference {
    current_inflow, // MPPT power at the turbine's inflow in the evaluated row
    base_case       // MPPT power at the turbine's inflow when the whole row runs MPPT
};

struct SolverOptions {
    PatternSearchOptions search{};
    std::size_t multistart = 5;
    std::uint64_t seed = 1;
    PoptReference p_opt_reference = PoptReference::current_inflow;
};

struct FarmProblem {
    std::size_t n = 5;
    TurbineParams tp{};
    WakeParams wp{};
    double v_free_mps = 8.0;
    std::vector<double> dm; // per turbine; the last entry must be 0
    SolverOptions solver{};

    void validate() const;
};

struct SolverDiagnostics {
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    double final_mesh = 0.0;
    bool budget_exhausted = false;
    std::size_t starts = 0;
    std::size_t best_start = 0;
    double start_objective = 0.0;     // best objective among feasible start points
    double max_power_residual = 0.0;  // max |P − target| / target over de-loaded turbines
};

struct FarmSolution {
    std::vector<OperatingPoint> turbines;
    std::vector<double> dm;
    std::vector<double> p_target_w; // (1 − dm)·P_opt per turbine
    double total_kinetic_pus = 0.0;
    double total_power_w = 0.0;
    SolverDiagnostics diagnostics{};

    std::vector<Setpoint> setpoints() const;
};

/// Whole row at maximum power, each turbine at its own wake-reduced inflow.
FarmSolution base_case(double v_free_mps, std::size_t n, const TurbineParams& tp, const WakeParams& wp);

/// Smallest pitch putting the turbine on (1 − dm)·P_opt(v) at rotor speed ω.
/// Throws InfeasibleError when no pitch in [0, β_max] reaches the target.
double deload_curve(double v_inflow_mps, double dm, double omega_pu, const TurbineParams& tp);

/// Maximises total rotor kinetic energy over the rotor speeds of the
/// de-loaded turbines. Pitch follows from the power equality and the
/// inflows are re-propagated for every candidate.
FarmSolution solve_farm(const FarmProblem& problem);

struct DmCase {
    std::string id;
    std::vector<double> dm;
};

struct SweepCell {
    std::string case_id;
    double v_free_mps = 0.0;
    std::optional<FarmSolution> solution;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells; // case-major, wind speeds in input order
};

/// One solve per (case, wind speed). Failures are recorded per cell. Cells
/// run on up to `threads` workers; the result does not depend on the count.
SweepResult sweep(std::span<const double> v_range, std::span<const DmCase> cases, std::size_t n,
                  const TurbineParams& tp, const WakeParams& wp, const SolverOptions& options = {},
                  unsigned threads = 0);

} // namespace wakefc
