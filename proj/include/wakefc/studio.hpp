#pragma once

#include "wakefc/config.hpp"
#include "wakefc/csv.hpp"
#include "wakefc/farmopt.hpp"
#include "wakefc/gridsim.hpp"
#include "wakefc/svg_plot.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wakefc {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;
inline constexpr int config = 2;
} // namespace exit_code

Table solution_table(const FarmSolution& s, const std::string& case_id, double v_free_mps);
Table sweep_table(const SweepResult& r);
Table trace_table(const SimTrace& t);

// Plots are built from the CSV tables alone.
std::vector<std::pair<std::string, PlotSpec>> sweep_plots(const Table& sweep_csv);
PlotSpec frequency_plot(const std::vector<std::pair<std::string, Table>>& traces);
PlotSpec rotor_plot(const std::string& case_id, const Table& trace_csv);

/// Grid scenario for one case: the case's de-loaded row against the
/// all-MPPT row, dispatch balanced as configured.
GridScenario build_scenario(const StudyConfig& cfg, const DmCase& c);

struct CaseRun {
    std::string case_id;
    SimTrace trace;
    NadirMetrics metrics;
};

/// Runs the cases in order; delays are measured against the first
/// configured case when it is among them.
std::vector<CaseRun> run_cases(const StudyConfig& cfg, const std::vector<std::string>& case_ids);

std::string metrics_summary(const std::vector<CaseRun>& runs);

// Commands write into `out_dir` and report progress on `log`; they return
// an exit code.
int cmd_optimize(const StudyConfig& cfg, double v_free_mps, const std::string& case_id, const std::string& out_dir,
                 std::ostream& log);
int cmd_sweep(const StudyConfig& cfg, const std::string& out_dir, std::ostream& log);
int cmd_simulate(const StudyConfig& cfg, const std::vector<std::string>& case_ids, const std::string& out_dir,
                 std::ostream& log);

} // namespace wakefc
