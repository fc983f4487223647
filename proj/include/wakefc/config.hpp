#pragma once

#include "wakefc/aero.hpp"
#include "wakefc/farmopt.hpp"
#include "wakefc/gridsim.hpp"
#include "wakefc/wake.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wakefc {

struct SweepRange {
    double v_start_mps = 7.0;
    double v_stop_mps = 12.0;
    double v_step_mps = 0.5;

    std::vector<double> values() const; // inclusive of the end point
};

struct FarmConfig {
    std::size_t n = 5;
    double v_free_mps = 8.0;
    SweepRange sweep{};
    std::vector<DmCase> cases; // defaults: I, II, III at 0 / 5 / 10 % on all but the last turbine
    SolverOptions solver{};
    unsigned threads = 0;       // 0 = hardware concurrency

    const DmCase& find_case(const std::string& id) const;
};

struct GridConfig {
    GridScenario scenario{};                // gens, events and system constants; wind filled per case
    std::optional<std::string> balance_with = "SG1";
    bool wind_enabled = true;
    WindRow wind{};                         // control settings; solutions filled per case
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool svg = true;
    bool metrics = true;
};

struct StudyConfig {
    TurbineParams turbine{};
    WakeParams wake{};
    FarmConfig farm{};
    GridConfig grid{};
    OutputConfig output{};
    std::uint64_t seed = 1;
};

/// SG1-SG3 at their base dispatch, SG3 tripping with the simultaneous wind release.
GridScenario default_grid_scenario();

StudyConfig default_config();

/// Parses YAML text. Throws ConfigError naming the offending key.
StudyConfig parse_config(const std::string& text);
StudyConfig load_config(const std::string& path);

} // namespace wakefc
