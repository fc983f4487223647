#include "wakefc/config.hpp"
#include "wakefc/error.hpp"
#include "wakefc/studio.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace wakefc;

int main(int argc, char** argv)
{
    CLI::App app{"Kinetic-energy reserve optimiser and frequency simulator for wake-coupled wind turbine rows"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<long long> seed;
    std::vector<std::string> cases;
    std::optional<double> v;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "YAML study configuration (built-in defaults when omitted)");
        sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
        sub->add_option("--seed", seed, "multistart seed (overrides seed)")->check(CLI::NonNegativeNumber);
    };
    CLI::App* optimize = app.add_subcommand("optimize", "solve one row for each selected case");
    common(optimize);
    optimize->add_option("--case", cases, "case id (repeatable; all cases when omitted)");
    optimize->add_option("--v", v, "free wind speed in m/s (defaults to farm.v_free_mps)");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "solve every case over the wind-speed range");
    common(sweep_cmd);
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "run the frequency experiment for the selected cases");
    common(simulate_cmd);
    simulate_cmd->add_option("--case", cases, "case id (repeatable; all cases when omitted)");
    CLI::App* validate_cmd = app.add_subcommand("validate-config", "check a configuration and exit");
    validate_cmd->add_option("--config", config_path, "YAML study configuration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        StudyConfig cfg = config_path.empty() ? default_config() : load_config(config_path);
        if (seed) {
            cfg.seed = static_cast<std::uint64_t>(*seed);
            cfg.farm.solver.seed = cfg.seed;
        }
        const std::string dir = out_dir ? *out_dir : cfg.output.directory;

        if (validate_cmd->parsed()) {
            std::cout << config_path << ": ok (" << cfg.farm.cases.size() << " cases, n = " << cfg.farm.n << ")\n";
            return exit_code::ok;
        }
        if (optimize->parsed()) {
            if (cases.empty()) {
                for (const auto& c : cfg.farm.cases) {
                    cases.push_back(c.id);
                }
            }
            int rc = exit_code::ok;
            for (const auto& id : cases) {
                rc = std::max(rc, cmd_optimize(cfg, v.value_or(cfg.farm.v_free_mps), id, dir, std::cout));
            }
            return rc;
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(cfg, dir, std::cout);
        }
        return cmd_simulate(cfg, cases, dir, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_code::config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code::failed;
    }
}
