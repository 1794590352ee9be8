// evpsim: seeded simulation and statistical verification of heavy-tailed
// triangular arrays, their limiting Poisson point process, and the
// argmax/max/ladder functionals.

#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evp/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Simulates weighted rows of independent heavy-tailed variables and the "
        "matching Poisson point process, and verifies the limiting laws of the "
        "argmax, maximum, and ladder functionals against closed-form oracles."};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string report_dir;
    evp::CliOverrides overrides;

    std::uint64_t seed_flag = 0;
    std::size_t replicates_flag = 0;
    double alpha_flag = 0.0;
    std::string out_flag;
    std::vector<std::size_t> n_flag;
    unsigned threads_flag = 1;
    bool allow_entropy = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "Scenario file (JSON, schema 1)")
            ->required();
        cmd->add_option("--seed", seed_flag, "Override the scenario seed");
        cmd->add_option("--replicates", replicates_flag,
                        "Override the replicate count of every experiment");
        cmd->add_option("--alpha", alpha_flag, "Override the model tail index");
        cmd->add_option("--out", out_flag, "Override the output directory");
        cmd->add_option("--n", n_flag,
                        "Override the row sizes of every experiment (repeatable)");
        cmd->add_option("--threads", threads_flag,
                        "Worker threads (never changes results)");
        cmd->add_flag("--allow-entropy", allow_entropy,
                      "Permit wall-entropy seeding when no seed is given");
    };

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Draw raw samples and write them as CSV");
    add_common(simulate);
    CLI::App* verify = app.add_subcommand(
        "verify", "Run all experiments and write reports; exit 0 iff all verdicts pass");
    add_common(verify);
    CLI::App* report = app.add_subcommand(
        "report", "Aggregate metrics CSVs in a directory into one summary table");
    report->add_option("dir", report_dir, "Output directory of a verify/simulate run")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : evp::kExitConfig;
    }

    auto collect = [&](CLI::App* cmd) {
        if (cmd->count("--seed")) overrides.seed = seed_flag;
        if (cmd->count("--replicates")) overrides.replicates = replicates_flag;
        if (cmd->count("--alpha")) overrides.alpha = alpha_flag;
        if (cmd->count("--out")) overrides.out = out_flag;
        overrides.n_values = n_flag;
        overrides.threads = threads_flag == 0 ? 1 : threads_flag;
        overrides.allow_entropy = allow_entropy;
    };

    if (simulate->parsed()) {
        collect(simulate);
        return evp::cmd_simulate(scenario_path, overrides);
    }
    if (verify->parsed()) {
        collect(verify);
        return evp::cmd_verify(scenario_path, overrides);
    }
    return evp::cmd_report(report_dir);
}
