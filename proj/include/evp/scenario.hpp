#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evp/experiments.hpp"

namespace evp {

// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

// Malformed scenario (unknown field, bad value, unreadable file).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File-system failure while writing outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raw model parameters as parsed; the TailModel is rebuilt after overrides.
struct ModelParams {
    double alpha = 1.0;
    WeightScheme weights = WeightScheme::constant();
    Perturbation::Kind perturbation_kind = Perturbation::Kind::Zero;
    double m0 = 0.0;
    double lambda = 1.0;
    std::optional<double> m_lo; // explicit bounds override
    std::optional<double> m_hi;

    TailModel build() const;
};

struct ExperimentParams {
    ExperimentKind kind = ExperimentKind::Argmax;
    SampleSource source = SampleSource::Empirical;
    std::vector<std::size_t> n_values;
    std::optional<std::size_t> replicates;
    std::vector<double> grid;
    std::vector<BoxSpec> boxes;
    std::vector<TestFunction> test_functions;
    double epsilon = 0.0;
    double oracle_alpha = 0.0;
};

struct Scenario {
    int schema = 0;
    std::optional<std::uint64_t> seed;
    std::string output = "out";
    std::size_t replicates = 10000;
    ModelParams model;
    std::vector<ExperimentParams> experiments;
    std::string name; // scenario file stem
};

Scenario load_scenario(const std::filesystem::path& path);

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::optional<double> alpha;
    std::optional<std::string> out;
    std::vector<std::size_t> n_values; // non-empty replaces every experiment's list
    unsigned threads = 1;
    bool allow_entropy = false;
};

// Scenario fields after overrides, ready to run.
struct ResolvedScenario {
    std::uint64_t seed = 0;
    std::filesystem::path output;
    TailModel model;
    std::vector<ExperimentConfig> experiments;
    std::string name;
};

ResolvedScenario resolve(const Scenario& scenario, const CliOverrides& overrides);

// CLI commands; return process exit codes and report errors on stderr.
int cmd_simulate(const std::filesystem::path& scenario_path, const CliOverrides& overrides);
int cmd_verify(const std::filesystem::path& scenario_path, const CliOverrides& overrides);
int cmd_report(const std::filesystem::path& output_dir);

} // namespace evp
