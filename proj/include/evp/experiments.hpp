#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evp/measures.hpp"
#include "evp/point_process.hpp"
#include "evp/tail_model.hpp"

namespace evp {

enum class ExperimentKind { Argmax, Max, Ladder, PoissonCounts, Laplace };
enum class SampleSource { Empirical, PoissonLimit };

std::string to_string(ExperimentKind kind);
std::string to_string(SampleSource source);

// A box [t_lo, t_hi] x [height_lo, height_hi) for count statistics;
// height_hi may be +inf.
struct BoxSpec {
    double t_lo = 0.0;
    double t_hi = 1.0;
    double height_lo = 0.0;
    double height_hi = std::numeric_limits<double>::infinity();

    bool contains(double t, double x) const {
        return t >= t_lo && t <= t_hi && x >= height_lo && x < height_hi;
    }
    bool disjoint_from(const BoxSpec& other) const;
};

struct ExperimentConfig {
    TailModel model;
    ExperimentKind kind = ExperimentKind::Argmax;
    SampleSource source = SampleSource::Empirical;
    std::vector<std::size_t> n_values{}; // ascending; unused for limit source
    std::size_t replicates = 10000;
    std::uint64_t seed = 0;

    std::vector<double> grid{};                  // ladder: t grid
    std::vector<BoxSpec> boxes{};                // poisson_counts
    std::vector<TestFunction> test_functions{};  // laplace
    double epsilon = 0.0;      // truncation height; 0 -> default rule
    double oracle_alpha = 0.0; // law checks use this alpha; 0 -> model alpha
    unsigned threads = 1;      // execution policy; never affects results
};

struct MetricRow {
    std::string metric; // "ks", "ks_p", "tv", "mean", "var", "cov", ...
    std::string param;  // e.g. "t=0.5", "box=1", "f=0"; empty if n/a
    std::size_t n = 0;  // row size; 0 for limit-process rows
    double value = 0.0;
    double std_error = std::numeric_limits<double>::quiet_NaN();
    double p_value = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN();
    bool checked = true; // participates in the verdict
    bool pass = true;
};

struct ExperimentReport {
    std::string kind_name;
    std::string source_name;
    std::uint64_t seed = 0;
    std::size_t replicates = 0;
    std::vector<MetricRow> rows;
    std::size_t tie_count = 0;
    std::size_t empty_section_count = 0; // ladder sections that came back 0
    std::size_t empty_config_count = 0;  // empty limit-process draws
    double wall_seconds = 0.0;           // console diagnostics only

    bool passed() const;
};

// Verdict calibration (see the per-experiment notes in experiments.cpp).
namespace thresholds {
inline constexpr double kExactMinP = 0.001;       // exact-identity KS gate
inline constexpr double kLimitKs = 0.03;          // limit checks, n=2000 scale
inline constexpr double kKsNoiseScale = 1.63;     // KS noise unit: 1.63/sqrt(R)
inline constexpr double kTrendSlack = 2.0;        // tolerated uphill, in noise units
inline constexpr double kMomentSigmas = 4.0;      // mean/var/cov bands
inline constexpr double kLaplaceSigmas = 3.0;     // |empirical - exact| band
inline constexpr double kTvSigmas = 3.0;          // TV vs multinomial noise
} // namespace thresholds

// Raw-sample collectors. Replicate r of a row collector draws from
// replicate_stream(seed, n, r); limit-process collectors use group key 0.
// Outputs are indexed by replicate, so results do not depend on `threads`.
struct ArgmaxSample {
    double location;
    std::uint32_t index; // 1-based column index
    std::uint8_t tie;
};

std::vector<ArgmaxSample> collect_row_argmax(const TailModel& model, std::size_t n,
                                             std::size_t replicates, std::uint64_t seed,
                                             unsigned threads);

std::vector<double> collect_row_maxima(const TailModel& model, std::size_t n,
                                       std::size_t replicates, std::uint64_t seed,
                                       unsigned threads);

// replicates x grid matrix, row-major; `empty_sections` counts 0 entries.
std::vector<double> collect_row_ladder(const TailModel& model, std::size_t n,
                                       std::span<const double> grid,
                                       std::size_t replicates, std::uint64_t seed,
                                       unsigned threads, std::size_t* empty_sections);

struct PoissonFunctionalSamples {
    std::vector<double> argmax_locations; // empty draws excluded
    std::vector<double> maxima;           // empty draws excluded
    std::size_t empty_count = 0;
    std::size_t tie_count = 0;
};

PoissonFunctionalSamples collect_poisson_functionals(const PoissonSpec& spec,
                                                     std::size_t replicates,
                                                     std::uint64_t seed,
                                                     unsigned threads);

// replicates x boxes matrix of counts, row-major.
std::vector<std::int64_t> collect_poisson_box_counts(const PoissonSpec& spec,
                                                     std::span<const BoxSpec> boxes,
                                                     std::size_t replicates,
                                                     std::uint64_t seed,
                                                     unsigned threads);

// The limit measure mu of a weight scheme, when it has a closed form
// (constant -> uniform, power(beta) -> t^(beta+1)); nullopt for explicit
// tables.
std::optional<LimitMeasure> scheme_limit_measure(const WeightScheme& scheme);

// Experiment runners. Each draws seeded samples, compares them against the
// closed-form oracle laws, and fills MetricRows with values and verdicts.
ExperimentReport run_argmax_experiment(const ExperimentConfig& config);
ExperimentReport run_max_experiment(const ExperimentConfig& config);
ExperimentReport run_ladder_experiment(const ExperimentConfig& config);
ExperimentReport run_poisson_count_experiment(const ExperimentConfig& config);
ExperimentReport run_laplace_experiment(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

} // namespace evp
