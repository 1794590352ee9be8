#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "evp/measures.hpp"
#include "evp/rng.hpp"
#include "evp/tail_model.hpp"

namespace evp {

struct PlanarPoint {
    double location; // t in [0,1]
    double height;   // x > 0
};

// A finite configuration in [0,1] x (0,inf). Operations never depend on
// storage order beyond the documented tie-breaking.
class PlanarConfiguration {
public:
    PlanarConfiguration() = default;
    explicit PlanarConfiguration(std::vector<PlanarPoint> points);

    // Points at locations j/n, j = 1..n, with the given heights.
    static PlanarConfiguration from_row(std::span<const double> heights);

    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }
    std::span<const PlanarPoint> points() const { return points_; }

private:
    std::vector<PlanarPoint> points_;
};

// CSV export, header "t,x", 17 significant digits.
void write_csv(const PlanarConfiguration& config, std::ostream& os);

struct ArgmaxResult {
    double location = 0.0;
    std::size_t point_index = 0; // index into points()
    bool tie = false;            // another point shares the maximal height
};

// Location of the highest point; ties broken toward the smallest location
// and flagged. Throws std::domain_error on an empty configuration.
ArgmaxResult argmax_point(const PlanarConfiguration& config);
double argmax_location(const PlanarConfiguration& config);

// Maximal height. Throws std::domain_error on an empty configuration.
double max_height(const PlanarConfiguration& config);

// L(t) = max{x : (s,x) in config, s >= t} for each t of the sorted grid;
// 0 where the section is empty (0 is below every admissible height).
// Throws std::invalid_argument on an unsorted grid or t outside [0,1].
std::vector<double> ladder_process(const PlanarConfiguration& config,
                                   std::span<const double> t_grid);

// The truncated limiting Poisson process: intensity mu x gamma restricted to
// heights >= epsilon, which carries finite mass m = gamma.tail(epsilon).
struct PoissonSpec {
    LimitMeasure mu;
    TailMeasure gamma;
    double epsilon;

    PoissonSpec(LimitMeasure mu_, TailMeasure gamma_, double epsilon_);

    double mean_count() const { return gamma.tail(epsilon); }

    // Height below which the full process has a point with probability
    // 1 - 1e-9: exp(-eps^-alpha) < 1e-9, i.e. eps = (ln 1e9)^(-1/alpha).
    static double default_epsilon(double alpha);
};

// The empirical process of one row: n points at (j/n, X_{n,j}).
PlanarConfiguration empirical_process(const TailModel& model, std::size_t n,
                                      SplitMix64& stream);

// Draws tau ~ Poisson(m), then tau independent pairs (Y, Z) with Y from mu
// and Z from the truncated tail: Z = gamma.inverse_tail(V * m), so Z >=
// epsilon always.
PlanarConfiguration sample_poisson(const PoissonSpec& spec, SplitMix64& stream);

// Poisson draw with the given mean, consuming uniforms from `stream`.
std::size_t poisson_draw(SplitMix64& stream, double mean);

// Non-negative combination of rectangle indicators
//   f = sum_k s_k 1_{[t_lo,t_hi] x [h_lo,h_hi)},
// the test-function class whose exact Laplace functional is closed-form.
// Supports touching height 0 are rejected.
struct WeightedRectangle {
    double scale;     // s >= 0
    double t_lo;      // [t_lo, t_hi] subset of [0,1]
    double t_hi;
    double height_lo; // > 0
    double height_hi; // > height_lo, may be +inf
};

class TestFunction {
public:
    TestFunction() = default; // f == 0
    explicit TestFunction(std::vector<WeightedRectangle> rectangles);

    bool is_zero() const { return rectangles_.empty(); }
    std::span<const WeightedRectangle> rectangles() const { return rectangles_; }

    double operator()(double t, double x) const;
    double sum_over(const PlanarConfiguration& config) const;

private:
    std::vector<WeightedRectangle> rectangles_;
};

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t replicates = 0;
};

// Monte Carlo mean of exp(-sum_points f) over independent rows of size n,
// replicate r drawing from replicate_stream(seed, n, r).
MonteCarloEstimate laplace_empirical(const TailModel& model, std::size_t n,
                                     const TestFunction& f, std::size_t replicates,
                                     std::uint64_t seed);

// Per-replicate values of exp(-sum_points f) (raw samples for export).
std::vector<double> laplace_empirical_samples(const TailModel& model, std::size_t n,
                                              const TestFunction& f,
                                              std::size_t replicates,
                                              std::uint64_t seed);

// Exact Laplace functional of the limiting Poisson process,
//   exp(-int int (1 - e^-f) dmu dgamma),
// computed in closed form after decomposing overlapping rectangles into
// disjoint cells.
double laplace_exact(const PoissonSpec& spec, const TestFunction& f);

} // namespace evp
