#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "evp/measures.hpp"
#include "evp/rng.hpp"

namespace evp {

// Relative perturbation family delta_i(x) of the log-survival exponent,
// with declared bounds -m_lo <= delta_i(x) <= M_hi (m_lo < 1, M_hi < inf).
// Every delta must decay to 0 as x -> inf, uniformly in the index.
class Perturbation {
public:
    enum class Kind { Zero, UniformDecay, PerIndex };

    static Perturbation zero();
    // delta_i(x) = m0 / (1 + lambda x), identical for all indices; |m0| < 1,
    // lambda > 0.
    static Perturbation uniform_decay(double m0, double lambda);
    // Arbitrary per-index family with caller-declared bounds. Quantile
    // inversion falls back to bisection for this kind.
    static Perturbation per_index(std::function<double(std::size_t, double)> fn,
                                  double m_lo, double m_hi);

    Kind kind() const { return kind_; }
    bool is_zero() const { return kind_ == Kind::Zero; }
    double lower_bound() const { return m_lo_; } // m_lo: delta >= -m_lo
    double upper_bound() const { return m_hi_; } // M_hi: delta <= M_hi
    double m0() const { return m0_; }
    double lambda() const { return lambda_; }

    double operator()(std::size_t i, double x) const;
    bool has_derivative() const { return kind_ != Kind::PerIndex; }
    double derivative(std::size_t i, double x) const; // d delta_i / dx

private:
    Kind kind_ = Kind::Zero;
    double m0_ = 0.0;
    double lambda_ = 0.0;
    double m_lo_ = 0.0;
    double m_hi_ = 0.0;
    std::function<double(std::size_t, double)> fn_;
};

// Family of distribution functions F_i(x) = exp(-nu_i(x)) with
// nu_i(x) = c_i x^(-alpha) (1 + delta_i(x)). Construction samples a
// 100 x 100 (i, x) grid and rejects models whose perturbation leaves the
// declared bounds, whose nu_i is not strictly decreasing, or whose delta has
// not decayed below 0.01 by x = 1e6.
class TailModel {
public:
    TailModel(double alpha, WeightScheme weights, Perturbation perturbation);

    double alpha() const { return alpha_; }
    const WeightScheme& weights() const { return weights_; }
    const Perturbation& perturbation() const { return perturbation_; }

    // nu_i(x) for x > 0 (1-based index).
    double nu(std::size_t i, double x) const;

    // F_i(x); 0 at x = 0, throws std::domain_error for x < 0.
    double cdf(std::size_t i, double x) const;

    // Unique x with cdf(i, x) = u, u in (0,1). Closed form for delta == 0;
    // otherwise a bracketed solve refined to relative tolerance 1e-12, with
    // the bracket built from the declared delta bounds.
    double quantile(std::size_t i, double u) const;

private:
    void validate_on_grid() const;

    double alpha_;
    WeightScheme weights_;
    Perturbation perturbation_;
};

// Row of the scaled triangular array: X_{n,j} = d_n^(-1/alpha) X_j with
// X_j = quantile(j, U_j) and U_1..U_n drawn from `stream` in index order.
std::vector<double> sample_row(const TailModel& model, std::size_t n,
                               SplitMix64& stream);
void sample_row_into(const TailModel& model, std::size_t n, SplitMix64& stream,
                     std::vector<double>& out);

// Same mapping applied to caller-supplied uniforms (for tests and replay).
std::vector<double> row_from_uniforms(const TailModel& model,
                                      std::span<const double> uniforms);

// Tail-set surrogate of the uniform vague-convergence defect:
//   max_{j<=n} sup_x | (d_n/c_j)(1 - F_j(d_n^(1/alpha) x)) - x^(-alpha) |
// with x on a geometric grid of `grid_size` points spanning [t0, 1000 t0].
double uniform_vague_defect(const TailModel& model, std::size_t n, double t0,
                            std::size_t grid_size);

} // namespace evp
