#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evp {

// Row weights c_1, c_2, ... of the triangular array. Weights depend only on
// the column index j (row-independent); fully row-dependent arrays are
// expressible through per-n explicit tables.
class WeightScheme {
public:
    enum class Kind { Constant, Power, Explicit };

    static WeightScheme constant();
    static WeightScheme power(double beta); // c_j = j^beta, beta >= 0
    static WeightScheme explicit_table(std::vector<double> values);

    Kind kind() const { return kind_; }
    double beta() const { return beta_; }
    const std::vector<double>& values() const { return values_; }

    // c_j for 1-based j. Throws if an explicit table is shorter than j.
    double weight(std::size_t j) const;

private:
    WeightScheme(Kind k, double beta, std::vector<double> values);

    Kind kind_;
    double beta_ = 0.0;
    std::vector<double> values_;
};

// d_n = sum_{j<=n} c_j, summed exactly in the order j = 1..n.
double total_weight(const WeightScheme& scheme, std::size_t n);

// M_n = max_{j<=n} c_j.
double max_weight(const WeightScheme& scheme, std::size_t n);

struct DiscreteMeasure {
    struct Atom {
        double location; // in [0,1]
        double weight;   // in [0,1]
    };

    // Validates: locations strictly increasing, weights sum to 1 within 1e-12.
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }

private:
    std::vector<Atom> atoms_;
};

// mu_n = sum_{j<=n} (c_j / d_n) delta_{j/n}.
DiscreteMeasure empirical_measure(const WeightScheme& scheme, std::size_t n);

// A measure on [0,1] given by its cdf and quantile (generalized inverse).
// The intended measures are non-atomic, i.e. the cdf is continuous.
class LimitMeasure {
public:
    LimitMeasure(std::function<double(double)> cdf,
                 std::function<double(double)> quantile);

    // Quantile computed by bisection on [0,1] to absolute tolerance 1e-12.
    static LimitMeasure from_cdf(std::function<double(double)> cdf);

    double cdf(double t) const { return cdf_(t); }
    double quantile(double u) const; // u in (0,1)

private:
    std::function<double(double)> cdf_;
    std::function<double(double)> quantile_;
};

// Limit of the empirical measures of a power scheme c_j = j^beta:
// cdf(t) = t^(beta+1), quantile(u) = u^(1/(beta+1)). Rejects beta < 0.
LimitMeasure power_limit_measure(double beta);

// Exact sup_t |F_n(t) - G(t)| between the step cdf of `dm` and `lm.cdf`.
// Both one-sided limits are taken at every atom location, so the result is
// exact for continuous G (and, more generally, for right-continuous G).
double cdf_sup_distance(const DiscreteMeasure& dm, const LimitMeasure& lm);

// The measure gamma on (0, inf) given by its tail mass gamma([x, inf)).
// The Frechet case tail(x) = x^(-alpha) is the one with closed-form oracles;
// a custom strictly decreasing tail can be supplied through the same
// interface.
class TailMeasure {
public:
    static TailMeasure frechet(double alpha);
    TailMeasure(double alpha, std::function<double(double)> tail,
                std::function<double(double)> inverse_tail);

    double alpha() const { return alpha_; }
    double tail(double x) const { return tail_(x); }           // gamma([x, inf))
    double inverse_tail(double y) const { return inverse_(y); } // tail^{-1}

private:
    double alpha_;
    std::function<double(double)> tail_;
    std::function<double(double)> inverse_;
};

} // namespace evp
