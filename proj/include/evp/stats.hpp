#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace evp {

// Kahan compensated accumulator. Reductions over replicate values use this
// so that results do not depend on chunking of the summation.
class KahanSum {
public:
    void add(double x) {
        double y = x - compensation_;
        double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct SampleMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double central4 = 0.0; // fourth central moment (biased, 1/N)
};

// Two-pass compensated moments.
SampleMoments sample_moments(std::span<const double> xs);

// Sample covariance (unbiased) of paired samples.
double sample_covariance(std::span<const double> xs, std::span<const double> ys);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// Tail of the asymptotic Kolmogorov distribution,
//   Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2),
// truncated at 100 terms and clamped to [0,1].
double kolmogorov_tail(double lambda);

// One-sample Kolmogorov-Smirnov statistic against a continuous cdf, computed
// exactly from the sorted sample:
//   D = max_i max(i/N - F(x_(i)), F(x_(i)) - (i-1)/N),
// with the asymptotic p-value Q(sqrt(N) * D). Throws on an empty sample.
KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf);

// Total-variation distance between two probability vectors of equal length.
double total_variation(std::span<const double> p, std::span<const double> q);

// Sampling-noise model for the TV distance of multinomial frequencies with
// cell probabilities p at `draws` draws: expected TV plus `sigmas` standard
// deviations, both from the normal approximation of the cell counts.
double multinomial_tv_threshold(std::span<const double> p, std::size_t draws,
                                double sigmas);

} // namespace evp
