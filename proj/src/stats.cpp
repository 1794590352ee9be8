#include "evp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evp {

SampleMoments sample_moments(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("sample_moments: empty sample");
    SampleMoments m;
    m.count = xs.size();
    KahanSum s;
    for (double x : xs) s.add(x);
    const double n = static_cast<double>(xs.size());
    m.mean = s.value() / n;
    KahanSum s2, s4;
    for (double x : xs) {
        const double d = x - m.mean;
        const double d2 = d * d;
        s2.add(d2);
        s4.add(d2 * d2);
    }
    m.variance = xs.size() > 1 ? s2.value() / (n - 1.0) : 0.0;
    m.central4 = s4.value() / n;
    return m;
}

double sample_covariance(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("sample_covariance: need paired samples of size >= 2");
    const double n = static_cast<double>(xs.size());
    KahanSum sx, sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const double mx = sx.value() / n;
    const double my = sy.value() / n;
    KahanSum sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) sxy.add((xs[i] - mx) * (ys[i] - my));
    return sxy.value() / (n - 1.0);
}

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_one_sample(std::span<const double> sample,
                       const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_tail(std::sqrt(n) * d);
    return r;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        throw std::invalid_argument("total_variation: length mismatch");
    KahanSum s;
    for (std::size_t i = 0; i < p.size(); ++i) s.add(std::fabs(p[i] - q[i]));
    return 0.5 * s.value();
}

double multinomial_tv_threshold(std::span<const double> p, std::size_t draws,
                                double sigmas) {
    // Cell count k_j ~ approx N(R p_j, R p_j (1-p_j)); E|phat_j - p_j| =
    // sqrt(2 p_j (1-p_j) / (pi R)) and Var|.| = (1 - 2/pi) p_j (1-p_j) / R.
    const double r = static_cast<double>(draws);
    KahanSum mean_sum, var_sum;
    for (double pj : p) {
        const double v = pj * (1.0 - pj) / r;
        mean_sum.add(std::sqrt(2.0 * v / M_PI));
        var_sum.add((1.0 - 2.0 / M_PI) * v);
    }
    return 0.5 * mean_sum.value() + sigmas * 0.5 * std::sqrt(var_sum.value());
}

} // namespace evp
