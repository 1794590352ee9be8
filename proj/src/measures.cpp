#include "evp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace evp {

WeightScheme::WeightScheme(Kind k, double beta, std::vector<double> values)
    : kind_(k), beta_(beta), values_(std::move(values)) {}

WeightScheme WeightScheme::constant() {
    return WeightScheme(Kind::Constant, 0.0, {});
}

WeightScheme WeightScheme::power(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("WeightScheme::power: beta must be >= 0");
    return WeightScheme(Kind::Power, beta, {});
}

WeightScheme WeightScheme::explicit_table(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("WeightScheme::explicit_table: empty table");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(
                "WeightScheme::explicit_table: weights must be positive finite");
    return WeightScheme(Kind::Explicit, 0.0, std::move(values));
}

double WeightScheme::weight(std::size_t j) const {
    if (j < 1) throw std::invalid_argument("WeightScheme::weight: j must be >= 1");
    switch (kind_) {
        case Kind::Constant:
            return 1.0;
        case Kind::Power:
            if (beta_ == 0.0) return 1.0;
            if (beta_ == 1.0) return static_cast<double>(j);
            if (beta_ == 2.0) return static_cast<double>(j) * static_cast<double>(j);
            return std::pow(static_cast<double>(j), beta_);
        case Kind::Explicit:
            if (j > values_.size())
                throw std::invalid_argument(
                    "WeightScheme: explicit table shorter than requested n");
            return values_[j - 1];
    }
    throw std::logic_error("WeightScheme: invalid kind");
}

double total_weight(const WeightScheme& scheme, std::size_t n) {
    if (n < 1) throw std::invalid_argument("total_weight: n must be >= 1");
    double sum = 0.0;
    for (std::size_t j = 1; j <= n; ++j) sum += scheme.weight(j);
    return sum;
}

double max_weight(const WeightScheme& scheme, std::size_t n) {
    if (n < 1) throw std::invalid_argument("max_weight: n must be >= 1");
    double m = scheme.weight(1);
    for (std::size_t j = 2; j <= n; ++j) m = std::max(m, scheme.weight(j));
    return m;
}

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw std::invalid_argument("DiscreteMeasure: no atoms");
    double sum = 0.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (const Atom& a : atoms_) {
        if (!(a.location > prev))
            throw std::invalid_argument("DiscreteMeasure: locations must be strictly increasing");
        if (!(a.weight >= 0.0 && a.weight <= 1.0))
            throw std::invalid_argument("DiscreteMeasure: weights must lie in [0,1]");
        prev = a.location;
        sum += a.weight;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("DiscreteMeasure: weights must sum to 1 within 1e-12");
}

DiscreteMeasure empirical_measure(const WeightScheme& scheme, std::size_t n) {
    if (n < 1) throw std::invalid_argument("empirical_measure: n must be >= 1");
    const double dn = total_weight(scheme, n);
    std::vector<DiscreteMeasure::Atom> atoms;
    atoms.reserve(n);
    for (std::size_t j = 1; j <= n; ++j) {
        atoms.push_back({static_cast<double>(j) / static_cast<double>(n),
                         scheme.weight(j) / dn});
    }
    return DiscreteMeasure(std::move(atoms));
}

LimitMeasure::LimitMeasure(std::function<double(double)> cdf,
                           std::function<double(double)> quantile)
    : cdf_(std::move(cdf)), quantile_(std::move(quantile)) {
    if (!cdf_ || !quantile_)
        throw std::invalid_argument("LimitMeasure: cdf and quantile must be callable");
}

LimitMeasure LimitMeasure::from_cdf(std::function<double(double)> cdf) {
    if (!cdf) throw std::invalid_argument("LimitMeasure::from_cdf: cdf must be callable");
    auto quantile = [cdf](double u) {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            if (cdf(mid) < u)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    return LimitMeasure(std::move(cdf), std::move(quantile));
}

double LimitMeasure::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("LimitMeasure::quantile: u must lie in (0,1)");
    return quantile_(u);
}

LimitMeasure power_limit_measure(double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("power_limit_measure: beta must be >= 0");
    const double p = beta + 1.0;
    auto cdf = [p](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return std::pow(t, p);
    };
    auto quantile = [p](double u) { return std::pow(u, 1.0 / p); };
    return LimitMeasure(std::move(cdf), std::move(quantile));
}

double cdf_sup_distance(const DiscreteMeasure& dm, const LimitMeasure& lm) {
    // F_n is a right-continuous step function; between atoms it is constant
    // and G is monotone, so the sup is attained at atom locations evaluated
    // from the left and from the right. The left value of G is taken at
    // nextafter(t, -inf), which is exact for step G and within one ulp for
    // continuous G.
    double sup = 0.0;
    double cum = 0.0;
    for (const auto& a : dm.atoms()) {
        const double g_left =
            lm.cdf(std::nextafter(a.location, -std::numeric_limits<double>::infinity()));
        sup = std::max(sup, std::fabs(cum - g_left));
        cum += a.weight;
        sup = std::max(sup, std::fabs(cum - lm.cdf(a.location)));
    }
    return sup;
}

TailMeasure::TailMeasure(double alpha, std::function<double(double)> tail,
                         std::function<double(double)> inverse_tail)
    : alpha_(alpha), tail_(std::move(tail)), inverse_(std::move(inverse_tail)) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("TailMeasure: alpha must be positive");
    if (!tail_ || !inverse_)
        throw std::invalid_argument("TailMeasure: tail and inverse must be callable");
}

TailMeasure TailMeasure::frechet(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("TailMeasure::frechet: alpha must be positive");
    auto tail = [alpha](double x) { return std::pow(x, -alpha); };
    auto inverse = [alpha](double y) { return std::pow(y, -1.0 / alpha); };
    return TailMeasure(alpha, std::move(tail), std::move(inverse));
}

} // namespace evp
