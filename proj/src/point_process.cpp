#include "evp/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "evp/stats.hpp"

namespace evp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void format_real(char* buf, std::size_t size, double v) {
    std::snprintf(buf, size, "%.17g", v);
}

} // namespace

PlanarConfiguration::PlanarConfiguration(std::vector<PlanarPoint> points)
    : points_(std::move(points)) {
    for (const auto& p : points_) {
        if (!(p.location >= 0.0 && p.location <= 1.0))
            throw std::invalid_argument("PlanarConfiguration: location outside [0,1]");
        if (!(p.height > 0.0) || !std::isfinite(p.height))
            throw std::invalid_argument("PlanarConfiguration: heights must be positive finite");
    }
}

PlanarConfiguration PlanarConfiguration::from_row(std::span<const double> heights) {
    std::vector<PlanarPoint> pts;
    pts.reserve(heights.size());
    const double n = static_cast<double>(heights.size());
    for (std::size_t j = 1; j <= heights.size(); ++j)
        pts.push_back({static_cast<double>(j) / n, heights[j - 1]});
    return PlanarConfiguration(std::move(pts));
}

void write_csv(const PlanarConfiguration& config, std::ostream& os) {
    char buf[40];
    os << "t,x\n";
    for (const auto& p : config.points()) {
        format_real(buf, sizeof buf, p.location);
        os << buf << ',';
        format_real(buf, sizeof buf, p.height);
        os << buf << '\n';
    }
}

ArgmaxResult argmax_point(const PlanarConfiguration& config) {
    if (config.empty()) throw std::domain_error("argmax_point: empty configuration");
    const auto pts = config.points();
    ArgmaxResult r;
    r.point_index = 0;
    double best = pts[0].height;
    double best_loc = pts[0].location;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        if (pts[k].height > best) {
            best = pts[k].height;
            best_loc = pts[k].location;
            r.point_index = k;
            r.tie = false;
        } else if (pts[k].height == best) {
            r.tie = true;
            if (pts[k].location < best_loc) {
                best_loc = pts[k].location;
                r.point_index = k;
            }
        }
    }
    r.location = best_loc;
    return r;
}

double argmax_location(const PlanarConfiguration& config) {
    return argmax_point(config).location;
}

double max_height(const PlanarConfiguration& config) {
    if (config.empty()) throw std::domain_error("max_height: empty configuration");
    double best = 0.0;
    for (const auto& p : config.points()) best = std::max(best, p.height);
    return best;
}

std::vector<double> ladder_process(const PlanarConfiguration& config,
                                   std::span<const double> t_grid) {
    double prev = -kInf;
    for (double t : t_grid) {
        if (!(t >= 0.0 && t <= 1.0))
            throw std::invalid_argument("ladder_process: grid point outside [0,1]");
        if (t < prev) throw std::invalid_argument("ladder_process: grid must be sorted");
        prev = t;
    }
    std::vector<double> values(t_grid.size(), 0.0);
    for (const auto& p : config.points()) {
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            if (p.location >= t_grid[k])
                values[k] = std::max(values[k], p.height);
            else
                break; // grid sorted: later entries are larger
        }
    }
    return values;
}

PoissonSpec::PoissonSpec(LimitMeasure mu_, TailMeasure gamma_, double epsilon_)
    : mu(std::move(mu_)), gamma(std::move(gamma_)), epsilon(epsilon_) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("PoissonSpec: epsilon must be > 0");
    if (!std::isfinite(gamma.tail(epsilon)))
        throw std::invalid_argument("PoissonSpec: gamma.tail(epsilon) must be finite");
}

double PoissonSpec::default_epsilon(double alpha) {
    return std::pow(std::log(1e9), -1.0 / alpha);
}

PlanarConfiguration empirical_process(const TailModel& model, std::size_t n,
                                      SplitMix64& stream) {
    return PlanarConfiguration::from_row(sample_row(model, n, stream));
}

std::size_t poisson_draw(SplitMix64& stream, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson_draw: mean must be finite and >= 0");
    // Knuth's product-of-uniforms, chunked so exp(-chunk) never underflows.
    std::size_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double chunk = std::min(remaining, 200.0);
        remaining -= chunk;
        const double limit = std::exp(-chunk);
        double product = 1.0;
        std::size_t k = 0;
        do {
            product *= stream.next_unit();
            ++k;
        } while (product > limit);
        total += k - 1;
    }
    return total;
}

PlanarConfiguration sample_poisson(const PoissonSpec& spec, SplitMix64& stream) {
    const double m = spec.mean_count();
    const std::size_t count = poisson_draw(stream, m);
    std::vector<PlanarPoint> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double location = spec.mu.quantile(stream.next_unit());
        const double height = spec.gamma.inverse_tail(stream.next_unit() * m);
        pts.push_back({location, height});
    }
    return PlanarConfiguration(std::move(pts));
}

TestFunction::TestFunction(std::vector<WeightedRectangle> rectangles)
    : rectangles_(std::move(rectangles)) {
    for (const auto& r : rectangles_) {
        if (!(r.scale >= 0.0) || !std::isfinite(r.scale))
            throw std::invalid_argument("TestFunction: scale must be finite and >= 0");
        if (!(r.t_lo >= 0.0 && r.t_hi <= 1.0 && r.t_lo <= r.t_hi))
            throw std::invalid_argument("TestFunction: need 0 <= t_lo <= t_hi <= 1");
        if (!(r.height_lo > 0.0))
            throw std::invalid_argument("TestFunction: support must stay above height 0");
        if (!(r.height_hi > r.height_lo))
            throw std::invalid_argument("TestFunction: need height_hi > height_lo");
    }
}

double TestFunction::operator()(double t, double x) const {
    double sum = 0.0;
    for (const auto& r : rectangles_) {
        if (t >= r.t_lo && t <= r.t_hi && x >= r.height_lo && x < r.height_hi)
            sum += r.scale;
    }
    return sum;
}

double TestFunction::sum_over(const PlanarConfiguration& config) const {
    double sum = 0.0;
    for (const auto& p : config.points()) sum += (*this)(p.location, p.height);
    return sum;
}

std::vector<double> laplace_empirical_samples(const TailModel& model, std::size_t n,
                                              const TestFunction& f,
                                              std::size_t replicates,
                                              std::uint64_t seed) {
    if (replicates < 1)
        throw std::invalid_argument("laplace_empirical: replicates must be >= 1");
    std::vector<double> values(replicates);
    std::vector<double> row;
    for (std::size_t r = 0; r < replicates; ++r) {
        SplitMix64 stream = replicate_stream(seed, n, r);
        sample_row_into(model, n, stream, row);
        if (f.is_zero()) {
            values[r] = 1.0;
            continue;
        }
        double sum = 0.0;
        const double nn = static_cast<double>(n);
        for (std::size_t j = 1; j <= n; ++j)
            sum += f(static_cast<double>(j) / nn, row[j - 1]);
        values[r] = std::exp(-sum);
    }
    return values;
}

MonteCarloEstimate laplace_empirical(const TailModel& model, std::size_t n,
                                     const TestFunction& f, std::size_t replicates,
                                     std::uint64_t seed) {
    const std::vector<double> values =
        laplace_empirical_samples(model, n, f, replicates, seed);
    const SampleMoments m = sample_moments(values);
    MonteCarloEstimate est;
    est.value = m.mean;
    est.std_error = replicates > 1
                        ? std::sqrt(m.variance / static_cast<double>(replicates))
                        : 0.0;
    est.replicates = replicates;
    return est;
}

double laplace_exact(const PoissonSpec& spec, const TestFunction& f) {
    if (f.is_zero()) return 1.0;

    std::vector<double> t_breaks{0.0, 1.0};
    std::vector<double> x_breaks;
    for (const auto& r : f.rectangles()) {
        t_breaks.push_back(r.t_lo);
        t_breaks.push_back(r.t_hi);
        x_breaks.push_back(r.height_lo);
        if (std::isfinite(r.height_hi)) x_breaks.push_back(r.height_hi);
    }
    auto uniquify = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniquify(t_breaks);
    uniquify(x_breaks);

    // f is constant on each cell; the boundaries are mu x gamma null sets.
    KahanSum total;
    for (std::size_t ti = 0; ti + 1 < t_breaks.size(); ++ti) {
        const double t_lo = t_breaks[ti], t_hi = t_breaks[ti + 1];
        const double mu_mass = spec.mu.cdf(t_hi) - spec.mu.cdf(t_lo);
        if (mu_mass <= 0.0) continue;
        const double t_mid = 0.5 * (t_lo + t_hi);
        for (std::size_t xi = 0; xi < x_breaks.size(); ++xi) {
            const double x_lo = x_breaks[xi];
            const bool top = xi + 1 == x_breaks.size();
            const double x_hi = top ? kInf : x_breaks[xi + 1];
            const double gamma_mass =
                spec.gamma.tail(x_lo) - (top ? 0.0 : spec.gamma.tail(x_hi));
            if (gamma_mass <= 0.0) continue;
            const double x_mid = top ? 2.0 * x_lo : 0.5 * (x_lo + x_hi);
            const double fv = f(t_mid, x_mid);
            if (fv > 0.0) total.add(-std::expm1(-fv) * mu_mass * gamma_mass);
        }
    }
    return std::exp(-total.value());
}

} // namespace evp
