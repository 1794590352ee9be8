#include "evp/tail_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace evp {

namespace {

// x^(-alpha) with fast paths for the common exponents.
inline double pow_neg(double x, double alpha) {
    if (alpha == 1.0) return 1.0 / x;
    if (alpha == 2.0) return 1.0 / (x * x);
    return std::pow(x, -alpha);
}

inline double pow_inv(double y, double alpha) {
    if (alpha == 1.0) return y;
    if (alpha == 2.0) return std::sqrt(y);
    return std::pow(y, 1.0 / alpha);
}

} // namespace

Perturbation Perturbation::zero() { return Perturbation{}; }

Perturbation Perturbation::uniform_decay(double m0, double lambda) {
    if (!(std::fabs(m0) < 1.0))
        throw std::invalid_argument("Perturbation::uniform_decay: |m0| must be < 1");
    if (!(lambda > 0.0))
        throw std::invalid_argument("Perturbation::uniform_decay: lambda must be > 0");
    Perturbation p;
    p.kind_ = Kind::UniformDecay;
    p.m0_ = m0;
    p.lambda_ = lambda;
    p.m_lo_ = std::max(0.0, -m0);
    p.m_hi_ = std::max(0.0, m0);
    return p;
}

Perturbation Perturbation::per_index(std::function<double(std::size_t, double)> fn,
                                     double m_lo, double m_hi) {
    if (!fn) throw std::invalid_argument("Perturbation::per_index: empty function");
    if (!(m_lo >= 0.0 && m_lo < 1.0))
        throw std::invalid_argument("Perturbation::per_index: need 0 <= m_lo < 1");
    if (!(m_hi >= 0.0) || !std::isfinite(m_hi))
        throw std::invalid_argument("Perturbation::per_index: need finite M_hi >= 0");
    Perturbation p;
    p.kind_ = Kind::PerIndex;
    p.fn_ = std::move(fn);
    p.m_lo_ = m_lo;
    p.m_hi_ = m_hi;
    return p;
}

double Perturbation::operator()(std::size_t i, double x) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::UniformDecay:
            return m0_ / (1.0 + lambda_ * x);
        case Kind::PerIndex:
            return fn_(i, x);
    }
    return 0.0;
}

double Perturbation::derivative(std::size_t i, double x) const {
    (void)i;
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::UniformDecay: {
            const double d = 1.0 + lambda_ * x;
            return -m0_ * lambda_ / (d * d);
        }
        case Kind::PerIndex:
            throw std::logic_error("Perturbation: per_index has no analytic derivative");
    }
    return 0.0;
}

TailModel::TailModel(double alpha, WeightScheme weights, Perturbation perturbation)
    : alpha_(alpha), weights_(std::move(weights)), perturbation_(std::move(perturbation)) {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
        throw std::invalid_argument("TailModel: alpha must be positive");
    validate_on_grid();
}

void TailModel::validate_on_grid() const {
    // Up to 100 indices x 100 geometric abscissae in [1e-3, 1e6]; explicit
    // tables only declare indices up to their length.
    constexpr std::size_t kGrid = 100;
    const std::size_t max_index =
        weights_.kind() == WeightScheme::Kind::Explicit
            ? std::min<std::size_t>(kGrid, weights_.values().size())
            : kGrid;
    const double x_lo = 1e-3, x_hi = 1e6;
    const double step = std::pow(x_hi / x_lo, 1.0 / (kGrid - 1));
    for (std::size_t i = 1; i <= max_index; ++i) {
        double x = x_lo;
        double prev_nu = 0.0;
        for (std::size_t g = 0; g < kGrid; ++g, x *= step) {
            const double d = perturbation_(i, x);
            if (!(d >= -perturbation_.lower_bound() - 1e-12 &&
                  d <= perturbation_.upper_bound() + 1e-12))
                throw std::invalid_argument(
                    "TailModel: delta leaves declared bounds at i=" + std::to_string(i) +
                    ", x=" + std::to_string(x));
            const double v = nu(i, x);
            if (g > 0 && !(v < prev_nu))
                throw std::invalid_argument(
                    "TailModel: nu_i not strictly decreasing at i=" + std::to_string(i) +
                    ", x=" + std::to_string(x));
            prev_nu = v;
        }
        if (std::fabs(perturbation_(i, 1e6)) >= 0.01)
            throw std::invalid_argument(
                "TailModel: delta has not decayed below 0.01 by x=1e6 at i=" +
                std::to_string(i));
    }
}

double TailModel::nu(std::size_t i, double x) const {
    return weights_.weight(i) * pow_neg(x, alpha_) * (1.0 + perturbation_(i, x));
}

double TailModel::cdf(std::size_t i, double x) const {
    if (x < 0.0) throw std::domain_error("TailModel::cdf: x must be >= 0");
    if (x == 0.0) return 0.0; // nu_i(0) = inf
    return std::exp(-nu(i, x));
}

double TailModel::quantile(std::size_t i, double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("TailModel::quantile: u must lie in (0,1)");
    const double target = -std::log(u);
    const double ci = weights_.weight(i);
    const double base = pow_inv(ci / target, alpha_);
    if (perturbation_.is_zero()) return base;

    // nu(x) is pinched between c_i x^-a (1 - m_lo) and c_i x^-a (1 + M_hi),
    // so the root lies in the matching bracket; widen by 2x and expand
    // geometrically until the sign condition actually holds on the grid.
    double lo = base * pow_inv(std::max(1.0 - perturbation_.lower_bound(), 1e-6), alpha_) * 0.5;
    double hi = base * pow_inv(1.0 + perturbation_.upper_bound(), alpha_) * 2.0;
    for (int guard = 0; nu(i, lo) < target; ++guard) {
        lo *= 0.5;
        if (guard > 200) throw std::runtime_error("TailModel::quantile: bracket failure (lo)");
    }
    for (int guard = 0; nu(i, hi) > target; ++guard) {
        hi *= 2.0;
        if (guard > 200) throw std::runtime_error("TailModel::quantile: bracket failure (hi)");
    }

    if (!perturbation_.has_derivative()) {
        // Plain bisection to relative tolerance 1e-12.
        while (hi - lo > 1e-12 * lo) {
            const double mid = 0.5 * (lo + hi);
            if (nu(i, mid) > target)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

    // Safeguarded Newton: nu is strictly decreasing, so the bracket shrinks
    // monotonically; any step leaving it is replaced by a bisection step.
    double x = std::clamp(base, lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double c_pow = ci * pow_neg(x, alpha_);
        const double delta = perturbation_(i, x);
        const double f = c_pow * (1.0 + delta) - target;
        if (f > 0.0)
            lo = x;
        else
            hi = x;
        const double fprime =
            -alpha_ * c_pow / x * (1.0 + delta) + c_pow * perturbation_.derivative(i, x);
        double next = (fprime < 0.0) ? x - f / fprime : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-12 * x || hi - lo <= 1e-12 * lo) return next;
        x = next;
    }
    return x;
}

void sample_row_into(const TailModel& model, std::size_t n, SplitMix64& stream,
                     std::vector<double>& out) {
    if (n < 1) throw std::invalid_argument("sample_row: n must be >= 1");
    out.resize(n);
    const double dn = total_weight(model.weights(), n);
    const double scale = pow_inv(1.0 / dn, model.alpha());
    for (std::size_t j = 1; j <= n; ++j)
        out[j - 1] = scale * model.quantile(j, stream.next_unit());
}

std::vector<double> sample_row(const TailModel& model, std::size_t n,
                               SplitMix64& stream) {
    std::vector<double> row;
    sample_row_into(model, n, stream, row);
    return row;
}

std::vector<double> row_from_uniforms(const TailModel& model,
                                      std::span<const double> uniforms) {
    if (uniforms.empty()) throw std::invalid_argument("row_from_uniforms: empty row");
    const std::size_t n = uniforms.size();
    const double dn = total_weight(model.weights(), n);
    const double scale = pow_inv(1.0 / dn, model.alpha());
    std::vector<double> row(n);
    for (std::size_t j = 1; j <= n; ++j)
        row[j - 1] = scale * model.quantile(j, uniforms[j - 1]);
    return row;
}

double uniform_vague_defect(const TailModel& model, std::size_t n, double t0,
                            std::size_t grid_size) {
    if (!(t0 > 0.0)) throw std::invalid_argument("uniform_vague_defect: t0 must be > 0");
    if (grid_size < 2) throw std::invalid_argument("uniform_vague_defect: grid_size must be >= 2");
    if (n < 1) throw std::invalid_argument("uniform_vague_defect: n must be >= 1");
    const double alpha = model.alpha();
    const double dn = total_weight(model.weights(), n);
    const double dn_scale = pow_inv(dn, alpha);
    const double step = std::pow(1e3, 1.0 / static_cast<double>(grid_size - 1));
    double worst = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        const double cj = model.weights().weight(j);
        double x = t0;
        for (std::size_t g = 0; g < grid_size; ++g, x *= step) {
            const double tail_limit = pow_neg(x, alpha);
            // 1 - F_j(d_n^(1/alpha) x) via expm1: the defect can be far below
            // the tail mass itself.
            const double survival = -std::expm1(-model.nu(j, dn_scale * x));
            const double defect = std::fabs(dn / cj * survival - tail_limit);
            worst = std::max(worst, defect);
        }
    }
    return worst;
}

} // namespace evp
