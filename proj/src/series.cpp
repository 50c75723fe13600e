#include "wco/series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "wco/error.hpp"

namespace wco {

namespace {

void require_finite(std::span<const cplx> coeffs) {
    for (const auto& c : coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw NumericalError("TaylorSeries coefficient is not finite");
        }
    }
}

}  // namespace

TaylorSeries::TaylorSeries(std::size_t order) : coeffs_(order + 1) {}

TaylorSeries::TaylorSeries(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    require_finite(coeffs_);
}

TaylorSeries::TaylorSeries(std::initializer_list<cplx> coeffs)
    : TaylorSeries(std::vector<cplx>(coeffs)) {}

TaylorSeries TaylorSeries::monomial(std::size_t degree, std::size_t order, cplx scale) {
    TaylorSeries out(std::max(order, degree));
    out.coeffs_[degree] = scale;
    return out;
}

TaylorSeries TaylorSeries::resized(std::size_t order) const {
    std::vector<cplx> c(order + 1);
    std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
    return TaylorSeries(std::move(c));
}

TaylorSeries operator+(const TaylorSeries& f, const TaylorSeries& g) {
    std::vector<cplx> c(std::max(f.size(), g.size()));
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = f.coeff(n) + g.coeff(n);
    return TaylorSeries(std::move(c));
}

TaylorSeries operator-(const TaylorSeries& f, const TaylorSeries& g) {
    return f + cplx(-1.0) * g;
}

TaylorSeries operator*(cplx s, const TaylorSeries& f) {
    std::vector<cplx> c(f.coeffs_.begin(), f.coeffs_.end());
    for (auto& x : c) x *= s;
    return TaylorSeries(std::move(c));
}

void ExtractionConfig::validate() const {
    if (!(sample_radius > 0.0 && sample_radius < 1.0)) {
        throw SpecError("sample_radius must lie in (0,1)");
    }
    if (sample_count == 0 || !std::has_single_bit(sample_count)) {
        throw SpecError("sample_count must be a positive power of two");
    }
    if (!(tail_tolerance >= 0.0)) throw SpecError("tail_tolerance must be nonnegative");
}

void ExtractionConfig::validate_for(std::size_t order) const {
    validate();
    if (sample_count < 2 * (order + 1)) {
        throw PreconditionError("sample_count must be at least 2*(order+1) = " +
                                std::to_string(2 * (order + 1)));
    }
}

ExtractionConfig ExtractionConfig::for_order(std::size_t order) {
    ExtractionConfig cfg;
    cfg.sample_radius = std::max(0.75, 1.0 - 1.0 / static_cast<double>(order + 1));
    cfg.sample_count = std::max<std::size_t>(64, std::bit_ceil(8 * (order + 1)));
    return cfg;
}

TaylorSeries cauchy_product(const TaylorSeries& f, const TaylorSeries& g) {
    const std::size_t order = std::min(f.order(), g.order());
    std::vector<cplx> c(order + 1);
    for (std::size_t j = 0; j <= order; ++j) {
        cplx acc{};
        for (std::size_t i = 0; i <= j; ++i) acc += f[i] * g[j - i];
        c[j] = acc;
    }
    return TaylorSeries(std::move(c));
}

TaylorSeries derivative(const TaylorSeries& f) {
    if (f.order() == 0) {
        throw PreconditionError("cannot differentiate constant truncation below order 0");
    }
    std::vector<cplx> c(f.order());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = static_cast<double>(j + 1) * f[j + 1];
    return TaylorSeries(std::move(c));
}

TaylorSeries antiderivative(const TaylorSeries& f) {
    std::vector<cplx> c(f.size() + 1);
    for (std::size_t j = 0; j < f.size(); ++j) c[j + 1] = f[j] / static_cast<double>(j + 1);
    return TaylorSeries(std::move(c));
}

cplx evaluate(const TaylorSeries& f, cplx z) {
    cplx acc{};
    for (std::size_t n = f.size(); n-- > 0;) acc = acc * z + f[n];
    return acc;
}

std::vector<cplx> sample_circle(double radius, std::size_t count) {
    std::vector<cplx> pts(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) /
                             static_cast<double>(count);
        pts[j] = std::polar(radius, theta);
    }
    return pts;
}

ExtractedSeries coefficients_from_samples(std::span<const cplx> samples, double radius,
                                          std::size_t order) {
    const std::size_t m = samples.size();
    double sample_max = 0.0;
    for (const auto& s : samples) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw NumericalError("evaluator not analytic on sampling circle");
        }
        sample_max = std::max(sample_max, std::abs(s));
    }

    std::vector<cplx> in(samples.begin(), samples.end());
    std::vector<cplx> out;
    Eigen::FFT<double> fft;
    fft.fwd(out, in);

    std::vector<cplx> c(order + 1);
    double scale = 1.0 / static_cast<double>(m);
    for (std::size_t n = 0; n <= order; ++n) {
        c[n] = out[n] * scale;
        scale /= radius;
    }

    ExtractedSeries result{TaylorSeries(std::move(c)), 0.0, 0.0, sample_max, 0.0};
    double upper = 0.0;
    for (std::size_t n = m / 2; n < m; ++n) upper = std::max(upper, std::abs(out[n]));
    result.alias_bound = upper / static_cast<double>(m) * std::pow(radius, -static_cast<double>(order));
    const std::size_t top_begin = (3 * (order + 1)) / 4;
    for (std::size_t n = top_begin; n <= order; ++n) {
        result.aliasing_estimate = std::max(result.aliasing_estimate, std::abs(result.series[n]));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    result.rounding_estimate = 4.0 * eps * (std::log2(static_cast<double>(m)) + 1.0) *
                               sample_max * std::pow(radius, -static_cast<double>(order));
    return result;
}

ExtractedSeries extract_coeffs(const PointEvaluator& f, const ExtractionConfig& cfg,
                               std::size_t order) {
    cfg.validate_for(order);
    const auto pts = sample_circle(cfg.sample_radius, cfg.sample_count);
    std::vector<cplx> samples(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) samples[j] = f(pts[j]);
    return coefficients_from_samples(samples, cfg.sample_radius, order);
}

}  // namespace wco
