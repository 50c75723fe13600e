#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wco {

using cplx = std::complex<double>;

/// Truncated Taylor expansion at the origin: c_0 + c_1 z + ... + c_N z^N.
///
/// Always holds order()+1 finite coefficients; construction rejects NaN/Inf.
class TaylorSeries {
public:
    /// Zero series of the given order.
    explicit TaylorSeries(std::size_t order = 0);
    explicit TaylorSeries(std::vector<cplx> coeffs);
    TaylorSeries(std::initializer_list<cplx> coeffs);

    static TaylorSeries monomial(std::size_t degree, std::size_t order, cplx scale = 1.0);

    std::size_t order() const { return coeffs_.size() - 1; }
    std::size_t size() const { return coeffs_.size(); }
    const cplx& operator[](std::size_t n) const { return coeffs_[n]; }
    /// Coefficient n, or zero past the truncation.
    cplx coeff(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : cplx{}; }
    std::span<const cplx> coeffs() const { return coeffs_; }

    /// Same function, truncated or zero-padded to a new order.
    TaylorSeries resized(std::size_t order) const;

    friend TaylorSeries operator+(const TaylorSeries& f, const TaylorSeries& g);
    friend TaylorSeries operator-(const TaylorSeries& f, const TaylorSeries& g);
    friend TaylorSeries operator*(cplx s, const TaylorSeries& f);

private:
    std::vector<cplx> coeffs_;
};

/// Sampling plan for coefficient extraction on the circle |z| = sample_radius.
struct ExtractionConfig {
    double sample_radius = 0.75;
    std::size_t sample_count = 256;
    double tail_tolerance = 1e-8;

    /// Throws SpecError unless 0 < radius < 1, sample_count is a power of two,
    /// and tail_tolerance >= 0.
    void validate() const;
    /// Throws PreconditionError unless sample_count >= 2(order+1).
    void validate_for(std::size_t order) const;

    /// Plan sized for extracting `order`+1 coefficients of functions that stay bounded up to the
    /// unit circle: radius 1 - 1/(order+1) (never below 0.75) and at least 8(order+1) samples.
    /// Round-off is then amplified by at most ~e instead of radius^-order.
    static ExtractionConfig for_order(std::size_t order);
};

/// Coefficients recovered from point samples together with their error budget.
struct ExtractedSeries {
    TaylorSeries series;
    /// Largest |c_n| over the top quarter of the extracted range (tail/aliasing proxy).
    double aliasing_estimate = 0.0;
    /// Round-off in c_n amplified by radius^-n, taken at the highest extracted n.
    double rounding_estimate = 0.0;
    /// Largest |sample| on the circle.
    double sample_max = 0.0;
    /// Bound on the wrapped-around tail in c_n, n <= order: largest DFT output over the upper
    /// half of the frequencies (zero for an exactly band-limited input), scaled by radius^-order.
    double alias_bound = 0.0;

    double error_estimate() const { return aliasing_estimate + rounding_estimate; }
    /// Error budget of the individual coefficients, independent of their size.
    double coefficient_error() const { return alias_bound + rounding_estimate; }
};

using PointEvaluator = std::function<cplx(cplx)>;

/// Truncated product; result order is min(f.order, g.order).
TaylorSeries cauchy_product(const TaylorSeries& f, const TaylorSeries& g);

/// Termwise derivative; requires order >= 1.
TaylorSeries derivative(const TaylorSeries& f);

/// Termwise antiderivative with zero constant term; order grows by one.
TaylorSeries antiderivative(const TaylorSeries& f);

/// Horner evaluation of the truncated polynomial.
cplx evaluate(const TaylorSeries& f, cplx z);

/// Sample points radius * exp(2 pi i j / count), j = 0..count-1.
std::vector<cplx> sample_circle(double radius, std::size_t count);

/// Coefficients 0..order from samples f(radius * w^j) on a uniform circle via DFT.
ExtractedSeries coefficients_from_samples(std::span<const cplx> samples, double radius,
                                          std::size_t order);

/// Numerical Cauchy-integral coefficients of an evaluator analytic on |z| <= cfg.sample_radius.
/// Throws NumericalError("evaluator not analytic on sampling circle") on a non-finite sample.
ExtractedSeries extract_coeffs(const PointEvaluator& f, const ExtractionConfig& cfg,
                               std::size_t order);

}  // namespace wco
