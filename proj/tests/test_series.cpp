#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "wco/error.hpp"
#include "wco/series.hpp"

using namespace wco;

namespace {

std::vector<cplx> schoolbook(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> c(std::min(a.size(), b.size()), cplx{});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (i + j < c.size()) c[i + j] += a[i] * b[j];
        }
    }
    return c;
}

std::vector<cplx> random_coeffs(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> c(count);
    for (auto& v : c) v = {u(rng), u(rng)};
    return c;
}

ExtractionConfig plan(double radius, std::size_t count) {
    ExtractionConfig cfg;
    cfg.sample_radius = radius;
    cfg.sample_count = count;
    return cfg;
}

}  // namespace

TEST_CASE("extract_coeffs recovers a monomial") {
    const auto ex = extract_coeffs([](cplx z) { return z * z; }, plan(0.5, 64), 8);
    for (std::size_t n = 0; n <= 8; ++n) {
        CHECK(std::abs(ex.series[n] - (n == 2 ? cplx(1.0) : cplx{})) < 1e-13);
    }
}

TEST_CASE("extract_coeffs recovers a geometric series") {
    const auto ex = extract_coeffs([](cplx z) { return 1.0 / (1.0 - z / 2.0); }, plan(0.9, 256), 32);
    for (std::size_t n = 0; n <= 32; ++n) CHECK(std::abs(ex.series[n] - std::ldexp(1.0, -static_cast<int>(n))) < 1e-10);
}

TEST_CASE("extract_coeffs recovers the exponential series") {
    const auto ex = extract_coeffs([](cplx z) { return std::exp(z); }, plan(0.5, 128), 16);
    double factorial = 1.0;
    for (std::size_t n = 0; n <= 16; ++n) {
        if (n > 0) factorial *= static_cast<double>(n);
        // c_16 sits at the sampling round-off floor eps * |f| * 2^16.
        const double tol = n < 16 ? 1e-12 : ex.rounding_estimate;
        CHECK(std::abs(ex.series[n] - 1.0 / factorial) < tol);
    }
}

TEST_CASE("extraction errors") {
    CHECK_THROWS_AS(extract_coeffs([](cplx) { return cplx(1.0); }, plan(0.5, 16), 8), PreconditionError);
    CHECK_NOTHROW(extract_coeffs([](cplx) { return cplx(1.0); }, plan(0.5, 32), 8));
    try {
        extract_coeffs([](cplx z) { return 1.0 / (z - 0.5); }, plan(0.5, 64), 8);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()) == "evaluator not analytic on sampling circle");
    }
    CHECK_THROWS_AS(plan(1.0, 64).validate(), SpecError);
    CHECK_THROWS_AS(plan(0.5, 0).validate(), SpecError);
}

TEST_CASE("series reject non-finite coefficients") {
    CHECK_THROWS_AS(TaylorSeries({cplx(1.0), cplx(std::numeric_limits<double>::quiet_NaN())}), NumericalError);
    CHECK_THROWS_AS(TaylorSeries({cplx(std::numeric_limits<double>::infinity())}), NumericalError);
}

TEST_CASE("round trip through evaluate stays within the reported bound") {
    std::mt19937_64 rng(1);
    const std::size_t order = 32;
    const auto cfg = ExtractionConfig::for_order(order);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = random_coeffs(rng, order / 2 + 1);
        const TaylorSeries f(c);
        const auto ex = extract_coeffs([&](cplx z) { return evaluate(f, z); }, cfg, order);
        for (std::size_t n = 0; n <= order; ++n) {
            CHECK(std::abs(ex.series[n] - f.coeff(n)) <= ex.coefficient_error() + 1e-15);
        }
    }
}

TEST_CASE("extraction is linear") {
    std::mt19937_64 rng(2);
    const TaylorSeries f(random_coeffs(rng, 10));
    const TaylorSeries g(random_coeffs(rng, 10));
    const cplx a(0.3, -1.2), b(-2.0, 0.5);
    const auto cfg = plan(0.75, 64);
    const auto ef = extract_coeffs([&](cplx z) { return evaluate(f, z); }, cfg, 20);
    const auto eg = extract_coeffs([&](cplx z) { return evaluate(g, z); }, cfg, 20);
    const auto eh = extract_coeffs([&](cplx z) { return a * evaluate(f, z) + b * evaluate(g, z); }, cfg, 20);
    for (std::size_t n = 0; n <= 20; ++n) {
        CHECK(std::abs(eh.series[n] - (a * ef.series[n] + b * eg.series[n])) < 1e-12);
    }
}

TEST_CASE("cauchy_product equals schoolbook convolution exactly") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_coeffs(rng, 9);
        const auto b = random_coeffs(rng, 9);
        const auto p = cauchy_product(TaylorSeries(a), TaylorSeries(b));
        const auto oracle = schoolbook(a, b);
        REQUIRE(p.size() == oracle.size());
        for (std::size_t n = 0; n < oracle.size(); ++n) CHECK(p[n] == oracle[n]);
    }
}

TEST_CASE("derivative undoes antiderivative") {
    std::mt19937_64 rng(4);
    const TaylorSeries f(random_coeffs(rng, 12));
    const auto g = derivative(antiderivative(f));
    REQUIRE(g.size() == f.size());
    for (std::size_t n = 1; n < f.size(); ++n) CHECK(std::abs(g[n] - f[n]) < 1e-15 * (1.0 + std::abs(f[n])));
    CHECK_THROWS_AS(derivative(TaylorSeries(0)), PreconditionError);
}

TEST_CASE("series arithmetic and evaluation") {
    const TaylorSeries f{1.0, 2.0, 3.0};
    CHECK(evaluate(f, 2.0) == cplx(17.0));
    CHECK((f + f)[2] == cplx(6.0));
    CHECK((f - f)[1] == cplx(0.0));
    CHECK((cplx(2.0) * f)[0] == cplx(2.0));
    CHECK(f.resized(5).order() == 5);
    CHECK(f.coeff(7) == cplx{});
    CHECK(TaylorSeries::monomial(3, 4, 2.0)[3] == cplx(2.0));
}
