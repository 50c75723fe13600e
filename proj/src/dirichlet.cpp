#include "wco/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "wco/error.hpp"
#include "wco/parallel.hpp"

namespace wco {

SpaceParams::SpaceParams(double alpha) : alpha_(alpha) {
    if (!(alpha > -1.0) || !std::isfinite(alpha)) {
        throw SpecError("space parameter alpha must be finite and > -1, got " + format_decimal(alpha));
    }
}

void SpaceParams::require_core() const {
    if (!(alpha_ > -1.0 && alpha_ < 1.0)) {
        throw PreconditionError("alpha must lie in (-1, 1) for weighted Dirichlet operator results, got " +
                                format_decimal(alpha_));
    }
}

double SpaceParams::dirichlet_weight(std::size_t n) const {
    return std::pow(static_cast<double>(n + 1), 1.0 - alpha_);
}

double SpaceParams::basis_scale(std::size_t n) const {
    return std::pow(static_cast<double>(n + 1), 0.5 * (alpha_ - 1.0));
}

std::vector<cplx> to_basis_coordinates(const TaylorSeries& f, const SpaceParams& p) {
    std::vector<cplx> x(f.size());
    for (std::size_t n = 0; n < x.size(); ++n) x[n] = f[n] / p.basis_scale(n);
    return x;
}

TaylorSeries from_basis_coordinates(std::span<const cplx> x, const SpaceParams& p) {
    std::vector<cplx> c(x.size());
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = x[n] * p.basis_scale(n);
    return TaylorSeries(std::move(c));
}

TaylorSeries basis_vector(std::size_t n, const SpaceParams& p, std::size_t order) {
    return TaylorSeries::monomial(n, order, p.basis_scale(n));
}

double norm_sq_coeff(const TaylorSeries& f, const SpaceParams& p, NormSpace space) {
    const double exponent = space == NormSpace::dirichlet ? 1.0 - p.alpha() : -1.0 - p.alpha();
    double sum = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        sum += std::pow(static_cast<double>(n + 1), exponent) * std::norm(f[n]);
    }
    return sum;
}

cplx inner_product(const TaylorSeries& f, const TaylorSeries& g, const SpaceParams& p) {
    cplx sum{};
    const std::size_t n_max = std::min(f.size(), g.size());
    for (std::size_t n = 0; n < n_max; ++n) sum += p.dirichlet_weight(n) * f[n] * std::conj(g[n]);
    return sum;
}

double kernel_tail_bound(double x, double alpha, std::size_t order) {
    if (x == 0.0) return 0.0;
    const double n1 = static_cast<double>(order + 1);
    if (alpha <= 1.0) {
        // (n+1)^{alpha-1} is nonincreasing, so the tail is below the first dropped weight times
        // a geometric tail.
        return std::pow(x, static_cast<double>(order)) * std::pow(n1, alpha - 1.0) / (1.0 - x);
    }
    const double q = std::pow((n1 + 2.0) / (n1 + 1.0), alpha - 1.0) * x;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(n1 + 1.0, alpha - 1.0) * std::pow(x, n1) / (1.0 - q);
}

KernelVector kernel_vector(cplx w, const SpaceParams& p, std::size_t order) {
    if (std::abs(w) > 1.0 - 1e-6) {
        throw PreconditionError("kernel_vector requires |w| <= 1 - 1e-6");
    }
    std::vector<cplx> c(order + 1);
    cplx power = 1.0;
    for (std::size_t n = 0; n <= order; ++n) {
        c[n] = power / p.dirichlet_weight(n);
        power *= std::conj(w);
    }
    return {w, TaylorSeries(std::move(c)), kernel_tail_bound(std::norm(w), p.alpha(), order)};
}

std::vector<cplx> kernel_coordinates(cplx w, const SpaceParams& p, std::size_t count) {
    std::vector<cplx> v(count);
    cplx power = 1.0;
    for (std::size_t n = 0; n < count; ++n) {
        v[n] = p.basis_scale(n) * power;
        power *= std::conj(w);
    }
    return v;
}

KernelNormReport kernel_norm_sq(cplx w, const SpaceParams& p, std::size_t order) {
    const double x = std::norm(w);
    if (!(x < 1.0)) throw PreconditionError("kernel_norm_sq requires |w| < 1");
    KernelNormReport report;
    // Neumaier summation.
    double sum = 0.0, carry = 0.0, power = 1.0;
    for (std::size_t n = 0; n <= order; ++n) {
        const double term = std::pow(static_cast<double>(n + 1), p.alpha() - 1.0) * power;
        const double t = sum + term;
        carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        power *= x;
    }
    report.partial_sum = sum + carry;
    report.tail_bound = kernel_tail_bound(x, p.alpha(), order);
    if (p.alpha() > 0.0) report.comparison = std::tgamma(p.alpha()) * std::pow(1.0 - x, -p.alpha());
    return report;
}

RadialRule radial_rule(std::size_t nodes, double exponent) {
    if (nodes == 0) throw SpecError("radial rule needs at least one node");
    if (!(exponent > -1.0)) throw SpecError("radial weight exponent must be > -1");
    // Gauss-Jacobi on [-1,1] for (1-x)^a (1+x)^0 by Golub-Welsch, then u = (x+1)/2, r = sqrt(u).
    const double a = exponent;
    const double b = 0.0;
    Eigen::VectorXd diag(nodes);
    Eigen::VectorXd sub(nodes > 1 ? nodes - 1 : 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double n = static_cast<double>(i);
        const double s = 2.0 * n + a + b;
        diag[static_cast<Eigen::Index>(i)] = i == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
        if (i + 1 < nodes) {
            const double m = n + 1.0;
            const double t = 2.0 * m + a + b;
            const double beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
            sub[static_cast<Eigen::Index>(i)] = std::sqrt(beta);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(nodes > 1 ? nodes - 1 : 0), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw NumericalError("Gauss-Jacobi eigenproblem failed");

    const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                       std::tgamma(a + b + 2.0);
    // int_0^1 h(u)(1-u)^a du = 2^{-a-1} int_{-1}^1 h((x+1)/2)(1-x)^a dx.
    const double jacobian = std::pow(2.0, -a - 1.0);
    RadialRule rule;
    rule.radii.resize(nodes);
    rule.weights.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        const double xnode = solver.eigenvalues()[k];
        const double v0 = solver.eigenvectors()(0, k);
        rule.radii[i] = std::sqrt(std::clamp(0.5 * (xnode + 1.0), 0.0, 1.0));
        rule.weights[i] = jacobian * mu0 * v0 * v0;
    }
    return rule;
}

std::vector<cplx> quadrature_points(const QuadratureGrid& grid) {
    const auto rule = radial_rule(grid.radial_nodes, 0.0);
    std::vector<cplx> pts;
    pts.reserve(grid.radial_nodes * grid.angular_nodes);
    for (double r : rule.radii) {
        for (const auto& z : sample_circle(r, grid.angular_nodes)) pts.push_back(z);
    }
    return pts;
}

namespace {

// int_D |g(z)|^2 (1-|z|^2)^exponent dA over the polar grid, where g picks a jet component.
template <typename Pick>
double weighted_integral(const AnalyticFunction& f, const QuadratureGrid& grid, double exponent, Pick pick) {
    const auto rule = radial_rule(grid.radial_nodes, exponent);
    std::vector<double> ring(grid.radial_nodes);
    parallel_for(grid.radial_nodes, [&](std::size_t i) {
        double acc = 0.0;
        for (const auto& z : sample_circle(rule.radii[i], grid.angular_nodes)) acc += std::norm(pick(f.jet(z)));
        ring[i] = rule.weights[i] * acc / static_cast<double>(grid.angular_nodes);
    });
    double total = 0.0;
    for (double v : ring) total += v;
    return total;
}

double quadrature_value(const AnalyticFunction& f, const SpaceParams& p, const QuadratureGrid& grid,
                        QuadratureVariant variant) {
    const Jet2 at0 = f.jet(0.0);
    if (variant == QuadratureVariant::first_derivative) {
        return std::norm(at0.v) + weighted_integral(f, grid, p.alpha(), [](const Jet2& j) { return j.d1; });
    }
    return std::norm(at0.v) + std::norm(at0.d1) +
           weighted_integral(f, grid, p.alpha() + 2.0, [](const Jet2& j) { return j.d2; });
}

}  // namespace

QuadratureNorm norm_sq_quadrature(const AnalyticFunction& f, const SpaceParams& p,
                                  const QuadratureGrid& grid, QuadratureVariant variant) {
    p.require_core();
    QuadratureNorm out;
    out.value = quadrature_value(f, p, grid, variant);
    out.refined_value = quadrature_value(f, p, grid.refined(), variant);
    const double scale = std::max(std::abs(out.refined_value), std::numeric_limits<double>::min());
    out.relative_change = std::abs(out.refined_value - out.value) / scale;
    out.too_coarse = out.relative_change > 0.01;
    return out;
}

GrowthReport growth_bound_check(const AnalyticFunction& f, std::span<const cplx> points) {
    GrowthReport report;
    std::vector<Jet2> jets(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) jets[i] = f.jet(points[i]);
    auto one_minus_sq = [](cplx z) {
        const double r = std::abs(z);
        return (1.0 - r) * (1.0 + r);
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        report.bloch_constant = std::max(report.bloch_constant, std::abs(jets[i].d1) * one_minus_sq(points[i]));
    }
    const cplx f0 = f(0.0);
    report.min_slack = std::numeric_limits<double>::infinity();
    report.max_slack = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double bound = report.bloch_constant *
                             (std::numbers::ln2 + 0.5 * std::log(1.0 / one_minus_sq(points[i])));
        const double slack = bound - std::abs(jets[i].v - f0);
        report.min_slack = std::min(report.min_slack, slack);
        report.max_slack = std::max(report.max_slack, slack);
    }
    if (points.empty()) report.min_slack = report.max_slack = 0.0;
    report.holds = report.min_slack >= -1e-9;
    return report;
}

GrowthReport growth_bound_check(const AnalyticFunction& f, const QuadratureGrid& grid) {
    const auto pts = quadrature_points(grid);
    return growth_bound_check(f, pts);
}

GrowthReport growth_bound_check(const AnalyticFunction& f, const AnnularGrid& grid) {
    const auto pts = grid.all_points();
    return growth_bound_check(f, pts);
}

}  // namespace wco
