#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "wco/catalog.hpp"
#include "wco/grid.hpp"
#include "wco/series.hpp"

namespace wco {

/// Weighted Dirichlet space D_alpha. Any alpha > -1 is accepted so the Bergman-side helpers
/// work; operations built on the boundedness/spectral theory call require_core().
class SpaceParams {
public:
    explicit SpaceParams(double alpha);

    double alpha() const { return alpha_; }
    /// Throws PreconditionError unless alpha lies in (-1, 1).
    void require_core() const;

    /// (n+1)^{1-alpha}: the D_alpha coefficient weight.
    double dirichlet_weight(std::size_t n) const;
    /// (n+1)^{(alpha-1)/2}: coefficient of z^n in the orthonormal basis vector e_n.
    double basis_scale(std::size_t n) const;

private:
    double alpha_;
};

enum class NormSpace { dirichlet, bergman };

/// Basis coordinates x_n = <f, e_n> of a truncated series.
std::vector<cplx> to_basis_coordinates(const TaylorSeries& f, const SpaceParams& p);
TaylorSeries from_basis_coordinates(std::span<const cplx> x, const SpaceParams& p);

/// e_n as a series of the given order.
TaylorSeries basis_vector(std::size_t n, const SpaceParams& p, std::size_t order);

/// Dirichlet: sum (n+1)^{1-alpha}|a_n|^2. Bergman (A^2_alpha coefficient model):
/// sum (n+1)^{-1-alpha}|a_n|^2.
double norm_sq_coeff(const TaylorSeries& f, const SpaceParams& p, NormSpace space = NormSpace::dirichlet);

/// <f, g> in D_alpha over the common truncation.
cplx inner_product(const TaylorSeries& f, const TaylorSeries& g, const SpaceParams& p);

/// Truncated reproducing kernel k_w with c_n = conj(w)^n / (n+1)^{1-alpha}.
struct KernelVector {
    cplx w;
    TaylorSeries coeffs;
    /// Upper bound on sum_{n > order} (n+1)^{alpha-1}|w|^{2n}, the squared norm of the dropped tail.
    double tail_bound = 0.0;
};

/// Throws PreconditionError when |w| > 1 - 1e-6.
KernelVector kernel_vector(cplx w, const SpaceParams& p, std::size_t order);

/// Basis coordinates of k_w truncated to n < count: (n+1)^{(alpha-1)/2} conj(w)^n.
std::vector<cplx> kernel_coordinates(cplx w, const SpaceParams& p, std::size_t count);

/// sum_{n > order} (n+1)^{alpha-1} x^n for x in [0,1), bounded from above.
double kernel_tail_bound(double x, double alpha, std::size_t order);

struct KernelNormReport {
    double partial_sum = 0.0;  ///< sum_{n<=order} (n+1)^{alpha-1}|w|^{2n}, compensated
    double tail_bound = 0.0;
    /// Gamma(alpha)(1-|w|^2)^{-alpha}; only for alpha > 0.
    std::optional<double> comparison;

    std::optional<double> ratio() const {
        if (!comparison) return std::nullopt;
        return partial_sum / *comparison;
    }
};

KernelNormReport kernel_norm_sq(cplx w, const SpaceParams& p, std::size_t order);

/// Polar product rule on the disc: R radial nodes, T uniform angles.
struct QuadratureGrid {
    std::size_t radial_nodes = 200;
    std::size_t angular_nodes = 512;

    QuadratureGrid refined() const { return {2 * radial_nodes, 2 * angular_nodes}; }
};

/// Radial rule for integrals against (1-|z|^2)^exponent dA, with dA normalized to total mass 1:
/// int_D g(|z|)(1-|z|^2)^gamma dA ~= sum_i weights[i] g(radii[i]).
/// Built as Gauss-Jacobi in u = r^2 so the weight is integrated exactly.
struct RadialRule {
    std::vector<double> radii;
    std::vector<double> weights;
};

RadialRule radial_rule(std::size_t nodes, double exponent);

/// Sample points of the polar grid (radial nodes for exponent 0, times the angles).
std::vector<cplx> quadrature_points(const QuadratureGrid& grid);

enum class QuadratureVariant {
    /// |f(0)|^2 + int |f'|^2 dA_alpha
    first_derivative,
    /// |f(0)|^2 + |f'(0)|^2 + int |f''|^2 dA_{alpha+2}
    second_derivative,
};

struct QuadratureNorm {
    double value = 0.0;
    double refined_value = 0.0;  ///< same expression with R and T doubled
    double relative_change = 0.0;
    bool too_coarse = false;  ///< relative_change > 1%
};

QuadratureNorm norm_sq_quadrature(const AnalyticFunction& f, const SpaceParams& p,
                                  const QuadratureGrid& grid, QuadratureVariant variant);

struct GrowthReport {
    /// max over the sample points of |f'(z)|(1-|z|^2)
    double bloch_constant = 0.0;
    /// min and max of M(log 2 + log(1/(1-|z|^2))/2) - |f(z) - f(0)| over the points
    double min_slack = 0.0;
    double max_slack = 0.0;
    bool holds = true;  ///< min_slack >= -1e-9
};

GrowthReport growth_bound_check(const AnalyticFunction& f, std::span<const cplx> points);
GrowthReport growth_bound_check(const AnalyticFunction& f, const QuadratureGrid& grid);
GrowthReport growth_bound_check(const AnalyticFunction& f, const AnnularGrid& grid);

}  // namespace wco
