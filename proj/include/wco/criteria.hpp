#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wco/catalog.hpp"
#include "wco/dirichlet.hpp"
#include "wco/grid.hpp"
#include "wco/json_io.hpp"

namespace wco {

enum class QuantityTag { B1, B2, B3, B4, K_half_alpha, K_half_alpha_plus1 };

inline constexpr std::array<QuantityTag, 6> all_quantity_tags = {
    QuantityTag::B1, QuantityTag::B2, QuantityTag::B3,
    QuantityTag::B4, QuantityTag::K_half_alpha, QuantityTag::K_half_alpha_plus1};

std::string tag_name(QuantityTag tag);

enum class LimitVerdict { tends_to_zero, bounded_positive, growing, inconclusive };

std::string verdict_name(LimitVerdict v);

/// Thresholds of the boundary-limit classification applied to per-annulus maxima s_1..s_M.
struct LimitPolicy {
    /// s_M below this fraction of max s_m counts as decay.
    double zero_ratio = 1e-3;
    /// Alternatively: log2(s_{M-3}/s_M)/3 at least this, i.e. s_m ~ (1-r_m)^p with p >= this.
    double min_decay_exponent = 0.1;
    /// Number of trailing annuli examined.
    std::size_t tail = 4;
    /// Relative spread (max-min)/mean of the tail below which the level counts as constant.
    double level_spread = 0.2;
    /// s_M above this multiple of the median counts as growth.
    double growth_factor = 10.0;

    Json to_json() const;
};

/// 1) all zero: tends_to_zero; 2) s_M > growth_factor * median: growing;
/// 3) tail nonincreasing and (s_M < zero_ratio * max or decay exponent >= min_decay_exponent):
///    tends_to_zero; 4) tail spread <= level_spread * mean > 0: bounded_positive;
/// 5) otherwise inconclusive.
LimitVerdict classify_limit(std::span<const double> s, const LimitPolicy& policy = {});

/// Grid evidence that sup is finite: decaying or level, or inconclusive with the outermost annulus
/// not above the earlier maxima.
bool bounded_on_grid(std::span<const double> s, LimitVerdict v);

struct QuantitySeries {
    double global_max = 0.0;
    std::vector<double> annulus_max;
    LimitVerdict verdict = LimitVerdict::inconclusive;
};

struct CriteriaReport {
    double alpha = 0.0;
    std::string psi_label;
    std::string phi_label;
    AnnularGrid grid;
    LimitPolicy policy;
    std::array<QuantitySeries, 6> quantities;
    /// Per-annulus max of |phi''| (bounded-second-derivative proxy).
    QuantitySeries phi_second;

    /// Sufficient conditions (all four B-quantities bounded / tending to zero). Unset when phi is
    /// not claimed univalent.
    std::optional<bool> sufficient_bounded;
    std::optional<bool> sufficient_compact;
    /// Necessary conditions from the adjoint-kernel argument; only for alpha in (0, 1).
    std::optional<bool> necessary_bounded_ok;
    std::optional<bool> necessary_compact_ok;
    /// Characterizations, emitted only when their hypotheses are detected.
    std::optional<bool> iff_bounded;
    std::optional<bool> iff_compact;

    std::vector<std::string> assumed;
    /// Samples with 1 - |phi(z)|^2 < 1e-14, left out of the ratio quantities.
    std::size_t flagged_samples = 0;

    const QuantitySeries& quantity(QuantityTag tag) const {
        return quantities[static_cast<std::size_t>(tag)];
    }
    Json to_json() const;
};

/// Evaluates the six quantities at every grid point from the jets of psi and phi.
/// Throws PreconditionError unless phi claims to be a self-map.
CriteriaReport evaluate_quantities(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                   const SpaceParams& p, const AnnularGrid& grid,
                                   const LimitPolicy& policy = {});

struct AutomorphismReport {
    cplx a;
    double alpha = 0.0;
    /// ((1-|a|)/(1+|a|))^{alpha/2}
    double constant = 0.0;
    /// min over the grid of K_half_alpha(z) - constant |psi(z)|; >= -1e-12 when the bound holds.
    double min_gap = 0.0;
    bool inequality_holds = true;
    double outer_max_psi = 0.0;
    double positivity_floor = 1e-6;
    /// "not compact" when psi is visibly nonzero on the outer annulus, else "inconclusive".
    std::string verdict;

    Json to_json() const;
};

/// Requires alpha in (0, 1).
AutomorphismReport check_corollary_automorphism(const AnalyticFunction& psi, cplx a,
                                                const SpaceParams& p, const AnnularGrid& grid);

struct BoundaryZeroReport {
    double threshold = 0.0;  ///< 1 - 2^{-M_max+1}
    std::size_t witness_count = 0;
    std::optional<double> min_abs_psi;
    std::optional<cplx> witness;
    double zero_floor = 1e-3;
    std::string verdict;

    Json to_json() const;
};

/// Requires phi without interior fixed point and psi continuous on the closed disc.
BoundaryZeroReport check_corollary_boundary_zero(const AnalyticFunction& psi,
                                                 const AnalyticFunction& phi,
                                                 const SpaceParams& p, const AnnularGrid& grid);

struct ComparisonReport {
    double alpha = 0.0;
    double beta = 0.0;
    bool origin_fixed = true;
    /// Origin path: max over the grid of K^beta - K^alpha.
    double max_excess = 0.0;
    /// General path, with a = phi(0): the ratio K^gamma / (psi-weighted ratio against
    /// phi_a o phi) equals |phi_a'(phi(z))|^{gamma/2}; its range over the grid for gamma = alpha, beta.
    double identity_residual = 0.0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    double lower_constant = 0.0;
    double upper_constant = 0.0;
    bool holds = true;

    Json to_json() const;
};

/// Requires 0 < alpha < beta < 1.
ComparisonReport comparison_monotonicity(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                         double alpha, double beta, const AnnularGrid& grid);

}  // namespace wco
