#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wco/catalog.hpp"
#include "wco/criteria.hpp"
#include "wco/error.hpp"

using namespace wco;

namespace {

const AnalyticFunction one = affine(1.0, 0.0);

// The six quantities at one point, straight from the definitions.
std::array<double, 6> quantities_at(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                    double alpha, cplx z) {
    const Jet2 s = psi.jet(z), f = phi.jet(z);
    const double w = 1.0 - std::norm(z);
    const double ratio = w / (1.0 - std::norm(f.v));
    return {std::abs(s.d2) * w,
            std::abs(f.d1 * s.d1) * w,
            std::abs(f.d2 * s.v) * w,
            std::abs(f.d1 * s.v) * std::pow(ratio, alpha / 2 + 1),
            std::abs(s.v) * std::pow(ratio, alpha / 2),
            std::abs(s.v) * std::pow(ratio, alpha / 2 + 1)};
}

}  // namespace

TEST_CASE("limit classification") {
    const std::vector<double> zero(10, 0.0);
    CHECK(classify_limit(zero) == LimitVerdict::tends_to_zero);

    std::vector<double> geometric;
    for (int m = 1; m <= 14; ++m) geometric.push_back(std::ldexp(1.0, -m));
    CHECK(classify_limit(geometric) == LimitVerdict::tends_to_zero);

    std::vector<double> slow;
    for (int m = 1; m <= 14; ++m) slow.push_back(std::pow(2.0, -0.5 * m));
    CHECK(classify_limit(slow) == LimitVerdict::tends_to_zero);

    std::vector<double> level(14, 3.0);
    level[0] = 1.0;
    CHECK(classify_limit(level) == LimitVerdict::bounded_positive);

    std::vector<double> growing;
    for (int m = 1; m <= 14; ++m) growing.push_back(std::ldexp(1.0, m));
    CHECK(classify_limit(growing) == LimitVerdict::growing);

    std::vector<double> slow_growth;
    for (int m = 1; m <= 14; ++m) slow_growth.push_back(1.0 + 0.5 * m);
    CHECK(classify_limit(slow_growth) == LimitVerdict::inconclusive);
    CHECK_FALSE(bounded_on_grid(slow_growth, LimitVerdict::inconclusive));

    CHECK(bounded_on_grid(level, LimitVerdict::bounded_positive));
    CHECK_FALSE(bounded_on_grid(growing, LimitVerdict::growing));
}

TEST_CASE("constant weight with a contraction") {
    const auto phi = affine(0.0, 0.5);
    for (double a : {-0.5, 0.0, 0.5}) {
        const AnnularGrid grid(14, 64);
        const auto r = evaluate_quantities(one, phi, SpaceParams(a), grid);
        for (auto tag : all_quantity_tags) {
            CAPTURE(tag_name(tag));
            CHECK(r.quantity(tag).annulus_max.size() == 14);
            // K_{alpha/2} behaves like (1-|z|^2)^{alpha/2}: it only decays for alpha > 0, and for
            // alpha = -0.5 grows too slowly to pass the growth test.
            const auto want = tag != QuantityTag::K_half_alpha || a > 0.0 ? LimitVerdict::tends_to_zero
                              : a == 0.0                             ? LimitVerdict::bounded_positive
                                                                     : LimitVerdict::inconclusive;
            CHECK(r.quantity(tag).verdict == want);
        }
        REQUIRE(r.sufficient_compact.has_value());
        CHECK(*r.sufficient_compact);
        CHECK(*r.sufficient_bounded);
        CHECK(r.flagged_samples == 0);
    }
}

TEST_CASE("annulus maxima agree with the definitions") {
    const auto psi = psi_power(2.5);
    const auto phi = phi_rk(0.5, 2.0);
    const double alpha = 0.3;
    const AnnularGrid grid(10, 64);
    const auto r = evaluate_quantities(psi, phi, SpaceParams(alpha), grid);
    for (int m = 1; m <= grid.m_max(); ++m) {
        std::array<double, 6> want{};
        for (cplx z : grid.points(m)) {
            const auto q = quantities_at(psi, phi, alpha, z);
            for (int i = 0; i < 6; ++i) want[i] = std::max(want[i], q[i]);
        }
        for (int i = 0; i < 6; ++i) {
            CHECK(r.quantities[i].annulus_max[m - 1] == doctest::Approx(want[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("power weight with the origin-fixing map is compact") {
    for (double a : {-0.5, 0.0, 0.5}) {
        CAPTURE(a);
        const auto psi = psi_power(2.0 + a);
        const auto phi = mobius_self_map(0.5);
        const AnnularGrid grid;
        const auto r = evaluate_quantities(psi, phi, SpaceParams(a), grid);
        REQUIRE(r.sufficient_compact.has_value());
        CHECK(*r.sufficient_compact);

        // Per-annulus max of K_{alpha/2+1} against (1 - r_m^2)^{alpha/2+1}.
        const auto& k = r.quantity(QuantityTag::K_half_alpha_plus1).annulus_max;
        double c = 0.0;
        for (int m = 1; m <= grid.m_max(); ++m) {
            c = std::max(c, k[m - 1] / std::pow(grid.one_minus_r_sq(m), a / 2 + 1));
        }
        CHECK(c < 20.0);
        CHECK(r.quantity(QuantityTag::K_half_alpha_plus1).verdict == LimitVerdict::tends_to_zero);
    }
}

TEST_CASE("map touching the boundary without a fixed point fails the necessary condition") {
    const auto psi = affine(2.0, 1.0);
    const auto phi = make_catalog_function("polynomial:0.5,0,0.5");
    for (double a : {0.25, 0.5, 0.75}) {
        const auto r = evaluate_quantities(psi, phi, SpaceParams(a), AnnularGrid());
        CAPTURE(a);
        CHECK(r.quantity(QuantityTag::K_half_alpha).verdict == LimitVerdict::bounded_positive);
        REQUIRE(r.necessary_compact_ok.has_value());
        CHECK_FALSE(*r.necessary_compact_ok);
    }
    // The necessary conditions are only stated for alpha in (0, 1).
    const auto r = evaluate_quantities(psi, phi, SpaceParams(-0.25), AnnularGrid());
    CHECK_FALSE(r.necessary_compact_ok.has_value());
    // The square map is not univalent, so the sufficient verdicts are withheld.
    CHECK_FALSE(r.sufficient_bounded.has_value());
}

TEST_CASE("evaluate_quantities preconditions") {
    CHECK_THROWS_AS(evaluate_quantities(one, log_inv1m(), SpaceParams(0.5), AnnularGrid(6, 32)),
                    PreconditionError);
}

TEST_CASE("automorphism corollary") {
    const AnnularGrid grid;
    {
        const auto r = check_corollary_automorphism(one, 0.0, SpaceParams(0.5), grid);
        CHECK(r.inequality_holds);
        CHECK(std::abs(r.min_gap) <= 1e-12);
        CHECK(r.verdict == "not compact");
    }
    {
        const auto r = check_corollary_automorphism(one, 0.5, SpaceParams(0.5), grid);
        CHECK(r.constant == doctest::Approx(std::pow(1.0 / 3.0, 0.25)).epsilon(1e-15));
        CHECK(r.inequality_holds);
        CHECK(r.min_gap >= -1e-12);
    }
    {
        const auto r = check_corollary_automorphism(psi_power(3.0), 0.5, SpaceParams(0.5), grid);
        CHECK(r.outer_max_psi >= 1.0);
        CHECK(r.verdict == "not compact");
    }
    CHECK_THROWS_AS(check_corollary_automorphism(one, 0.5, SpaceParams(-0.5), grid), PreconditionError);
    CHECK_THROWS_AS(check_corollary_automorphism(one, 0.5, SpaceParams(0.0), grid), PreconditionError);
}

TEST_CASE("boundary-zero corollary") {
    const AnnularGrid grid;
    const auto phi = make_catalog_function("polynomial:0.5,0,0.5");
    {
        const auto r = check_corollary_boundary_zero(affine(2.0, 1.0), phi, SpaceParams(0.5), grid);
        REQUIRE(r.min_abs_psi.has_value());
        // phi touches the circle at 1 and -1; psi is about 3 and 1 there.
        CHECK(*r.min_abs_psi == doctest::Approx(1.0).epsilon(1e-3));
        REQUIRE(r.witness.has_value());
        CHECK(r.witness->real() < 0.0);
        CHECK(r.witness_count > 0);
        CHECK(r.verdict == "not compact");
    }
    {
        const auto r = check_corollary_boundary_zero(affine(1.0, -1.0), phi, SpaceParams(0.5), grid);
        REQUIRE(r.min_abs_psi.has_value());
        CHECK(*r.min_abs_psi < 1e-3);
        CHECK(r.verdict == "inconclusive");
    }
    CHECK_THROWS_AS(check_corollary_boundary_zero(one, affine(0.0, 0.5), SpaceParams(0.5), grid),
                    PreconditionError);
    CHECK_THROWS_AS(check_corollary_boundary_zero(log_inv1m(), phi, SpaceParams(0.5), grid),
                    PreconditionError);
}

TEST_CASE("comparison across alpha") {
    const AnnularGrid grid;
    {
        const auto r = comparison_monotonicity(one, affine(0.0, 0.5), 0.25, 0.75, grid);
        CHECK(r.origin_fixed);
        CHECK(r.holds);
        CHECK(r.max_excess <= 1e-12);
    }
    {
        const auto r = comparison_monotonicity(psi_power(2.5), mobius_self_map(0.5), 0.25, 0.75, grid);
        CHECK(r.holds);
    }
    {
        const auto r = comparison_monotonicity(psi_power(2.5), affine(0.5, 0.4), 0.5, 0.75, grid);
        CHECK_FALSE(r.origin_fixed);
        CHECK(r.holds);
        CHECK(r.identity_residual <= 1e-9);
        CHECK(r.lower_constant <= r.ratio_min);
        CHECK(r.ratio_max <= r.upper_constant);
        CHECK(r.lower_constant == doctest::Approx(std::pow(0.75 / 4.0, 0.375)).epsilon(1e-12));
        CHECK(r.upper_constant == doctest::Approx(std::pow(3.0, 0.375)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(comparison_monotonicity(one, affine(0.0, 0.5), 0.75, 0.25, grid), PreconditionError);
    CHECK_THROWS_AS(comparison_monotonicity(one, affine(0.0, 0.5), 0.0, 0.5, grid), PreconditionError);
}

TEST_CASE("verdict invariants across a family of symbols") {
    const std::vector<std::pair<AnalyticFunction, AnalyticFunction>> cases = {
        {one, affine(0.0, 0.5)},
        {psi_power(2.5), mobius_self_map(0.5)},
        {psi_power(1.5), mobius_self_map(0.8)},
        {affine(1.0, 0.5), phi_r1(0.3)},
        {affine(1.0, 0.5), phi_r1(0.6)},
        {polynomial({0.0, 0.0, 1.0}), phi_rk(0.5, 2.0)},
        {one, mobius_auto(0.3)},
        {affine(2.0, 1.0), make_catalog_function("polynomial:0.5,0,0.5")},
    };
    // Full default grid: on shorter grids a slow approach to a positive level can pass for decay.
    const AnnularGrid grid;
    for (const auto& [psi, phi] : cases) {
        for (double a : {-0.5, 0.25, 0.75}) {
            CAPTURE(phi.label());
            CAPTURE(a);
            const auto r = evaluate_quantities(psi, phi, SpaceParams(a), grid);

            // Compactness evidence implies boundedness evidence.
            if (r.sufficient_compact && *r.sufficient_compact) CHECK(*r.sufficient_bounded);
            if (r.iff_compact && *r.iff_compact) CHECK(r.iff_bounded.value_or(true));

            // Sufficient boundedness agrees with the kernel-based necessary condition.
            if (r.sufficient_bounded && *r.sufficient_bounded && r.necessary_bounded_ok) {
                CHECK(*r.necessary_bounded_ok);
            }

            // Schwarz-Pick implication between the two K quantities.
            if (r.quantity(QuantityTag::K_half_alpha).verdict == LimitVerdict::tends_to_zero) {
                CHECK(r.quantity(QuantityTag::K_half_alpha_plus1).verdict == LimitVerdict::tends_to_zero);
            }

            // Monotone tail when everything decays.
            bool all_zero = true;
            for (auto tag : all_quantity_tags) {
                all_zero = all_zero && r.quantity(tag).verdict == LimitVerdict::tends_to_zero;
            }
            if (all_zero) {
                for (auto tag : all_quantity_tags) {
                    const auto& s = r.quantity(tag).annulus_max;
                    for (std::size_t m = s.size() - 4; m + 1 < s.size(); ++m) CHECK(s[m + 1] <= s[m]);
                }
            }

            for (const auto& q : r.quantities) {
                CHECK(q.global_max >= 0.0);
                CHECK(std::isfinite(q.global_max));
                CHECK(q.global_max == *std::max_element(q.annulus_max.begin(), q.annulus_max.end()));
            }
        }
    }
}

TEST_CASE("report JSON is deterministic and keeps its key order") {
    const auto psi = psi_power(2.5);
    const auto phi = mobius_self_map(0.5);
    const AnnularGrid grid(10, 64);
    const auto a = dump_json(evaluate_quantities(psi, phi, SpaceParams(0.5), grid).to_json());
    const auto b = dump_json(evaluate_quantities(psi, phi, SpaceParams(0.5), grid).to_json());
    CHECK(a == b);

    const Json j = evaluate_quantities(psi, phi, SpaceParams(0.5), grid).to_json();
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    REQUIRE(keys.size() >= 7);
    CHECK(keys[0] == "alpha");
    CHECK(keys[1] == "psi");
    CHECK(keys[2] == "phi");
    CHECK(keys[3] == "grid");
    CHECK(keys[4] == "quantities");
    CHECK(keys[5] == "verdicts");
    CHECK(keys[6] == "assumed");
    CHECK(j["grid"]["M_max"] == 10);
    CHECK(j["quantities"].contains("K_half_alpha_plus1"));
    CHECK(j["quantities"]["B1"].contains("annulus_max"));
    CHECK(j["verdicts"]["sufficient_compact"] == true);
}
