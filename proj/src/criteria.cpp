#include "wco/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wco/error.hpp"
#include "wco/parallel.hpp"

namespace wco {

std::string tag_name(QuantityTag tag) {
    switch (tag) {
    case QuantityTag::B1: return "B1";
    case QuantityTag::B2: return "B2";
    case QuantityTag::B3: return "B3";
    case QuantityTag::B4: return "B4";
    case QuantityTag::K_half_alpha: return "K_half_alpha";
    case QuantityTag::K_half_alpha_plus1: return "K_half_alpha_plus1";
    }
    return "?";
}

std::string verdict_name(LimitVerdict v) {
    switch (v) {
    case LimitVerdict::tends_to_zero: return "tends_to_zero";
    case LimitVerdict::bounded_positive: return "bounded_positive";
    case LimitVerdict::growing: return "growing";
    case LimitVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Json LimitPolicy::to_json() const {
    Json j;
    j["zero_ratio"] = zero_ratio;
    j["min_decay_exponent"] = min_decay_exponent;
    j["tail"] = tail;
    j["level_spread"] = level_spread;
    j["growth_factor"] = growth_factor;
    return j;
}

LimitVerdict classify_limit(std::span<const double> s, const LimitPolicy& policy) {
    if (s.empty()) return LimitVerdict::inconclusive;
    const double top = *std::max_element(s.begin(), s.end());
    if (top == 0.0) return LimitVerdict::tends_to_zero;

    std::vector<double> sorted(s.begin(), s.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const double last = s.back();
    if (last > policy.growth_factor * median) return LimitVerdict::growing;

    const std::size_t tail = std::min(policy.tail, s.size());
    const auto tail_s = s.subspan(s.size() - tail);
    bool nonincreasing = true;
    for (std::size_t i = 1; i < tail_s.size(); ++i) {
        nonincreasing = nonincreasing && tail_s[i] <= tail_s[i - 1];
    }
    if (nonincreasing) {
        if (last < policy.zero_ratio * top) return LimitVerdict::tends_to_zero;
        if (tail >= 2 && last > 0.0) {
            const double exponent = std::log2(tail_s.front() / last) / static_cast<double>(tail - 1);
            if (exponent >= policy.min_decay_exponent) return LimitVerdict::tends_to_zero;
        }
        if (last == 0.0) return LimitVerdict::tends_to_zero;
    }

    const auto [lo, hi] = std::minmax_element(tail_s.begin(), tail_s.end());
    double mean = 0.0;
    for (double v : tail_s) mean += v;
    mean /= static_cast<double>(tail);
    if (mean > 0.0 && *hi - *lo <= policy.level_spread * mean) return LimitVerdict::bounded_positive;
    return LimitVerdict::inconclusive;
}

bool bounded_on_grid(std::span<const double> s, LimitVerdict v) {
    switch (v) {
    case LimitVerdict::tends_to_zero:
    case LimitVerdict::bounded_positive:
        return true;
    case LimitVerdict::growing:
        return false;
    case LimitVerdict::inconclusive:
        break;
    }
    if (s.size() < 2) return false;
    const double earlier = *std::max_element(s.begin(), s.end() - 1);
    return s.back() <= earlier;
}

namespace {

constexpr double flag_floor = 1e-14;

double one_minus_sq(cplx w) {
    const double r = std::abs(w);
    return (1.0 - r) * (1.0 + r);
}

void finish_series(QuantitySeries& q, const LimitPolicy& policy) {
    q.global_max = q.annulus_max.empty() ? 0.0 : *std::max_element(q.annulus_max.begin(), q.annulus_max.end());
    q.verdict = classify_limit(q.annulus_max, policy);
}

Json series_json(const QuantitySeries& q) {
    Json j;
    j["global_max"] = q.global_max;
    j["annulus_max"] = q.annulus_max;
    j["verdict"] = verdict_name(q.verdict);
    return j;
}

Json optional_bool(const std::optional<bool>& b) {
    return b ? Json(*b) : Json(nullptr);
}

}  // namespace

CriteriaReport evaluate_quantities(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                   const SpaceParams& p, const AnnularGrid& grid,
                                   const LimitPolicy& policy) {
    if (!phi.claims_self_map()) {
        throw PreconditionError("symbol phi = " + phi.label() + " is not a self-map of the disc");
    }
    const double alpha = p.alpha();
    const auto annuli = static_cast<std::size_t>(grid.m_max());

    std::vector<std::array<double, 6>> maxima(annuli);
    std::vector<double> phi_dd(annuli, 0.0);
    std::vector<std::size_t> flagged(annuli, 0);

    parallel_for(annuli, [&](std::size_t idx) {
        const int m = static_cast<int>(idx) + 1;
        const double d = grid.one_minus_r_sq(m);
        std::array<double, 6> mx{};
        double dd = 0.0;
        for (const cplx& z : grid.points(m)) {
            const Jet2 s = psi.jet(z);
            const Jet2 f = phi.jet(z);
            mx[0] = std::max(mx[0], std::abs(s.d2) * d);
            mx[1] = std::max(mx[1], std::abs(f.d1 * s.d1) * d);
            mx[2] = std::max(mx[2], std::abs(f.d2 * s.v) * d);
            dd = std::max(dd, std::abs(f.d2));
            const double e = one_minus_sq(f.v);
            if (e < flag_floor) {
                ++flagged[idx];
                continue;
            }
            const double ratio = d / e;
            const double k_half = std::abs(s.v) * std::pow(ratio, 0.5 * alpha);
            const double k_plus = k_half * ratio;
            mx[3] = std::max(mx[3], std::abs(f.d1) * k_plus);
            mx[4] = std::max(mx[4], k_half);
            mx[5] = std::max(mx[5], k_plus);
        }
        maxima[idx] = mx;
        phi_dd[idx] = dd;
    });

    CriteriaReport r;
    r.alpha = alpha;
    r.psi_label = psi.label();
    r.phi_label = phi.label();
    r.grid = grid;
    r.policy = policy;
    for (std::size_t q = 0; q < 6; ++q) {
        auto& series = r.quantities[q];
        series.annulus_max.resize(annuli);
        for (std::size_t i = 0; i < annuli; ++i) series.annulus_max[i] = maxima[i][q];
        finish_series(series, policy);
    }
    r.phi_second.annulus_max = phi_dd;
    finish_series(r.phi_second, policy);
    for (auto f : flagged) r.flagged_samples += f;

    auto bounded = [&](QuantityTag t) {
        const auto& q = r.quantity(t);
        return bounded_on_grid(q.annulus_max, q.verdict);
    };
    auto vanishes = [&](QuantityTag t) { return r.quantity(t).verdict == LimitVerdict::tends_to_zero; };

    r.assumed.push_back("phi is a self-map of the disc (metadata)");
    const bool univalent = phi.claims_univalent();
    if (univalent) {
        r.assumed.push_back("phi is univalent (metadata)");
        const std::array<QuantityTag, 4> b = {QuantityTag::B1, QuantityTag::B2, QuantityTag::B3, QuantityTag::B4};
        r.sufficient_bounded = std::all_of(b.begin(), b.end(), bounded);
        r.sufficient_compact = std::all_of(b.begin(), b.end(), vanishes);
    }

    const bool core = alpha > 0.0 && alpha < 1.0;
    if (core) {
        const auto& k = r.quantity(QuantityTag::K_half_alpha);
        if (k.verdict == LimitVerdict::growing) {
            r.necessary_bounded_ok = false;
        } else if (bounded_on_grid(k.annulus_max, k.verdict)) {
            r.necessary_bounded_ok = true;
        }
        if (k.verdict == LimitVerdict::tends_to_zero) {
            r.necessary_compact_ok = true;
        } else if (k.verdict == LimitVerdict::bounded_positive || k.verdict == LimitVerdict::growing) {
            r.necessary_compact_ok = false;
        }

        const bool phi_dd_level = r.phi_second.verdict == LimitVerdict::bounded_positive ||
                                  r.phi_second.verdict == LimitVerdict::tends_to_zero;
        if (univalent && phi_dd_level) {
            if (bounded(QuantityTag::B1)) {
                r.iff_bounded = r.necessary_bounded_ok;
                if (r.iff_bounded) r.assumed.push_back("phi'' bounded (grid level of |phi''|)");
            }
            if (vanishes(QuantityTag::B1)) {
                r.iff_compact = r.necessary_compact_ok;
                if (r.iff_compact && !r.iff_bounded) r.assumed.push_back("phi'' bounded (grid level of |phi''|)");
            }
        }
    }
    return r;
}

Json CriteriaReport::to_json() const {
    Json j;
    j["alpha"] = alpha;
    j["psi"] = psi_label;
    j["phi"] = phi_label;
    Json g;
    g["M_max"] = grid.m_max();
    g["T"] = grid.angular_counts();
    j["grid"] = g;
    Json q;
    for (auto tag : all_quantity_tags) q[tag_name(tag)] = series_json(quantity(tag));
    j["quantities"] = q;
    Json v;
    v["sufficient_bounded"] = optional_bool(sufficient_bounded);
    v["sufficient_compact"] = optional_bool(sufficient_compact);
    v["necessary_bounded_ok"] = optional_bool(necessary_bounded_ok);
    v["necessary_compact_ok"] = optional_bool(necessary_compact_ok);
    v["iff_bounded"] = optional_bool(iff_bounded);
    v["iff_compact"] = optional_bool(iff_compact);
    j["verdicts"] = v;
    j["assumed"] = assumed;
    j["phi_second_derivative"] = series_json(phi_second);
    j["policy"] = policy.to_json();
    j["flagged_samples"] = flagged_samples;
    return j;
}

AutomorphismReport check_corollary_automorphism(const AnalyticFunction& psi, cplx a,
                                                const SpaceParams& p, const AnnularGrid& grid) {
    const double alpha = p.alpha();
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw PreconditionError("automorphism corollary requires alpha in (0, 1)");
    }
    if (!(std::abs(a) < 1.0)) throw PreconditionError("automorphism parameter must satisfy |a| < 1");
    const MobiusAutomorphism phi_a(a);
    const double ra = std::abs(a);
    AutomorphismReport r;
    r.a = a;
    r.alpha = alpha;
    r.constant = std::pow((1.0 - ra) / (1.0 + ra), 0.5 * alpha);

    const auto annuli = static_cast<std::size_t>(grid.m_max());
    std::vector<double> gaps(annuli), psi_max(annuli);
    parallel_for(annuli, [&](std::size_t idx) {
        const int m = static_cast<int>(idx) + 1;
        const double d = grid.one_minus_r_sq(m);
        double gap = std::numeric_limits<double>::infinity();
        double pm = 0.0;
        for (const cplx& z : grid.points(m)) {
            const double ps = std::abs(psi(z));
            const double e = one_minus_sq(phi_a(z));
            const double k = ps * std::pow(d / e, 0.5 * alpha);
            gap = std::min(gap, k - r.constant * ps);
            pm = std::max(pm, ps);
        }
        gaps[idx] = gap;
        psi_max[idx] = pm;
    });
    r.min_gap = *std::min_element(gaps.begin(), gaps.end());
    r.inequality_holds = r.min_gap >= -1e-12;
    r.outer_max_psi = psi_max.back();
    r.verdict = r.outer_max_psi > r.positivity_floor ? "not compact" : "inconclusive";
    return r;
}

Json AutomorphismReport::to_json() const {
    Json j;
    j["a"] = complex_to_json(a);
    j["alpha"] = alpha;
    j["constant"] = constant;
    j["min_gap"] = min_gap;
    j["inequality_holds"] = inequality_holds;
    j["outer_max_psi"] = outer_max_psi;
    j["positivity_floor"] = positivity_floor;
    j["verdict"] = verdict;
    return j;
}

BoundaryZeroReport check_corollary_boundary_zero(const AnalyticFunction& psi,
                                                 const AnalyticFunction& phi,
                                                 const SpaceParams&, const AnnularGrid& grid) {
    if (!psi.meta().continuous_on_closure) {
        throw PreconditionError("boundary-zero corollary requires psi continuous on the closed disc");
    }
    if (find_fixed_point(phi)) {
        throw PreconditionError("boundary-zero corollary requires phi without fixed point in the disc");
    }
    BoundaryZeroReport r;
    r.threshold = 1.0 - std::ldexp(1.0, -grid.m_max() + 1);
    for (int m = 1; m <= grid.m_max(); ++m) {
        if (grid.radius(m) <= r.threshold) continue;
        for (const cplx& z : grid.points(m)) {
            if (std::abs(phi(z)) <= r.threshold) continue;
            const double v = std::abs(psi(z));
            ++r.witness_count;
            if (!r.min_abs_psi || v < *r.min_abs_psi) {
                r.min_abs_psi = v;
                r.witness = z;
            }
        }
    }
    r.verdict = r.min_abs_psi && *r.min_abs_psi > r.zero_floor ? "not compact" : "inconclusive";
    return r;
}

Json BoundaryZeroReport::to_json() const {
    Json j;
    j["threshold"] = threshold;
    j["witness_count"] = witness_count;
    j["min_abs_psi"] = min_abs_psi ? Json(*min_abs_psi) : Json(nullptr);
    j["witness"] = witness ? complex_to_json(*witness) : Json(nullptr);
    j["zero_floor"] = zero_floor;
    j["verdict"] = verdict;
    return j;
}

ComparisonReport comparison_monotonicity(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                         double alpha, double beta, const AnnularGrid& grid) {
    if (!(0.0 < alpha && alpha < beta && beta < 1.0)) {
        throw PreconditionError("comparison requires 0 < alpha < beta < 1");
    }
    if (!phi.claims_self_map()) {
        throw PreconditionError("symbol phi = " + phi.label() + " is not a self-map of the disc");
    }
    ComparisonReport r;
    r.alpha = alpha;
    r.beta = beta;
    const cplx a = phi(0.0);
    r.origin_fixed = std::abs(a) <= 1e-10;
    const auto pts = grid.all_points();

    if (r.origin_fixed) {
        double excess = -std::numeric_limits<double>::infinity();
        for (const cplx& z : pts) {
            const double ps = std::abs(psi(z));
            const double ratio = one_minus_sq(z) / one_minus_sq(phi(z));
            excess = std::max(excess, ps * std::pow(ratio, 0.5 * beta) - ps * std::pow(ratio, 0.5 * alpha));
        }
        r.max_excess = excess;
        r.holds = excess <= 1e-12;
        return r;
    }

    const MobiusAutomorphism phi_a(a);
    const double ra = std::abs(a);
    const double lo = (1.0 - ra * ra) / 4.0;
    const double hi = (1.0 + ra) / (1.0 - ra);
    r.ratio_min = std::numeric_limits<double>::infinity();
    r.ratio_max = 0.0;
    r.holds = true;
    for (double gamma : {alpha, beta}) {
        const double lc = std::pow(lo, 0.5 * gamma);
        const double uc = std::pow(hi, 0.5 * gamma);
        r.lower_constant = gamma == alpha ? lc : std::min(r.lower_constant, lc);
        r.upper_constant = std::max(r.upper_constant, uc);
        for (const cplx& z : pts) {
            const cplx w = phi(z);
            const Jet2 u = phi_a.jet(w);
            // [(1-|z|^2)/(1-|w|^2)] / [(1-|z|^2)/(1-|u|^2)] against |phi_a'(w)|.
            const double direct = std::pow(one_minus_sq(u.v) / one_minus_sq(w), 0.5 * gamma);
            const double predicted = std::pow(std::abs(u.d1), 0.5 * gamma);
            r.identity_residual = std::max(r.identity_residual, std::abs(direct - predicted) / predicted);
            r.ratio_min = std::min(r.ratio_min, direct);
            r.ratio_max = std::max(r.ratio_max, direct);
            r.holds = r.holds && direct >= lc * (1.0 - 1e-12) && direct <= uc * (1.0 + 1e-12);
        }
    }
    r.holds = r.holds && r.identity_residual <= 1e-9;
    return r;
}

Json ComparisonReport::to_json() const {
    Json j;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["origin_fixed"] = origin_fixed;
    if (origin_fixed) {
        j["max_excess"] = max_excess;
    } else {
        j["identity_residual"] = identity_residual;
        j["ratio_min"] = ratio_min;
        j["ratio_max"] = ratio_max;
        j["lower_constant"] = lower_constant;
        j["upper_constant"] = upper_constant;
    }
    j["holds"] = holds;
    return j;
}

}  // namespace wco
