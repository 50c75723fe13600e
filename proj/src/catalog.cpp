#include "wco/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wco/error.hpp"

namespace wco {

AnalyticFunction::AnalyticFunction(Evaluator evaluator, FunctionMeta meta)
    : evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      meta_(std::move(meta)) {}

AnalyticFunction AnalyticFunction::with_meta(FunctionMeta meta) const {
    AnalyticFunction out = *this;
    out.meta_ = std::move(meta);
    return out;
}

std::string format_decimal(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

namespace {

std::string format_complex(cplx c) {
    if (c.imag() == 0.0) return format_decimal(c.real());
    std::string out = format_decimal(c.real());
    if (c.imag() >= 0.0) out += '+';
    return out + format_decimal(c.imag()) + "i";
}

}  // namespace

// --- Möbius automorphism ----------------------------------------------------------------------

MobiusAutomorphism::MobiusAutomorphism(cplx a) : a_(a) {
    if (!(std::abs(a) < 1.0)) throw SpecError("mobius_auto requires |a| < 1");
}

Jet2 MobiusAutomorphism::jet(cplx z) const {
    const cplx den = 1.0 - std::conj(a_) * z;
    const double s = std::norm(a_) - 1.0;
    return {(a_ - z) / den, s / (den * den), 2.0 * std::conj(a_) * s / (den * den * den)};
}

AnalyticFunction MobiusAutomorphism::as_function() const {
    FunctionMeta meta;
    CatalogSpec spec{"mobius_auto", {{"a", a_.real()}}, {}};
    if (a_.imag() != 0.0) spec.params["a_im"] = a_.imag();
    meta.label = spec.canonical();
    meta.claims_self_map = true;
    meta.claims_univalent = true;
    meta.continuous_on_closure = true;
    if (a_ == cplx{}) {
        meta.known_fixed_point = cplx{};
    } else {
        meta.known_fixed_point = (1.0 - std::sqrt(1.0 - std::norm(a_))) / std::conj(a_);
    }
    const MobiusAutomorphism self = *this;
    return AnalyticFunction([self](cplx z) { return self.jet(z); }, std::move(meta));
}

// --- spec text ----------------------------------------------------------------------------------

std::string CatalogSpec::canonical() const {
    std::string out = name;
    if (!coeffs.empty()) {
        out += ':';
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (i) out += ',';
            out += format_decimal(coeffs[i]);
        }
        return out;
    }
    bool first = true;
    for (const auto& [key, value] : params) {
        out += first ? ':' : ',';
        first = false;
        out += key + "=" + format_decimal(value);
    }
    return out;
}

namespace {

double parse_number(std::string_view text, std::string_view context) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw SpecError("malformed number '" + std::string(text) + "' in " + std::string(context));
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double require_param(const CatalogSpec& spec, const std::string& key) {
    const auto it = spec.params.find(key);
    if (it == spec.params.end()) {
        throw SpecError("function spec '" + spec.name + "' requires parameter '" + key + "'");
    }
    return it->second;
}

void require_keys(const CatalogSpec& spec, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : spec.params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw SpecError("unknown parameter '" + key + "' for function spec '" + spec.name + "'");
        }
    }
    if (!spec.coeffs.empty()) {
        throw SpecError("function spec '" + spec.name + "' takes key=value parameters");
    }
}

}  // namespace

CatalogSpec parse_catalog_spec(std::string_view text) {
    CatalogSpec spec;
    const auto colon = text.find(':');
    spec.name = std::string(text.substr(0, colon));
    if (spec.name.empty()) throw SpecError("empty function spec");
    if (colon == std::string_view::npos) return spec;

    const auto body = text.substr(colon + 1);
    if (body.empty()) throw SpecError("function spec '" + spec.name + "' has an empty parameter list");
    for (const auto part : split(body, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            if (!spec.params.empty()) throw SpecError("cannot mix positional and key=value parameters");
            spec.coeffs.push_back(parse_number(part, spec.name));
            continue;
        }
        if (!spec.coeffs.empty()) throw SpecError("cannot mix positional and key=value parameters");
        const std::string key(part.substr(0, eq));
        if (key.empty()) throw SpecError("empty parameter name in '" + std::string(text) + "'");
        if (!spec.params.emplace(key, parse_number(part.substr(eq + 1), spec.name)).second) {
            throw SpecError("duplicate parameter '" + key + "'");
        }
    }
    return spec;
}

AnalyticFunction make_catalog_function(const CatalogSpec& spec) {
    const auto& n = spec.name;
    if (n == "mobius_self_map") {
        require_keys(spec, {"lambda"});
        return mobius_self_map(require_param(spec, "lambda"));
    }
    if (n == "phi_r1") {
        require_keys(spec, {"r"});
        return phi_r1(require_param(spec, "r"));
    }
    if (n == "phi_rk") {
        require_keys(spec, {"k", "r"});
        return phi_rk(require_param(spec, "r"), require_param(spec, "k"));
    }
    if (n == "psi_power") {
        require_keys(spec, {"beta"});
        return psi_power(require_param(spec, "beta"));
    }
    if (n == "affine") {
        require_keys(spec, {"c0", "c1"});
        return affine(require_param(spec, "c0"), require_param(spec, "c1"));
    }
    if (n == "mobius_auto") {
        require_keys(spec, {"a", "a_im"});
        const double im = spec.params.count("a_im") ? spec.params.at("a_im") : 0.0;
        return mobius_auto({require_param(spec, "a"), im});
    }
    if (n == "log_inv1m") {
        require_keys(spec, {});
        return log_inv1m();
    }
    if (n == "polynomial") {
        if (!spec.params.empty() || spec.coeffs.empty()) {
            throw SpecError("polynomial spec takes a coefficient list, e.g. polynomial:2,1");
        }
        return polynomial(std::vector<cplx>(spec.coeffs.begin(), spec.coeffs.end()));
    }
    throw SpecError("unknown function family '" + n + "'");
}

AnalyticFunction make_catalog_function(std::string_view text) {
    return make_catalog_function(parse_catalog_spec(text));
}

// --- families -----------------------------------------------------------------------------------

AnalyticFunction mobius_self_map(double lambda) {
    if (!(lambda >= 0.5 && lambda < 1.0)) {
        throw SpecError("mobius_self_map requires lambda in [1/2, 1), got " + format_decimal(lambda));
    }
    const double c = 1.0 - lambda;
    FunctionMeta meta;
    meta.label = CatalogSpec{"mobius_self_map", {{"lambda", lambda}}, {}}.canonical();
    meta.claims_self_map = true;
    meta.claims_univalent = true;
    meta.continuous_on_closure = true;
    meta.known_fixed_point = cplx{};
    return AnalyticFunction(
        [lambda, c](cplx z) {
            const cplx den = 1.0 - c * z;
            const cplx den2 = den * den;
            return Jet2{lambda * z / den, lambda / den2, 2.0 * lambda * c / (den2 * den)};
        },
        std::move(meta));
}

namespace {

// exp(g) with g(z) = (z(rk-1) + (r-k))/(1 - rz); g' = (r^2-1)/(1-rz)^2, g'' = 2r(r^2-1)/(1-rz)^3.
AnalyticFunction exp_mobius(double r, double k, std::string label) {
    FunctionMeta meta;
    meta.label = std::move(label);
    meta.claims_self_map = true;
    meta.claims_univalent = true;
    meta.continuous_on_closure = true;
    return AnalyticFunction(
        [r, k](cplx z) {
            const cplx den = 1.0 - r * z;
            const cplx g = (z * (r * k - 1.0) + (r - k)) / den;
            const cplx g1 = (r * r - 1.0) / (den * den);
            const cplx g2 = 2.0 * r * g1 / den;
            const cplx v = std::exp(g);
            return Jet2{v, v * g1, v * (g1 * g1 + g2)};
        },
        std::move(meta));
}

}  // namespace

AnalyticFunction phi_r1(double r) {
    if (!(r > 0.0 && r < 1.0)) throw SpecError("phi_r1 requires r in (0, 1), got " + format_decimal(r));
    return exp_mobius(r, 1.0, CatalogSpec{"phi_r1", {{"r", r}}, {}}.canonical());
}

AnalyticFunction phi_rk(double r, double k) {
    if (!(r > 0.0 && r < 1.0)) throw SpecError("phi_rk requires r in (0, 1), got " + format_decimal(r));
    if (!(k > 1.0)) throw SpecError("phi_rk requires k > 1, got " + format_decimal(k));
    return exp_mobius(r, k, CatalogSpec{"phi_rk", {{"k", k}, {"r", r}}, {}}.canonical());
}

AnalyticFunction psi_power(double beta) {
    if (!(beta > 0.0)) throw SpecError("psi_power requires beta > 0, got " + format_decimal(beta));
    FunctionMeta meta;
    meta.label = CatalogSpec{"psi_power", {{"beta", beta}}, {}}.canonical();
    meta.claims_univalent = beta <= 2.0;
    meta.continuous_on_closure = true;
    return AnalyticFunction(
        [beta](cplx z) {
            const cplx w = 1.0 - z;
            if (w == cplx{}) return Jet2{0.0, 0.0, 0.0};
            const cplx p = std::pow(w, beta);
            return Jet2{p, -beta * p / w, beta * (beta - 1.0) * p / (w * w)};
        },
        std::move(meta));
}

AnalyticFunction polynomial(std::vector<cplx> coeffs) {
    if (coeffs.empty()) throw SpecError("polynomial needs at least one coefficient");
    while (coeffs.size() > 1 && coeffs.back() == cplx{}) coeffs.pop_back();

    FunctionMeta meta;
    bool real = std::all_of(coeffs.begin(), coeffs.end(), [](cplx c) { return c.imag() == 0.0; });
    if (real) {
        CatalogSpec spec{"polynomial", {}, {}};
        for (auto c : coeffs) spec.coeffs.push_back(c.real());
        meta.label = spec.canonical();
    } else {
        meta.label = "polynomial:";
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            meta.label += (i ? "," : "") + format_complex(coeffs[i]);
        }
    }
    const TaylorSeries p{std::vector<cplx>(coeffs)};

    // Max modulus on the unit circle decides the self-map claim; a unimodular constant does
    // not map into the open disc.
    double circle_max = 0.0;
    for (const auto& z : sample_circle(1.0, 4096)) circle_max = std::max(circle_max, std::abs(evaluate(p, z)));
    const bool constant = coeffs.size() == 1;
    meta.claims_self_map = constant ? std::abs(coeffs[0]) < 1.0 : circle_max <= 1.0 + 1e-12;
    meta.claims_univalent = coeffs.size() == 2;
    meta.continuous_on_closure = true;
    if (coeffs.size() == 2 && coeffs[1] != 1.0) {
        const cplx a = coeffs[0] / (1.0 - coeffs[1]);
        if (std::abs(a) < 1.0) meta.known_fixed_point = a;
    } else if (coeffs.size() == 1 && std::abs(coeffs[0]) < 1.0) {
        meta.known_fixed_point = coeffs[0];
    }

    return AnalyticFunction(
        [c = std::move(coeffs)](cplx z) {
            cplx v{}, d1{}, d2{};
            for (std::size_t n = c.size(); n-- > 0;) {
                d2 = d2 * z + 2.0 * d1;
                d1 = d1 * z + v;
                v = v * z + c[n];
            }
            return Jet2{v, d1, d2};
        },
        std::move(meta));
}

AnalyticFunction affine(cplx c0, cplx c1) {
    auto f = polynomial({c0, c1});
    FunctionMeta meta = f.meta();
    CatalogSpec spec{"affine", {{"c0", c0.real()}, {"c1", c1.real()}}, {}};
    meta.label = (c0.imag() == 0.0 && c1.imag() == 0.0)
                     ? spec.canonical()
                     : "affine:c0=" + format_complex(c0) + ",c1=" + format_complex(c1);
    meta.claims_self_map = std::abs(c0) + std::abs(c1) <= 1.0 && (c1 != cplx{} || std::abs(c0) < 1.0);
    meta.claims_univalent = c1 != cplx{};
    return f.with_meta(std::move(meta));
}

AnalyticFunction mobius_auto(cplx a) { return MobiusAutomorphism(a).as_function(); }

AnalyticFunction log_inv1m() {
    FunctionMeta meta;
    meta.label = "log_inv1m";
    meta.claims_univalent = true;
    return AnalyticFunction(
        [](cplx z) {
            const cplx w = 1.0 - z;
            return Jet2{-std::log(w), 1.0 / w, 1.0 / (w * w)};
        },
        std::move(meta));
}

// --- composition and conjugation ----------------------------------------------------------------

AnalyticFunction jet_compose(const AnalyticFunction& outer, const AnalyticFunction& inner) {
    if (!inner.claims_self_map()) {
        throw PreconditionError("jet_compose: inner function '" + inner.label() +
                                "' is not a self-map of the disc");
    }
    FunctionMeta meta;
    meta.label = "compose(" + outer.label() + ";" + inner.label() + ")";
    meta.claims_self_map = outer.claims_self_map();
    meta.claims_univalent = outer.claims_univalent() && inner.claims_univalent();
    meta.continuous_on_closure = outer.meta().continuous_on_closure && inner.meta().continuous_on_closure;
    return AnalyticFunction(
        [outer, inner](cplx z) {
            const Jet2 g = inner.jet(z);
            const Jet2 f = outer.jet(g.v);
            return Jet2{f.v, f.d1 * g.d1, f.d2 * g.d1 * g.d1 + f.d1 * g.d2};
        },
        std::move(meta));
}

std::pair<AnalyticFunction, AnalyticFunction> conjugate_to_origin(const AnalyticFunction& psi,
                                                                  const AnalyticFunction& phi,
                                                                  cplx a) {
    if (!(std::abs(a) < 1.0)) throw PreconditionError("conjugate_to_origin requires |a| < 1");
    if (std::abs(phi(a) - a) > 1e-8) {
        throw PreconditionError("conjugate_to_origin: a is not a fixed point of '" + phi.label() + "'");
    }
    const auto phi_a = mobius_auto(a);
    auto zeta = jet_compose(psi, phi_a);
    auto eta = jet_compose(phi_a, jet_compose(phi, phi_a));
    FunctionMeta eta_meta = eta.meta();
    eta_meta.known_fixed_point = cplx{};
    return {std::move(zeta), eta.with_meta(std::move(eta_meta))};
}

AnalyticFunction factor_tau(const AnalyticFunction& phi) {
    const Jet2 at0 = phi.jet(0.0);
    if (std::abs(at0.v) > 1e-10) {
        throw PreconditionError("factor_tau requires phi(0) = 0 (phi = z tau); got |phi(0)| = " +
                                format_decimal(std::abs(at0.v)));
    }
    // Near the removable singularity tau comes from phi's Taylor coefficients.
    constexpr double series_radius = 0.25;
    ExtractionConfig cfg;
    cfg.sample_radius = 0.5;
    cfg.sample_count = 256;
    const auto phi_series = extract_coeffs([&](cplx z) { return phi(z); }, cfg, 48).series;
    std::vector<cplx> t(phi_series.order());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = phi_series[n + 1];

    FunctionMeta meta;
    meta.label = "tau(" + phi.label() + ")";
    return AnalyticFunction(
        [phi, t = std::move(t), at0](cplx z) {
            if (z == cplx{}) return Jet2{at0.d1, at0.d2 / 2.0, 2.0 * t[2]};
            if (std::abs(z) < series_radius) {
                cplx v{}, d1{}, d2{};
                for (std::size_t n = t.size(); n-- > 0;) {
                    d2 = d2 * z + 2.0 * d1;
                    d1 = d1 * z + v;
                    v = v * z + t[n];
                }
                return Jet2{v, d1, d2};
            }
            const Jet2 p = phi.jet(z);
            const cplx z2 = z * z;
            return Jet2{p.v / z, (p.d1 * z - p.v) / z2, (p.d2 * z2 - 2.0 * z * p.d1 + 2.0 * p.v) / (z2 * z)};
        },
        std::move(meta));
}

// --- fixed points -------------------------------------------------------------------------------

namespace {

constexpr double boundary_margin = 1e-6;

struct NewtonResult {
    enum class Kind { converged, escaped, stalled } kind;
    cplx z;
};

NewtonResult newton_fixed_point(const AnalyticFunction& phi, cplx z, int max_steps) {
    for (int i = 0; i < max_steps; ++i) {
        const Jet2 j = phi.jet(z);
        const cplx den = j.d1 - 1.0;
        if (den == cplx{}) return {NewtonResult::Kind::stalled, z};
        const cplx step = (j.v - z) / den;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) >= 1.0 - boundary_margin) {
            return {NewtonResult::Kind::escaped, z};
        }
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
            return {NewtonResult::Kind::converged, z};
        }
    }
    return {NewtonResult::Kind::stalled, z};
}

}  // namespace

std::optional<cplx> find_fixed_point(const AnalyticFunction& phi) {
    if (!phi.claims_self_map()) {
        throw PreconditionError("find_fixed_point requires a self-map of the disc; '" + phi.label() +
                                "' is not one");
    }
    constexpr int max_steps = 100000;
    constexpr int escape_run = 100;
    cplx z{};
    int near_boundary = 0;
    for (int step = 0; step < max_steps; ++step) {
        const cplx next = phi(z);
        const bool settled = std::abs(next - z) < 1e-13;
        z = next;
        if (std::abs(z) > 1.0 - boundary_margin) {
            if (++near_boundary >= escape_run) return std::nullopt;
        } else {
            near_boundary = 0;
        }
        if (settled && std::abs(z) < 1.0 - boundary_margin) {
            const auto polished = newton_fixed_point(phi, z, 50);
            if (polished.kind == NewtonResult::Kind::converged && std::abs(polished.z - z) < 1e-8) {
                return polished.z;
            }
            return z;
        }
    }
    // Slow orbits (parabolic boundary attraction, elliptic rotation): let Newton decide.
    const auto polished = newton_fixed_point(phi, z, 200);
    if (polished.kind == NewtonResult::Kind::converged && std::abs(phi(polished.z) - polished.z) < 1e-12) {
        return polished.z;
    }
    if (polished.kind == NewtonResult::Kind::escaped) return std::nullopt;
    throw NumericalError("inconclusive fixed-point search for '" + phi.label() + "'");
}

bool univalence_grid_check(const AnalyticFunction& f, double max_radius, std::size_t rings,
                           std::size_t per_ring, double tol) {
    std::vector<cplx> pts{0.0};
    for (std::size_t i = 1; i <= rings; ++i) {
        const double r = max_radius * static_cast<double>(i) / static_cast<double>(rings);
        for (const auto& z : sample_circle(r, per_ring)) pts.push_back(z);
    }
    std::vector<cplx> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (std::abs(vals[i] - vals[j]) <= tol * std::abs(pts[i] - pts[j])) return false;
        }
    }
    return true;
}

}  // namespace wco
