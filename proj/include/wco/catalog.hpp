#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wco/series.hpp"

namespace wco {

/// Value, first and second derivative of a function at one point.
struct Jet2 {
    cplx v;
    cplx d1;
    cplx d2;
};

struct FunctionMeta {
    std::string label;
    bool claims_self_map = false;
    bool claims_univalent = false;
    /// Extends continuously to the closed disc (needed by the boundary-zero test).
    bool continuous_on_closure = false;
    std::optional<cplx> known_fixed_point;
};

/// Holomorphic function on the open unit disc with closed-form order-2 jets.
///
/// Copies share the (stateless) evaluator, so values are cheap to pass around and safe to
/// evaluate from several threads at once.
class AnalyticFunction {
public:
    using Evaluator = std::function<Jet2(cplx)>;

    AnalyticFunction(Evaluator evaluator, FunctionMeta meta);

    Jet2 jet(cplx z) const { return (*evaluator_)(z); }
    cplx operator()(cplx z) const { return jet(z).v; }

    const FunctionMeta& meta() const { return meta_; }
    const std::string& label() const { return meta_.label; }
    bool claims_self_map() const { return meta_.claims_self_map; }
    bool claims_univalent() const { return meta_.claims_univalent; }

    /// Same evaluator with replaced metadata.
    AnalyticFunction with_meta(FunctionMeta meta) const;

private:
    std::shared_ptr<const Evaluator> evaluator_;
    FunctionMeta meta_;
};

/// Involutive disc automorphism z -> (a - z)/(1 - conj(a) z), swapping 0 and a.
class MobiusAutomorphism {
public:
    explicit MobiusAutomorphism(cplx a);

    cplx a() const { return a_; }
    Jet2 jet(cplx z) const;
    cplx operator()(cplx z) const { return jet(z).v; }
    AnalyticFunction as_function() const;

private:
    cplx a_;
};

/// Parsed form of `name(:key=value(,key=value)*)?`, or `polynomial:c0,c1,...`.
struct CatalogSpec {
    std::string name;
    std::map<std::string, double> params;
    std::vector<double> coeffs;

    /// Canonical text: keys sorted, shortest round-trip decimals.
    std::string canonical() const;
};

CatalogSpec parse_catalog_spec(std::string_view text);

AnalyticFunction make_catalog_function(const CatalogSpec& spec);
AnalyticFunction make_catalog_function(std::string_view text);

// Families. Each validates its parameter range and throws SpecError otherwise.

/// lambda z / (1 - (1 - lambda) z), lambda in [1/2, 1); fixes 0 with derivative lambda.
AnalyticFunction mobius_self_map(double lambda);
/// exp(((1 - r)(z + 1))/(r z - 1)), r in (0, 1).
AnalyticFunction phi_r1(double r);
/// exp((z(rk - 1) + (r - k))/(1 - r z)), r in (0, 1), k > 1.
AnalyticFunction phi_rk(double r, double k);
/// (1 - z)^beta on the principal branch, beta > 0.
AnalyticFunction psi_power(double beta);
AnalyticFunction polynomial(std::vector<cplx> coeffs);
AnalyticFunction affine(cplx c0, cplx c1);
AnalyticFunction mobius_auto(cplx a);
/// log(1/(1 - z)); Bloch but unbounded.
AnalyticFunction log_inv1m();

/// outer o inner with the order-2 chain rule. Throws PreconditionError unless inner is a
/// self-map.
AnalyticFunction jet_compose(const AnalyticFunction& outer, const AnalyticFunction& inner);

/// Moves the fixed point a of phi to the origin: zeta = psi o phi_a, eta = phi_a o phi o phi_a.
/// Throws PreconditionError if |a| >= 1 or |phi(a) - a| > 1e-8.
std::pair<AnalyticFunction, AnalyticFunction> conjugate_to_origin(const AnalyticFunction& psi,
                                                                  const AnalyticFunction& phi,
                                                                  cplx a);

/// tau with phi(z) = z tau(z). Throws PreconditionError if |phi(0)| > 1e-10.
AnalyticFunction factor_tau(const AnalyticFunction& phi);

/// Fixed point reached by iterating phi from 0, or nullopt when the orbit is attracted to the
/// boundary. Throws PreconditionError for non-self-maps and NumericalError when neither
/// outcome is established within the step budget.
std::optional<cplx> find_fixed_point(const AnalyticFunction& phi);

/// Looks for two sample points with |f(z1) - f(z2)| <= tol |z1 - z2| on a polar grid of
/// radius <= max_radius. Returns false if such a near-collision is found.
bool univalence_grid_check(const AnalyticFunction& f, double max_radius = 0.95,
                           std::size_t rings = 24, std::size_t per_ring = 48,
                           double tol = 1e-6);

/// Shortest decimal that round-trips to x.
std::string format_decimal(double x);

}  // namespace wco
