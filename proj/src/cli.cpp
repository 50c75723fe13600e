#include "wco/cli.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "wco/catalog.hpp"
#include "wco/criteria.hpp"
#include "wco/dirichlet.hpp"
#include "wco/error.hpp"
#include "wco/grid.hpp"
#include "wco/operator.hpp"
#include "wco/spectral.hpp"

namespace wco {

void RunConfig::validate() const {
    if (!(alpha > -1.0 && alpha < 1.0)) throw SpecError("--alpha must lie in (-1, 1)");
    if (n < 8 || n > 4096) throw SpecError("--N must lie in [8, 4096]");
    if (m_max < 6 || m_max > 20) throw SpecError("--M-max must lie in [6, 20]");
    if (t < 4) throw SpecError("--T must be at least 4");
    if (count == 0) throw SpecError("--count must be positive");
    if (!(radius > 0.0 && radius <= 0.8)) throw SpecError("--radius must lie in (0, 0.8]");
    for (const auto& w : z) {
        if (!(std::abs(w) <= 0.8)) throw SpecError("--z points must satisfy |z| <= 0.8");
    }
    if (radial_nodes == 0 || angular_nodes == 0) throw SpecError("quadrature node counts must be positive");
    if (r && !(*r > 0.0 && *r < 1.0)) throw SpecError("--r must lie in (0, 1)");
    if (k && !(*k > 1.0)) throw SpecError("--k must be > 1");
}

Json RunConfig::to_json() const {
    Json j;
    j["command"] = command;
    j["alpha"] = alpha;
    j["psi"] = psi;
    j["phi"] = phi;
    j["N"] = n;
    j["M_max"] = m_max;
    j["T"] = t;
    j["output"] = output;
    j["count"] = count;
    j["required"] = required;
    Json zs = Json::array();
    for (const auto& w : z) zs.push_back(complex_to_json(w));
    j["z"] = zs;
    j["points"] = points;
    j["radius"] = radius;
    j["radial_nodes"] = radial_nodes;
    j["angular_nodes"] = angular_nodes;
    j["vary"] = vary;
    j["only"] = only;
    j["r"] = r ? Json(*r) : Json(nullptr);
    j["k"] = k ? Json(*k) : Json(nullptr);
    return j;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const SpecError*>(&e)) return 2;
    if (dynamic_cast<const PreconditionError*>(&e)) return 3;
    if (dynamic_cast<const InapplicableError*>(&e)) return 4;
    return 1;
}

namespace {

Json header(const RunConfig& cfg) {
    Json j;
    j["schema"] = report_schema;
    j["run_config"] = cfg.to_json();
    return j;
}

void merge(Json& into, const Json& from) {
    for (const auto& [key, value] : from.items()) into[key] = value;
}

std::string number(double x) {
    if (!std::isfinite(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string flag(const std::optional<bool>& b) {
    return b ? (*b ? "true" : "false") : "";
}

// Terms needed so that |w|^{2N} < e^-40.
std::size_t kernel_order(double x) {
    if (x == 0.0) return 1;
    return static_cast<std::size_t>(std::ceil(40.0 / -std::log(x))) + 1;
}

Json kernel_norm_json(cplx w, const SpaceParams& p) {
    const double x = std::norm(w);
    const std::size_t order = kernel_order(x);
    const auto rep = kernel_norm_sq(w, p, order);
    Json j;
    j["abs_w"] = std::abs(w);
    j["order"] = order;
    j["partial_sum"] = rep.partial_sum;
    j["tail_bound"] = rep.tail_bound;
    j["comparison"] = rep.comparison ? Json(*rep.comparison) : Json(nullptr);
    const auto ratio = rep.ratio();
    j["ratio"] = ratio ? Json(*ratio) : Json(nullptr);
    j["ratio_in_band"] = ratio ? Json(*ratio >= 0.9 && *ratio <= 1.1) : Json(nullptr);
    return j;
}

}  // namespace

std::string cmd_analyze(const RunConfig& cfg) {
    const auto psi = make_catalog_function(cfg.psi);
    const auto phi = make_catalog_function(cfg.phi);
    const auto report = evaluate_quantities(psi, phi, SpaceParams(cfg.alpha), AnnularGrid(cfg.m_max, cfg.t));
    Json doc = header(cfg);
    merge(doc, report.to_json());
    return dump_json(doc);
}

std::string cmd_spectrum(const RunConfig& cfg) {
    const auto psi = make_catalog_function(cfg.psi);
    const auto phi = make_catalog_function(cfg.phi);
    const SpaceParams p(cfg.alpha);
    const auto report = analyze_spectrum(psi, phi, p, cfg.n, cfg.count, cfg.required);
    const auto conj = conjugation_invariance_check(psi, phi, report.prediction.a, p, cfg.n,
                                                   std::min(cfg.required, report.prediction.predicted.size()));
    Json doc = header(cfg);
    merge(doc, report.to_json());
    doc["conjugation"] = conj.to_json();
    return dump_json(doc);
}

std::string cmd_kernel_check(const RunConfig& cfg) {
    const auto psi = make_catalog_function(cfg.psi);
    const auto phi = make_catalog_function(cfg.phi);
    const SpaceParams p(cfg.alpha);
    const auto m = assemble_matrix(psi, phi, p, cfg.n);

    std::vector<cplx> pts = cfg.z;
    if (pts.empty()) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (std::size_t i = 0; i < cfg.points; ++i) {
            const double rad = cfg.radius * std::sqrt(u(rng));
            const double theta = 2.0 * std::numbers::pi * u(rng);
            pts.push_back(std::polar(rad, theta));
        }
    }
    Json checks = Json::array();
    double worst = 0.0;
    for (const auto& z : pts) {
        const auto r = adjoint_kernel_check(m, psi, phi, z);
        worst = std::max(worst, r.residual);
        Json e;
        e["z"] = complex_to_json(r.z);
        e["phi_z"] = complex_to_json(r.phi_z);
        e["residual"] = r.residual;
        e["tail_z"] = r.tail_z;
        e["tail_phi_z"] = r.tail_phi_z;
        checks.push_back(std::move(e));
    }
    Json doc = header(cfg);
    doc["N"] = cfg.n;
    doc["matrix_max_column_error"] = m.max_column_error();
    doc["adjoint_kernel"] = std::move(checks);
    doc["max_residual"] = worst;
    Json norms = Json::array();
    if (cfg.alpha > 0.0) {
        for (double w : {0.9, 0.99, 0.999}) norms.push_back(kernel_norm_json(w, p));
    }
    doc["kernel_norms"] = std::move(norms);
    return dump_json(doc);
}

std::string cmd_norm_check(const RunConfig& cfg) {
    const auto f = make_catalog_function(cfg.psi);
    const SpaceParams p(cfg.alpha);
    const auto ex = extract_coeffs([&](cplx z) { return f(z); }, ExtractionConfig::for_order(cfg.n - 1), cfg.n - 1);
    const double coeff = norm_sq_coeff(ex.series, p);
    const QuadratureGrid grid{cfg.radial_nodes, cfg.angular_nodes};

    Json doc = header(cfg);
    doc["function"] = f.label();
    Json c;
    c["value"] = coeff;
    c["aliasing_estimate"] = ex.aliasing_estimate;
    c["bergman_value"] = norm_sq_coeff(ex.series, p, NormSpace::bergman);
    doc["coefficient_norm_sq"] = c;
    for (auto [name, variant] : {std::pair{"first_derivative", QuadratureVariant::first_derivative},
                                 std::pair{"second_derivative", QuadratureVariant::second_derivative}}) {
        const auto q = norm_sq_quadrature(f, p, grid, variant);
        Json e;
        e["value"] = q.value;
        e["refined_value"] = q.refined_value;
        e["relative_change"] = q.relative_change;
        e["too_coarse"] = q.too_coarse;
        e["ratio_to_coefficient_norm"] = q.value / coeff;
        doc[name] = e;
    }
    const auto g = growth_bound_check(f, AnnularGrid(cfg.m_max, cfg.t));
    Json gj;
    gj["bloch_constant"] = g.bloch_constant;
    gj["min_slack"] = g.min_slack;
    gj["max_slack"] = g.max_slack;
    gj["holds"] = g.holds;
    doc["growth_bound"] = gj;
    return dump_json(doc);
}

namespace {

struct VaryRange {
    std::string target;  // "alpha", "psi" or "phi"
    std::string param;
    std::vector<double> values;
};

VaryRange parse_vary(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw SpecError("--vary expects key=start:stop:steps");
    VaryRange v;
    const std::string key = text.substr(0, eq);
    if (key == "alpha") {
        v.target = "alpha";
    } else if (key.rfind("psi.", 0) == 0 || key.rfind("phi.", 0) == 0) {
        v.target = key.substr(0, 3);
        v.param = key.substr(4);
        if (v.param.empty()) throw SpecError("--vary key needs a parameter name");
    } else {
        throw SpecError("--vary key must be alpha, psi.<param> or phi.<param>");
    }
    double start = 0.0, stop = 0.0;
    long steps = 0;
    const std::string range = text.substr(eq + 1);
    char tail = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%ld%c", &start, &stop, &steps, &tail) != 3) {
        throw SpecError("--vary range must be start:stop:steps");
    }
    if (steps <= 0) throw SpecError("--vary range is empty");
    for (long i = 0; i < steps; ++i) {
        v.values.push_back(steps == 1 ? start
                                      : start + (stop - start) * static_cast<double>(i) /
                                                    static_cast<double>(steps - 1));
    }
    return v;
}

}  // namespace

std::string cmd_sweep(const RunConfig& cfg) {
    if (cfg.vary.empty()) throw SpecError("sweep needs --vary key=start:stop:steps");
    const auto range = parse_vary(cfg.vary);
    std::ostringstream out;
    out << "param,value,alpha,psi,phi,sufficient_bounded,sufficient_compact,necessary_bounded_ok,"
           "necessary_compact_ok,iff_bounded,iff_compact,spectrum,err0,err1,err2,err3,err4,err5\n";
    for (double value : range.values) {
        RunConfig row = cfg;
        if (range.target == "alpha") {
            row.alpha = value;
        } else {
            auto spec = parse_catalog_spec(range.target == "psi" ? cfg.psi : cfg.phi);
            spec.params[range.param] = value;
            (range.target == "psi" ? row.psi : row.phi) = spec.canonical();
        }
        row.validate();
        const auto psi = make_catalog_function(row.psi);
        const auto phi = make_catalog_function(row.phi);
        const SpaceParams p(row.alpha);
        const auto rep = evaluate_quantities(psi, phi, p, AnnularGrid(row.m_max, row.t));

        std::string status;
        std::vector<std::string> errs(6);
        try {
            const auto spec = analyze_spectrum(psi, phi, p, row.n, row.count, row.required);
            status = spec.pass ? "pass" : "fail";
            for (std::size_t i = 0; i < 6 && i < spec.matches.size(); ++i) errs[i] = number(spec.matches[i].err);
            if (spec.prediction.quasi_nilpotent) status += "-quasi-nilpotent";
        } catch (const InapplicableError&) {
            status = "inapplicable";
        }
        out << (range.target == "alpha" ? "alpha" : range.target + "." + range.param) << ','
            << number(value) << ',' << number(row.alpha) << ',' << psi.label() << ',' << phi.label() << ','
            << flag(rep.sufficient_bounded) << ',' << flag(rep.sufficient_compact) << ','
            << flag(rep.necessary_bounded_ok) << ',' << flag(rep.necessary_compact_ok) << ','
            << flag(rep.iff_bounded) << ',' << flag(rep.iff_compact) << ',' << status;
        for (const auto& e : errs) out << ',' << e;
        out << '\n';
    }
    return out.str();
}

namespace {

struct Scenario {
    std::string name;
    std::string expectation;
    std::function<Json(bool&)> run;  // returns runs, clears ok on any mismatch
};

std::vector<double> alphas_for(const RunConfig& cfg, std::vector<double> defaults, bool core_only) {
    if (!cfg.alpha_given) return defaults;
    if (core_only && !(cfg.alpha > 0.0 && cfg.alpha < 1.0)) return {};
    return {cfg.alpha};
}

Json verdict_run(double alpha, const AnalyticFunction& psi, const AnalyticFunction& phi,
                 const CriteriaReport& rep) {
    Json j;
    j["alpha"] = alpha;
    j["psi"] = psi.label();
    j["phi"] = phi.label();
    j["verdicts"] = rep.to_json()["verdicts"];
    return j;
}

Json spectrum_run(double alpha, const AnalyticFunction& psi, const AnalyticFunction& phi,
                  const RunConfig& cfg, bool& ok) {
    const SpaceParams p(alpha);
    const auto rep = analyze_spectrum(psi, phi, p, cfg.n, cfg.count, cfg.required);
    const auto conj = conjugation_invariance_check(psi, phi, rep.prediction.a, p, cfg.n,
                                                   std::min(cfg.required, rep.prediction.predicted.size()));
    const bool run_ok = rep.pass && rep.prediction.hypotheses.satisfied && conj.pass;
    ok = ok && run_ok;
    Json j;
    j["alpha"] = alpha;
    j["psi"] = psi.label();
    j["phi"] = phi.label();
    j["a"] = complex_to_json(rep.prediction.a);
    j["psi_a"] = complex_to_json(rep.prediction.psi_a);
    j["phi_prime_a"] = complex_to_json(rep.prediction.phi_prime_a);
    j["hypotheses"] = rep.prediction.hypotheses.to_json();
    Json errs = Json::array();
    for (std::size_t i = 0; i < rep.matches.size() && i < cfg.required; ++i) {
        Json e;
        e["predicted"] = complex_to_json(rep.matches[i].predicted);
        e["lambda"] = complex_to_json(rep.matches[i].lambda);
        e["err"] = rep.matches[i].err;
        errs.push_back(std::move(e));
    }
    j["leading_matches"] = std::move(errs);
    j["spectrum_pass"] = rep.pass;
    j["conjugated_diagonal_error"] = conj.diagonal_error;
    j["conjugation_pass"] = conj.pass;
    j["ok"] = run_ok;
    return j;
}

std::vector<Scenario> scenarios(const RunConfig& cfg) {
    const AnnularGrid grid(cfg.m_max, cfg.t);
    std::vector<Scenario> list;

    list.push_back({"phi_r1", "psi = 1 with phi_{r,1}: bounded (sufficient conditions hold) for alpha in (-1, 1)",
                    [cfg, grid](bool& ok) {
                        Json runs = Json::array();
                        const std::vector<double> rs = cfg.r ? std::vector<double>{*cfg.r} : std::vector<double>{0.3, 0.6};
                        for (double r : rs) {
                            for (double alpha : alphas_for(cfg, {-0.5, 0.0, 0.5}, false)) {
                                const auto psi = polynomial({1.0});
                                const auto phi = phi_r1(r);
                                const auto rep = evaluate_quantities(psi, phi, SpaceParams(alpha), grid);
                                const bool run_ok = rep.sufficient_bounded.value_or(false);
                                ok = ok && run_ok;
                                Json j = verdict_run(alpha, psi, phi, rep);
                                j["r"] = r;
                                j["ok"] = run_ok;
                                runs.push_back(std::move(j));
                            }
                        }
                        return runs;
                    }});

    list.push_back({"ex1", "psi = (1-z)^{2+alpha}, Mobius self-map with lambda = 1/2: compact for alpha in (-1, 1)",
                    [cfg, grid](bool& ok) {
                        Json runs = Json::array();
                        for (double alpha : alphas_for(cfg, {-0.5, 0.0, 0.5}, false)) {
                            const auto psi = psi_power(2.0 + alpha);
                            const auto phi = mobius_self_map(0.5);
                            const auto rep = evaluate_quantities(psi, phi, SpaceParams(alpha), grid);
                            const bool run_ok = rep.sufficient_compact.value_or(false);
                            ok = ok && run_ok;
                            Json j = verdict_run(alpha, psi, phi, rep);
                            // sup_m s_m / (1 - r_m^2)^{alpha/2 + 1} for the weighted ratio quantity
                            const auto& s = rep.quantity(QuantityTag::K_half_alpha_plus1).annulus_max;
                            double c = 0.0;
                            for (int m = 1; m <= grid.m_max(); ++m) {
                                c = std::max(c, s[static_cast<std::size_t>(m - 1)] /
                                                    std::pow(grid.one_minus_r_sq(m), 0.5 * alpha + 1.0));
                            }
                            j["weighted_ratio_decay_constant"] = c;
                            j["ok"] = run_ok;
                            runs.push_back(std::move(j));
                        }
                        return runs;
                    }});

    list.push_back({"exx1", "same pair: spectrum {lambda^n} together with 0",
                    [cfg](bool& ok) {
                        Json runs = Json::array();
                        for (double alpha : alphas_for(cfg, {-0.5, 0.0, 0.5}, false)) {
                            runs.push_back(spectrum_run(alpha, psi_power(2.0 + alpha), mobius_self_map(0.5), cfg, ok));
                        }
                        return runs;
                    }});

    list.push_back({"exx2", "psi = z^2 with phi_{r,k}: spectrum {a^2 phi'(a)^n} together with 0, a the interior fixed point",
                    [cfg](bool& ok) {
                        Json runs = Json::array();
                        const double r = cfg.r.value_or(0.5);
                        const double k = cfg.k.value_or(2.0);
                        for (double alpha : alphas_for(cfg, {-0.5, 0.0, 0.5}, false)) {
                            Json j = spectrum_run(alpha, polynomial({0.0, 0.0, 1.0}), phi_rk(r, k), cfg, ok);
                            j["r"] = r;
                            j["k"] = k;
                            runs.push_back(std::move(j));
                        }
                        return runs;
                    }});

    list.push_back({"remark", "psi = 2 + z, phi = (1 + z^2)/2: not compact for alpha in (0, 1)",
                    [cfg, grid](bool& ok) {
                        Json runs = Json::array();
                        for (double alpha : alphas_for(cfg, {0.25, 0.5, 0.75}, true)) {
                            const auto psi = polynomial({2.0, 1.0});
                            const auto phi = polynomial({0.5, 0.0, 0.5});
                            const SpaceParams p(alpha);
                            const auto rep = evaluate_quantities(psi, phi, p, grid);
                            const auto bz = check_corollary_boundary_zero(psi, phi, p, grid);
                            const bool run_ok = rep.necessary_compact_ok == std::optional<bool>(false) &&
                                                bz.verdict == "not compact";
                            ok = ok && run_ok;
                            Json j = verdict_run(alpha, psi, phi, rep);
                            j["fixed_point_in_disc"] = false;
                            j["boundary_zero"] = bz.to_json();
                            j["ok"] = run_ok;
                            runs.push_back(std::move(j));
                        }
                        return runs;
                    }});
    return list;
}

}  // namespace

PaperExamplesResult cmd_paper_examples(const RunConfig& cfg) {
    auto list = scenarios(cfg);
    if (!cfg.only.empty()) {
        std::erase_if(list, [&](const Scenario& s) { return s.name != cfg.only; });
        if (list.empty()) throw SpecError("--only must be one of phi_r1, ex1, exx1, exx2, remark");
    }
    PaperExamplesResult result;
    result.all_consistent = true;
    Json doc = header(cfg);
    Json out = Json::array();
    for (const auto& s : list) {
        Json e;
        e["name"] = s.name;
        e["expected"] = s.expectation;
        bool ok = true;
        try {
            Json runs = s.run(ok);
            const bool empty = runs.empty();
            e["runs"] = std::move(runs);
            e["status"] = empty ? "skipped" : ok ? "consistent-with-paper" : "inconsistent-with-paper";
        } catch (const std::exception& ex) {
            ok = false;
            e["runs"] = Json::array();
            e["status"] = "error";
            e["error"] = ex.what();
        }
        result.all_consistent = result.all_consistent && ok;
        out.push_back(std::move(e));
    }
    doc["scenarios"] = std::move(out);
    doc["all_consistent"] = result.all_consistent;
    result.document = dump_json(doc);
    return result;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        if (cfg.command == "analyze") {
            out << cmd_analyze(cfg);
        } else if (cfg.command == "spectrum") {
            out << cmd_spectrum(cfg);
        } else if (cfg.command == "kernel-check") {
            out << cmd_kernel_check(cfg);
        } else if (cfg.command == "norm-check") {
            out << cmd_norm_check(cfg);
        } else if (cfg.command == "sweep") {
            out << cmd_sweep(cfg);
        } else if (cfg.command == "paper-examples") {
            const auto r = cmd_paper_examples(cfg);
            out << r.document;
            if (!r.all_consistent) {
                err << "error: at least one scenario is not consistent with its stated conclusion\n";
                return 1;
            }
        } else {
            throw SpecError("unknown command " + cfg.command);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace wco
