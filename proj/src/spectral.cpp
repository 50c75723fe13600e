#include "wco/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "wco/error.hpp"
#include "wco/parallel.hpp"

namespace wco {

namespace {

Json complex_list(std::span<const cplx> values) {
    Json j = Json::array();
    for (const cplx& v : values) j.push_back(complex_to_json(v));
    return j;
}

bool spectrum_less(const cplx& x, const cplx& y) {
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (ax != ay) return ax > ay;
    return std::arg(x) < std::arg(y);
}

// Eigenvectors of a lower triangular L by forward substitution from x_k = 1. Returns nullopt
// when a repeated diagonal value makes the substitution singular.
std::optional<std::vector<EigenPair>> triangular_eigenpairs(const Eigen::MatrixXcd& l) {
    const Eigen::Index n = l.rows();
    std::vector<EigenPair> pairs(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const cplx lambda = l(k, k);
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
        x(k) = 1.0;
        for (Eigen::Index j = k + 1; j < n; ++j) {
            const cplx d = lambda - l(j, j);
            if (d == cplx{}) return std::nullopt;
            cplx s{};
            for (Eigen::Index i = k; i < j; ++i) s += l(j, i) * x(i);
            x(j) = s / d;
        }
        if (!x.allFinite()) return std::nullopt;
        x.normalize();
        auto& p = pairs[static_cast<std::size_t>(k)];
        p.value = lambda;
        p.vector.assign(x.data(), x.data() + n);
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair& x, const EigenPair& y) { return spectrum_less(x.value, y.value); });
    return pairs;
}

}  // namespace

Json SpectralHypotheses::to_json() const {
    Json j;
    j["univalent"] = univalent;
    j["phi_second_bounded"] = phi_second_bounded;
    j["psi_second"] = verdict_name(psi_second);
    j["weighted_ratio"] = verdict_name(weighted_ratio);
    j["satisfied"] = satisfied;
    return j;
}

Json SpectrumPrediction::to_json() const {
    Json j;
    j["a"] = complex_to_json(a);
    j["psi_a"] = complex_to_json(psi_a);
    j["phi_prime_a"] = complex_to_json(phi_prime_a);
    j["predicted"] = complex_list(predicted);
    j["accumulation_point"] = complex_to_json(0.0);
    j["quasi_nilpotent"] = quasi_nilpotent;
    j["hypotheses"] = hypotheses.to_json();
    return j;
}

SpectrumPrediction predict_spectrum(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                    const SpaceParams& p, std::size_t count, const AnnularGrid& grid) {
    p.require_core();
    if (count == 0) throw SpecError("prediction count must be positive");
    const auto fixed = find_fixed_point(phi);
    if (!fixed) throw InapplicableError("spectral characterization inapplicable: no fixed point in D");

    SpectrumPrediction pred;
    pred.a = *fixed;
    pred.psi_a = psi(pred.a);
    pred.phi_prime_a = phi.jet(pred.a).d1;
    if (std::abs(pred.phi_prime_a) >= 1.0 - 1e-12) {
        throw InapplicableError("spectral characterization excludes automorphisms: |phi'(a)| = 1");
    }
    if (std::abs(pred.psi_a) <= 1e-14) {
        pred.quasi_nilpotent = true;
        pred.predicted = {cplx{}};
    } else {
        cplx power = 1.0;
        for (std::size_t n = 0; n < count; ++n) {
            pred.predicted.push_back(pred.psi_a * power);
            power *= pred.phi_prime_a;
        }
    }

    const auto report = evaluate_quantities(psi, phi, p, grid);
    auto& h = pred.hypotheses;
    h.univalent = phi.claims_univalent();
    h.phi_second_bounded = report.phi_second.verdict == LimitVerdict::tends_to_zero ||
                           report.phi_second.verdict == LimitVerdict::bounded_positive;
    h.psi_second = report.quantity(QuantityTag::B1).verdict;
    h.weighted_ratio = report.quantity(QuantityTag::K_half_alpha_plus1).verdict;
    h.satisfied = h.univalent && h.phi_second_bounded && h.psi_second == LimitVerdict::tends_to_zero &&
                  h.weighted_ratio == LimitVerdict::tends_to_zero;
    return pred;
}

void sort_spectrum(std::vector<cplx>& values) {
    std::stable_sort(values.begin(), values.end(), spectrum_less);
}

std::vector<EigenPair> truncated_eigenpairs(const OperatorMatrix& m) {
    if (m.lower_triangular) {
        if (auto pairs = triangular_eigenpairs(m.entries)) return *pairs;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.entries, true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue QR iteration did not converge for the " +
                             std::to_string(m.size()) + "x" + std::to_string(m.size()) + " truncation");
    }
    const auto n = static_cast<std::size_t>(solver.eigenvalues().size());
    std::vector<EigenPair> pairs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        pairs[i].value = solver.eigenvalues()[k];
        Eigen::VectorXcd v = solver.eigenvectors().col(k);
        v.normalize();
        pairs[i].vector.assign(v.data(), v.data() + v.size());
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const EigenPair& x, const EigenPair& y) { return spectrum_less(x.value, y.value); });
    return pairs;
}

std::vector<cplx> truncated_eigenvalues(const OperatorMatrix& m) {
    if (m.lower_triangular) {
        std::vector<cplx> out(m.size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = m.entries.diagonal()(static_cast<Eigen::Index>(k));
        sort_spectrum(out);
        return out;
    }
    return dense_eigenvalues(m.entries);
}

std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& a) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue QR iteration did not converge for the " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " truncation");
    }
    const auto& ev = solver.eigenvalues();
    std::vector<cplx> out(ev.data(), ev.data() + ev.size());
    sort_spectrum(out);
    return out;
}

double ToleranceProfile::tol(std::size_t n) const {
    double t = base * std::pow(growth, static_cast<double>(n));
    if (n < estimates.size()) t = std::max(t, estimates[n]);
    return t;
}

Json ToleranceProfile::to_json() const {
    Json j;
    j["base"] = base;
    j["growth"] = growth;
    j["estimates"] = estimates;
    return j;
}

double NilpotentEnvelope::at(std::size_t n) const {
    return std::max(floor, scale / static_cast<double>(std::max<std::size_t>(n, 1)));
}

double precision_floor(const OperatorMatrix& m, double relative, int trials) {
    const auto n = m.entries.rows();
    const double size = relative * m.entries.norm();
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Eigen::MatrixXcd e(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) e(j, k) = cplx(gauss(rng), gauss(rng));
        }
        e *= size / e.norm();
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.entries + e, false);
        if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue QR iteration did not converge");
        worst = std::max(worst, solver.eigenvalues().cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {

std::vector<SpectralMatch> greedy_match(std::span<const cplx> predicted, std::span<const cplx> eig) {
    std::vector<bool> used(eig.size(), false);
    std::vector<SpectralMatch> out;
    for (std::size_t n = 0; n < predicted.size(); ++n) {
        SpectralMatch m;
        m.n = n;
        m.predicted = predicted[n];
        m.err = std::numeric_limits<double>::infinity();
        std::size_t best = eig.size();
        for (std::size_t i = 0; i < eig.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(eig[i] - predicted[n]);
            if (d < m.err) {
                m.err = d;
                best = i;
            }
        }
        if (best < eig.size()) {
            used[best] = true;
            m.lambda = eig[best];
        }
        out.push_back(m);
    }
    return out;
}

double max_modulus(std::span<const cplx> eig) {
    double m = 0.0;
    for (const cplx& v : eig) m = std::max(m, std::abs(v));
    return m;
}

ConvergenceRow make_row(const SpectrumPrediction& pred, std::span<const cplx> eig, std::size_t required) {
    ConvergenceRow row;
    row.n = eig.size();
    if (pred.quasi_nilpotent) {
        row.max_err_first = max_modulus(eig);
        row.errors = {row.max_err_first};
        return row;
    }
    for (const auto& m : greedy_match(pred.predicted, eig)) row.errors.push_back(m.err);
    const std::size_t k = std::min(required, row.errors.size());
    for (std::size_t i = 0; i < k; ++i) row.max_err_first = std::max(row.max_err_first, row.errors[i]);
    return row;
}

std::vector<std::size_t> table_sizes(std::size_t n) {
    return {std::max<std::size_t>(n / 4, 1), std::max<std::size_t>(n / 2, 1), n};
}

std::vector<std::vector<cplx>> spectra_for_sizes(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                                 const SpaceParams& p, std::span<const std::size_t> sizes,
                                                 double* floor_of_last = nullptr) {
    std::vector<std::vector<cplx>> spectra(sizes.size());
    parallel_for(sizes.size(), [&](std::size_t i) {
        const auto m = assemble_matrix(psi, phi, p, sizes[i]);
        spectra[i] = truncated_eigenvalues(m);
        if (floor_of_last && i + 1 == sizes.size()) *floor_of_last = precision_floor(m);
    });
    return spectra;
}

}  // namespace

SpectrumReport match_spectra(const SpectrumPrediction& pred, std::span<const cplx> eig,
                             const ToleranceProfile& profile, std::size_t required,
                             const NilpotentEnvelope& envelope) {
    SpectrumReport r;
    r.prediction = pred;
    r.n = eig.size();
    r.eigenvalues.assign(eig.begin(), eig.end());
    r.required = required;
    if (pred.quasi_nilpotent) {
        r.nilpotent_max_modulus = max_modulus(eig);
        r.nilpotent_envelope = envelope.at(eig.size());
        r.pass = *r.nilpotent_max_modulus <= *r.nilpotent_envelope;
        return r;
    }
    r.matches = greedy_match(pred.predicted, eig);
    r.pass = true;
    for (auto& m : r.matches) {
        m.tol = profile.tol(m.n);
        m.pass = m.err <= m.tol;
        if (m.n < required) r.pass = r.pass && m.pass;
    }
    return r;
}

std::vector<ConvergenceRow> convergence_table(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                              const SpaceParams& p, const SpectrumPrediction& pred,
                                              std::size_t n, std::size_t required) {
    const auto sizes = table_sizes(n);
    const auto spectra = spectra_for_sizes(psi, phi, p, sizes);
    std::vector<ConvergenceRow> rows;
    for (const auto& eig : spectra) rows.push_back(make_row(pred, eig, required));
    return rows;
}

SpectrumReport analyze_spectrum(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                const SpaceParams& p, std::size_t n, std::size_t count,
                                std::size_t required, const ToleranceProfile& base) {
    const auto pred = predict_spectrum(psi, phi, p, count);
    const auto sizes = table_sizes(n);
    double floor = 0.0;
    const auto spectra = spectra_for_sizes(psi, phi, p, sizes, pred.quasi_nilpotent ? &floor : nullptr);
    NilpotentEnvelope envelope;
    envelope.floor = std::max(envelope.floor, 10.0 * floor);

    ToleranceProfile profile = base;
    if (!pred.quasi_nilpotent) {
        const auto half = greedy_match(pred.predicted, spectra[1]);
        const auto full = greedy_match(pred.predicted, spectra[2]);
        profile.estimates.resize(full.size());
        for (std::size_t i = 0; i < full.size(); ++i) {
            profile.estimates[i] = 10.0 * std::abs(full[i].lambda - half[i].lambda);
        }
    }
    auto report = match_spectra(pred, spectra[2], profile, required, envelope);
    for (const auto& eig : spectra) report.convergence.push_back(make_row(pred, eig, required));
    return report;
}

Json SpectrumReport::to_json() const {
    Json j;
    j["prediction"] = prediction.to_json();
    j["N"] = n;
    j["eigenvalues_N"] = complex_list(eigenvalues);
    Json ms = Json::array();
    for (const auto& m : matches) {
        Json e;
        e["n"] = m.n;
        e["predicted"] = complex_to_json(m.predicted);
        e["lambda"] = complex_to_json(m.lambda);
        e["err"] = m.err;
        e["tol"] = m.tol;
        e["pass"] = m.pass;
        ms.push_back(std::move(e));
    }
    j["matches"] = std::move(ms);
    j["required"] = required;
    if (nilpotent_max_modulus) {
        j["nilpotent_max_modulus"] = *nilpotent_max_modulus;
        j["nilpotent_envelope"] = *nilpotent_envelope;
    }
    Json conv = Json::array();
    for (const auto& row : convergence) {
        Json e;
        e["N"] = row.n;
        e["max_err_first6"] = row.max_err_first;
        e["errors"] = row.errors;
        conv.push_back(std::move(e));
    }
    j["convergence"] = std::move(conv);
    j["pass"] = pass;
    return j;
}

double schroder_residual(const AnalyticFunction& psi, const AnalyticFunction& phi, cplx lambda,
                         const TaylorSeries& f, const SpaceParams& p, double radius, std::size_t count) {
    const double norm = std::sqrt(norm_sq_coeff(f, p));
    if (norm == 0.0) throw PreconditionError("Schroder residual needs a nonzero function");
    const TaylorSeries g = cplx(1.0 / norm, 0.0) * f;
    double res = 0.0;
    for (const cplx& z : sample_circle(radius, count)) {
        res = std::max(res, std::abs(psi(z) * evaluate(g, phi(z)) - lambda * evaluate(g, z)));
    }
    return res;
}

Json ConjugationReport::to_json() const {
    Json j;
    j["a"] = complex_to_json(a);
    j["direct_prediction"] = complex_list(direct_prediction);
    j["conjugated_prediction"] = complex_list(conjugated_prediction);
    j["prediction_gap"] = prediction_gap;
    j["conjugated_diagonal"] = complex_list(conjugated_diagonal);
    j["diagonal_error"] = diagonal_error;
    j["eigenvalue_gap"] = eigenvalue_gap;
    j["envelope"] = envelope;
    j["pass"] = pass;
    return j;
}

ConjugationReport conjugation_invariance_check(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                               cplx a, const SpaceParams& p, std::size_t n,
                                               std::size_t count) {
    if (std::abs(phi(a) - a) > 1e-8) throw PreconditionError("a is not a fixed point of phi");
    ConjugationReport r;
    r.a = a;
    const auto [zeta, eta] = conjugate_to_origin(psi, phi, a);

    const cplx psi_a = psi(a);
    const cplx phi_prime_a = phi.jet(a).d1;
    const cplx zeta0 = zeta(0.0);
    const cplx eta_prime0 = eta.jet(0.0).d1;
    cplx pd = 1.0, pc = 1.0;
    for (std::size_t i = 0; i < count; ++i) {
        r.direct_prediction.push_back(psi_a * pd);
        r.conjugated_prediction.push_back(zeta0 * pc);
        r.prediction_gap = std::max(r.prediction_gap, std::abs(r.direct_prediction[i] - r.conjugated_prediction[i]));
        pd *= phi_prime_a;
        pc *= eta_prime0;
    }

    const auto conj_matrix = assemble_matrix(zeta, eta, p, n);
    for (std::size_t i = 0; i < count && i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        r.conjugated_diagonal.push_back(conj_matrix.entries(k, k));
        r.diagonal_error = std::max(r.diagonal_error, std::abs(r.conjugated_diagonal[i] - r.direct_prediction[i]));
    }

    const std::array<std::size_t, 2> sizes = {std::max<std::size_t>(n / 2, 1), n};
    const auto spectra = spectra_for_sizes(psi, phi, p, sizes);
    const auto half = greedy_match(r.conjugated_diagonal, spectra[0]);
    const auto full = greedy_match(r.conjugated_diagonal, spectra[1]);
    bool eig_ok = true;
    for (std::size_t i = 0; i < full.size(); ++i) {
        r.eigenvalue_gap.push_back(full[i].err);
        r.envelope.push_back(std::max(1e-8, 10.0 * std::abs(full[i].lambda - half[i].lambda)));
        eig_ok = eig_ok && r.eigenvalue_gap[i] <= r.envelope[i];
    }
    r.pass = r.prediction_gap <= 1e-12 * std::max(1.0, std::abs(psi_a)) && r.diagonal_error <= 1e-8 && eig_ok;
    return r;
}

}  // namespace wco
