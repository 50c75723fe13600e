#include "wco/operator.hpp"

#include <algorithm>
#include <cmath>

#include "wco/error.hpp"
#include "wco/parallel.hpp"

namespace wco {

double OperatorMatrix::max_column_error() const {
    double e = 0.0;
    for (double c : column_error) e = std::max(e, c);
    return e;
}

namespace {

void require_operator_inputs(const AnalyticFunction& phi, std::size_t n) {
    if (!phi.claims_self_map()) {
        throw PreconditionError("symbol phi = " + phi.label() + " is not a self-map of the disc");
    }
    if (n == 0) throw PreconditionError("truncation size must be positive");
}

// Largest factor (j+1)^{(1-alpha)/2} over the rows.
double max_row_scale(const SpaceParams& p, std::size_t n) {
    return std::max(1.0, 1.0 / p.basis_scale(n - 1));
}

// phi(0) = 0 makes psi phi^k vanish to order k, so entries above the diagonal are noise.
void snap_upper_triangle(OperatorMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    double ratio = 0.0;
    for (Eigen::Index k = 1; k < n; ++k) {
        const double err = m.column_error[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < k; ++j) {
            const double v = std::abs(m.entries(j, k));
            if (v == 0.0) continue;
            ratio = std::max(ratio, err > 0.0 ? v / err : INFINITY);
        }
    }
    m.upper_noise_ratio = ratio;
    if (ratio > 1.0) {
        m.warnings.push_back("phi(0) = 0 but entries above the diagonal exceed the column error (ratio " +
                             format_decimal(ratio) + ")");
        return;
    }
    m.entries.triangularView<Eigen::StrictlyUpper>().setZero();
    m.lower_triangular = true;
}

}  // namespace

OperatorMatrix assemble_matrix(const AnalyticFunction& psi, const AnalyticFunction& phi,
                               const SpaceParams& p, std::size_t n, const ExtractionConfig& cfg) {
    require_operator_inputs(phi, n);
    cfg.validate();
    cfg.validate_for(n - 1);

    const auto pts = sample_circle(cfg.sample_radius, cfg.sample_count);
    const std::size_t m = pts.size();
    std::vector<cplx> psi_s(m), phi_s(m);
    parallel_for(m, [&](std::size_t i) {
        psi_s[i] = psi(pts[i]);
        phi_s[i] = phi(pts[i]);
    });
    if (std::all_of(psi_s.begin(), psi_s.end(), [](cplx v) { return v == cplx{}; })) {
        throw PreconditionError("weight psi = " + psi.label() + " vanishes identically");
    }

    OperatorMatrix out;
    out.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.params = p;
    out.psi_label = psi.label();
    out.phi_label = phi.label();
    out.extraction = cfg;
    out.column_error.assign(n, 0.0);
    std::vector<double> coeff_error(n, 0.0), coeff_max(n, 0.0);
    const double row_scale = max_row_scale(p, n);

    parallel_blocks(n, [&](std::size_t begin, std::size_t end) {
        // phi^begin by the same sequence of products a single worker would perform.
        std::vector<cplx> power(m, cplx{1.0, 0.0});
        for (std::size_t k = 0; k < begin; ++k) {
            for (std::size_t i = 0; i < m; ++i) power[i] *= phi_s[i];
        }
        std::vector<cplx> column(m);
        for (std::size_t k = begin; k < end; ++k) {
            if (k > begin) {
                for (std::size_t i = 0; i < m; ++i) power[i] *= phi_s[i];
            }
            for (std::size_t i = 0; i < m; ++i) column[i] = psi_s[i] * power[i];
            const auto ex = coefficients_from_samples(column, cfg.sample_radius, n - 1);
            const double col_scale = p.basis_scale(k);
            double cmax = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const cplx c = ex.series[j];
                cmax = std::max(cmax, std::abs(c));
                out.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                    col_scale / p.basis_scale(j) * c;
            }
            coeff_error[k] = ex.coefficient_error();
            coeff_max[k] = cmax;
            out.column_error[k] = col_scale * row_scale * ex.coefficient_error();
        }
    });

    if (std::abs(phi(cplx{})) <= 1e-10) snap_upper_triangle(out);

    for (std::size_t k = 0; k < n; ++k) {
        if (coeff_error[k] > 1e-8 * coeff_max[k]) {
            out.warnings.push_back("column " + std::to_string(k) + ": extraction error " +
                                   format_decimal(coeff_error[k]) + " exceeds 1e-8 of max coefficient " +
                                   format_decimal(coeff_max[k]));
        }
    }
    return out;
}

OperatorMatrix assemble_matrix(const AnalyticFunction& psi, const AnalyticFunction& phi,
                               const SpaceParams& p, std::size_t n) {
    return assemble_matrix(psi, phi, p, n, ExtractionConfig::for_order(n == 0 ? 0 : n - 1));
}

ExtractedSeries apply_operator(const AnalyticFunction& psi, const AnalyticFunction& phi,
                               const TaylorSeries& f, const SpaceParams&, std::size_t n,
                               const ExtractionConfig& cfg) {
    require_operator_inputs(phi, n);
    cfg.validate();
    return extract_coeffs([&](cplx z) { return psi(z) * evaluate(f, phi(z)); }, cfg, n - 1);
}

TaylorSeries multiply(const OperatorMatrix& m, const TaylorSeries& f) {
    const std::size_t n = m.size();
    const auto x = to_basis_coordinates(f.resized(n - 1), m.params);
    const Eigen::VectorXcd y = m.entries * Eigen::Map<const Eigen::VectorXcd>(x.data(), static_cast<Eigen::Index>(n));
    return from_basis_coordinates(std::span<const cplx>(y.data(), n), m.params);
}

AdjointKernelReport adjoint_kernel_check(const OperatorMatrix& m, const AnalyticFunction& psi,
                                         const AnalyticFunction& phi, cplx z) {
    if (std::abs(z) > 0.8) throw PreconditionError("adjoint kernel check requires |z| <= 0.8");
    const std::size_t n = m.size();
    const auto& p = m.params;
    const Jet2 pz = psi.jet(z);
    const cplx w = phi(z);
    const auto vz = kernel_coordinates(z, p, n);
    const auto vw = kernel_coordinates(w, p, n);
    const Eigen::Map<const Eigen::VectorXcd> ez(vz.data(), static_cast<Eigen::Index>(n));
    const Eigen::Map<const Eigen::VectorXcd> ew(vw.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXcd lhs = m.entries.adjoint() * ez;
    const Eigen::VectorXcd diff = lhs - std::conj(pz.v) * ew;

    AdjointKernelReport r;
    r.z = z;
    r.phi_z = w;
    r.n = n;
    r.residual = diff.norm() / ew.norm();
    r.tail_z = kernel_tail_bound(std::norm(z), p.alpha(), n - 1);
    r.tail_phi_z = kernel_tail_bound(std::norm(w), p.alpha(), n - 1);
    return r;
}

AdjointKernelReport adjoint_kernel_check(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                         const SpaceParams& p, cplx z, std::size_t n,
                                         const ExtractionConfig& cfg) {
    if (std::abs(z) > 0.8) throw PreconditionError("adjoint kernel check requires |z| <= 0.8");
    return adjoint_kernel_check(assemble_matrix(psi, phi, p, n, cfg), psi, phi, z);
}

namespace {

Json matrix_header(const OperatorMatrix& m) {
    Json h;
    h["alpha"] = m.params.alpha();
    h["N"] = m.size();
    h["psi"] = m.psi_label;
    h["phi"] = m.phi_label;
    h["sample_radius"] = m.extraction.sample_radius;
    h["sample_count"] = m.extraction.sample_count;
    h["max_column_error"] = m.max_column_error();
    h["column_error"] = m.column_error;
    h["lower_triangular"] = m.lower_triangular;
    h["upper_noise_ratio"] = m.upper_noise_ratio;
    h["warnings"] = m.warnings;
    return h;
}

}  // namespace

void write_matrix_csv(std::ostream& out, const OperatorMatrix& m) {
    const Json h = matrix_header(m);
    for (const auto& [key, value] : h.items()) {
        if (key == "column_error") continue;
        out << "# " << key << '=' << dump_json(value, -1) << '\n';
    }
    out << "j,k,re,im\n";
    char buf[96];
    const std::size_t n = m.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx v = m.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.16e,%.16e\n", j, k, v.real(), v.imag());
            out << buf;
        }
    }
}

Json matrix_to_json(const OperatorMatrix& m) {
    Json doc;
    doc["header"] = matrix_header(m);
    Json rows = Json::array();
    const std::size_t n = m.size();
    for (std::size_t j = 0; j < n; ++j) {
        Json row = Json::array();
        for (std::size_t k = 0; k < n; ++k) {
            row.push_back(complex_to_json(m.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))));
        }
        rows.push_back(std::move(row));
    }
    doc["entries"] = std::move(rows);
    return doc;
}

}  // namespace wco
