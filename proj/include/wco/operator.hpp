#pragma once

#include <complex>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wco/catalog.hpp"
#include "wco/dirichlet.hpp"
#include "wco/json_io.hpp"
#include "wco/series.hpp"

namespace wco {

/// N x N compression of C_{psi,phi} f = psi (f o phi) to span{e_0, ..., e_{N-1}}:
/// entries(j, k) = <C e_k, e_j>.
struct OperatorMatrix {
    Eigen::MatrixXcd entries;
    SpaceParams params{0.0};
    std::string psi_label;
    std::string phi_label;
    ExtractionConfig extraction;
    /// Absolute error bound for the entries of each column.
    std::vector<double> column_error;
    std::vector<std::string> warnings;
    /// Set when phi(0) = 0: the entries above the diagonal, which vanish in exact arithmetic, were
    /// all within their column error and have been replaced by exact zeros.
    bool lower_triangular = false;
    /// Largest |entries(j, k)| / column_error[k] over j < k before that replacement.
    double upper_noise_ratio = 0.0;

    std::size_t size() const { return static_cast<std::size_t>(entries.cols()); }
    double max_column_error() const;
};

/// Column k holds the coefficients of psi phi^k, extracted from one circle of samples shared by
/// all columns. When |phi(0)| <= 1e-10 the strictly upper part is zeroed if it is pure extraction
/// noise (see OperatorMatrix::lower_triangular). Throws PreconditionError unless phi claims to be a self-map and psi is nonzero
/// on the sampling circle, or if cfg has fewer than 2N samples.
OperatorMatrix assemble_matrix(const AnalyticFunction& psi, const AnalyticFunction& phi,
                               const SpaceParams& p, std::size_t n, const ExtractionConfig& cfg);

/// Same, with ExtractionConfig::for_order(n - 1).
OperatorMatrix assemble_matrix(const AnalyticFunction& psi, const AnalyticFunction& phi,
                               const SpaceParams& p, std::size_t n);

/// Coefficients 0..n-1 of psi (f o phi), extracted directly from point values.
ExtractedSeries apply_operator(const AnalyticFunction& psi, const AnalyticFunction& phi,
                               const TaylorSeries& f, const SpaceParams& p, std::size_t n,
                               const ExtractionConfig& cfg);

/// Matrix-vector product in basis coordinates, returned as a series of order size()-1.
/// f is truncated or padded to the matrix size.
TaylorSeries multiply(const OperatorMatrix& m, const TaylorSeries& f);

struct AdjointKernelReport {
    cplx z;
    cplx phi_z;
    std::size_t n = 0;
    /// ||M^H v_z - conj(psi(z)) v_{phi(z)}|| / ||v_{phi(z)}||
    double residual = 0.0;
    /// Squared-norm tail bounds of the dropped kernel coefficients at z and phi(z).
    double tail_z = 0.0;
    double tail_phi_z = 0.0;
};

/// Checks C* k_z = conj(psi(z)) k_{phi(z)} on the compression. Throws PreconditionError for
/// |z| > 0.8.
AdjointKernelReport adjoint_kernel_check(const OperatorMatrix& m, const AnalyticFunction& psi,
                                         const AnalyticFunction& phi, cplx z);
AdjointKernelReport adjoint_kernel_check(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                         const SpaceParams& p, cplx z, std::size_t n,
                                         const ExtractionConfig& cfg);

/// `# key=value` header lines, then `j,k,re,im` rows in row-major order.
void write_matrix_csv(std::ostream& out, const OperatorMatrix& m);
/// {"header": {...}, "entries": [[[re, im], ...], ...]} with rows in order.
Json matrix_to_json(const OperatorMatrix& m);

}  // namespace wco
