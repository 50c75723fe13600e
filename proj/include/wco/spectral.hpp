#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wco/catalog.hpp"
#include "wco/criteria.hpp"
#include "wco/dirichlet.hpp"
#include "wco/json_io.hpp"
#include "wco/operator.hpp"

namespace wco {

/// Grid verdicts for the hypotheses of the spectral characterization.
struct SpectralHypotheses {
    bool univalent = false;
    bool phi_second_bounded = false;
    LimitVerdict psi_second = LimitVerdict::inconclusive;  ///< B1
    LimitVerdict weighted_ratio = LimitVerdict::inconclusive;  ///< K_half_alpha_plus1
    bool satisfied = false;

    Json to_json() const;
};

struct SpectrumPrediction {
    cplx a;
    cplx psi_a;
    cplx phi_prime_a;
    /// psi(a) phi'(a)^n for n < P, or {0} when psi(a) = 0. The accumulation point 0 is implied.
    std::vector<cplx> predicted;
    bool quasi_nilpotent = false;
    SpectralHypotheses hypotheses;

    Json to_json() const;
};

/// Throws InapplicableError when phi has no fixed point in the disc, or when |phi'(a)| = 1.
SpectrumPrediction predict_spectrum(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                    const SpaceParams& p, std::size_t count = 12,
                                    const AnnularGrid& grid = AnnularGrid());

/// Descending modulus, ties broken by ascending argument.
void sort_spectrum(std::vector<cplx>& values);

/// Eigenvalues of a dense matrix (Hessenberg reduction + shifted complex QR), sorted by
/// sort_spectrum. Throws NumericalError if the QR iteration fails.
std::vector<cplx> dense_eigenvalues(const Eigen::MatrixXcd& a);

/// All eigenvalues of the truncation, sorted. A matrix flagged lower triangular yields its
/// diagonal; otherwise dense_eigenvalues.
std::vector<cplx> truncated_eigenvalues(const OperatorMatrix& m);

struct EigenPair {
    cplx value;
    std::vector<cplx> vector;  ///< basis coordinates, unit Euclidean norm
};

/// Eigenpairs in the same order as truncated_eigenvalues.
std::vector<EigenPair> truncated_eigenpairs(const OperatorMatrix& m);

/// tol(n) = base * growth^n, raised pointwise to `estimates` when those are provided.
struct ToleranceProfile {
    double base = 1e-8;
    double growth = 1.0;
    std::vector<double> estimates;

    double tol(std::size_t n) const;
    Json to_json() const;
};

/// Quasi-nilpotent case: max |eigenvalue| must stay below scale / N, or below the working-precision
/// floor of the truncation when that is larger.
struct NilpotentEnvelope {
    double scale = 1.0;
    double floor = 1e-10;

    double at(std::size_t n) const;
};

/// Largest eigenvalue modulus of M + E over a few fixed pseudo-random E with
/// ||E||_F = relative ||M||_F. Estimates how far round-off alone moves the spectrum.
double precision_floor(const OperatorMatrix& m, double relative = 1e-14, int trials = 3);

struct SpectralMatch {
    std::size_t n = 0;
    cplx predicted;
    cplx lambda;
    double err = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct ConvergenceRow {
    std::size_t n = 0;
    double max_err_first = 0.0;
    std::vector<double> errors;
};

struct SpectrumReport {
    SpectrumPrediction prediction;
    std::size_t n = 0;
    std::vector<cplx> eigenvalues;
    std::vector<SpectralMatch> matches;
    std::size_t required = 6;  ///< leading predictions that must match
    std::optional<double> nilpotent_max_modulus;
    std::optional<double> nilpotent_envelope;
    std::vector<ConvergenceRow> convergence;
    bool pass = false;

    Json to_json() const;
};

/// Greedy nearest matching, predictions in order, each to an unused eigenvalue.
SpectrumReport match_spectra(const SpectrumPrediction& pred, std::span<const cplx> eig,
                             const ToleranceProfile& profile = {}, std::size_t required = 6,
                             const NilpotentEnvelope& envelope = {});

/// Matching errors at N/4, N/2 and N, computed on independent truncations.
std::vector<ConvergenceRow> convergence_table(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                              const SpaceParams& p, const SpectrumPrediction& pred,
                                              std::size_t n, std::size_t required = 6);

/// Full route: prediction, truncation of size N, matching and convergence table. The tolerance
/// profile is widened per index by 10x the change between the N/2 and N truncations.
SpectrumReport analyze_spectrum(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                const SpaceParams& p, std::size_t n, std::size_t count = 12,
                                std::size_t required = 6, const ToleranceProfile& base = {});

/// max over `count` points on |z| = radius of |psi(z) f(phi(z)) - lambda f(z)|, with f scaled to
/// unit D_alpha norm.
double schroder_residual(const AnalyticFunction& psi, const AnalyticFunction& phi, cplx lambda,
                         const TaylorSeries& f, const SpaceParams& p, double radius = 0.5,
                         std::size_t count = 128);

struct ConjugationReport {
    cplx a;
    std::vector<cplx> direct_prediction;
    std::vector<cplx> conjugated_prediction;
    double prediction_gap = 0.0;
    std::vector<cplx> conjugated_diagonal;
    double diagonal_error = 0.0;
    std::vector<double> eigenvalue_gap;  ///< |leading eigenvalue of direct truncation - diagonal|
    std::vector<double> envelope;
    bool pass = false;

    Json to_json() const;
};

/// Compares the spectral data of (psi, phi) and of its conjugate moving a to the origin.
ConjugationReport conjugation_invariance_check(const AnalyticFunction& psi, const AnalyticFunction& phi,
                                               cplx a, const SpaceParams& p, std::size_t n,
                                               std::size_t count = 6);

}  // namespace wco
