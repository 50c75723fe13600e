#pragma once

#include <complex>
#include <cstddef>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wco/json_io.hpp"

namespace wco {

inline constexpr const char* report_schema = "wco-report/1";

/// Everything a command needs; embedded verbatim in every JSON document.
struct RunConfig {
    std::string command = "analyze";
    double alpha = 0.5;
    bool alpha_given = false;
    std::string psi = "polynomial:1";
    std::string phi = "mobius_self_map:lambda=0.5";
    std::size_t n = 64;
    int m_max = 14;
    std::size_t t = 256;
    std::string output;

    // spectrum
    std::size_t count = 12;
    std::size_t required = 6;
    // kernel-check
    std::vector<std::complex<double>> z;
    std::size_t points = 10;
    double radius = 0.7;
    // norm-check
    std::size_t radial_nodes = 200;
    std::size_t angular_nodes = 512;
    // sweep
    std::string vary;
    // paper-examples
    std::string only;
    std::optional<double> r;
    std::optional<double> k;

    /// Throws SpecError: alpha in (-1, 1), N in [8, 4096], M_max in [6, 20], T >= 4.
    void validate() const;
    Json to_json() const;
};

/// Exit codes: 0 ok, 1 failure, 2 invalid input, 3 violated precondition, 4 inapplicable result.
int exit_code_for(const std::exception& e);

std::string cmd_analyze(const RunConfig& cfg);
std::string cmd_spectrum(const RunConfig& cfg);
std::string cmd_kernel_check(const RunConfig& cfg);
std::string cmd_norm_check(const RunConfig& cfg);
/// CSV; `vary` is key=start:stop:steps with key alpha, psi.<param> or phi.<param>.
std::string cmd_sweep(const RunConfig& cfg);

struct PaperExamplesResult {
    std::string document;
    bool all_consistent = false;
};

/// Scenarios phi_r1, ex1, exx1, exx2, remark; `only` selects one.
PaperExamplesResult cmd_paper_examples(const RunConfig& cfg);

/// Validates, runs cfg.command and writes the result to `out`; errors go to `err`.
/// Returns the process exit code.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace wco
