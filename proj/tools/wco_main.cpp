#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wco/cli.hpp"

namespace {

std::complex<double> parse_point(const std::string& text) {
    double re = 0.0, im = 0.0;
    char tail = 0;
    const int got = std::sscanf(text.c_str(), "%lf,%lf%c", &re, &im, &tail);
    if (got != 1 && got != 2) throw CLI::ValidationError("--z", "expected re or re,im");
    return {re, im};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted composition operators on weighted Dirichlet spaces"};
    app.require_subcommand(1);

    wco::RunConfig cfg;
    std::vector<std::string> z_text;
    double r = 0.0, k = 0.0;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.alpha, "space parameter in (-1, 1)");
        sub->add_option("--M-max", cfg.m_max, "outermost annulus index");
        sub->add_option("--T", cfg.t, "angular samples per annulus (doubled beyond m = 8)");
        sub->add_option("-o,--output", cfg.output, "write to this file instead of stdout");
    };
    auto symbols = [&](CLI::App* sub) {
        sub->add_option("--psi", cfg.psi, "weight, catalog spec");
        sub->add_option("--phi", cfg.phi, "symbol, catalog spec");
        sub->add_option("--N", cfg.n, "truncation size");
    };

    auto* analyze = app.add_subcommand("analyze", "boundedness and compactness criteria on annular grids");
    common(analyze);
    symbols(analyze);

    auto* spectrum = app.add_subcommand("spectrum", "predicted against truncated spectrum");
    common(spectrum);
    symbols(spectrum);
    spectrum->add_option("--count", cfg.count, "predicted values");
    spectrum->add_option("--required", cfg.required, "leading predictions that must match");

    auto* kernel = app.add_subcommand("kernel-check", "adjoint action on reproducing kernels and kernel norms");
    common(kernel);
    symbols(kernel);
    kernel->add_option("--z", z_text, "evaluation point re,im (repeatable)");
    kernel->add_option("--points", cfg.points, "pseudo-random points when --z is absent");
    kernel->add_option("--radius", cfg.radius, "radius bound for pseudo-random points");

    auto* norm = app.add_subcommand("norm-check", "coefficient against quadrature norms of psi");
    common(norm);
    symbols(norm);
    norm->add_option("--R", cfg.radial_nodes, "radial quadrature nodes");
    norm->add_option("--angular", cfg.angular_nodes, "angular quadrature nodes");

    auto* sweep = app.add_subcommand("sweep", "verdicts and spectral errors over a parameter range (CSV)");
    common(sweep);
    symbols(sweep);
    sweep->add_option("--vary", cfg.vary, "key=start:stop:steps; key is alpha, psi.<param> or phi.<param>")->required();

    auto* paper = app.add_subcommand("paper-examples", "worked examples against their stated conclusions");
    common(paper);
    paper->add_option("--N", cfg.n, "truncation size for spectral scenarios");
    paper->add_option("--only", cfg.only, "phi_r1, ex1, exx1, exx2 or remark");
    auto* r_opt = paper->add_option("--r", r, "family parameter r");
    auto* k_opt = paper->add_option("--k", k, "family parameter k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    cfg.alpha_given = chosen->count("--alpha") > 0;
    if (r_opt->count() > 0) cfg.r = r;
    if (k_opt->count() > 0) cfg.k = k;
    try {
        for (const auto& t : z_text) cfg.z.push_back(parse_point(t));
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    std::ostringstream out;
    const int code = wco::run_command(cfg, out, std::cerr);
    if (cfg.output.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open " << cfg.output << '\n';
            return 1;
        }
        file << out.str();
    }
    return code;
}
