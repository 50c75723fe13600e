#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "wco/cli.hpp"
#include "wco/error.hpp"

using namespace wco;

namespace {

RunConfig config(const std::string& command, const std::string& psi, const std::string& phi,
                 double alpha = 0.5) {
    RunConfig cfg;
    cfg.command = command;
    cfg.psi = psi;
    cfg.phi = phi;
    cfg.alpha = alpha;
    cfg.alpha_given = true;
    return cfg;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const RunConfig& cfg) {
    std::ostringstream out, err;
    const int code = run_command(cfg, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (!l.empty()) v.push_back(l);
    }
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> v;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) v.push_back(cell);
    return v;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    FAIL("missing column " << name);
    return 0;
}

}  // namespace

TEST_CASE("RunConfig validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), SpecError);
    cfg = RunConfig{};
    cfg.n = 4;
    CHECK_THROWS_AS(cfg.validate(), SpecError);
    cfg.n = 5000;
    CHECK_THROWS_AS(cfg.validate(), SpecError);
    cfg = RunConfig{};
    cfg.m_max = 5;
    CHECK_THROWS_AS(cfg.validate(), SpecError);
    cfg.m_max = 21;
    CHECK_THROWS_AS(cfg.validate(), SpecError);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(SpecError("x")) == 2);
    CHECK(exit_code_for(PreconditionError("x")) == 3);
    CHECK(exit_code_for(InapplicableError("x")) == 4);
    CHECK(exit_code_for(NumericalError("x")) == 1);
}

TEST_CASE("analyze reproduces the example verdicts") {
    {
        auto cfg = config("analyze", "psi_power:beta=2.5", "mobius_self_map:lambda=0.5");
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        CHECK(j["schema"] == report_schema);
        CHECK(j["run_config"]["psi"] == "psi_power:beta=2.5");
        CHECK(j["run_config"]["command"] == "analyze");
        CHECK(j["verdicts"]["sufficient_compact"] == true);
    }
    {
        auto cfg = config("analyze", "polynomial:2,1", "polynomial:0.5,0,0.5");
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        CHECK(Json::parse(r.out)["verdicts"]["necessary_compact_ok"] == false);
    }
    {
        auto cfg = config("analyze", "polynomial:1", "mobius_self_map:lambda=1");
        const auto r = run(cfg);
        CHECK(r.code == 2);
        CHECK(r.err.find("lambda") != std::string::npos);
        CHECK(r.out.empty());
    }
    {
        auto cfg = config("analyze", "polynomial:1", "log_inv1m");
        CHECK(run(cfg).code == 3);
    }
    {
        auto cfg = config("analyze", "polynomial:1", "no_such_map");
        CHECK(run(cfg).code == 2);
    }
}

TEST_CASE("spectrum command") {
    {
        auto cfg = config("spectrum", "psi_power:beta=2.5", "mobius_self_map:lambda=0.5");
        cfg.n = 64;
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        CHECK(j["schema"] == report_schema);
        CHECK(j["pass"] == true);
        for (int n = 0; n < 6; ++n) CHECK(j["matches"][n]["err"].get<double>() <= 1e-8);
    }
    {
        auto cfg = config("spectrum", "polynomial:0,0,1", "phi_rk:r=0.5,k=2", 0.0);
        cfg.n = 48;
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        const double a = j["prediction"]["a"][0].get<double>();
        CHECK(std::abs(a - 0.190530255911587) <= 1e-12);
        const double p0 = j["prediction"]["predicted"][0][0].get<double>();
        CHECK(std::abs(p0 - a * a) <= 1e-14);
        CHECK(j.contains("conjugation"));
    }
    {
        auto cfg = config("spectrum", "polynomial:1", "polynomial:0.5,0,0.5");
        const auto r = run(cfg);
        CHECK(r.code == 4);
        CHECK(r.err.find("no fixed point") != std::string::npos);
    }
}

TEST_CASE("kernel-check command") {
    auto cfg = config("kernel-check", "psi_power:beta=2.5", "mobius_self_map:lambda=0.5");
    cfg.n = 128;
    const auto r = run(cfg);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["adjoint_kernel"].size() == 10);
    CHECK(j["max_residual"].get<double>() <= 1e-6);
    REQUIRE(j["kernel_norms"].size() == 3);
    CHECK(j["kernel_norms"][1]["ratio"].get<double>() == doctest::Approx(0.896949502496354).epsilon(1e-9));

    cfg.z = {{0.1, 0.2}, {-0.3, 0.0}};
    const Json k = Json::parse(run(cfg).out);
    CHECK(k["adjoint_kernel"].size() == 2);
    CHECK(k["adjoint_kernel"][1]["z"][0].get<double>() == -0.3);

    cfg.z = {{0.9, 0.0}};
    CHECK(run(cfg).code == 2);
}

TEST_CASE("norm-check command") {
    auto cfg = config("norm-check", "polynomial:0,0,1", "mobius_self_map:lambda=0.5");
    const auto r = run(cfg);
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["coefficient_norm_sq"]["value"].get<double>() == doctest::Approx(std::pow(3.0, 0.5)));
    const double ratio = j["first_derivative"]["ratio_to_coefficient_norm"].get<double>();
    CHECK(ratio >= 0.1);
    CHECK(ratio <= 10.0);
    CHECK(j["growth_bound"]["holds"] == true);
}

TEST_CASE("sweeps") {
    {
        auto cfg = config("sweep", "psi_power:beta=2.5", "mobius_self_map:lambda=0.5");
        cfg.vary = "phi.lambda=0.5:0.9:5";
        cfg.n = 16;
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 6);
        const auto header = split(rows[0]);
        const auto c = column(header, "sufficient_compact");
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split(rows[i])[c] == "true");
        CHECK(split(rows[5])[column(header, "phi")] == "mobius_self_map:lambda=0.9");
    }
    {
        auto cfg = config("sweep", "psi_power:beta=2.5", "mobius_self_map:lambda=0.5");
        cfg.vary = "alpha=-0.5:0.5:3";
        cfg.n = 16;
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 4);
        const auto a = column(split(rows[0]), "alpha");
        CHECK(std::stod(split(rows[1])[a]) == -0.5);
        CHECK(std::stod(split(rows[2])[a]) == 0.0);
        CHECK(std::stod(split(rows[3])[a]) == 0.5);
    }
    {
        auto cfg = config("sweep", "polynomial:1", "phi_r1:r=0.2");
        cfg.vary = "phi.r=0.2:0.8:4";
        cfg.n = 16;
        const auto r = run(cfg);
        REQUIRE(r.code == 0);
        const auto rows = lines(r.out);
        REQUIRE(rows.size() == 5);
        const auto c = column(split(rows[0]), "sufficient_bounded");
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split(rows[i])[c] == "true");
    }
    {
        auto cfg = config("sweep", "polynomial:1", "phi_r1:r=0.2");
        cfg.vary = "phi.r=0.2:0.8:0";
        CHECK(run(cfg).code == 2);
        cfg.vary = "phi.r=0.2:0.8";
        CHECK(run(cfg).code == 2);
        cfg.vary = "";
        CHECK(run(cfg).code == 2);
    }
}

TEST_CASE("paper examples") {
    RunConfig cfg;
    cfg.command = "paper-examples";
    const auto full = cmd_paper_examples(cfg);
    CHECK(full.all_consistent);
    const Json j = Json::parse(full.document);
    CHECK(j["schema"] == report_schema);
    CHECK(j.contains("run_config"));
    REQUIRE(j["scenarios"].size() == 5);
    for (const auto& s : j["scenarios"]) CHECK(s["status"] == "consistent-with-paper");

    cfg.only = "ex1";
    cfg.alpha = 0.0;
    cfg.alpha_given = true;
    const Json one = Json::parse(cmd_paper_examples(cfg).document);
    REQUIRE(one["scenarios"].size() == 1);
    CHECK(one["scenarios"][0]["name"] == "ex1");
    REQUIRE(one["scenarios"][0]["runs"].size() == 1);
    CHECK(one["scenarios"][0]["runs"][0]["alpha"] == 0.0);

    RunConfig ex;
    ex.command = "paper-examples";
    ex.only = "exx2";
    ex.r = 0.5;
    ex.k = 2.0;
    const Json e = Json::parse(cmd_paper_examples(ex).document);
    const auto& run0 = e["scenarios"][0]["runs"][0];
    CHECK(std::abs(run0["a"][0].get<double>() - 0.190530255911587) <= 1e-12);
    CHECK(run0["r"] == 0.5);
    CHECK(run0["k"] == 2.0);

    RunConfig bad;
    bad.command = "paper-examples";
    bad.only = "nope";
    CHECK(run(bad).code == 2);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
    const auto analyze = config("analyze", "psi_power:beta=2.5", "phi_rk:r=0.5,k=2");
    auto spectrum = config("spectrum", "polynomial:0,0,1", "phi_rk:r=0.5,k=2");
    spectrum.n = 48;
    setenv("WCO_THREADS", "1", 1);
    const auto a1 = cmd_analyze(analyze);
    const auto s1 = cmd_spectrum(spectrum);
    setenv("WCO_THREADS", "8", 1);
    const auto a8 = cmd_analyze(analyze);
    const auto s8 = cmd_spectrum(spectrum);
    unsetenv("WCO_THREADS");
    CHECK(a1 == a8);
    CHECK(s1 == s8);
    CHECK(cmd_analyze(analyze) == a1);
}

TEST_CASE("JSON numbers use fixed scientific formatting") {
    const auto out = cmd_analyze(config("analyze", "psi_power:beta=2.5", "mobius_self_map:lambda=0.5"));
    CHECK(out.find("\"alpha\": 5.0000000000000000e-01") != std::string::npos);
    CHECK(out.back() == '\n');
}
