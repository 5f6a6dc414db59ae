#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "spingp/config.hpp"
#include "spingp/protocol.hpp"
#include "spingp/runner.hpp"
#include "spingp/svg.hpp"

using namespace spingp;

namespace {

ThreeLevelSpinor random_spinor(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ThreeLevelSpinor s;
    s.cell_weight = 0.25;
    s.u.resize(n);
    s.v.resize(n);
    s.w.assign(n, cplx(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        s.u[i] = cplx(gauss(rng), gauss(rng));
        s.v[i] = cplx(gauss(rng), gauss(rng));
    }
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("elementary level operations") {
    const ThreeLevelSpinor s = random_spinor(16, 1);

    SUBCASE("pump moves everything to the down level") {
        const ThreeLevelSpinor p = pump(s);
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            CHECK(p.u[i] == cplx(0.0));
            CHECK(p.v[i] == s.u[i] + s.v[i]);
            CHECK(p.w[i] == s.w[i]);
        }
    }
    SUBCASE("pump fixes states already in the down level") {
        ThreeLevelSpinor down = s;
        down.u.assign(down.u.size(), cplx(0.0));
        const ThreeLevelSpinor p = pump(down);
        for (std::size_t i = 0; i < s.u.size(); ++i) CHECK(p.v[i] == down.v[i]);
    }
    SUBCASE("pump preserves the norm of orthogonal levels") {
        ThreeLevelSpinor ortho = s;
        // make v orthogonal to u
        cplx ip(0.0);
        double nu = 0.0;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            ip += std::conj(ortho.u[i]) * ortho.v[i];
            nu += std::norm(ortho.u[i]);
        }
        for (std::size_t i = 0; i < s.u.size(); ++i) ortho.v[i] -= ip / nu * ortho.u[i];
        CHECK(pump(ortho).norm2() == doctest::Approx(ortho.norm2()).epsilon(1e-12));
    }
    SUBCASE("blow discards the down level") {
        const ThreeLevelSpinor b = blow(s);
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            CHECK(b.u[i] == s.u[i]);
            CHECK(b.v[i] == cplx(0.0));
        }
    }
    SUBCASE("probe transfers down onto the imaging level") {
        const ThreeLevelSpinor c = probe(s);
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            CHECK(c.u[i] == s.u[i]);
            CHECK(c.v[i] == cplx(0.0));
            CHECK(c.w[i] == s.v[i] + s.w[i]);
        }
    }
    SUBCASE("imaging integrates to the w-level norm") {
        const ThreeLevelSpinor c = probe(s);
        const std::vector<double> img = select_and_image(c);
        double mass = 0.0, wnorm = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i) {
            mass += img[i] * s.cell_weight;
            wnorm += std::norm(c.w[i]) * s.cell_weight;
        }
        CHECK(std::abs(mass - wnorm) < 1e-12);
    }
}

TEST_CASE("measurement chains compose as the diagrams state") {
    const ThreeLevelSpinor s = random_spinor(32, 2);
    const ThreeLevelSpinor chained = probe(pump(blow(s)));
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        CHECK(std::abs(chained.u[i]) < 1e-14);
        CHECK(std::abs(chained.v[i]) < 1e-14);
        CHECK(std::abs(chained.w[i] - s.u[i]) < 1e-14);
    }
    // up-level, down-level, and joint chains return the right densities
    const auto up = select_and_image(probe(pump(blow(s))));
    const auto down = select_and_image(probe(s));
    const auto joint = select_and_image(probe(pump(s)));
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        CHECK(up[i] == doctest::Approx(std::norm(s.u[i])).epsilon(1e-12));
        CHECK(down[i] == doctest::Approx(std::norm(s.v[i])).epsilon(1e-12));
        CHECK(joint[i] == doctest::Approx(std::norm(s.u[i] + s.v[i])).epsilon(1e-12));
    }
}

TEST_CASE("config round trip and validation") {
    ExperimentConfig c;
    c.scenario = "scattering_sweep";
    c.seed = 99;
    c.beta = 0.35;
    c.n_list = {100, 1000};
    c.pair_v = {1.0, 0.5, 0.25};
    c.out_dir = "elsewhere";
    const ExperimentConfig back = ExperimentConfig::from_json_text(c.to_json_text());
    CHECK(back == c);

    ExperimentConfig bad = c;
    bad.scenario = "unknown";
    CHECK_THROWS(ExperimentConfig::from_json_text(bad.to_json_text()));
    bad = c;
    bad.grid_points = 17;
    CHECK_THROWS(bad.validate());
    bad = c;
    bad.beta = 1.5;
    CHECK_THROWS(bad.validate());
    CHECK_THROWS(ExperimentConfig::from_json_text("{ not json"));
}

TEST_CASE("svg emitter") {
    SvgPlot plot("demo", "x", "y");
    plot.add_series("line", {1.0, 2.0, 3.0}, {1.0, 4.0, 9.0}, "#112233");
    const std::string path = "svg_emitter_test.svg";
    plot.write(path);
    const std::string body = slurp(path);
    CHECK(body.find("<svg") != std::string::npos);
    CHECK(body.find("polyline") != std::string::npos);
    std::filesystem::remove(path);

    SvgPlot bad("demo", "x", "y", true, false);
    bad.add_series("line", {0.0, 1.0}, {1.0, 2.0}, "#112233");
    CHECK_THROWS(bad.write("unwritten.svg"));
}

TEST_CASE("protocol demo scenario is deterministic and mass preserving") {
    ExperimentConfig cfg;
    cfg.scenario = "protocol_demo";
    cfg.grid_points = 64;
    cfg.out_dir = "proto_out_a";
    const RunResult a = run_experiment(cfg);
    CHECK(a.passed);
    cfg.out_dir = "proto_out_b";
    const RunResult b = run_experiment(cfg);
    CHECK(a.report_json == b.report_json);
    CHECK(slurp("proto_out_a/protocol_densities.csv") ==
          slurp("proto_out_b/protocol_densities.csv"));
    std::filesystem::remove_all("proto_out_a");
    std::filesystem::remove_all("proto_out_b");
}

TEST_CASE("unknown suite name is rejected") {
    CHECK_THROWS(run_suite("lemma99"));
}
