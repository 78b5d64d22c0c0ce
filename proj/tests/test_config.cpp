#include <doctest.h>

#include "rotolab/config.hpp"
#include "rotolab/errors.hpp"
#include "rotolab/report.hpp"
#include "rotolab/rotation.hpp"
#include <fstream>
#include <iterator>

using namespace rotolab;

TEST_CASE("parse: sections, comments, quoted strings") {
    ConfigMap m = parse_config(
        "# a comment\n"
        "top = 1.5\n"
        "[rotation]\n"
        "n_orbit = 2000   # trailing comment\n"
        "delta = 0.05\n"
        "[entropy]\n"
        "label = \"has # hash inside\"\n");
    CHECK(m.at("top") == "1.5");
    CHECK(m.at("rotation.n_orbit") == "2000");
    CHECK(m.at("rotation.delta") == "0.05");
    CHECK(m.at("entropy.label") == "has # hash inside");
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_config("novalue\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[unterminated\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = 1\na = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("= 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]\nk = v\n"), ConfigError);
}

TEST_CASE("apply_config maps known keys onto parameters") {
    pipeline::Params p;
    ConfigMap m = parse_config(
        "[rotation]\n"
        "n_orbit = 1500\n"
        "delta = 0.1\n"
        "[grid]\n"
        "depth = 7\n"
        "[budget]\n"
        "c1_budget = 0.02\n"
        "[verify]\n"
        "require_transport = false\n");
    apply_config(m, p);
    CHECK(p.n_orbit == 1500);
    CHECK(p.delta == doctest::Approx(0.1));
    CHECK(p.depth == 7);
    CHECK(p.c1_budget == doctest::Approx(0.02));
    CHECK(p.require_transport == false);
}

TEST_CASE("unknown keys are rejected by name") {
    pipeline::Params p;
    ConfigMap m = parse_config("[rotation]\nn_orbits = 10\n"); // typo
    try {
        apply_config(m, p);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("rotation.n_orbits") != std::string::npos);
    }
}

TEST_CASE("type errors are reported") {
    pipeline::Params p;
    ConfigMap m = parse_config("[grid]\ndepth = seven\n");
    CHECK_THROWS_AS(apply_config(m, p), ConfigError);
    ConfigMap b = parse_config("[verify]\nrequire_transport = maybe\n");
    CHECK_THROWS_AS(apply_config(b, p), ConfigError);
}

TEST_CASE("bundled example configs parse and apply cleanly") {
    for (const char* path : {"configs/pipeline.toml", "configs/rotation.toml",
                             "configs/attractor.toml", "configs/horseshoe.toml",
                             "configs/entropy.toml", "configs/chains.toml"}) {
        pipeline::Params p;
        CHECK_NOTHROW(apply_config(load_config(path), p));
    }
}

TEST_CASE("written reports are byte-identical apart from the meta block") {
    LiftedMap T = integrable_twist();
    GridSet K = GridSet::full_band(5, Band{0.0, 1.0});
    RotationParams rp;
    rp.n_orbit = 200;
    auto render = [&](const std::string& path) {
        RotationInterval r = rotation_interval(T, K, rp);
        report::json body{{"schema", "rotolab.rotation.report/1"},
                  {"map", T.label()},
                  {"rotation", report::rotation_interval(r)}};
        report::write(path, body, 0.0);
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        // drop the trailing meta block (elapsed time and timestamp)
        size_t pos = text.find("\"meta\"");
        REQUIRE(pos != std::string::npos);
        return text.substr(0, pos);
    };
    std::string a = render("build/det_a.json");
    std::string b = render("build/det_b.json");
    CHECK(a == b);
    CHECK(!a.empty());
}
