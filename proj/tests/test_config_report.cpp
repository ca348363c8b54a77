#include "doctest.h"

#include <cstdlib>
#include <string>

#include "json.hpp"

#include "ckn/config.hpp"
#include "ckn/report.hpp"

using namespace ckn;

TEST_CASE("an empty document parses to the documented defaults") {
    const RunConfig c = parse_config("{}");
    CHECK(c.grid_n == 32);
    CHECK(c.box == doctest::Approx(6.283185307179586));
    CHECK(c.seed == 1);
    CHECK(c.mu == 0.0);
    CHECK(c.solver.t_end == doctest::Approx(0.5));
    CHECK(c.initial.kind == "taylor_green");
    CHECK(c.perturbation.kind == "none");
    CHECK(c.sampling.r_sequence.size() == 3);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("unknown keys are named, not ignored") {
    try {
        parse_config(R"({"grid":{"m":3}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("unknown key") != std::string::npos);
        CHECK(what.find("grid.m") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(R"({"turbo":true})"), ConfigError);
}

TEST_CASE("type mismatches name the offending key") {
    try {
        parse_config(R"({"grid":{"n":"many"}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("grid.n") != std::string::npos);
    }
}

TEST_CASE("semantic validation failures name the key") {
    CHECK_THROWS_AS(parse_config(R"({"grid":{"n":15}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"solver":{"dt":0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"mollifier":{"radii":[0.3,0.5]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sampling":{"t_stride":0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json at all"), ConfigError);
}

TEST_CASE("canonical serialization is a fixed point of parse") {
    RunConfig c;
    c.seed = 42;
    c.grid_n = 16;
    c.sampling.r_sequence = {0.9, 0.8};
    const std::string canon = canonical_config_json(c);
    const RunConfig back = parse_config(canon);
    CHECK(canonical_config_json(back) == canon);
    CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("the config hash separates configs that differ in one field") {
    RunConfig a;
    RunConfig b;
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    RunConfig c;
    c.solver.dt = 2e-3;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("the byte hash matches the published reference vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("doubles format as shortest round-trip decimals") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.25) == "-2.25");
    for (double v : {0.1, 1.0 / 3.0, 6.283185307179586, 1e-17, -4.9e8}) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}

TEST_CASE("initial field construction follows the config") {
    RunConfig c;
    c.grid_n = 16;
    c.initial.kind = "zero";
    CHECK(max_magnitude(build_initial_field(c)) == 0.0);
    c.initial.kind = "random_divfree";
    c.initial.amplitude = 0.3;
    c.initial.band = 3;
    const VectorLattice u = build_initial_field(c);
    CHECK(max_magnitude(u) > 0.0);
    c.initial.kind = "warp_drive";
    CHECK_THROWS_AS(build_initial_field(c), ConfigError);
}

TEST_CASE("empty analysis results serialize to schema-stamped skeletons") {
    AnalysisResult r;
    r.config_hash = "deadbeefdeadbeef";
    const nlohmann::json m = nlohmann::json::parse(map_json(r));
    CHECK(m.at("schema_version").get<int>() == kMapSchemaVersion);
    CHECK(m.at("meta").at("config_hash").get<std::string>() == "deadbeefdeadbeef");
    CHECK(m.at("samples").is_array());
    CHECK(m.at("samples").empty());

    CHECK(samples_csv(r) == "t,x0,x1,x2,m,prop1_pass,prop2_value,prop2_pass,t_star,delta,thm_d\n");
    CHECK(psi_csv(r) == "x_index,k,psi_k\n");
    const nlohmann::json w = nlohmann::json::parse(weighted_json(r));
    CHECK(w.at("schema_version").get<int>() == kMapSchemaVersion);
}

TEST_CASE("plot bundles on an empty map are header-only and idempotent") {
    AnalysisResult r;
    const std::string map = map_json(r);
    CHECK(plot_m_vs_r_csv(map) == "t,x0,x1,x2,r,m\n");
    CHECK(plot_m_vs_r_csv(map) == plot_m_vs_r_csv(map));
    CHECK(plot_tstar_csv(map) == plot_tstar_csv(map));
    CHECK(plot_psi_decay_csv(psi_csv(r)) == "k,median_psi\n");
}

TEST_CASE("plot export refuses maps with a drifted schema, naming both versions") {
    AnalysisResult r;
    nlohmann::json m = nlohmann::json::parse(map_json(r));
    m["schema_version"] = 99;
    try {
        plot_m_vs_r_csv(m.dump());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("expected 1") != std::string::npos);
        CHECK(what.find("99") != std::string::npos);
    }
}

TEST_CASE("psi plot export refuses foreign tables") {
    CHECK_THROWS_AS(plot_psi_decay_csv("wrong,header\n1,2\n"), IoError);
}

TEST_CASE("a regularity sample row serializes every column") {
    AnalysisResult r;
    RegularitySample s;
    s.t = 0.25;
    s.x = {1.0, 2.0, 3.0};
    s.m_value = 0.01;
    s.prop1_pass = true;
    s.prop2_value = 0.002;
    s.prop2_pass = true;
    s.t_star = 0.25;
    s.delta = 0.5;
    s.thm_d_member = true;
    s.m_by_r = {{0.45, 0.01}, {0.4, 0.02}};
    r.samples.push_back(s);
    const std::string csv = samples_csv(r);
    CHECK(csv.find("0.25,1,2,3,0.01,1,0.002,1,0.25,0.5,1") != std::string::npos);
    const std::string plot = plot_m_vs_r_csv(map_json(r));
    CHECK(plot.find("0.45,0.01") != std::string::npos);
    CHECK(plot.find("0.4,0.02") != std::string::npos);
}
