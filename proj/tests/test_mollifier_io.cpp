#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "ckn/fields.hpp"
#include "ckn/mollifier.hpp"
#include "ckn/report.hpp"
#include "ckn/snapshot_io.hpp"
#include "ckn/solver.hpp"

using namespace ckn;
namespace fs = std::filesystem;

namespace {

const TorusGrid& grid16() {
    static const TorusGrid g(16, 6.283185307179586);
    return g;
}

fs::path fresh_dir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

bool same_bits(const VectorLattice& a, const VectorLattice& b) {
    for (int d = 0; d < 3; ++d)
        if (a.c[d] != b.c[d]) return false;
    return true;
}

} // namespace

TEST_CASE("mollifier kernel has exact unit discrete mass") {
    const TorusGrid& g = grid16();
    for (double eps : {0.6, 1.1, 2.0}) {
        const ScalarLattice k = mollifier_kernel(g, eps);
        const double h3 = std::pow(g.spacing(), 3);
        double mass = 0.0;
        for (double v : k.v) {
            CHECK(v >= 0.0);
            mass += v * h3;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("raw kernel mass approaches 1 once the bump is resolved") {
    const TorusGrid& g = grid16();
    CHECK(mollifier_raw_mass(g, 1.6) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("radii below one spacing mollify as the exact identity") {
    const TorusGrid& g = grid16();
    const VectorLattice u = random_divfree(g, 9, 5, 1.0);
    const VectorLattice m = mollify(u, 0.9 * g.spacing());
    CHECK(same_bits(u, m));
}

TEST_CASE("mollification preserves the mean and never grows the L2 norm") {
    const TorusGrid& g = grid16();
    const VectorLattice u = random_divfree(g, 10, 5, 1.0);
    const double before = l2_norm_sq(u);
    for (double eps : {0.6, 1.2}) {
        const VectorLattice m = mollify(u, eps);
        CHECK(l2_norm_sq(m) <= before * (1.0 + 1e-12));
        const auto mm = mean(m);
        const auto mu = mean(u);
        for (int d = 0; d < 3; ++d) CHECK(std::fabs(mm[d] - mu[d]) <= 1e-13);
    }
    // A genuinely rough field must actually lose energy.
    CHECK(l2_norm_sq(mollify(u, 1.2)) < 0.99 * before);
}

TEST_CASE("schedule-indexed mollification matches the direct call") {
    const TorusGrid& g = grid16();
    const VectorLattice u = random_divfree(g, 11, 4, 1.0);
    MollifierSchedule sched;
    sched.radii = {1.0, 0.7, 0.49};
    const VectorLattice a = mollify(u, sched, 1);
    const VectorLattice b = mollify(u, 0.7);
    CHECK(same_bits(a, b));
    CHECK_THROWS_AS(mollify(u, sched, 3), RangeError);
    CHECK_THROWS_AS(mollify(u, sched, -1), RangeError);
}

TEST_CASE("schedule validation wants strictly decreasing positive radii") {
    MollifierSchedule bad;
    bad.radii = {0.5, 0.7};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.radii = {0.5, 0.5};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad.radii = {};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    MollifierSchedule ok;
    ok.radii = {0.7, 0.5};
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("snapshot files round-trip every payload bit") {
    const TorusGrid& g = grid16();
    const VectorLattice u = prepare_initial(random_divfree(g, 77, 4, 1.0));
    const FieldSnapshot s = FieldSnapshot::make(g, 0.375, u, 1e-10);
    const fs::path dir = fresh_dir("ckn_snapshot_roundtrip");
    const std::string path = (dir / "state.cknf").string();
    write_snapshot(s, path);
    const FieldSnapshot back = read_snapshot(path);
    CHECK(back.grid == s.grid);
    CHECK(back.time == s.time);
    CHECK(same_bits(back.velocity, s.velocity));
    CHECK(back.pressure.v == s.pressure.v);
    // Caches are recomputed from identical bytes, so they match exactly.
    CHECK(back.energy == s.energy);
    CHECK(back.enstrophy == s.enstrophy);
}

TEST_CASE("truncated snapshot files name the failing byte offset") {
    const TorusGrid& g = grid16();
    const VectorLattice u = prepare_initial(taylor_green(g, 1.0));
    const FieldSnapshot s = FieldSnapshot::make(g, 0.0, u, 1e-10);
    const fs::path dir = fresh_dir("ckn_snapshot_truncated");
    const std::string path = (dir / "state.cknf").string();
    write_snapshot(s, path);
    fs::resize_file(path, 40);
    try {
        read_snapshot(path);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    }
}

TEST_CASE("a corrupted magic marker is rejected at offset zero") {
    const TorusGrid& g = grid16();
    const VectorLattice u = prepare_initial(taylor_green(g, 1.0));
    const FieldSnapshot s = FieldSnapshot::make(g, 0.0, u, 1e-10);
    const fs::path dir = fresh_dir("ckn_snapshot_badmagic");
    const std::string path = (dir / "state.cknf").string();
    write_snapshot(s, path);
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.put('X');
    }
    try {
        read_snapshot(path);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("bad magic") != std::string::npos);
        CHECK(std::string(e.what()).find("byte offset 0") != std::string::npos);
    }
}

TEST_CASE("missing files surface as IoError") {
    CHECK_THROWS_AS(read_snapshot("/nonexistent/dir/nothing.cknf"), IoError);
}

TEST_CASE("trajectory directories round-trip and keep their identity stamp") {
    RunConfig cfg;
    cfg.grid_n = 16;
    cfg.solver.dt = 2e-3;
    cfg.solver.t_end = 0.02;
    cfg.solver.snapshot_stride = 5;
    cfg.initial.kind = "taylor_green";
    cfg.initial.amplitude = 0.5;
    cfg.sampling.r_sequence = {0.9, 0.85, 0.8}; // above the 2h floor at n = 16
    cfg.validate();

    const VectorLattice u0 = build_initial_field(cfg);
    const Trajectory traj = run(u0, cfg.solver);
    REQUIRE(traj.status == RunStatus::complete);

    const fs::path dir = fresh_dir("ckn_traj_roundtrip");
    const std::vector<std::string> files = write_trajectory(dir.string(), cfg, traj);
    CHECK(files.size() == traj.snapshots.size()); // one file per stored step
    CHECK(fs::exists(dir / "manifest.json"));

    const Trajectory back = load_trajectory(dir.string());
    REQUIRE(back.snapshots.size() == traj.snapshots.size());
    CHECK(back.dt == traj.dt);
    for (std::size_t i = 0; i < back.snapshots.size(); ++i) {
        CHECK(back.snapshots[i].time == traj.snapshots[i].time);
        CHECK(same_bits(back.snapshots[i].velocity, traj.snapshots[i].velocity));
    }
    CHECK(trajectory_id_of(cfg, back) == trajectory_id_of(cfg, traj));
}

TEST_CASE("manifest schema drift is rejected naming both versions") {
    RunConfig cfg;
    cfg.grid_n = 16;
    cfg.solver.dt = 2e-3;
    cfg.solver.t_end = 0.01;
    cfg.solver.snapshot_stride = 5;
    cfg.sampling.r_sequence = {0.9, 0.85, 0.8}; // above the 2h floor at n = 16
    cfg.validate();
    const Trajectory traj = run(build_initial_field(cfg), cfg.solver);
    const fs::path dir = fresh_dir("ckn_traj_schema_drift");
    write_trajectory(dir.string(), cfg, traj);

    const std::string mpath = (dir / "manifest.json").string();
    nlohmann::json m = nlohmann::json::parse(read_text_file(mpath));
    m["schema_version"] = 99;
    write_text_file(mpath, m.dump());
    try {
        load_trajectory(dir.string());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("expected 1") != std::string::npos);
        CHECK(what.find("99") != std::string::npos);
    }
}
