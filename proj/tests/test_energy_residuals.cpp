#include "doctest.h"

#include <cmath>

#include "ckn/energy.hpp"
#include "ckn/fields.hpp"
#include "ckn/solver.hpp"
#include "ckn/test_function.hpp"

using namespace ckn;

namespace {

// One shared short run keeps this suite fast; every case below reads it.
const Trajectory& fixture_run() {
    static const Trajectory traj = [] {
        const TorusGrid g(32, 6.283185307179586);
        const VectorLattice u0 = prepare_initial(taylor_green(g, 1.0));
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.06;
        cfg.snapshot_stride = 5;
        return run(u0, cfg);
    }();
    return traj;
}

} // namespace

TEST_CASE("global energy balance closes to time-stepping accuracy") {
    const Trajectory& traj = fixture_run();
    REQUIRE(traj.status == RunStatus::complete);
    const StrongEnergyReport rep = strong_energy_residual(traj, 0.0, traj.end_time());
    CHECK(rep.scale > 0.0);
    CHECK(std::fabs(rep.residual) <= 1e-8 * rep.scale);
    CHECK(rep.energy_end < rep.energy_start); // dissipation only
    CHECK(rep.dissipation_integral > 0.0);
}

TEST_CASE("energy balance is additive over adjacent windows") {
    const Trajectory& traj = fixture_run();
    const double mid = 0.03;
    const StrongEnergyReport whole = strong_energy_residual(traj, 0.0, 0.06);
    const StrongEnergyReport left = strong_energy_residual(traj, 0.0, mid);
    const StrongEnergyReport right = strong_energy_residual(traj, mid, 0.06);
    const double sum = left.dissipation_integral + right.dissipation_integral;
    CHECK(sum == doctest::Approx(whole.dissipation_integral).epsilon(1e-12));
}

TEST_CASE("times that are not snapshot times are rejected") {
    const Trajectory& traj = fixture_run();
    CHECK_THROWS_AS(strong_energy_residual(traj, 0.0, 0.0123), RangeError);
    CHECK_THROWS_AS(strong_energy_residual(traj, 0.05, 0.01), RangeError);
}

TEST_CASE("a spatially constant test function degenerates to the global balance") {
    const Trajectory& traj = fixture_run();
    TestFunctionSpec phi;
    phi.spatial_kind = TestFunctionSpec::Spatial::constant_one;
    phi.plateau_lo = -1.0;
    phi.plateau_hi = 1.0;
    phi.rolloff = 0.5;
    const LocalEnergyReport loc = local_energy_residual(traj, phi, 0.0, 0.06);
    const StrongEnergyReport glob = strong_energy_residual(traj, 0.0, 0.06);
    // Same summation path, so the match is exact, not approximate.
    CHECK(loc.residual == glob.residual);
    CHECK(loc.term_phi_tau_lap == 0.0);
    CHECK(loc.term_cubic == 0.0);
}

TEST_CASE("localized balance closes for a compact bump in the core") {
    const Trajectory& traj = fixture_run();
    TestFunctionSpec phi;
    phi.center = {3.141592653589793, 3.141592653589793, 3.141592653589793};
    phi.spatial_radius = 1.8;
    phi.plateau_lo = -1.0;
    phi.plateau_hi = 1.0;
    phi.rolloff = 0.5; // temporally constant over the window
    const LocalEnergyReport rep = local_energy_residual(traj, phi, 0.0, 0.06);
    CHECK(rep.scale > 0.0);
    CHECK(std::fabs(rep.residual) <= 1e-4 * rep.scale);
    CHECK(rep.term_cubic != 0.0); // the transport term genuinely participates
}

TEST_CASE("localized balance closes when the temporal factor varies inside the window") {
    // The temporal ramp is integrated on the snapshot grid, so this case
    // runs with every step snapshotted to resolve the ramp.
    const TorusGrid g(16, 6.283185307179586);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.06;
    cfg.snapshot_stride = 1;
    const Trajectory traj = run(prepare_initial(taylor_green(g, 1.0)), cfg);
    REQUIRE(traj.status == RunStatus::complete);

    TestFunctionSpec phi;
    phi.center = {3.141592653589793, 3.141592653589793, 3.141592653589793};
    phi.spatial_radius = 1.8;
    phi.plateau_lo = 0.02;
    phi.plateau_hi = 0.04;
    phi.rolloff = 0.015; // phi ramps 0 -> 1 -> 0 within [0.005, 0.055]
    const LocalEnergyReport rep = local_energy_residual(traj, phi, 0.0, 0.06);
    CHECK(rep.scale > 0.0);
    CHECK(std::fabs(rep.residual) <= 2e-4 * rep.scale);
    CHECK(rep.term_start == 0.0); // phi vanishes at the window start
}

TEST_CASE("test function validation rejects oversized or degenerate specs") {
    const TorusGrid g(32, 6.283185307179586);
    TestFunctionSpec phi;
    phi.center = {3.0, 3.0, 3.0};
    phi.spatial_radius = 4.0; // exceeds box/2: support would self-overlap
    CHECK_THROWS_AS(phi.validate(g), PreconditionError);
    phi.spatial_radius = 1.0;
    phi.rolloff = 0.0;
    CHECK_THROWS_AS(phi.validate(g), PreconditionError);
    phi.rolloff = 0.1;
    phi.plateau_lo = 1.0;
    phi.plateau_hi = 0.0;
    CHECK_THROWS_AS(phi.validate(g), PreconditionError);
}

TEST_CASE("temporal factor is 1 on the plateau and 0 beyond the rolloff") {
    TestFunctionSpec phi;
    phi.plateau_lo = 0.2;
    phi.plateau_hi = 0.4;
    phi.rolloff = 0.1;
    CHECK(phi.temporal(0.3) == 1.0);
    CHECK(phi.temporal(0.2) == 1.0);
    CHECK(phi.temporal(0.05) == 0.0);
    CHECK(phi.temporal(0.55) == 0.0);
    const double inside = phi.temporal(0.25 - 0.1);
    CHECK(inside > 0.0);
    CHECK(inside < 1.0);
    // The derivative is zero on the plateau and nonzero mid-ramp.
    CHECK(phi.temporal_derivative(0.3) == 0.0);
    CHECK(phi.temporal_derivative(0.15) != 0.0);
}
