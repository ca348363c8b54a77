#include "doctest.h"

#include <cmath>

#include "ckn/budget.hpp"
#include "ckn/fields.hpp"
#include "ckn/solver.hpp"

using namespace ckn;

namespace {

Trajectory short_run(const VectorLattice& u0, double t_end = 0.02) {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = t_end;
    cfg.snapshot_stride = 5;
    return run(u0, cfg);
}

const std::array<double, 3> kCenter{3.141592653589793, 3.141592653589793,
                                    3.141592653589793};

} // namespace

TEST_CASE("identical trajectories certify with zero perturbation energy") {
    // Mild amplitude: the history term integrates the comparison run's own
    // global enstrophy, so a strong field would spend that budget by itself.
    const TorusGrid g(16, 6.283185307179586);
    const Trajectory traj = short_run(prepare_initial(taylor_green(g, 0.05)));
    REQUIRE(traj.status == RunStatus::complete);
    const PerturbationBudget b = weighted_budget(traj, traj, kCenter, 0.0, 1.0);
    CHECK(b.threshold_initial == doctest::Approx(1.0 / 16.0));
    CHECK(b.threshold_evolved == doctest::Approx(1.0 / 8.0));
    for (double e : b.energy_w) CHECK(e == 0.0);
    for (double d : b.diss_w) CHECK(d == 0.0);
    CHECK(b.initial_ok);

    const TStarEstimate ts = estimate_t_star(b);
    CHECK(ts.certified);
    CHECK(ts.covers_run);
    CHECK(!ts.has_failure);
    CHECK(ts.t_star == traj.end_time());
}

TEST_CASE("the constant rescales both thresholds quadratically") {
    const TorusGrid g(16, 6.283185307179586);
    const Trajectory traj = short_run(prepare_initial(taylor_green(g, 0.2)));
    const PerturbationBudget b = weighted_budget(traj, traj, kCenter, 0.0, 2.0);
    CHECK(b.threshold_initial == doctest::Approx(1.0 / 64.0));
    CHECK(b.threshold_evolved == doctest::Approx(1.0 / 32.0));
    CHECK_THROWS_AS(weighted_budget(traj, traj, kCenter, 0.0, 0.0), ConfigError);
}

TEST_CASE("a small perturbation of a mild field stays inside the budget") {
    const TorusGrid g(16, 6.283185307179586);
    const VectorLattice v0 = prepare_initial(taylor_green(g, 0.05));
    VectorLattice u0raw = taylor_green(g, 0.05);
    add_scaled(u0raw, curl_bump(g, kCenter, 1.0, 1.0), 1e-3);
    const VectorLattice u0 = prepare_initial(u0raw);
    const Trajectory tu = short_run(u0);
    const Trajectory tv = short_run(v0);
    const PerturbationBudget b = weighted_budget(tu, tv, kCenter, 0.0, 1.0);
    CHECK(b.initial_ok);
    CHECK(b.energy_w[0] > 0.0); // the perturbation is genuinely there
    for (std::size_t i = 0; i < b.times.size(); ++i) {
        CHECK(b.history_ok[i] == 1);
        CHECK(b.evolved_ok[i] == 1);
    }
    // The running certificate term matches its pieces by construction.
    const TStarEstimate ts = estimate_t_star(b);
    CHECK(ts.certified);
    CHECK(ts.covers_run);
    // Dissipation prefix is a prefix integral: zero at 0, nondecreasing.
    CHECK(b.diss_w_prefix.front() == 0.0);
    for (std::size_t i = 1; i < b.diss_w_prefix.size(); ++i)
        CHECK(b.diss_w_prefix[i] >= b.diss_w_prefix[i - 1] - 1e-15);
}

TEST_CASE("mismatched inputs are refused up front") {
    const TorusGrid g16(16, 6.283185307179586);
    const TorusGrid g24(24, 6.283185307179586);
    const Trajectory a = short_run(prepare_initial(taylor_green(g16, 0.1)));
    const Trajectory b = short_run(prepare_initial(taylor_green(g24, 0.1)));
    CHECK_THROWS_AS(weighted_budget(a, b, kCenter, 0.0, 1.0), PreconditionError);

    SolverConfig other;
    other.dt = 1e-3;
    other.t_end = 0.02;
    other.snapshot_stride = 10; // different snapshot grid
    const Trajectory c = run(prepare_initial(taylor_green(g16, 0.1)), other);
    CHECK_THROWS_AS(weighted_budget(a, c, kCenter, 0.0, 1.0), PreconditionError);
}

TEST_CASE("the horizon estimate reports the first broken snapshot") {
    PerturbationBudget b;
    b.times = {0.0, 0.1, 0.2, 0.3};
    b.initial_ok = true;
    b.history_ok = {1, 1, 1, 1};
    b.evolved_ok = {1, 1, 0, 1}; // breaks at index 2; later recovery is ignored
    const TStarEstimate ts = estimate_t_star(b);
    CHECK(ts.certified);
    CHECK(ts.t_star == 0.1);
    CHECK(ts.has_failure);
    CHECK(ts.failing_index == 2);
    CHECK(!ts.covers_run);
}

TEST_CASE("a failed initial test yields an uncertified zero horizon") {
    PerturbationBudget b;
    b.times = {0.0, 0.1};
    b.initial_ok = false;
    b.history_ok = {1, 1};
    b.evolved_ok = {1, 1};
    const TStarEstimate ts = estimate_t_star(b);
    CHECK(!ts.certified);
    CHECK(ts.t_star == 0.0);
    CHECK(ts.has_failure);
    CHECK(ts.failing_index == 0);
}

TEST_CASE("good sets reach full coverage once mollification is the identity") {
    const TorusGrid g(16, 6.283185307179586);
    const VectorLattice u0 = random_divfree(g, 55, 4, 1.0);
    MollifierSchedule sched;
    // Final step is below one spacing: psi vanishes identically there.
    sched.radii = {1.0, 0.5, 0.2};
    const GoodSets gs = good_sets(u0, sched, 1e-6, kCenter, 1.5, 1e-9);
    CHECK(gs.target_met);
    CHECK(gs.coverage == 1.0);
    CHECK(gs.excluded_measure == 0.0);
    CHECK(gs.k >= 0);
    CHECK(gs.k <= 2);
    REQUIRE(gs.e_mask.size() == g.cells());
    REQUIRE(gs.omega_mask.size() == g.cells());
    // Omega is E restricted to the region ball, so it can only lose points.
    for (std::size_t i = 0; i < gs.e_mask.size(); ++i)
        CHECK(gs.omega_mask[i] <= gs.e_mask[i]);
}

TEST_CASE("good sets report the best step honestly when the target is out of reach") {
    const TorusGrid g(16, 6.283185307179586);
    const VectorLattice u0 = random_divfree(g, 56, 4, 1.0);
    MollifierSchedule sched;
    sched.radii = {1.2}; // coarse smoothing only: psi stays visibly positive
    const GoodSets gs = good_sets(u0, sched, 1e-12, kCenter, 1.5, 1e-9);
    CHECK(!gs.target_met);
    CHECK(gs.k == 0);
    CHECK(gs.coverage < 1.0);
    CHECK(gs.excluded_measure > 0.0);
}

TEST_CASE("good sets argument validation") {
    const TorusGrid g(16, 6.283185307179586);
    const VectorLattice u0 = taylor_green(g, 1.0);
    MollifierSchedule sched;
    sched.radii = {0.5};
    CHECK_THROWS_AS(good_sets(u0, sched, 0.0, kCenter, 1.5, 0.01), ConfigError);
    CHECK_THROWS_AS(good_sets(u0, sched, 1e-3, kCenter, 9.0, 0.01), ConfigError);
    CHECK_THROWS_AS(good_sets(u0, sched, 1e-3, kCenter, -1.0, 0.01), ConfigError);
}
