#include "doctest.h"

#include <cmath>

#include "ckn/criteria.hpp"
#include "ckn/fields.hpp"
#include "ckn/solver.hpp"

using namespace ckn;

namespace {

const std::array<double, 3> kCenter{3.141592653589793, 3.141592653589793,
                                    3.141592653589793};

// Hand-built trajectory of time-constant states; `unchecked` skips the
// divergence and mean gates so constant fields are legal fixtures.
Trajectory constant_trajectory(const TorusGrid& g, double speed, double pressure,
                               double t_end, double dt_snap) {
    Trajectory traj;
    traj.grid = g;
    traj.dt = dt_snap;
    const int count = static_cast<int>(std::round(t_end / dt_snap));
    for (int i = 0; i <= count; ++i) {
        VectorLattice u(g);
        for (std::size_t j = 0; j < u.c[0].size(); ++j) u.c[0][j] = speed;
        ScalarLattice pi(g, pressure);
        traj.snapshots.push_back(FieldSnapshot::unchecked(g, dt_snap * i, std::move(u),
                                                          std::move(pi)));
        traj.snapshot_steps.push_back(i);
        traj.step_times.push_back(dt_snap * i);
        traj.step_energy.push_back(traj.snapshots.back().energy);
        traj.step_enstrophy.push_back(traj.snapshots.back().enstrophy);
    }
    return traj;
}

// One moderately long real run shared by the criterion probes below.
const Trajectory& decayed_run() {
    static const Trajectory traj = [] {
        const TorusGrid g(16, 6.283185307179586);
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.7;
        cfg.snapshot_stride = 10;
        return run(prepare_initial(random_divfree(g, 90, 4, 0.2)), cfg);
    }();
    return traj;
}

} // namespace

TEST_CASE("smallness functional of a constant state matches its closed form") {
    const TorusGrid g(32, 6.283185307179586);
    const double U = 0.8, r = 1.2;
    const Trajectory traj = constant_trajectory(g, U, 0.0, 1.5, 0.05);
    AnalysisContext ctx(traj);
    ParabolicCylinder q;
    q.t = 1.45;
    q.x = kCenter;
    q.r = r;
    const MParts m = M_functional(ctx, q);
    // iint |u|^3 = U^3 |B_r| r^2, so M = U^3 |B_r|; pressure terms vanish.
    const double want = U * U * U * (4.0 * 3.141592653589793 / 3.0) * r * r * r;
    CHECK(m.mixed == 0.0);
    CHECK(m.pressure == 0.0);
    CHECK(m.total == m.velocity);
    CHECK(std::fabs(m.total - want) <= 0.03 * want);
}

TEST_CASE("the defect hook changes the pressure term by the flipped radius power") {
    const TorusGrid g(32, 6.283185307179586);
    const double r = 1.2;
    const Trajectory traj = constant_trajectory(g, 0.0, 1.0, 1.5, 0.05);
    AnalysisContext ctx(traj);
    ParabolicCylinder q;
    q.t = 1.45;
    q.x = kCenter;
    q.r = r;
    const MParts clean = M_functional(ctx, q);
    MHooks hooks;
    hooks.flip_pressure_exponent_sign = true;
    const MParts hooked = M_functional(ctx, q, hooks);
    REQUIRE(clean.pressure > 0.0);
    CHECK(hooked.pressure != clean.pressure);
    // r^{+13/4} in place of r^{-13/4} is a factor r^{13/2} on that term.
    CHECK(hooked.pressure / clean.pressure ==
          doctest::Approx(std::pow(r, 13.0 / 2.0)).epsilon(1e-9));
}

TEST_CASE("the smallness functional insists on the past-facing cylinder") {
    const TorusGrid g(16, 6.283185307179586);
    const Trajectory traj = constant_trajectory(g, 0.1, 0.0, 1.0, 0.1);
    AnalysisContext ctx(traj);
    ParabolicCylinder q;
    q.t = 0.8;
    q.x = kCenter;
    q.r = 0.6;
    q.variant = CylinderVariant::shifted;
    CHECK_THROWS_AS(M_functional(ctx, q), PreconditionError);
}

TEST_CASE("cylinder validation guards the box core and the time range") {
    const TorusGrid g(16, 6.283185307179586);
    ParabolicCylinder q;
    q.t = 0.5;
    q.x = kCenter;
    q.r = 2.0; // beyond box/4
    CHECK_THROWS_AS(q.validate(g, 0.0, 1.0), RangeError);
    q.r = 0.9; // r^2 = 0.81 > 0.5: the window starts before the run
    CHECK_THROWS_AS(q.validate(g, 0.0, 1.0), RangeError);
    q.r = 0.6;
    CHECK_NOTHROW(q.validate(g, 0.0, 1.0));
}

TEST_CASE("dilation relabels arrays exactly and rescales the metadata") {
    const TorusGrid g(16, 6.283185307179586);
    const Trajectory traj = constant_trajectory(g, 0.7, 0.3, 0.4, 0.1);
    const Trajectory d = dilate_trajectory(traj, 2.0);
    CHECK(d.grid.n == g.n);
    CHECK(d.grid.box == doctest::Approx(g.box / 2.0));
    REQUIRE(d.snapshots.size() == traj.snapshots.size());
    for (std::size_t i = 0; i < d.snapshots.size(); ++i) {
        CHECK(d.snapshots[i].time == traj.snapshots[i].time / 4.0);
        CHECK(d.snapshots[i].velocity.c[0][0] == 2.0 * traj.snapshots[i].velocity.c[0][0]);
        CHECK(d.snapshots[i].pressure.v[0] == 4.0 * traj.snapshots[i].pressure.v[0]);
        CHECK(d.snapshots[i].energy == doctest::Approx(traj.snapshots[i].energy / 2.0));
    }
    CHECK_THROWS_AS(dilate_trajectory(traj, 0.0), ConfigError);

    const VectorLattice v = taylor_green(g, 1.0);
    const VectorLattice v2 = dilate_field(v, 2.0);
    CHECK(v2.grid.box == doctest::Approx(g.box / 2.0));
    for (std::size_t i = 0; i < v.c[0].size(); ++i) {
        CHECK(v2.c[0][i] == 2.0 * v.c[0][i]);
        CHECK(v2.c[1][i] == 2.0 * v.c[1][i]);
    }
}

TEST_CASE("the smallness functional is invariant under the dilation relabeling") {
    const Trajectory& traj = decayed_run();
    REQUIRE(traj.status == RunStatus::complete);
    AnalysisContext ctx(traj);
    ParabolicCylinder q;
    q.t = 0.5;
    q.x = kCenter;
    q.r = 0.6;
    const double base = M_functional(ctx, q).total;
    REQUIRE(base > 0.0);

    const Trajectory dil = dilate_trajectory(traj, 2.0);
    AnalysisContext ctx2(dil);
    ParabolicCylinder q2;
    q2.t = q.t / 4.0;
    q2.x = {q.x[0] / 2.0, q.x[1] / 2.0, q.x[2] / 2.0};
    q2.r = q.r / 2.0;
    const double scaled = M_functional(ctx2, q2).total;
    CHECK(std::fabs(scaled - base) <= 1e-10 * base);
}

TEST_CASE("first criterion verdict: smallness implies the interior sup bound") {
    const Trajectory& traj = decayed_run();
    AnalysisContext ctx(traj);
    ParabolicCylinder q;
    q.t = 0.5;
    q.x = kCenter;
    q.r = 0.6;
    CKNConstants k;
    const Prop1Verdict v = prop1_verdict(ctx, q, k);
    CHECK(v.m.total == doctest::Approx(M_functional(ctx, q).total));
    CHECK(v.m_pass == (v.m.total <= k.epsilon1));
    CHECK(v.c1 == doctest::Approx(k.c0 * std::pow(k.epsilon1, 2.0 / 3.0)));
    CHECK(v.sup_bound == doctest::Approx(std::sqrt(v.c1) / q.r));
    REQUIRE(v.m_pass); // amplitude 0.2 after viscous decay is deep inside smallness
    CHECK(v.sup_holds);
    CHECK(v.measured_sup <= v.sup_bound);
}

TEST_CASE("gradient limsup probe reports per-radius values and the caveat") {
    const Trajectory& traj = decayed_run();
    AnalysisContext ctx(traj);
    // The shifted window reaches 7/8 r^2 back and r^2/8 forward, so t = 0.6
    // keeps both ends of an r = 0.82 window inside the [0, 0.7] run.
    const std::vector<double> radii{0.8, 0.82};
    const Prop2Result r2 = prop2_limsup(ctx, 0.6, kCenter, radii, 0.05);
    REQUIRE(r2.by_radius.size() == 2);
    CHECK(r2.limsup_caveat); // fewer than three admissible radii
    const double want = std::max(r2.by_radius[0].second, r2.by_radius[1].second);
    CHECK(r2.value == want);
    CHECK(r2.pass == (r2.value <= 0.05));
    for (const auto& [r, val] : r2.by_radius) CHECK(val >= 0.0);

    CHECK_THROWS_AS(prop2_limsup(ctx, 0.6, kCenter, {0.3}, 0.05), RangeError);
    CHECK_THROWS_AS(prop2_limsup(ctx, 0.6, kCenter, {}, 0.05), PreconditionError);
}

TEST_CASE("a quiescent state certifies the maximal window fraction and schedule") {
    const TorusGrid g(16, 6.283185307179586);
    const Trajectory traj = constant_trajectory(g, 0.0, 0.0, 1.4, 0.01);
    AnalysisContext ctx(traj);
    CKNConstants k;
    const ScheduleDelta d = lemma41_delta(ctx, kCenter, 1.0, k);
    CHECK(d.exists);
    CHECK(d.delta == 1023.0 / 1024.0); // top of the bisection grid
    CHECK_THROWS_AS(lemma41_delta(ctx, kCenter, 0.0, k), PreconditionError);

    const ScheduleResult sch = theorem_TI_schedule(ctx, kCenter, 1.0, k);
    CHECK(sch.available);
    REQUIRE(sch.samples.size() == 10);
    CHECK(sch.all_pass);
    for (const auto& s : sch.samples) {
        CHECK(s.range_ok);
        CHECK(s.m_pass);
        CHECK(s.decay_pass);
        CHECK(s.r == doctest::Approx(std::sqrt(s.s)));
        CHECK(s.t_center == doctest::Approx(7.0 / 6.0 * s.s));
    }
}

TEST_CASE("a zero horizon leaves the schedule unavailable with a reason") {
    const TorusGrid g(16, 6.283185307179586);
    const Trajectory traj = constant_trajectory(g, 0.0, 0.0, 0.5, 0.05);
    AnalysisContext ctx(traj);
    const ScheduleResult sch = theorem_TI_schedule(ctx, kCenter, 0.0, CKNConstants{});
    CHECK(!sch.available);
    CHECK(!sch.reason.empty());
    CHECK(sch.samples.empty());
}

TEST_CASE("covering: no failing samples means no cylinders") {
    const TorusGrid g(16, 6.283185307179586);
    std::vector<RegularitySample> samples(4);
    for (auto& s : samples) {
        s.prop1_pass = true;
        s.prop2_pass = true;
    }
    const CoveringReport rep = singular_candidates(samples, g, 0.5);
    CHECK(rep.count == 0);
    CHECK(rep.sum_r == 0.0);
    CHECK(rep.all_covered);
    CHECK(rep.failing_total == 0);
}

TEST_CASE("covering: clustered failures collapse into a few covering cylinders") {
    const TorusGrid g(16, 6.283185307179586);
    std::vector<RegularitySample> samples;
    for (int i = 0; i < 5; ++i) {
        RegularitySample s;
        s.t = 0.3;
        s.x = {kCenter[0] + 0.2 * i - 0.4, kCenter[1], kCenter[2]};
        s.prop1_pass = false; // prop2 left failing too; either suffices
        samples.push_back(s);
    }
    const CoveringReport rep = singular_candidates(samples, g, 0.5);
    CHECK(rep.failing_total == 5);
    CHECK(rep.all_covered);
    CHECK(rep.count >= 1);
    CHECK(rep.count <= 2);
    CHECK(rep.sum_r > 0.0);
    CHECK(rep.sum_r <= 0.5 * static_cast<double>(rep.count));

    // A finer radius cap still covers everything with at least as many pieces.
    const CoveringReport fine = singular_candidates(samples, g, 0.2);
    CHECK(fine.all_covered);
    CHECK(fine.count >= rep.count);
}

TEST_CASE("covering: the radius floor lifts a lone failing sample") {
    const TorusGrid g(16, 6.283185307179586);
    RegularitySample s;
    s.t = 0.4;
    s.x = kCenter;
    std::vector<RegularitySample> samples{s};
    const CoveringReport rep = singular_candidates(samples, g, 0.5, 0.15);
    REQUIRE(rep.count == 1);
    CHECK(rep.cylinders[0].r >= 0.15);
    CHECK(rep.all_covered);
    CHECK_THROWS_AS(singular_candidates(samples, g, 0.0), ConfigError);
}

TEST_CASE("paraboloid membership follows the initial-data gauge margin") {
    InitialDataGauge gauge;
    gauge.L = 0.5;
    gauge.L0 = 1.0;
    gauge.center = kCenter;
    const TorusGrid g(16, 6.283185307179586);
    const std::array<double, 3> y{kCenter[0] + 0.3, kCenter[1], kCenter[2]};
    CHECK(thmD_member(gauge, g, 0.2, y));   // 0.09 < 0.2 * 0.5
    CHECK(!thmD_member(gauge, g, 0.17, y)); // 0.09 >= 0.17 * 0.5
    InitialDataGauge hopeless = gauge;
    hopeless.L = 1.5; // no margin at all
    CHECK(!thmD_member(hopeless, g, 10.0, y));
}

TEST_CASE("initial-data gauge is linear in the amplitude and zero for rest") {
    const TorusGrid g(16, 6.283185307179586);
    const VectorLattice zero(g);
    CHECK(weighted_data_norm(zero, kCenter, 1.0).L == 0.0);
    const VectorLattice u1 = taylor_green(g, 1.0);
    const VectorLattice u2 = taylor_green(g, 2.0);
    const double l1 = weighted_data_norm(u1, kCenter, 1.0).L;
    const double l2 = weighted_data_norm(u2, kCenter, 1.0).L;
    REQUIRE(l1 > 0.0);
    CHECK(l2 == doctest::Approx(2.0 * l1).epsilon(1e-12));
}
