#include "ckn/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ckn/errors.hpp"
#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral_ops.hpp"
#include "ckn/weights.hpp"

namespace ckn {

namespace {

std::vector<double> time_axis(const Trajectory& traj) {
    std::vector<double> t;
    t.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) t.push_back(s.time);
    return t;
}

// Snapshot indices with positive overlap weight against (a, b], plus the
// weights themselves. Requires a uniform snapshot grid.
struct TimeWindow {
    std::vector<std::size_t> idx;
    std::vector<double> w;
};

TimeWindow clipped_window(const Trajectory& traj, double a, double b) {
    const std::vector<double> t = time_axis(traj);
    const std::vector<double> wts = window_overlap_weights(t, traj.snapshot_dt(), a, b);
    TimeWindow win;
    for (std::size_t i = 0; i < wts.size(); ++i)
        if (wts[i] > 0.0) {
            win.idx.push_back(i);
            win.w.push_back(wts[i]);
        }
    return win;
}

// Grid sup of |u| over the cylinder: snapshots inside the time span, cell
// centers inside the ball. Callers validate the cylinder; an empty sample
// set yields 0. with_sqrt_tau weights each snapshot's max by sqrt(time).
double cylinder_sup_speed(const AnalysisContext& ctx, const ParabolicCylinder& q,
                          bool with_sqrt_tau) {
    const Trajectory& traj = ctx.trajectory();
    const BallWeights bw = ball_weights(traj.grid, q.x, q.r);
    // A ball narrower than a cell may hold no center; widen to every cell the
    // ball touches rather than taking a vacuous (zero) supremum.
    std::vector<std::size_t> probe = bw.inside_centers;
    if (probe.empty()) {
        probe.reserve(bw.cells.size());
        for (const auto& [cell, frac] : bw.cells)
            if (frac > 0.0) probe.push_back(cell);
    }
    if (probe.empty()) throw RangeError("cylinder supremum: ball touches no cell");
    const double lo = q.time_lo();
    const double hi = q.time_hi();
    const double tol = 1e-9 * (1.0 + std::fabs(hi));
    double best = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const double tau = traj.snapshots[i].time;
        if (tau < lo - tol || tau > hi + tol) continue;
        ++hits;
        const ScalarLattice& sp = ctx.speed(i);
        double m = 0.0;
        for (std::size_t cell : probe) m = std::max(m, sp.v[cell]);
        if (with_sqrt_tau) m *= std::sqrt(std::max(tau, 0.0));
        best = std::max(best, m);
    }
    if (hits == 0)
        throw RangeError("cylinder supremum: no snapshot time inside the window");
    return best;
}

double norm3(const std::array<double, 3>& d) {
    return std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
}

} // namespace

AnalysisContext::AnalysisContext(const Trajectory& traj) : traj_(&traj) {
    const std::size_t m = traj.snapshots.size();
    if (m == 0) throw PreconditionError("analysis: trajectory has no snapshots");
    speed_.resize(m);
    speed_sq_.resize(m);
    abs_pressure_.resize(m);
    grad_sq_.resize(m);
}

const ScalarLattice& AnalysisContext::speed_sq(std::size_t snap) const {
    if (snap >= speed_sq_.size()) throw PreconditionError("analysis: snapshot index");
    if (!speed_sq_[snap]) {
        const VectorLattice& u = traj_->snapshots[snap].velocity;
        ScalarLattice s(u.grid);
        parallel_for_blocks(s.v.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                s.v[i] = u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] +
                         u.c[2][i] * u.c[2][i];
        });
        speed_sq_[snap] = std::move(s);
    }
    return *speed_sq_[snap];
}

const ScalarLattice& AnalysisContext::speed(std::size_t snap) const {
    if (snap >= speed_.size()) throw PreconditionError("analysis: snapshot index");
    if (!speed_[snap]) {
        const ScalarLattice& sq = speed_sq(snap);
        ScalarLattice s(sq.grid);
        parallel_for_blocks(s.v.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) s.v[i] = std::sqrt(sq.v[i]);
        });
        speed_[snap] = std::move(s);
    }
    return *speed_[snap];
}

const ScalarLattice& AnalysisContext::abs_pressure(std::size_t snap) const {
    if (snap >= abs_pressure_.size()) throw PreconditionError("analysis: snapshot index");
    if (!abs_pressure_[snap]) {
        const ScalarLattice& pi = traj_->snapshots[snap].pressure;
        ScalarLattice s(pi.grid);
        parallel_for_blocks(s.v.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) s.v[i] = std::fabs(pi.v[i]);
        });
        abs_pressure_[snap] = std::move(s);
    }
    return *abs_pressure_[snap];
}

const ScalarLattice& AnalysisContext::grad_sq(std::size_t snap) const {
    if (snap >= grad_sq_.size()) throw PreconditionError("analysis: snapshot index");
    if (!grad_sq_[snap])
        grad_sq_[snap] = grad_norm_sq_lattice(traj_->snapshots[snap].spectral_velocity);
    return *grad_sq_[snap];
}

std::vector<double> AnalysisContext::snapshot_times() const { return time_axis(*traj_); }

VectorLattice dilate_field(const VectorLattice& u, double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("dilation: lambda must be positive");
    VectorLattice out(TorusGrid(u.grid.n, u.grid.box / lambda));
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < u.c[c].size(); ++i) out.c[c][i] = lambda * u.c[c][i];
    return out;
}

Trajectory dilate_trajectory(const Trajectory& traj, double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("dilation: lambda must be positive");
    const double l2 = lambda * lambda;
    Trajectory out;
    out.grid = TorusGrid(traj.grid.n, traj.grid.box / lambda);
    out.dt = traj.dt / l2;
    out.viscosity = traj.viscosity;
    out.snapshot_steps = traj.snapshot_steps;
    out.status = traj.status;
    out.abort_message = traj.abort_message;
    out.step_times.reserve(traj.step_times.size());
    for (double t : traj.step_times) out.step_times.push_back(t / l2);
    out.step_energy.reserve(traj.step_energy.size());
    for (double e : traj.step_energy) out.step_energy.push_back(e / lambda);
    out.step_enstrophy.reserve(traj.step_enstrophy.size());
    for (double w : traj.step_enstrophy) out.step_enstrophy.push_back(w * lambda);
    out.snapshots.reserve(traj.snapshots.size());
    for (const FieldSnapshot& s : traj.snapshots) {
        FieldSnapshot d;
        d.grid = out.grid;
        d.time = s.time / l2;
        d.velocity = dilate_field(s.velocity, lambda);
        d.pressure = ScalarLattice(out.grid);
        for (std::size_t i = 0; i < s.pressure.v.size(); ++i)
            d.pressure.v[i] = l2 * s.pressure.v[i];
        d.spectral_velocity = SpectralVector(out.grid);
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < s.spectral_velocity.c[c].m.size(); ++i)
                d.spectral_velocity.c[c].m[i] = lambda * s.spectral_velocity.c[c].m[i];
        d.energy = s.energy / lambda;
        d.enstrophy = s.enstrophy * lambda;
        out.snapshots.push_back(std::move(d));
    }
    return out;
}

MParts M_functional(const AnalysisContext& ctx, const ParabolicCylinder& q,
                    const MHooks& hooks) {
    const Trajectory& traj = ctx.trajectory();
    if (q.variant != CylinderVariant::standard)
        throw PreconditionError("smallness functional: needs the past-cylinder variant");
    q.validate(traj.grid, traj.start_time(), traj.end_time());
    const TorusGrid& g = traj.grid;
    const double h = g.spacing();
    const double cellv = h * h * h;
    const BallWeights bw = ball_weights(g, q.x, q.r);
    const TimeWindow win = clipped_window(traj, q.time_lo(), q.time_hi());

    // Sparse cell sums are serial on purpose: the reduction order must not
    // depend on the thread count.
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t k = 0; k < win.idx.size(); ++k) {
        const std::size_t i = win.idx[k];
        const ScalarLattice& sp = ctx.speed(i);
        const ScalarLattice& sq = ctx.speed_sq(i);
        const ScalarLattice& ap = ctx.abs_pressure(i);
        double cube = 0.0, mixed = 0.0, pabs = 0.0;
        for (const auto& [cell, frac] : bw.cells) {
            cube += frac * sq.v[cell] * sp.v[cell];
            mixed += frac * sp.v[cell] * ap.v[cell];
            pabs += frac * ap.v[cell];
        }
        s1 += win.w[k] * (cube * cellv);
        s2 += win.w[k] * (mixed * cellv);
        s3 += win.w[k] * std::pow(pabs * cellv, 1.25);
    }

    MParts parts;
    const double rm2 = 1.0 / (q.r * q.r);
    const double sigma = hooks.flip_pressure_exponent_sign ? 3.25 : -3.25;
    parts.velocity = rm2 * s1;
    parts.mixed = rm2 * s2;
    parts.pressure = std::pow(q.r, sigma) * s3;
    parts.total = parts.velocity + parts.mixed + parts.pressure;
    return parts;
}

Prop1Verdict prop1_verdict(const AnalysisContext& ctx, const ParabolicCylinder& q,
                           const CKNConstants& k, const MHooks& hooks) {
    Prop1Verdict v;
    v.m = M_functional(ctx, q, hooks);
    v.m_pass = v.m.total <= k.epsilon1;
    v.c1 = k.c0 * std::pow(k.epsilon1, 2.0 / 3.0);
    v.sup_bound = std::sqrt(v.c1) / q.r;
    ParabolicCylinder half = q;
    half.r = 0.5 * q.r;
    v.measured_sup = cylinder_sup_speed(ctx, half, false);
    v.sup_holds = v.measured_sup <= v.sup_bound;
    return v;
}

Prop2Result prop2_limsup(const AnalysisContext& ctx, double t,
                         const std::array<double, 3>& x,
                         const std::vector<double>& r_sequence, double epsilon3) {
    if (r_sequence.empty())
        throw PreconditionError("gradient limsup probe: need at least one radius");
    const Trajectory& traj = ctx.trajectory();
    const TorusGrid& g = traj.grid;
    const double h = g.spacing();
    const double floor_r = 2.0 * h;
    for (double r : r_sequence)
        if (r < floor_r)
            throw RangeError("gradient limsup probe: radius " + std::to_string(r) +
                             " is below the resolution floor 2h = " +
                             std::to_string(floor_r));

    Prop2Result res;
    const double cellv = h * h * h;
    for (double r : r_sequence) {
        ParabolicCylinder q;
        q.t = t;
        q.x = x;
        q.r = r;
        q.variant = CylinderVariant::shifted;
        q.validate(g, traj.start_time(), traj.end_time());
        const BallWeights bw = ball_weights(g, x, r);
        const TimeWindow win = clipped_window(traj, q.time_lo(), q.time_hi());
        double acc = 0.0;
        for (std::size_t k = 0; k < win.idx.size(); ++k) {
            const ScalarLattice& gs = ctx.grad_sq(win.idx[k]);
            double cell_sum = 0.0;
            for (const auto& [cell, frac] : bw.cells) cell_sum += frac * gs.v[cell];
            acc += win.w[k] * (cell_sum * cellv);
        }
        res.by_radius.emplace_back(r, acc / r);
    }

    std::vector<std::size_t> order(res.by_radius.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return res.by_radius[a].first < res.by_radius[b].first;
    });
    const std::size_t take = std::min<std::size_t>(3, order.size());
    double value = 0.0;
    for (std::size_t i = 0; i < take; ++i)
        value = std::max(value, res.by_radius[order[i]].second);
    res.value = value;
    res.limsup_caveat = res.by_radius.size() < 3;
    res.pass = value <= epsilon3;
    return res;
}

ScheduleDelta lemma41_delta(const AnalysisContext& ctx, const std::array<double, 3>& x,
                            double t_star, const CKNConstants& k) {
    if (!(t_star > 0.0))
        throw PreconditionError("window certificate: horizon must be positive");
    const Trajectory& traj = ctx.trajectory();
    const std::vector<double> times = time_axis(traj);
    const double hs = traj.snapshot_dt();
    const double start = traj.start_time();
    const double tol = 1e-12 * std::max(1.0, t_star);

    // Per-snapshot integrand sqrt(E) * D, weighted at x with the singular-cell
    // kernel (mu = 0). Only snapshots up to the horizon participate.
    WeightSpec w;
    w.x = x;
    w.mu = 0.0;
    w.p = -1.0;
    std::vector<double> f(times.size(), 0.0);
    std::vector<std::size_t> sample_ts; // snapshot indices with t in (start, t_star]
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] > t_star + tol) break;
        const double e = weighted_density(ctx.speed_sq(i), w);
        const double d = weighted_density(ctx.grad_sq(i), w);
        f[i] = std::sqrt(e) * d;
        if (times[i] > start + tol) sample_ts.push_back(i);
    }

    ScheduleDelta out;
    if (sample_ts.empty()) {
        out.exists = false;
        out.offending_t = start;
        return out;
    }

    // Tail surrogate over ((1 - delta) t, t): c I + c I^{5/6}. The window
    // integral I is nondecreasing in delta, so a bisection on the 1/1024
    // grid finds the largest passing delta.
    auto surrogate_at = [&](double delta, std::size_t snap) {
        const double t = times[snap];
        const std::vector<double> wts =
            window_overlap_weights(times, hs, (1.0 - delta) * t, t);
        double integral = 0.0;
        for (std::size_t i = 0; i <= snap && i < wts.size(); ++i)
            integral += wts[i] * f[i];
        return k.c * integral + k.c * std::pow(integral, 5.0 / 6.0);
    };
    auto passes = [&](int j, double* bad_t) {
        const double delta = j / 1024.0;
        for (std::size_t snap : sample_ts)
            if (!(surrogate_at(delta, snap) < k.epsilon1)) {
                if (bad_t) *bad_t = times[snap];
                return false;
            }
        return true;
    };

    double bad_t = 0.0;
    if (!passes(1, &bad_t)) {
        out.exists = false;
        out.offending_t = bad_t;
        return out;
    }
    int lo = 1;
    int hi = 1024; // sentinel: grid value 1024/1024 = 1 is never admissible
    if (passes(1023, nullptr)) {
        lo = 1023;
    } else {
        hi = 1023;
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            if (passes(mid, nullptr))
                lo = mid;
            else
                hi = mid;
        }
    }
    out.exists = true;
    out.delta = lo / 1024.0;
    for (std::size_t snap : sample_ts)
        out.margin.emplace_back(times[snap],
                                k.epsilon1 - surrogate_at(out.delta, snap));
    return out;
}

ScheduleResult theorem_TI_schedule(const AnalysisContext& ctx,
                                   const std::array<double, 3>& x, double t_star,
                                   const CKNConstants& k, int n_samples) {
    ScheduleResult res;
    if (!(t_star > 0.0)) {
        res.reason = "no certified horizon (t_star = 0)";
        return res;
    }
    if (n_samples < 1) throw ConfigError("schedule: n_samples must be >= 1");

    const ScheduleDelta d = lemma41_delta(ctx, x, t_star, k);
    res.delta = d.exists ? d.delta : 0.0;
    // Q_{sqrt(s)}((7/6) s) spans (s/6, (7/6) s]; relative to its top time the
    // window fraction is 6/7, so the certificate must reach at least that far.
    const double needed = 6.0 / 7.0;
    if (!d.exists || d.delta < needed) {
        res.reason = "window fraction " + std::to_string(res.delta) +
                     " is below 6/7; the scheduled cylinders would leave the "
                     "certified tail";
        return res;
    }

    res.available = true;
    const double t_x = (6.0 / 7.0) * t_star;
    bool all = true;
    for (int j = 1; j <= n_samples; ++j) {
        ScheduleSample s;
        s.s = t_x * j / (n_samples + 1);
        s.r = std::sqrt(s.s);
        s.t_center = (7.0 / 6.0) * s.s;
        try {
            ParabolicCylinder q;
            q.t = s.t_center;
            q.x = x;
            q.r = s.r;
            q.variant = CylinderVariant::standard;
            const Prop1Verdict v = prop1_verdict(ctx, q, k);
            s.m_value = v.m.total;
            s.m_pass = v.m_pass;

            ParabolicCylinder decay = q;
            decay.r = 0.5 * s.r; // sqrt(s/4)
            decay.validate(ctx.trajectory().grid, ctx.trajectory().start_time(),
                           ctx.trajectory().end_time());
            s.decay_sup = cylinder_sup_speed(ctx, decay, true);
            s.decay_pass = s.decay_sup <= k.c;
        } catch (const RangeError&) {
            s.range_ok = false;
        }
        all = all && s.range_ok && s.m_pass && s.decay_pass;
        res.samples.push_back(s);
    }
    res.all_pass = all;
    return res;
}

InitialDataGauge weighted_data_norm(const VectorLattice& u0,
                                    const std::array<double, 3>& center, double L0) {
    WeightSpec w;
    w.x = center;
    w.mu = 0.0;
    w.p = -1.0;
    InitialDataGauge gauge;
    gauge.L = std::sqrt(weighted_E(u0, w));
    gauge.L0 = L0;
    gauge.center = center;
    return gauge;
}

bool thmD_member(const InitialDataGauge& gauge, const TorusGrid& g, double t,
                 const std::array<double, 3>& y) {
    if (!(t > 0.0)) return false;
    if (!(gauge.L < gauge.L0)) return false;
    const std::array<double, 3> d = g.min_image_disp(y, gauge.center);
    const double d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    return d2 < t * (gauge.L0 - gauge.L);
}

CoveringReport singular_candidates(const std::vector<RegularitySample>& samples,
                                   const TorusGrid& g, double rho, double r_floor) {
    if (!(rho > 0.0)) throw ConfigError("covering: rho must be positive");
    struct Item {
        double t;
        std::array<double, 3> x;
    };
    std::vector<Item> items;
    for (const auto& s : samples)
        if (!s.prop1_pass || !s.prop2_pass) items.push_back({s.t, s.x});

    CoveringReport rep;
    rep.failing_total = items.size();
    if (items.empty()) return rep;

    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.x < b.x;
    });

    // Greedy sweep: the earliest uncovered sample seeds a cluster of all
    // uncovered samples within rho spatially and rho^2 forward in time; the
    // cylinder tops the cluster in time and centers the spatial bbox.
    std::vector<bool> covered(items.size(), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (covered[i]) continue;
        const Item& seed = items[i];
        std::vector<std::size_t> cluster;
        std::array<double, 3> lo{0.0, 0.0, 0.0}, hi{0.0, 0.0, 0.0};
        for (std::size_t j = i; j < items.size(); ++j) {
            if (covered[j]) continue;
            if (items[j].t > seed.t + rho * rho) break; // sorted by time
            const std::array<double, 3> d = g.min_image_disp(items[j].x, seed.x);
            if (norm3(d) > rho) continue;
            cluster.push_back(j);
            for (int c = 0; c < 3; ++c) {
                lo[c] = std::min(lo[c], d[c]);
                hi[c] = std::max(hi[c], d[c]);
            }
        }
        CoveringCylinder cyl;
        const std::array<double, 3> mid{0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]),
                                        0.5 * (lo[2] + hi[2])};
        cyl.x = {seed.x[0] + mid[0], seed.x[1] + mid[1], seed.x[2] + mid[2]};
        cyl.t = seed.t;
        double reach = 0.0;
        for (std::size_t j : cluster) {
            cyl.t = std::max(cyl.t, items[j].t);
            const std::array<double, 3> d = g.min_image_disp(items[j].x, seed.x);
            const std::array<double, 3> off{d[0] - mid[0], d[1] - mid[1],
                                            d[2] - mid[2]};
            reach = std::max(reach, norm3(off));
        }
        double r = std::max({reach, std::sqrt(cyl.t - seed.t), r_floor});
        cyl.r = r;
        for (std::size_t j : cluster) covered[j] = true;
        rep.cylinders.push_back(cyl);
    }

    rep.count = rep.cylinders.size();
    for (const auto& c : rep.cylinders) rep.sum_r += c.r;

    // Exhaustive soundness check: every failing sample inside some cylinder.
    for (const auto& it : items) {
        bool in_any = false;
        for (const auto& c : rep.cylinders) {
            const double tol = 1e-9 * (1.0 + rho);
            if (it.t > c.t + tol || it.t < c.t - c.r * c.r - tol) continue;
            const std::array<double, 3> d = g.min_image_disp(it.x, c.x);
            if (norm3(d) <= c.r + tol) {
                in_any = true;
                break;
            }
        }
        if (!in_any) rep.all_covered = false;
    }
    return rep;
}

} // namespace ckn
