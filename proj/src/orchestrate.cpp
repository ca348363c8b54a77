#include "ckn/orchestrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ckn/budget.hpp"
#include "ckn/criteria.hpp"
#include "ckn/cylinders.hpp"
#include "ckn/energy.hpp"
#include "ckn/errors.hpp"
#include "ckn/fields.hpp"
#include "ckn/mollifier.hpp"
#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/report.hpp"
#include "ckn/solver.hpp"
#include "ckn/spectral_ops.hpp"
#include "ckn/weights.hpp"

namespace ckn {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

Trajectory truncated(const Trajectory& t, std::size_t count) {
    Trajectory out;
    out.grid = t.grid;
    out.dt = t.dt;
    out.viscosity = t.viscosity;
    out.status = t.status;
    out.abort_message = t.abort_message;
    out.snapshots.assign(t.snapshots.begin(),
                         t.snapshots.begin() + static_cast<std::ptrdiff_t>(count));
    out.snapshot_steps.assign(t.snapshot_steps.begin(),
                              t.snapshot_steps.begin() + static_cast<std::ptrdiff_t>(count));
    const std::size_t keep =
        std::min(t.step_times.size(), out.snapshot_steps.back() + 1);
    const auto k = static_cast<std::ptrdiff_t>(keep);
    out.step_times.assign(t.step_times.begin(), t.step_times.begin() + k);
    out.step_energy.assign(t.step_energy.begin(), t.step_energy.begin() + k);
    out.step_enstrophy.assign(t.step_enstrophy.begin(), t.step_enstrophy.begin() + k);
    return out;
}

std::vector<std::array<double, 3>> sample_points(const RunConfig& cfg) {
    const TorusGrid g(cfg.grid_n, cfg.box);
    std::vector<std::array<double, 3>> xs;
    if (cfg.sampling.x_stride > 0) {
        const double lo = cfg.box / 8.0;
        const double hi = cfg.box - lo;
        const auto core = [&](double c) { return c >= lo && c <= hi; };
        const int stride = cfg.sampling.x_stride;
        for (int iz = 0; iz < g.n; iz += stride)
            for (int iy = 0; iy < g.n; iy += stride)
                for (int ix = 0; ix < g.n; ix += stride) {
                    const std::array<double, 3> p{g.coord(ix), g.coord(iy), g.coord(iz)};
                    if (core(p[0]) && core(p[1]) && core(p[2])) xs.push_back(p);
                }
        if (xs.empty())
            throw ConfigError(
                "config: \"sampling.x_stride\" leaves no lattice point in the box core");
    } else if (!cfg.sampling.x_samples.empty()) {
        xs = cfg.sampling.x_samples;
        for (const auto& p : xs) {
            try {
                require_core_point(g, p);
            } catch (const PreconditionError&) {
                throw ConfigError(
                    "config: \"sampling.x_samples\" entries must lie in the box core "
                    "(each coordinate within [box/8, box - box/8])");
            }
        }
    } else {
        xs.push_back(cfg.box_center());
    }
    return xs;
}

ScalarLattice difference_magnitude_sq(const VectorLattice& a, const VectorLattice& b) {
    ScalarLattice out(a.grid);
    parallel_for_blocks(out.v.size(), [&](std::size_t b0, std::size_t b1) {
        for (std::size_t i = b0; i < b1; ++i) {
            double acc = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double d = a.c[c][i] - b.c[c][i];
                acc += d * d;
            }
            out.v[i] = acc;
        }
    });
    return out;
}

}  // namespace

AnalysisResult analyze_trajectory(const RunConfig& cfg, const Trajectory& u_in,
                                  const std::string& trajectory_id) {
    if (u_in.snapshots.empty()) throw PreconditionError("analysis: empty trajectory");
    const TorusGrid& g = u_in.grid;
    if (g.n != cfg.grid_n || std::fabs(g.box - cfg.box) > 1e-12 * cfg.box)
        throw ConfigError("config: \"grid\" does not match the stored trajectory");

    // Comparison trajectory: evolve the mollified initial data under the same
    // solver settings, then align both on the snapshots they share.
    const VectorLattice& u0 = u_in.snapshots.front().velocity;
    const VectorLattice v0 = build_comparison_field(cfg, u0);
    Trajectory v_run = run(v0, cfg.solver, u_in.start_time());

    Trajectory u_cut, v_cut;
    const Trajectory* up = &u_in;
    const Trajectory* vp = &v_run;
    if (u_in.snapshots.size() != v_run.snapshots.size()) {
        const std::size_t c = std::min(u_in.snapshots.size(), v_run.snapshots.size());
        if (c < 4)
            throw PreconditionError(
                "analysis: fewer than 4 aligned snapshots between the run and its "
                "comparison evolution");
        u_cut = truncated(u_in, c);
        v_cut = truncated(v_run, c);
        v_run = Trajectory{};
        up = &u_cut;
        vp = &v_cut;
    }
    const std::size_t count = up->snapshots.size();
    if (count < 4) throw PreconditionError("analysis: needs at least 4 snapshots");

    AnalysisResult res;
    res.config_hash = config_hash(cfg);
    res.trajectory_id = trajectory_id;
    res.constants = cfg.constants;
    res.mu = cfg.mu;

    const std::array<double, 3> center = cfg.box_center();
    res.gauge = weighted_data_norm(u0, center, cfg.constants.L0);

    const std::vector<std::array<double, 3>> xs = sample_points(cfg);

    MollifierSchedule sched;
    sched.radii = cfg.mollifier_radii;
    res.psi_table = psi_sequence(u0, sched, xs);
    const double region_r = 0.25 * cfg.box;
    res.goods_region_radius = region_r;
    const double excluded_cap =
        cfg.epsilon_measure * (4.0 / 3.0) * kPi * region_r * region_r * region_r;
    res.goods = good_sets(u0, sched, cfg.eta, center, region_r, excluded_cap);

    // Perturbation lattices shared by every sample point: dissipation densities
    // per snapshot and the end-state energy density for the mu ladder.
    std::vector<ScalarLattice> wgrad;
    wgrad.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SpectralVector ws = up->snapshots[i].spectral_velocity;
        const SpectralVector& vs = vp->snapshots[i].spectral_velocity;
        for (int c = 0; c < 3; ++c)
            for (std::size_t m = 0; m < ws.c[c].m.size(); ++m) ws.c[c].m[m] -= vs.c[c].m[m];
        wgrad.push_back(grad_norm_sq_lattice(ws));
    }
    const ScalarLattice wend_sq =
        difference_magnitude_sq(up->snapshots.back().velocity, vp->snapshots.back().velocity);

    AnalysisContext ctx(*up);
    const double start = up->start_time();
    const double end = up->end_time();
    const double hdt = up->snapshot_dt();
    const double t_tol = 1e-9 * std::max(1.0, std::fabs(end));

    res.per_x.reserve(xs.size());
    for (const auto& x : xs) {
        XAnalysis xa;
        xa.x = x;
        xa.budget = weighted_budget(*up, *vp, x, cfg.mu, cfg.constants.c);
        xa.tstar = estimate_t_star(xa.budget);
        if (xa.tstar.certified && xa.tstar.t_star > start + t_tol) {
            xa.delta = lemma41_delta(ctx, x, xa.tstar.t_star, cfg.constants);
            xa.schedule = theorem_TI_schedule(ctx, x, xa.tstar.t_star, cfg.constants);
        } else {
            xa.schedule.available = false;
            xa.schedule.reason = "no certified horizon";
        }

        WeightedEnergyReport& row = xa.row;
        row.x = x;
        const MuLadder lad = mu_ladder(wend_sq, x);
        row.mu_ladder = lad.mus;
        row.energy_ladder = lad.values;
        row.energy_extrapolated = lad.extrapolated;
        row.energy_direct = xa.budget.energy_w.back();
        row.diss_direct = xa.budget.diss_w_prefix.back();
        for (int li = 0; li < 3; ++li) {
            WeightSpec wl;
            wl.x = x;
            wl.mu = lad.mus[static_cast<std::size_t>(li)];
            wl.p = -1.0;
            std::vector<double> dvals(count);
            for (std::size_t i = 0; i < count; ++i)
                dvals[i] = weighted_density(wgrad[i], wl);
            row.diss_ladder[static_cast<std::size_t>(li)] =
                cubic_segment_integral(dvals, hdt, 0, count - 1);
        }
        row.psi = psi_point(u0, v0, x);
        row.t_star = xa.tstar.t_star;
        row.initial_ok = xa.budget.initial_ok;
        row.certified = xa.tstar.certified;
        row.covers_run = xa.tstar.covers_run;
        res.per_x.push_back(std::move(xa));
    }

    // Pointwise samples: every configured radius must be admissible for both
    // cylinder variants at the sampled times, so the band shrinks by the
    // largest radius on each side.
    const auto& rseq = cfg.sampling.r_sequence;
    const double r_head = rseq.front();
    const double r_max = *std::max_element(rseq.begin(), rseq.end());
    const double t_lo = start + r_max * r_max;
    const double t_hi = end - 0.125 * r_max * r_max;
    std::vector<std::size_t> admissible;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = up->snapshots[i].time;
        if (t >= t_lo - t_tol && t <= t_hi + t_tol) admissible.push_back(i);
    }
    const std::size_t stride = std::max<std::size_t>(1, cfg.sampling.t_stride);
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        const auto& x = xs[xi];
        const XAnalysis& xa = res.per_x[xi];
        for (std::size_t a = 0; a < admissible.size(); a += stride) {
            const std::size_t ti = admissible[a];
            const double t = up->snapshots[ti].time;
            RegularitySample s;
            s.t = t;
            s.x = x;
            ParabolicCylinder q;
            q.t = t;
            q.x = x;
            q.r = r_head;
            q.variant = CylinderVariant::standard;
            const Prop1Verdict v1 = prop1_verdict(ctx, q, cfg.constants);
            s.m_value = v1.m.total;
            s.prop1_pass = v1.m_pass;
            for (const double r : rseq) {
                ParabolicCylinder qr = q;
                qr.r = r;
                s.m_by_r.push_back({r, M_functional(ctx, qr).total});
            }
            const Prop2Result p2 = prop2_limsup(ctx, t, x, rseq, cfg.constants.epsilon3);
            s.prop2_value = p2.value;
            s.prop2_pass = p2.pass;
            s.prop2_caveat = p2.limsup_caveat;
            s.t_star = xa.tstar.t_star;
            s.delta = xa.delta.exists ? xa.delta.delta : 0.0;
            s.thm_d_member = thmD_member(res.gauge, g, t, x);
            s.schedule = xa.schedule.samples;
            if (s.prop1_pass) ++res.prop1_pass_count;
            if (s.prop2_pass) ++res.prop2_pass_count;
            res.samples.push_back(std::move(s));
        }
    }

    res.covering =
        singular_candidates(res.samples, g, cfg.covering.rho, cfg.covering.r_floor);
    return res;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    const VectorLattice u0 = build_initial_field(cfg);
    const Trajectory traj = run(u0, cfg.solver);
    write_trajectory(out_dir, cfg, traj);
    const bool ok = traj.status == RunStatus::complete;
    std::cout << "run: " << (ok ? "complete" : "aborted") << " steps="
              << (traj.step_times.empty() ? 0 : traj.step_times.size() - 1)
              << " snapshots=" << traj.snapshots.size()
              << " t_end=" << format_double(traj.end_time())
              << " energy_end=" << format_double(traj.snapshots.back().energy) << "\n";
    if (!ok) std::cout << "run: " << traj.abort_message << "\n";
    return ok ? 0 : 3;
}

int cmd_analyze(const std::string& config_path, const std::string& out_dir,
                const std::string& format) {
    if (format != "all" && format != "json" && format != "csv")
        throw ConfigError("config: \"--format\" must be json, csv, or all");
    const RunConfig cfg = load_config(config_path);
    const Trajectory traj = load_trajectory(out_dir);
    std::string tid;
    {
        nlohmann::json m;
        try {
            m = nlohmann::json::parse(read_text_file(out_dir + "/manifest.json"));
        } catch (const nlohmann::json::exception& e) {
            throw IoError(std::string("manifest.json: ") + e.what());
        }
        tid = m.value("trajectory_id", std::string{});
    }
    const AnalysisResult res = analyze_trajectory(cfg, traj, tid);
    const bool want_json = format != "csv";
    const bool want_csv = format != "json";
    if (want_json) {
        write_text_file(out_dir + "/map.json", map_json(res));
        write_text_file(out_dir + "/weighted_report.json", weighted_json(res));
    }
    if (want_csv) {
        write_text_file(out_dir + "/samples.csv", samples_csv(res));
        write_text_file(out_dir + "/psi_tables.csv", psi_csv(res));
    }

    double min_tstar = 0.0;
    bool all_certified = !res.per_x.empty();
    for (std::size_t i = 0; i < res.per_x.size(); ++i) {
        const double ts = res.per_x[i].tstar.t_star;
        if (i == 0 || ts < min_tstar) min_tstar = ts;
        all_certified = all_certified && res.per_x[i].tstar.certified;
    }
    std::cout << "analyze: samples=" << res.samples.size()
              << " prop1_pass=" << res.prop1_pass_count << "/" << res.samples.size()
              << " prop2_pass=" << res.prop2_pass_count << "/" << res.samples.size()
              << " certified=" << (all_certified ? "yes" : "no")
              << " min_t_star=" << format_double(min_tstar)
              << " covering_count=" << res.covering.count
              << " covering_sum_r=" << format_double(res.covering.sum_r) << "\n";
    return 0;
}

int cmd_plotdata(const std::string& out_dir) {
    const std::string map_text = read_text_file(out_dir + "/map.json");
    const std::string psi_text = read_text_file(out_dir + "/psi_tables.csv");
    write_text_file(out_dir + "/m_vs_r.csv", plot_m_vs_r_csv(map_text));
    write_text_file(out_dir + "/tstar_map.csv", plot_tstar_csv(map_text));
    write_text_file(out_dir + "/psi_decay.csv", plot_psi_decay_csv(psi_text));
    std::cout << "plotdata: wrote m_vs_r.csv tstar_map.csv psi_decay.csv\n";
    return 0;
}

int cmd_calibrate(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    const VectorLattice u0 = build_initial_field(cfg);
    const Trajectory traj = run(u0, cfg.solver);
    if (traj.status != RunStatus::complete) {
        std::cout << "calibrate: run aborted, " << traj.abort_message << "\n";
        return 3;
    }
    const AnalysisResult res =
        analyze_trajectory(cfg, traj, trajectory_id_of(cfg, traj));
    write_text_file(out_dir + "/calibration.json", calibration_json(res));
    double max_m = 0.0, max_p2 = 0.0;
    for (const auto& s : res.samples) {
        max_m = std::max(max_m, s.m_value);
        max_p2 = std::max(max_p2, s.prop2_value);
    }
    std::cout << "calibrate: samples=" << res.samples.size()
              << " epsilon1_floor=" << format_double(max_m)
              << " epsilon3_floor=" << format_double(max_p2) << "\n";
    return 0;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const BlowUpError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e)) return 4;
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const PreconditionError*>(&e)) return 2;
    if (dynamic_cast<const RangeError*>(&e)) return 2;
    return 1;
}

}  // namespace ckn
