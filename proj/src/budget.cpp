#include "ckn/budget.hpp"

#include <cmath>

#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

namespace {

SpectralVector spectral_difference(const SpectralVector& a, const SpectralVector& b) {
    SpectralVector d(a.grid);
    for (int comp = 0; comp < 3; ++comp) {
        const auto& am = a.c[comp].m;
        const auto& bm = b.c[comp].m;
        auto& dm = d.c[comp].m;
        parallel_for_blocks(dm.size(), [&](std::size_t s, std::size_t e) {
            for (std::size_t i = s; i < e; ++i) dm[i] = am[i] - bm[i];
        });
    }
    return d;
}

VectorLattice lattice_difference(const VectorLattice& a, const VectorLattice& b) {
    VectorLattice d(a.grid);
    for (int comp = 0; comp < 3; ++comp) {
        const auto& av = a.c[comp];
        const auto& bv = b.c[comp];
        auto& dv = d.c[comp];
        parallel_for_blocks(dv.size(), [&](std::size_t s, std::size_t e) {
            for (std::size_t i = s; i < e; ++i) dv[i] = av[i] - bv[i];
        });
    }
    return d;
}

} // namespace

PerturbationBudget weighted_budget(const Trajectory& u_traj, const Trajectory& v_traj,
                                   const std::array<double, 3>& x, double mu, double c) {
    if (u_traj.grid != v_traj.grid)
        throw PreconditionError("weighted budget: trajectories on different grids");
    if (u_traj.snapshots.size() != v_traj.snapshots.size())
        throw PreconditionError("weighted budget: snapshot counts differ");
    if (u_traj.snapshots.size() < 4)
        throw PreconditionError("weighted budget: need at least 4 snapshots");
    for (std::size_t i = 0; i < u_traj.snapshots.size(); ++i)
        if (std::fabs(u_traj.snapshots[i].time - v_traj.snapshots[i].time) > 1e-12)
            throw PreconditionError("weighted budget: snapshot time grids differ");
    if (!(c > 0.0)) throw ConfigError("weighted budget: constant c must be positive");

    PerturbationBudget b;
    b.x = x;
    b.mu = mu;
    b.c = c;
    b.threshold_initial = 1.0 / (16.0 * c * c);
    b.threshold_evolved = 1.0 / (8.0 * c * c);

    WeightSpec w;
    w.x = x;
    w.mu = mu;
    w.p = -1.0;

    const std::size_t n = u_traj.snapshots.size();
    b.times.resize(n);
    b.energy_w.resize(n);
    b.diss_w.resize(n);
    std::vector<double> hist_density(n);
    for (std::size_t i = 0; i < n; ++i) {
        const FieldSnapshot& su = u_traj.snapshots[i];
        const FieldSnapshot& sv = v_traj.snapshots[i];
        b.times[i] = su.time;
        const VectorLattice wlat = lattice_difference(su.velocity, sv.velocity);
        const SpectralVector wspec =
            spectral_difference(su.spectral_velocity, sv.spectral_velocity);
        b.energy_w[i] = weighted_E(wlat, w);
        b.diss_w[i] = weighted_D(wspec, w);
        // H density: ||grad v||_2^4 + E(v) D(v), both weighted at (x, mu).
        const double ev = weighted_E(sv.velocity, w);
        const double dv = weighted_D(sv.spectral_velocity, w);
        hist_density[i] = sv.enstrophy * sv.enstrophy + ev * dv;
    }
    const double hdt = u_traj.snapshot_dt();
    const std::vector<double> dp = cubic_segment_prefix(b.diss_w, hdt);
    b.diss_w_prefix = dp;
    std::vector<double> hp = cubic_segment_prefix(hist_density, hdt);
    b.history_v.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.history_v[i] = c * hp[i];

    b.initial_ok = b.energy_w[0] < b.threshold_initial;
    b.history_ok.resize(n);
    b.evolved_ok.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.history_ok[i] = b.history_v[i] < b.threshold_initial ? 1 : 0;
        b.evolved_ok[i] =
            b.energy_w[i] + 0.5 * b.diss_w_prefix[i] < b.threshold_evolved ? 1 : 0;
    }
    return b;
}

TStarEstimate estimate_t_star(const PerturbationBudget& budget) {
    TStarEstimate e;
    if (!budget.initial_ok) {
        e.certified = false;
        e.t_star = 0.0;
        e.has_failure = !budget.times.empty();
        e.failing_index = 0;
        return e;
    }
    std::size_t last_ok = 0;
    bool broke = false;
    for (std::size_t i = 0; i < budget.times.size(); ++i) {
        if (budget.history_ok[i] && budget.evolved_ok[i]) {
            last_ok = i;
        } else {
            broke = true;
            e.failing_index = i;
            break;
        }
    }
    e.certified = budget.history_ok[0] && budget.evolved_ok[0];
    e.t_star = e.certified ? budget.times[last_ok] : 0.0;
    e.covers_run = e.certified && !broke && last_ok == budget.times.size() - 1;
    e.has_failure = broke;
    return e;
}

GoodSets good_sets(const VectorLattice& u0, const MollifierSchedule& schedule,
                   double eta, const std::array<double, 3>& region_center,
                   double region_radius, double epsilon_measure) {
    schedule.validate();
    if (!(eta > 0.0)) throw ConfigError("good sets: eta must be positive");
    if (!(epsilon_measure >= 0.0))
        throw ConfigError("good sets: epsilon must be nonnegative");
    if (!(region_radius > 0.0) || region_radius >= 0.5 * u0.grid.box)
        throw ConfigError("good sets: region radius must lie in (0, box/2)");

    const TorusGrid& g = u0.grid;
    const double h = g.spacing();
    const double h3 = h * h * h;
    const double r2 = region_radius * region_radius;

    std::vector<std::uint8_t> region(g.cells(), 0);
    std::size_t region_count = 0;
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - region_center[2]);
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - region_center[1]);
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - region_center[0]);
                if (dx * dx + dy * dy + dz * dz <= r2) {
                    region[g.index(ix, iy, iz)] = 1;
                    ++region_count;
                }
            }
        }
    }
    if (region_count == 0) throw ConfigError("good sets: region contains no lattice points");

    GoodSets best;
    for (int k = 0; k < schedule.steps(); ++k) {
        const VectorLattice vk = mollify(u0, schedule, k);
        const ScalarLattice psi = psi_lattice(u0, vk);
        std::vector<std::uint8_t> e_mask(g.cells(), 0);
        std::vector<std::uint8_t> omega(g.cells(), 0);
        std::size_t covered = 0;
        for (std::size_t i = 0; i < psi.v.size(); ++i) {
            if (psi.v[i] < eta) {
                e_mask[i] = 1;
                if (region[i]) {
                    omega[i] = 1;
                    ++covered;
                }
            }
        }
        GoodSets gs;
        gs.k = k;
        gs.coverage = static_cast<double>(covered) / static_cast<double>(region_count);
        gs.excluded_measure = static_cast<double>(region_count - covered) * h3;
        gs.target_met = gs.excluded_measure <= epsilon_measure;
        gs.e_mask = std::move(e_mask);
        gs.omega_mask = std::move(omega);
        if (gs.target_met) return gs; // minimal k achieving the target
        if (best.k < 0 || gs.coverage >= best.coverage) best = std::move(gs);
    }
    return best; // target not met anywhere; best attempt, target_met = false
}

} // namespace ckn
