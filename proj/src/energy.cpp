#include "ckn/energy.hpp"

#include <cmath>

#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

namespace {

std::size_t require_snapshot(const Trajectory& traj, double t, const char* which) {
    auto idx = traj.snapshot_at(t);
    if (!idx)
        throw RangeError(std::string("energy residual: ") + which +
                         " time does not match any snapshot");
    return *idx;
}

void require_uniform(const Trajectory& traj) {
    const double h = traj.snapshot_dt();
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        const double d = traj.snapshots[i].time - traj.snapshots[i - 1].time;
        if (std::fabs(d - h) > 1e-9 * std::max(1.0, std::fabs(h)))
            throw RangeError("energy residual: snapshots are not uniformly spaced");
    }
}

} // namespace

double weighted_speed_sq(const VectorLattice& u, const ScalarLattice* weight) {
    const std::size_t n = u.c[0].size();
    std::vector<double> contrib(n);
    parallel_for_blocks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double q = u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i];
            if (weight) q *= weight->v[i];
            contrib[i] = q;
        }
    });
    const double h = u.grid.spacing();
    return pairwise_sum(contrib) * (h * h * h);
}

double weighted_grad_sq(const SpectralVector& spec, const ScalarLattice* weight) {
    const ScalarLattice g2 = grad_norm_sq_lattice(spec);
    const std::size_t n = g2.v.size();
    std::vector<double> contrib(n);
    parallel_for_blocks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double q = g2.v[i];
            if (weight) q *= weight->v[i];
            contrib[i] = q;
        }
    });
    const double h = spec.grid.spacing();
    return pairwise_sum(contrib) * (h * h * h);
}

StrongEnergyReport strong_energy_residual(const Trajectory& traj, double t_start,
                                          double t_end) {
    require_uniform(traj);
    const std::size_t i0 = require_snapshot(traj, t_start, "start");
    const std::size_t i1 = require_snapshot(traj, t_end, "end");
    if (i0 >= i1) throw RangeError("energy residual: start must precede end");

    std::vector<double> diss(traj.snapshots.size());
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
        diss[i] = weighted_grad_sq(traj.snapshots[i].spectral_velocity, nullptr);

    StrongEnergyReport rep;
    rep.energy_start = weighted_speed_sq(traj.snapshots[i0].velocity, nullptr);
    rep.energy_end = weighted_speed_sq(traj.snapshots[i1].velocity, nullptr);
    rep.dissipation_integral = cubic_segment_integral(diss, traj.snapshot_dt(), i0, i1);
    rep.residual = rep.energy_end + 2.0 * rep.dissipation_integral - rep.energy_start;
    rep.scale = rep.energy_start;
    return rep;
}

LocalEnergyReport local_energy_residual(const Trajectory& traj,
                                        const TestFunctionSpec& phi, double t_start,
                                        double t_end) {
    require_uniform(traj);
    const std::size_t i0 = require_snapshot(traj, t_start, "start");
    const std::size_t i1 = require_snapshot(traj, t_end, "end");
    if (i0 >= i1) throw RangeError("energy residual: start must precede end");
    const TorusGrid& g = traj.grid;
    phi.validate(g);

    const ScalarLattice sp = phi.spatial_lattice(g);
    const VectorLattice spg = phi.spatial_gradient_lattice(g);
    const ScalarLattice spl = phi.spatial_laplacian_lattice(g);
    const double h = g.spacing();
    const double h3 = h * h * h;

    const std::size_t nsnap = traj.snapshots.size();
    std::vector<double> diss_phi(nsnap, 0.0);   // int |grad u|^2 phi
    std::vector<double> carry_phi(nsnap, 0.0);  // int |u|^2 (phi_tau + lap phi)
    std::vector<double> cubic_phi(nsnap, 0.0);  // int (|u|^2 + 2 pi) u . grad phi

    // Segment stencils reach at most 3 samples beyond [i0, i1] (one-sided
    // pieces at array ends); evaluate only what they can touch.
    const std::size_t s_lo = i0 < 3 ? 0 : i0 - 3;
    const std::size_t s_hi = std::min(nsnap - 1, i1 + 3);
    const std::size_t cells = g.cells();
    std::vector<double> contrib(cells);
    for (std::size_t s = s_lo; s <= s_hi; ++s) {
        const FieldSnapshot& snap = traj.snapshots[s];
        const double kt = phi.temporal(snap.time);
        const double kdt = phi.temporal_derivative(snap.time);

        diss_phi[s] = kt * weighted_grad_sq(snap.spectral_velocity, &sp);

        const auto& u = snap.velocity;
        parallel_for_blocks(cells, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const double q =
                    u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i];
                contrib[i] = q * (kdt * sp.v[i] + kt * spl.v[i]);
            }
        });
        carry_phi[s] = pairwise_sum(contrib) * h3;

        parallel_for_blocks(cells, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const double q =
                    u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i];
                const double udotg = u.c[0][i] * spg.c[0][i] + u.c[1][i] * spg.c[1][i] +
                                     u.c[2][i] * spg.c[2][i];
                contrib[i] = (q + 2.0 * snap.pressure.v[i]) * udotg;
            }
        });
        cubic_phi[s] = kt == 0.0 ? 0.0 : kt * (pairwise_sum(contrib) * h3);
    }

    // Endpoint terms int |u|^2 phi at t_start / t_end.
    auto endpoint = [&](std::size_t s) {
        const FieldSnapshot& snap = traj.snapshots[s];
        const double kt = phi.temporal(snap.time);
        return kt * weighted_speed_sq(snap.velocity, &sp);
    };

    const double hdt = traj.snapshot_dt();
    LocalEnergyReport rep;
    rep.term_start = endpoint(i0);
    rep.term_phi_tau_lap = cubic_segment_integral(carry_phi, hdt, i0, i1);
    rep.term_cubic = cubic_segment_integral(cubic_phi, hdt, i0, i1);
    const double diss = cubic_segment_integral(diss_phi, hdt, i0, i1);
    rep.lhs = endpoint(i1) + 2.0 * diss;
    rep.rhs = rep.term_start + rep.term_phi_tau_lap + rep.term_cubic;
    rep.residual = rep.lhs - rep.rhs;
    rep.scale = std::max(std::fabs(rep.lhs), std::fabs(rep.rhs));
    return rep;
}

} // namespace ckn
