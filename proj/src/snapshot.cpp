#include "ckn/snapshot.hpp"

#include <cmath>

#include "ckn/parallel.hpp"
#include "ckn/pressure.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

FieldSnapshot FieldSnapshot::make(const TorusGrid& g, double time, VectorLattice u,
                                  double div_tol) {
    if (u.grid != g) throw PreconditionError("snapshot: velocity grid mismatch");
    FieldSnapshot s;
    s.grid = g;
    s.time = time;
    s.spectral_velocity = analyze(u);
    const auto m = mean(u);
    const double mean_tol = 1e-12 * (1.0 + max_magnitude(u));
    for (int d = 0; d < 3; ++d)
        if (!(std::fabs(m[d]) <= mean_tol))
            throw PreconditionError("snapshot: velocity component mean is not zero");
    const double div = divergence_max(s.spectral_velocity);
    if (!(div <= div_tol))
        throw PreconditionError("snapshot: discrete divergence " + std::to_string(div) +
                                " exceeds div_tol");
    s.pressure = solve_pressure(u, s.spectral_velocity, div_tol);
    s.velocity = std::move(u);
    s.energy = l2_norm_sq(s.velocity);
    s.enstrophy = ckn::enstrophy(s.spectral_velocity);
    return s;
}

FieldSnapshot FieldSnapshot::unchecked(const TorusGrid& g, double time, VectorLattice u,
                                       ScalarLattice pi) {
    FieldSnapshot s;
    s.grid = g;
    s.time = time;
    s.spectral_velocity = analyze(u);
    s.pressure = std::move(pi);
    s.velocity = std::move(u);
    s.energy = l2_norm_sq(s.velocity);
    s.enstrophy = ckn::enstrophy(s.spectral_velocity);
    return s;
}

std::optional<std::size_t> Trajectory::snapshot_at(double t, double tol) const {
    for (std::size_t i = 0; i < snapshots.size(); ++i)
        if (std::fabs(snapshots[i].time - t) <= tol) return i;
    return std::nullopt;
}

double Trajectory::snapshot_dt() const {
    if (snapshots.size() < 2)
        throw RangeError("trajectory: need at least two snapshots for a time grid");
    return snapshots[1].time - snapshots[0].time;
}

} // namespace ckn
