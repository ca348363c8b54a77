#include "ckn/cylinders.hpp"

#include <cmath>

namespace ckn {

void ParabolicCylinder::validate(const TorusGrid& g, double traj_start,
                                 double traj_end) const {
    if (!(r > 0.0)) throw RangeError("cylinder: radius must be positive");
    if (!(r <= 0.25 * g.box))
        throw RangeError("cylinder: radius exceeds box/4 (leaves the box core)");
    const double tol = 1e-12 * std::max(1.0, std::fabs(traj_end));
    if (time_lo() < traj_start - tol || time_hi() > traj_end + tol)
        throw RangeError("cylinder: time span escapes the trajectory range");
}

BallWeights ball_weights(const TorusGrid& g, const std::array<double, 3>& x, double r) {
    BallWeights w;
    const double h = g.spacing();
    const double half = 0.5 * h;
    const double r2 = r * r;
    // Cells fully outside r + half-diagonal cannot contribute.
    const double reach = r + half * 1.7320508075688772936;
    const double reach2 = reach * reach;
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - x[2]);
        if (std::fabs(dz) > reach) continue;
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - x[1]);
            if (std::fabs(dy) > reach) continue;
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - x[0]);
                const double d2 = dx * dx + dy * dy + dz * dz;
                if (d2 > reach2) continue;
                int inside = 0;
                for (int cz = -1; cz <= 1; cz += 2)
                    for (int cy = -1; cy <= 1; cy += 2)
                        for (int cx = -1; cx <= 1; cx += 2) {
                            const double ex = dx + cx * half;
                            const double ey = dy + cy * half;
                            const double ez = dz + cz * half;
                            if (ex * ex + ey * ey + ez * ez <= r2) ++inside;
                        }
                if (inside > 0)
                    w.cells.emplace_back(g.index(ix, iy, iz), inside / 8.0);
                if (d2 <= r2) w.inside_centers.push_back(g.index(ix, iy, iz));
            }
        }
    }
    return w;
}

} // namespace ckn
