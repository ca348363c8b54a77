#include "ckn/mollifier.hpp"

#include <cmath>

#include "ckn/bump.hpp"
#include "ckn/parallel.hpp"

namespace ckn {

void MollifierSchedule::validate() const {
    if (radii.empty()) throw ConfigError("mollifier schedule: no radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0))
            throw ConfigError("mollifier schedule: radii must be positive");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw ConfigError("mollifier schedule: radii must be strictly decreasing");
    }
}

double bump_mass_3d() {
    // 4 pi int_0^1 r^2 exp(-1/(1-r^2)) dr, composite Simpson; the integrand
    // vanishes to all orders at r = 1, so convergence is fast.
    const int n = 4096;
    const double h = 1.0 / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = i * h;
        const double f = r * r * bump_q(r * r);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * f;
    }
    return 4.0 * 3.14159265358979323846264338327950288 * acc * h / 3.0;
}

ScalarLattice mollifier_kernel(const TorusGrid& g, double eps) {
    if (!(eps > 0.0)) throw ConfigError("mollifier: radius must be positive");
    if (!(eps < 0.5 * g.box))
        throw ConfigError("mollifier: radius must be below box/2");
    ScalarLattice k(g);
    const double inv_eps2 = 1.0 / (eps * eps);
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz));
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy));
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix));
                k.v[g.index(ix, iy, iz)] =
                    bump_q((dx * dx + dy * dy + dz * dz) * inv_eps2);
            }
        }
    }
    const double h = g.spacing();
    const double mass = pairwise_sum(k.v) * (h * h * h);
    for (auto& x : k.v) x /= mass;
    return k;
}

double mollifier_raw_mass(const TorusGrid& g, double eps) {
    if (!(eps > 0.0) || !(eps < 0.5 * g.box))
        throw ConfigError("mollifier: radius out of range");
    ScalarLattice k(g);
    const double inv_eps2 = 1.0 / (eps * eps);
    const double c = bump_mass_3d() * eps * eps * eps;
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz));
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy));
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix));
                k.v[g.index(ix, iy, iz)] =
                    bump_q((dx * dx + dy * dy + dz * dz) * inv_eps2) / c;
            }
        }
    }
    const double h = g.spacing();
    return pairwise_sum(k.v) * (h * h * h);
}

std::vector<double> mollifier_multiplier(const TorusGrid& g, double eps) {
    const ScalarLattice k = mollifier_kernel(g, eps);
    const SpectralScalar kh = analyze(k);
    const double L3 = g.box * g.box * g.box;
    std::vector<double> m(kh.m.size());
    // Kernel is even, so the transform is real; the imaginary residue is
    // round-off and dropped. Mass preservation pinned exactly at k = 0.
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = kh.m[i].real() * L3;
    m[0] = 1.0;
    return m;
}

VectorLattice mollify(const VectorLattice& u, double eps) {
    if (!(eps > 0.0)) throw ConfigError("mollifier: radius must be positive");
    // Below one spacing only the center sample survives: a discrete delta.
    // Short-circuit so the identity holds bit for bit.
    if (eps < u.grid.spacing()) return u;
    const std::vector<double> m = mollifier_multiplier(u.grid, eps);
    SpectralVector uh = analyze(u);
    for (int d = 0; d < 3; ++d) {
        auto& comp = uh.c[d].m;
        parallel_for_blocks(comp.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) comp[i] *= m[i];
        });
    }
    return synthesize(uh);
}

VectorLattice mollify(const VectorLattice& u, const MollifierSchedule& schedule, int k) {
    schedule.validate();
    if (k < 0 || k >= schedule.steps())
        throw RangeError("mollifier schedule: step index out of range");
    return mollify(u, schedule.radii[static_cast<std::size_t>(k)]);
}

} // namespace ckn
