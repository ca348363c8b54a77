#include "ckn/spectral_ops.hpp"

#include <cmath>

#include "ckn/parallel.hpp"

namespace ckn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Applies fn(flat_index, sx, sy, sz) over the stored half-spectrum.
template <typename F>
void for_modes(const TorusGrid& g, F&& fn) {
    const int n = g.n;
    const int nx = n / 2 + 1;
    std::size_t idx = 0;
    for (int mz = 0; mz < n; ++mz) {
        const int sz = signed_mode(mz, n);
        for (int my = 0; my < n; ++my) {
            const int sy = signed_mode(my, n);
            for (int kx = 0; kx < nx; ++kx, ++idx) fn(idx, kx, sy, sz);
        }
    }
}
} // namespace

void zero_nyquist(SpectralScalar& m) {
    const int n = m.grid.n;
    for_modes(m.grid, [&](std::size_t i, int sx, int sy, int sz) {
        if (is_nyquist(sx, n) || is_nyquist(sy, n) || is_nyquist(sz, n)) m.m[i] = 0.0;
    });
}

void zero_nyquist(SpectralVector& m) {
    for (int d = 0; d < 3; ++d) zero_nyquist(m.c[d]);
}

void zero_mean_mode(SpectralScalar& m) { m.m[0] = 0.0; }

void zero_mean_mode(SpectralVector& m) {
    for (int d = 0; d < 3; ++d) m.c[d].m[0] = 0.0;
}

void dealias(SpectralScalar& m, double frac) {
    const int n = m.grid.n;
    const int keep = static_cast<int>(std::floor(frac * (n / 2) + 1e-9));
    for_modes(m.grid, [&](std::size_t i, int sx, int sy, int sz) {
        const bool drop = std::abs(sx) > keep || std::abs(sy) > keep || std::abs(sz) > keep ||
                          is_nyquist(sx, n) || is_nyquist(sy, n) || is_nyquist(sz, n);
        if (drop) m.m[i] = 0.0;
    });
}

void dealias(SpectralVector& m, double frac) {
    for (int d = 0; d < 3; ++d) dealias(m.c[d], frac);
}

void project_divfree(SpectralVector& m) {
    const int n = m.grid.n;
    const double kunit = kTwoPi / m.grid.box;
    for_modes(m.grid, [&](std::size_t i, int sx, int sy, int sz) {
        if (sx == 0 && sy == 0 && sz == 0) return;
        if (is_nyquist(sx, n) || is_nyquist(sy, n) || is_nyquist(sz, n)) {
            m.c[0].m[i] = 0.0;
            m.c[1].m[i] = 0.0;
            m.c[2].m[i] = 0.0;
            return;
        }
        const double kx = kunit * sx, ky = kunit * sy, kz = kunit * sz;
        const double k2 = kx * kx + ky * ky + kz * kz;
        const std::complex<double> kdot =
            kx * m.c[0].m[i] + ky * m.c[1].m[i] + kz * m.c[2].m[i];
        const std::complex<double> f = kdot / k2;
        m.c[0].m[i] -= kx * f;
        m.c[1].m[i] -= ky * f;
        m.c[2].m[i] -= kz * f;
    });
}

ScalarLattice divergence(const SpectralVector& m) {
    SpectralScalar div(m.grid);
    const int n = m.grid.n;
    const double kunit = kTwoPi / m.grid.box;
    const std::complex<double> iu(0.0, 1.0);
    for_modes(m.grid, [&](std::size_t i, int sx, int sy, int sz) {
        if (is_nyquist(sx, n) || is_nyquist(sy, n) || is_nyquist(sz, n)) {
            div.m[i] = 0.0;
            return;
        }
        div.m[i] = iu * (kunit * sx * m.c[0].m[i] + kunit * sy * m.c[1].m[i] +
                         kunit * sz * m.c[2].m[i]);
    });
    return synthesize(div);
}

double divergence_max(const SpectralVector& m) { return max_abs(divergence(m).v); }

SpectralScalar derivative(const SpectralScalar& m, int axis) {
    SpectralScalar out(m.grid);
    const int n = m.grid.n;
    const double kunit = kTwoPi / m.grid.box;
    const std::complex<double> iu(0.0, 1.0);
    for_modes(m.grid, [&](std::size_t i, int sx, int sy, int sz) {
        if (is_nyquist(sx, n) || is_nyquist(sy, n) || is_nyquist(sz, n)) {
            out.m[i] = 0.0;
            return;
        }
        const int s = axis == 0 ? sx : (axis == 1 ? sy : sz);
        out.m[i] = iu * (kunit * s) * m.m[i];
    });
    return out;
}

ScalarLattice derivative_lattice(const SpectralVector& m, int comp, int axis) {
    return synthesize(derivative(m.c[comp], axis));
}

ScalarLattice grad_norm_sq_lattice(const SpectralVector& m) {
    ScalarLattice out(m.grid, 0.0);
    for (int comp = 0; comp < 3; ++comp) {
        for (int axis = 0; axis < 3; ++axis) {
            const ScalarLattice d = derivative_lattice(m, comp, axis);
            parallel_for_blocks(out.v.size(), [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) out.v[i] += d.v[i] * d.v[i];
            });
        }
    }
    return out;
}

double enstrophy(const SpectralVector& m) {
    const ScalarLattice g2 = grad_norm_sq_lattice(m);
    const double h = m.grid.spacing();
    return pairwise_sum(g2.v) * (h * h * h);
}

} // namespace ckn
