#include "ckn/fields.hpp"

#include <cmath>

#include "ckn/bump.hpp"
#include "ckn/fft.hpp"
#include "ckn/parallel.hpp"
#include "ckn/rng.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

VectorLattice taylor_green(const TorusGrid& g, double amplitude) {
    VectorLattice u(g);
    const double f = kTwoPi / g.box;
    for (int iz = 0; iz < g.n; ++iz) {
        const double cz = std::cos(f * g.coord(iz));
        for (int iy = 0; iy < g.n; ++iy) {
            const double cy = std::cos(f * g.coord(iy));
            const double sy = std::sin(f * g.coord(iy));
            for (int ix = 0; ix < g.n; ++ix) {
                const std::size_t i = g.index(ix, iy, iz);
                const double cx = std::cos(f * g.coord(ix));
                const double sx = std::sin(f * g.coord(ix));
                u.c[0][i] = amplitude * sx * cy * cz;
                u.c[1][i] = -amplitude * cx * sy * cz;
                u.c[2][i] = 0.0;
            }
        }
    }
    return u;
}

VectorLattice random_divfree(const TorusGrid& g, std::uint64_t seed, int band,
                             double amplitude) {
    if (band < 1 || band >= g.n / 2)
        throw ConfigError("random_divfree: band must be in [1, n/2)");
    VectorLattice u(g);
    const std::size_t cells = g.cells();
    for (int d = 0; d < 3; ++d) {
        SplitMix64 rng(seed * 3 + d);
        auto& comp = u.c[d];
        parallel_for_blocks(cells, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) comp[i] = rng.gaussian(i);
        });
    }
    SpectralVector m = analyze(u);
    dealias(m, static_cast<double>(band) / (g.n / 2));
    project_divfree(m);
    zero_mean_mode(m);
    u = synthesize(m);
    const double mm = max_magnitude(u);
    if (mm > 0.0) {
        const double s = amplitude / mm;
        for (int d = 0; d < 3; ++d)
            for (auto& x : u.c[d]) x *= s;
    }
    return u;
}

ScalarLattice ball_indicator(const TorusGrid& g, const std::array<double, 3>& center,
                             double radius) {
    ScalarLattice s(g);
    const double r2 = radius * radius;
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - center[2]);
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - center[1]);
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - center[0]);
                s.v[g.index(ix, iy, iz)] = (dx * dx + dy * dy + dz * dz <= r2) ? 1.0 : 0.0;
            }
        }
    }
    return s;
}

VectorLattice indicator_vector(const TorusGrid& g, const std::array<double, 3>& center,
                               double radius) {
    const ScalarLattice s = ball_indicator(g, center, radius);
    VectorLattice u(g);
    u.c[0] = s.v;
    u.c[1] = s.v;
    u.c[2] = s.v;
    return u;
}

VectorLattice curl_bump(const TorusGrid& g, const std::array<double, 3>& center,
                        double radius, double amplitude) {
    if (!(radius > 0.0) || radius >= 0.5 * g.box)
        throw ConfigError("curl_bump: radius must lie in (0, box/2)");
    VectorLattice u(g);
    const double invR2 = 1.0 / (radius * radius);
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - center[2]);
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - center[1]);
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - center[0]);
                const double q = (dx * dx + dy * dy + dz * dz) * invR2;
                const double dB = amplitude * bump_q_d1(q);
                const std::size_t i = g.index(ix, iy, iz);
                u.c[0][i] = dB * 2.0 * dy * invR2;
                u.c[1][i] = -dB * 2.0 * dx * invR2;
                u.c[2][i] = 0.0;
            }
        }
    }
    return u;
}

VectorLattice gradient_field(const TorusGrid& g) {
    // phi = sin x' cos 2y' sin z' + cos 2x' sin y', primes = 2 pi / box.
    VectorLattice u(g);
    const double f = kTwoPi / g.box;
    for (int iz = 0; iz < g.n; ++iz) {
        const double z = f * g.coord(iz);
        for (int iy = 0; iy < g.n; ++iy) {
            const double y = f * g.coord(iy);
            for (int ix = 0; ix < g.n; ++ix) {
                const double x = f * g.coord(ix);
                const std::size_t i = g.index(ix, iy, iz);
                u.c[0][i] = f * (std::cos(x) * std::cos(2 * y) * std::sin(z) -
                                 2 * std::sin(2 * x) * std::sin(y));
                u.c[1][i] = f * (-2 * std::sin(x) * std::sin(2 * y) * std::sin(z) +
                                 std::cos(2 * x) * std::cos(y));
                u.c[2][i] = f * std::sin(x) * std::cos(2 * y) * std::cos(z);
            }
        }
    }
    return u;
}

void add_scaled(VectorLattice& dst, const VectorLattice& src, double factor) {
    if (dst.grid != src.grid) throw PreconditionError("add_scaled: grid mismatch");
    for (int d = 0; d < 3; ++d) {
        auto& a = dst.c[d];
        const auto& b = src.c[d];
        parallel_for_blocks(a.size(), [&](std::size_t s, std::size_t e) {
            for (std::size_t i = s; i < e; ++i) a[i] += factor * b[i];
        });
    }
}

} // namespace ckn
