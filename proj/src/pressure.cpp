#include "ckn/pressure.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "ckn/parallel.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

ScalarLattice product_lattice(const VectorLattice& u, int i, int j) {
    ScalarLattice p(u.grid);
    const auto& a = u.c[i];
    const auto& b = u.c[j];
    parallel_for_blocks(p.v.size(), [&](std::size_t s, std::size_t e) {
        for (std::size_t k = s; k < e; ++k) p.v[k] = a[k] * b[k];
    });
    return p;
}

// Second-derivative kernels of the periodic Newtonian potential:
// K_ij(z) = (1/box^3) sum_{k != 0} (-k_i k_j / |k|^2) cos(k.z), Nyquist
// planes excluded to match the spectral solve convention.
struct OracleKernel {
    std::vector<std::array<double, 6>> k; // component order: 11,22,33,12,13,23
};

const std::array<std::array<int, 2>, 6> kPairs = {{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

std::mutex g_kernel_mutex;

const OracleKernel& oracle_kernel(const TorusGrid& g) {
    static std::map<std::pair<int, double>, OracleKernel> cache;
    std::lock_guard<std::mutex> lock(g_kernel_mutex);
    auto key = std::make_pair(g.n, g.box);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const int n = g.n;
    const double kunit = kTwoPi / g.box;
    std::vector<double> cos_tab(n);
    for (int p = 0; p < n; ++p) cos_tab[p] = std::cos(kTwoPi * p / n);

    struct Mode {
        int sx, sy, sz;
        std::array<double, 6> coef;
    };
    std::vector<Mode> modes;
    for (int sz = -n / 2 + 1; sz < n / 2; ++sz)
        for (int sy = -n / 2 + 1; sy < n / 2; ++sy)
            for (int sx = -n / 2 + 1; sx < n / 2; ++sx) {
                if (sx == 0 && sy == 0 && sz == 0) continue;
                const double kx = kunit * sx, ky = kunit * sy, kz = kunit * sz;
                const double k2 = kx * kx + ky * ky + kz * kz;
                Mode m{sx, sy, sz, {}};
                const double kv[3] = {kx, ky, kz};
                for (int c = 0; c < 6; ++c)
                    m.coef[c] = -kv[kPairs[c][0]] * kv[kPairs[c][1]] / k2;
                modes.push_back(m);
            }

    OracleKernel ker;
    ker.k.assign(g.cells(), {});
    const double invL3 = 1.0 / (g.box * g.box * g.box);
    for (int jz = 0; jz < n; ++jz)
        for (int jy = 0; jy < n; ++jy)
            for (int jx = 0; jx < n; ++jx) {
                std::array<double, 6> acc{};
                for (const Mode& m : modes) {
                    int p = (m.sx * jx + m.sy * jy + m.sz * jz) % n;
                    if (p < 0) p += n;
                    const double c = cos_tab[p];
                    for (int q = 0; q < 6; ++q) acc[q] += m.coef[q] * c;
                }
                auto& slot = ker.k[g.index(jx, jy, jz)];
                for (int q = 0; q < 6; ++q) slot[q] = acc[q] * invL3;
            }
    return cache.emplace(key, std::move(ker)).first->second;
}

} // namespace

ScalarLattice solve_pressure(const VectorLattice& u, const SpectralVector& spec,
                             double div_tol) {
    const double div = divergence_max(spec);
    if (!(div <= div_tol))
        throw PreconditionError("solve_pressure: discrete divergence " + std::to_string(div) +
                                " exceeds div_tol");
    const TorusGrid& g = u.grid;
    const int n = g.n;
    const double kunit = kTwoPi / g.box;

    std::array<SpectralScalar, 6> T;
    for (int c = 0; c < 6; ++c)
        T[c] = analyze(product_lattice(u, kPairs[c][0], kPairs[c][1]));

    SpectralScalar pi_hat(g);
    const int nx = n / 2 + 1;
    std::size_t idx = 0;
    for (int mz = 0; mz < n; ++mz) {
        const int sz = signed_mode(mz, n);
        for (int my = 0; my < n; ++my) {
            const int sy = signed_mode(my, n);
            for (int kx = 0; kx < nx; ++kx, ++idx) {
                if ((kx == 0 && sy == 0 && sz == 0) || is_nyquist(kx, n) ||
                    is_nyquist(sy, n) || is_nyquist(sz, n)) {
                    pi_hat.m[idx] = 0.0;
                    continue;
                }
                const double kv[3] = {kunit * kx, kunit * sy, kunit * sz};
                const double k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                std::complex<double> rhs = 0.0;
                for (int c = 0; c < 6; ++c) {
                    const double w = (kPairs[c][0] == kPairs[c][1]) ? 1.0 : 2.0;
                    rhs += w * kv[kPairs[c][0]] * kv[kPairs[c][1]] * T[c].m[idx];
                }
                pi_hat.m[idx] = -rhs / k2;
            }
        }
    }
    return synthesize(pi_hat);
}

ScalarLattice solve_pressure(const VectorLattice& u, double div_tol) {
    return solve_pressure(u, analyze(u), div_tol);
}

ScalarLattice pressure_oracle(const VectorLattice& u) {
    const TorusGrid& g = u.grid;
    if (g.n > 24)
        throw PreconditionError("pressure_oracle: O(n^6) summation refuses n > 24");
    const OracleKernel& ker = oracle_kernel(g);

    std::array<ScalarLattice, 6> T;
    for (int c = 0; c < 6; ++c) T[c] = product_lattice(u, kPairs[c][0], kPairs[c][1]);

    const int n = g.n;
    const double h = g.spacing();
    const double h3 = h * h * h;
    ScalarLattice pi(g);
    parallel_for_blocks(g.cells(), [&](std::size_t cb, std::size_t ce) {
        for (std::size_t cell = cb; cell < ce; ++cell) {
            const int xz = static_cast<int>(cell / (static_cast<std::size_t>(n) * n));
            const int rem = static_cast<int>(cell % (static_cast<std::size_t>(n) * n));
            const int xy = rem / n;
            const int xx = rem % n;
            double acc = 0.0;
            std::size_t yi = 0;
            for (int yz = 0; yz < n; ++yz) {
                const int oz = xz - yz < 0 ? xz - yz + n : xz - yz;
                for (int yy = 0; yy < n; ++yy) {
                    const int oy = xy - yy < 0 ? xy - yy + n : xy - yy;
                    const std::size_t row = (static_cast<std::size_t>(oz) * n + oy) * n;
                    for (int yx = 0; yx < n; ++yx, ++yi) {
                        const int ox = xx - yx < 0 ? xx - yx + n : xx - yx;
                        const auto& kk = ker.k[row + ox];
                        acc += kk[0] * T[0].v[yi] + kk[1] * T[1].v[yi] + kk[2] * T[2].v[yi] +
                               2.0 * (kk[3] * T[3].v[yi] + kk[4] * T[4].v[yi] +
                                      kk[5] * T[5].v[yi]);
                    }
                }
            }
            pi.v[cell] = acc * h3;
        }
    });
    subtract_mean(pi);
    return pi;
}

} // namespace ckn
