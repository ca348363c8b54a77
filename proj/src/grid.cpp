#include "ckn/grid.hpp"

#include <cmath>

#include "ckn/parallel.hpp"

namespace ckn {

double mean(const ScalarLattice& s) {
    return pairwise_sum(s.v) / static_cast<double>(s.v.size());
}

std::array<double, 3> mean(const VectorLattice& u) {
    const double inv = 1.0 / static_cast<double>(u.c[0].size());
    return {pairwise_sum(u.c[0]) * inv, pairwise_sum(u.c[1]) * inv, pairwise_sum(u.c[2]) * inv};
}

void subtract_mean(ScalarLattice& s) {
    const double m = mean(s);
    parallel_for_blocks(s.v.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) s.v[i] -= m;
    });
}

void subtract_mean(VectorLattice& u) {
    const auto m = mean(u);
    for (int d = 0; d < 3; ++d) {
        auto& comp = u.c[d];
        const double md = m[d];
        parallel_for_blocks(comp.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) comp[i] -= md;
        });
    }
}

double max_abs_value(const ScalarLattice& s) { return max_abs(s.v); }

double max_magnitude(const VectorLattice& u) {
    const std::size_t n = u.c[0].size();
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q =
            u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i];
        if (q > m2) m2 = q;
    }
    return std::sqrt(m2);
}

double l2_norm_sq(const VectorLattice& u) {
    const std::size_t n = u.c[0].size();
    std::vector<double> contrib(n);
    parallel_for_blocks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            contrib[i] =
                u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i];
    });
    const double h = u.grid.spacing();
    return pairwise_sum(contrib) * (h * h * h);
}

double l2_norm_sq(const ScalarLattice& s) {
    const std::size_t n = s.v.size();
    std::vector<double> contrib(n);
    parallel_for_blocks(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) contrib[i] = s.v[i] * s.v[i];
    });
    const double h = s.grid.spacing();
    return pairwise_sum(contrib) * (h * h * h);
}

} // namespace ckn
