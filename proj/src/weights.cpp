#include "ckn/weights.hpp"

#include <algorithm>
#include <cmath>

#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

namespace {

ScalarLattice magnitude_sq(const VectorLattice& v) {
    ScalarLattice s(v.grid);
    parallel_for_blocks(s.v.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            s.v[i] = v.c[0][i] * v.c[0][i] + v.c[1][i] * v.c[1][i] + v.c[2][i] * v.c[2][i];
    });
    return s;
}

ScalarLattice difference_sq(const VectorLattice& a, const VectorLattice& b) {
    if (a.grid != b.grid) throw PreconditionError("weighted ops: grid mismatch");
    ScalarLattice s(a.grid);
    parallel_for_blocks(s.v.size(), [&](std::size_t bg, std::size_t e) {
        for (std::size_t i = bg; i < e; ++i) {
            const double d0 = a.c[0][i] - b.c[0][i];
            const double d1 = a.c[1][i] - b.c[1][i];
            const double d2 = a.c[2][i] - b.c[2][i];
            s.v[i] = d0 * d0 + d1 * d1 + d2 * d2;
        }
    });
    return s;
}

} // namespace

void WeightSpec::validate(const TorusGrid& g) const {
    if (!(mu >= 0.0)) throw ConfigError("weight: mu must be >= 0");
    if (!(p > -3.0)) throw ConfigError("weight: exponent must satisfy p > -3");
    (void)g;
}

ScalarLattice weight_kernel(const TorusGrid& g, const WeightSpec& w) {
    w.validate(g);
    ScalarLattice k(g);
    const double mu2 = w.mu * w.mu;
    const double h = g.spacing();
    const bool inv_sqrt = w.p == -1.0;
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - w.x[2]);
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - w.x[1]);
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - w.x[0]);
                const double d2 = dx * dx + dy * dy + dz * dz;
                const double q = d2 + mu2;
                double val;
                if (q == 0.0) {
                    // Singular cell: exact integral of |z|^p over the cell,
                    // expressed as an average (divided by the cell volume).
                    val = cell_weight_integral(w.p, h) / (h * h * h);
                } else if (inv_sqrt) {
                    val = 1.0 / std::sqrt(q);
                } else {
                    val = std::pow(q, 0.5 * w.p);
                }
                k.v[g.index(ix, iy, iz)] = val;
            }
        }
    }
    return k;
}

double weighted_density(const ScalarLattice& density, const WeightSpec& w) {
    const TorusGrid& g = density.grid;
    const ScalarLattice k = weight_kernel(g, w);
    std::vector<double> contrib(density.v.size());
    parallel_for_blocks(contrib.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) contrib[i] = density.v[i] * k.v[i];
    });
    const double h = g.spacing();
    return pairwise_sum(contrib) * (h * h * h);
}

double weighted_E(const VectorLattice& v, const WeightSpec& w) {
    return weighted_density(magnitude_sq(v), w);
}

double weighted_D(const SpectralVector& spec, const WeightSpec& w) {
    return weighted_density(grad_norm_sq_lattice(spec), w);
}

double psi_point(const VectorLattice& u0, const VectorLattice& v0,
                 const std::array<double, 3>& x) {
    require_core_point(u0.grid, x);
    WeightSpec w;
    w.x = x;
    w.mu = 0.0;
    w.p = -1.0;
    return weighted_density(difference_sq(u0, v0), w);
}

ScalarLattice psi_lattice(const VectorLattice& u0, const VectorLattice& v0) {
    const TorusGrid& g = u0.grid;
    const ScalarLattice rho = difference_sq(u0, v0);
    WeightSpec w;
    w.x = {0.0, 0.0, 0.0};
    w.mu = 0.0;
    w.p = -1.0;
    const ScalarLattice kernel = weight_kernel(g, w);
    const SpectralScalar kh = analyze(kernel);
    SpectralScalar rh = analyze(rho);
    const double L3 = g.box * g.box * g.box;
    for (std::size_t i = 0; i < rh.m.size(); ++i) rh.m[i] *= kh.m[i] * L3;
    ScalarLattice psi = synthesize(rh);
    for (auto& x : psi.v) x = std::max(x, 0.0);
    return psi;
}

MuLadder mu_ladder(const ScalarLattice& density, const std::array<double, 3>& x) {
    const TorusGrid& g = density.grid;
    const double h = g.spacing();
    MuLadder lad;
    lad.mus = {4.0 * h, 2.0 * h, 1.0 * h};
    WeightSpec w;
    w.x = x;
    w.p = -1.0;
    for (int i = 0; i < 3; ++i) {
        w.mu = lad.mus[i];
        lad.values[i] = weighted_density(density, w);
    }
    w.mu = 0.0;
    lad.direct = weighted_density(density, w);

    // Center sample (if x is a lattice point) contributes rho(x) h^3 / mu,
    // exactly; remove it, extrapolate the remaining smooth even function of
    // mu to 0, then restore the exact cell integral for the center.
    double rho_center = 0.0;
    const double ih = 1.0 / h;
    const int ix = static_cast<int>(std::lround(x[0] * ih)) % g.n;
    const int iy = static_cast<int>(std::lround(x[1] * ih)) % g.n;
    const int iz = static_cast<int>(std::lround(x[2] * ih)) % g.n;
    const double dx = g.min_image(g.coord(ix) - x[0]);
    const double dy = g.min_image(g.coord(iy) - x[1]);
    const double dz = g.min_image(g.coord(iz) - x[2]);
    if (dx == 0.0 && dy == 0.0 && dz == 0.0)
        rho_center = density.v[g.index(ix, iy, iz)];

    const double h3 = h * h * h;
    const double s4 = lad.values[0] - rho_center * h3 / lad.mus[0];
    const double s2 = lad.values[1] - rho_center * h3 / lad.mus[1];
    const double s1 = lad.values[2] - rho_center * h3 / lad.mus[2];
    const double smooth_limit = (64.0 * s1 - 20.0 * s2 + s4) / 45.0;
    lad.extrapolated = smooth_limit + rho_center * cell_weight_integral(-1.0, h);
    return lad;
}

PsiSequenceTable psi_sequence(const VectorLattice& u0, const MollifierSchedule& schedule,
                              const std::vector<std::array<double, 3>>& points) {
    schedule.validate();
    if (points.empty()) throw PreconditionError("psi sequence: no sample points");
    for (const auto& p : points) require_core_point(u0.grid, p);
    PsiSequenceTable table;
    table.points = points;
    table.psi.resize(schedule.radii.size());
    table.median.resize(schedule.radii.size());
    for (std::size_t k = 0; k < schedule.radii.size(); ++k) {
        const VectorLattice vk = mollify(u0, schedule, static_cast<int>(k));
        table.psi[k].reserve(points.size());
        for (const auto& p : points) table.psi[k].push_back(psi_point(u0, vk, p));
        table.median[k] = median_of(table.psi[k]);
    }
    return table;
}

Ratio hls_ratio(const VectorLattice& u0, const MollifierSchedule& schedule, int k,
                const std::array<double, 3>& region_center, double region_radius,
                double r_exp) {
    if (!(r_exp >= 1.0 && r_exp < 3.0))
        throw ConfigError("hls ratio: integrability exponent must lie in [1, 3)");
    if (!(region_radius > 0.0) || region_radius >= 0.25 * u0.grid.box)
        throw ConfigError("hls ratio: region radius must lie in (0, box/4)");
    require_core_point(u0.grid, region_center);
    const VectorLattice vk = mollify(u0, schedule, k);
    const ScalarLattice rho = difference_sq(u0, vk);
    const double h = u0.grid.spacing();
    const double h3 = h * h * h;
    const double denom = pairwise_sum(rho.v) * h3;

    const ScalarLattice psi = psi_lattice(u0, vk);
    const TorusGrid& g = u0.grid;
    const double r2 = region_radius * region_radius;
    double acc = 0.0;
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - region_center[2]);
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - region_center[1]);
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - region_center[0]);
                if (dx * dx + dy * dy + dz * dz <= r2)
                    acc += std::pow(psi.v[g.index(ix, iy, iz)], r_exp);
            }
        }
    }
    const double num = std::pow(acc * h3, 1.0 / r_exp);

    Ratio out;
    if (denom == 0.0) {
        out.degenerate = true;
        out.value = 0.0;
        return out;
    }
    out.value = num / denom;
    return out;
}

void InterpolationExponents::validate() const {
    const double tol = 1e-12;
    if (!(r >= 2.0))
        throw ConfigError("interpolation exponents: condition (i) fails: r < 2");
    if (!(gamma + 3.0 / r > 0.0))
        throw ConfigError("interpolation exponents: condition (i) fails: gamma + 3/r <= 0");
    if (!(alpha + 1.5 > 0.0))
        throw ConfigError("interpolation exponents: condition (i) fails: alpha + 3/2 <= 0");
    if (!(beta + 1.5 > 0.0))
        throw ConfigError("interpolation exponents: condition (i) fails: beta + 3/2 <= 0");
    if (!(a >= 0.5 && a <= 1.0))
        throw ConfigError("interpolation exponents: condition (i) fails: a outside [1/2, 1]");
    const double balance = a * (alpha + 0.5) + (1.0 - a) * (beta + 1.5);
    if (std::fabs(gamma + 3.0 / r - balance) > tol)
        throw ConfigError(
            "interpolation exponents: condition (ii) fails: dimensional balance");
    if (a * (alpha - 1.0) + (1.0 - a) * beta > gamma + tol)
        throw ConfigError(
            "interpolation exponents: condition (iii) fails: lower exponent bound");
    if (gamma > a * alpha + (1.0 - a) * beta + tol)
        throw ConfigError(
            "interpolation exponents: condition (iii) fails: upper exponent bound");
}

Ratio interpolation_ratio(const VectorLattice& v, const InterpolationExponents& e,
                          const std::array<double, 3>& x) {
    e.validate();
    require_core_point(v.grid, x);
    const TorusGrid& g = v.grid;
    const double h3 = std::pow(g.spacing(), 3);

    // || |d|^gamma v ||_r^r = int |d|^{gamma r} |v|^r.
    const ScalarLattice mag2 = magnitude_sq(v);
    WeightSpec wn;
    wn.x = x;
    wn.mu = 0.0;
    wn.p = e.gamma * e.r;
    const ScalarLattice kn = weight_kernel(g, wn);
    std::vector<double> contrib(mag2.v.size());
    parallel_for_blocks(contrib.size(), [&](std::size_t b, std::size_t en) {
        for (std::size_t i = b; i < en; ++i)
            contrib[i] = kn.v[i] * std::pow(mag2.v[i], 0.5 * e.r);
    });
    const double num_pow = pairwise_sum(contrib) * h3;

    WeightSpec wa;
    wa.x = x;
    wa.mu = 0.0;
    wa.p = 2.0 * e.alpha;
    const double grad_term = weighted_density(grad_norm_sq_lattice(analyze(v)), wa);

    WeightSpec wb;
    wb.x = x;
    wb.mu = 0.0;
    wb.p = 2.0 * e.beta;
    const double mass_term = weighted_density(mag2, wb);

    Ratio out;
    const double den = std::pow(grad_term, 0.5 * e.a) * std::pow(mass_term, 0.5 * (1.0 - e.a));
    if (den == 0.0) {
        out.degenerate = true;
        out.value = 0.0;
        return out;
    }
    out.value = std::pow(num_pow, 1.0 / e.r) / den;
    return out;
}

void require_core_point(const TorusGrid& g, const std::array<double, 3>& x) {
    const double lo = g.box / 8.0;
    const double hi = g.box - lo;
    for (int d = 0; d < 3; ++d)
        if (!(x[d] >= lo && x[d] <= hi))
            throw PreconditionError(
                "sample point outside the box core (must be >= box/8 from the wrap)");
}

double median_of(std::vector<double> v) {
    if (v.empty()) throw PreconditionError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace ckn
