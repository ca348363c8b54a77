#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ckn/errors.hpp"

namespace ckn {

// Uniform periodic lattice on [0, box)^3, n points per axis, x fastest.
// spacing() is derived as box / n, so spacing * n == box holds by definition
// of the stored representation (n, box).
struct TorusGrid {
    int n = 0;
    double box = 0.0;

    TorusGrid() = default;
    TorusGrid(int n_per_axis, double box_length) : n(n_per_axis), box(box_length) {
        if (n < 8 || n % 2 != 0)
            throw ConfigError("grid: n_per_axis must be even and >= 8");
        if (!(box > 0.0))
            throw ConfigError("grid: box_length must be positive");
    }

    double spacing() const { return box / n; }
    std::size_t cells() const {
        return static_cast<std::size_t>(n) * n * n;
    }
    std::size_t spectral_size() const {
        return static_cast<std::size_t>(n) * n * (n / 2 + 1);
    }
    double coord(int i) const { return spacing() * i; }

    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * n + iy) * n + ix;
    }

    // Wraps a coordinate difference into [-box/2, box/2).
    double min_image(double d) const {
        const double half = 0.5 * box;
        while (d >= half) d -= box;
        while (d < -half) d += box;
        return d;
    }

    std::array<double, 3> min_image_disp(const std::array<double, 3>& a,
                                         const std::array<double, 3>& b) const {
        return {min_image(a[0] - b[0]), min_image(a[1] - b[1]), min_image(a[2] - b[2])};
    }

    bool operator==(const TorusGrid& o) const { return n == o.n && box == o.box; }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }
};

struct ScalarLattice {
    TorusGrid grid;
    std::vector<double> v;

    ScalarLattice() = default;
    explicit ScalarLattice(const TorusGrid& g, double fill = 0.0)
        : grid(g), v(g.cells(), fill) {}

    double& at(int ix, int iy, int iz) { return v[grid.index(ix, iy, iz)]; }
    double at(int ix, int iy, int iz) const { return v[grid.index(ix, iy, iz)]; }
};

struct VectorLattice {
    TorusGrid grid;
    std::array<std::vector<double>, 3> c;

    VectorLattice() = default;
    explicit VectorLattice(const TorusGrid& g)
        : grid(g), c{std::vector<double>(g.cells(), 0.0), std::vector<double>(g.cells(), 0.0),
                     std::vector<double>(g.cells(), 0.0)} {}
};

// Discrete mean over lattice points (order-fixed pairwise sum).
double mean(const ScalarLattice& s);
std::array<double, 3> mean(const VectorLattice& u);
void subtract_mean(ScalarLattice& s);
void subtract_mean(VectorLattice& u);

double max_abs_value(const ScalarLattice& s);
// max over points of the Euclidean magnitude |u(x)|.
double max_magnitude(const VectorLattice& u);

// sum over points of |u|^2 h^3 (the grid L2 norm squared).
double l2_norm_sq(const VectorLattice& u);
double l2_norm_sq(const ScalarLattice& s);

} // namespace ckn
