#include "doctest.h"

#include <cmath>

#include "ckn/criteria.hpp"
#include "ckn/fields.hpp"
#include "ckn/mollifier.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/weights.hpp"

using namespace ckn;

namespace {

const TorusGrid& grid16() {
    static const TorusGrid g(16, 6.283185307179586);
    return g;
}

} // namespace

TEST_CASE("weight spec validation") {
    WeightSpec w;
    w.mu = -0.1;
    CHECK_THROWS_AS(w.validate(grid16()), ConfigError);
    w.mu = 0.0;
    w.p = -3.0;
    CHECK_THROWS_AS(w.validate(grid16()), ConfigError);
}

TEST_CASE("singular cell carries its exact cell integral, neighbors the point value") {
    const TorusGrid& g = grid16();
    const double h = g.spacing();
    const std::array<double, 3> x{g.coord(8), g.coord(8), g.coord(8)};
    WeightSpec w;
    w.x = x;

    ScalarLattice density(g);
    density.at(8, 8, 8) = 1.0;
    const double c0 = unit_cell_inverse_distance();
    CHECK(weighted_density(density, w) == doctest::Approx(c0 * h * h).epsilon(1e-10));

    ScalarLattice off(g);
    off.at(11, 8, 8) = 1.0; // distance 3h along one axis
    CHECK(weighted_density(off, w) == doctest::Approx(h * h * h / (3.0 * h)).epsilon(1e-12));
}

TEST_CASE("weighted energy and dissipation are nonincreasing in the softening") {
    const TorusGrid& g = grid16();
    const double h = g.spacing();
    const std::array<double, 3> x{2.2, 3.0, 3.9};
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const VectorLattice u = random_divfree(g, seed, 4, 1.0);
        const SpectralVector uh = analyze(u);
        double prev_e = 0.0, prev_d = 0.0;
        bool first = true;
        // mu descending toward the singular limit: values must not decrease.
        for (double mu : {2.0 * h, h, 0.5 * h, 0.0}) {
            WeightSpec w;
            w.x = x;
            w.mu = mu;
            const double e = weighted_E(u, w);
            const double d = weighted_D(uh, w);
            if (!first) {
                CHECK(e >= prev_e);
                CHECK(d >= prev_d);
            }
            prev_e = e;
            prev_d = d;
            first = false;
        }
    }
}

TEST_CASE("softening ladder extrapolates to the singular-cell value") {
    const TorusGrid& g = grid16();
    const std::array<double, 3> x{3.5, 2.7, 3.1};
    const VectorLattice u = random_divfree(g, 44, 4, 1.0);
    ScalarLattice speed_sq(g);
    for (std::size_t i = 0; i < speed_sq.v.size(); ++i)
        speed_sq.v[i] = u.c[0][i] * u.c[0][i] + u.c[1][i] * u.c[1][i] + u.c[2][i] * u.c[2][i];
    const MuLadder lad = mu_ladder(speed_sq, x);
    CHECK(lad.mus[0] == doctest::Approx(4.0 * g.spacing()));
    CHECK(lad.mus[2] == doctest::Approx(g.spacing()));
    CHECK(lad.values[0] <= lad.values[1]);
    CHECK(lad.values[1] <= lad.values[2]);
    REQUIRE(lad.direct > 0.0);
    CHECK(std::fabs(lad.extrapolated - lad.direct) / lad.direct <= 0.02);
}

TEST_CASE("pointwise psi agrees with the all-points convolution") {
    const TorusGrid& g = grid16();
    const VectorLattice u0 = random_divfree(g, 5, 4, 1.0);
    const VectorLattice v0 = mollify(u0, 3.0 * g.spacing());
    const ScalarLattice all = psi_lattice(u0, v0);
    double scale = max_abs_value(all);
    REQUIRE(scale > 0.0);
    for (auto [ix, iy, iz] : {std::array<int, 3>{8, 8, 8}, {5, 9, 12}, {2, 14, 7}}) {
        const std::array<double, 3> x{g.coord(ix), g.coord(iy), g.coord(iz)};
        const double direct = psi_point(u0, v0, x);
        CHECK(std::fabs(direct - all.at(ix, iy, iz)) <= 1e-9 * scale);
    }
}

TEST_CASE("psi vanishes identically when the comparison equals the field") {
    const TorusGrid& g = grid16();
    const VectorLattice u0 = taylor_green(g, 1.0);
    CHECK(psi_point(u0, u0, {3.0, 3.0, 3.0}) == 0.0);
    CHECK(max_abs_value(psi_lattice(u0, u0)) == 0.0);
}

TEST_CASE("psi sequence medians are per-step medians over the points") {
    const TorusGrid& g = grid16();
    const VectorLattice u0 = random_divfree(g, 61, 4, 1.0);
    MollifierSchedule sched;
    sched.radii = {1.2, 0.8};
    std::vector<std::array<double, 3>> pts{{2.5, 3.0, 3.5}, {3.0, 3.0, 3.0}, {3.5, 2.8, 2.6}};
    const PsiSequenceTable tab = psi_sequence(u0, sched, pts);
    REQUIRE(tab.psi.size() == 2);
    REQUIRE(tab.median.size() == 2);
    for (std::size_t k = 0; k < tab.psi.size(); ++k) {
        REQUIRE(tab.psi[k].size() == pts.size());
        CHECK(tab.median[k] == doctest::Approx(median_of(tab.psi[k])));
        for (double v : tab.psi[k]) CHECK(v >= 0.0);
    }
}

TEST_CASE("hls ratio flags the 0/0 case instead of inventing a number") {
    const TorusGrid& g = grid16();
    const VectorLattice u0 = taylor_green(g, 1.0);
    MollifierSchedule sched;
    sched.radii = {0.5 * g.spacing()}; // below one spacing: mollification is the identity
    const Ratio r = hls_ratio(u0, sched, 0, {3.14, 3.14, 3.14}, 1.0, 2.0);
    CHECK(r.degenerate);
}

TEST_CASE("hls ratio argument validation") {
    const TorusGrid& g = grid16();
    const VectorLattice u0 = taylor_green(g, 1.0);
    MollifierSchedule sched;
    sched.radii = {1.0};
    CHECK_THROWS_AS(hls_ratio(u0, sched, 0, {3.14, 3.14, 3.14}, 1.0, 3.5), ConfigError);
    CHECK_THROWS_AS(hls_ratio(u0, sched, 0, {3.14, 3.14, 3.14}, g.box / 4.0, 2.0), ConfigError);
    CHECK_THROWS_AS(hls_ratio(u0, sched, 2, {3.14, 3.14, 3.14}, 1.0, 2.0), RangeError);
}

TEST_CASE("exponent tuples are checked condition by condition") {
    InterpolationExponents ok{2.0, -1.0, 0.0, 0.0, 1.0};
    CHECK_NOTHROW(ok.validate());
    InterpolationExponents bad_r = ok;
    bad_r.r = 1.5;
    CHECK_THROWS_AS(bad_r.validate(), ConfigError);
    InterpolationExponents bad_balance{2.0, 0.0, 0.0, 0.0, 1.0}; // balance identity fails
    CHECK_THROWS_AS(bad_balance.validate(), ConfigError);
}

TEST_CASE("interpolation ratio is invariant under the box dilation relabeling") {
    const TorusGrid& g = grid16();
    const VectorLattice v = random_divfree(g, 303, 3, 1.0);
    const VectorLattice v2 = dilate_field(v, 2.0);
    const InterpolationExponents e{2.0, -1.0, 0.0, 0.0, 1.0};
    const std::array<double, 3> x{2.8, 3.2, 3.6};
    const Ratio a = interpolation_ratio(v, e, x);
    const Ratio b = interpolation_ratio(v2, e, {x[0] / 2.0, x[1] / 2.0, x[2] / 2.0});
    REQUIRE(!a.degenerate);
    REQUIRE(!b.degenerate);
    CHECK(std::fabs(a.value - b.value) <= 1e-12 * a.value);
}

TEST_CASE("core-point guard rejects points near the wrap seam") {
    const TorusGrid& g = grid16();
    CHECK_NOTHROW(require_core_point(g, {3.14, 3.14, 3.14}));
    CHECK_THROWS_AS(require_core_point(g, {0.5, 3.14, 3.14}), PreconditionError);
    CHECK_THROWS_AS(require_core_point(g, {3.14, 3.14, 6.1}), PreconditionError);
}

TEST_CASE("median of odd and even length lists") {
    CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median_of({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
    CHECK(median_of({7.0}) == 7.0);
}
