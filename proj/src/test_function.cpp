#include "ckn/test_function.hpp"

#include <cmath>

#include "ckn/bump.hpp"
#include "ckn/fft.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

void TestFunctionSpec::validate(const TorusGrid& g) const {
    if (spatial_kind == Spatial::bump) {
        if (!(spatial_radius > 0.0))
            throw PreconditionError("test function: spatial radius must be positive");
        if (!(spatial_radius < 0.5 * g.box))
            throw PreconditionError(
                "test function: support leaks outside the box (radius >= box/2)");
    }
    if (!(rolloff > 0.0))
        throw PreconditionError("test function: temporal rolloff must be positive");
    if (!(plateau_hi >= plateau_lo))
        throw PreconditionError("test function: empty temporal plateau");
}

double TestFunctionSpec::temporal(double tau) const {
    const double up = smooth_step((tau - (plateau_lo - rolloff)) / rolloff);
    const double down = smooth_step(((plateau_hi + rolloff) - tau) / rolloff);
    return up * down;
}

double TestFunctionSpec::temporal_derivative(double tau) const {
    const double su = (tau - (plateau_lo - rolloff)) / rolloff;
    const double sd = ((plateau_hi + rolloff) - tau) / rolloff;
    const double up = smooth_step(su);
    const double down = smooth_step(sd);
    return (smooth_step_d1(su) * down - up * smooth_step_d1(sd)) / rolloff;
}

ScalarLattice TestFunctionSpec::spatial_lattice(const TorusGrid& g) const {
    validate(g);
    ScalarLattice s(g);
    if (spatial_kind == Spatial::constant_one) {
        for (auto& x : s.v) x = 1.0;
        return s;
    }
    const double invR2 = 1.0 / (spatial_radius * spatial_radius);
    for (int iz = 0; iz < g.n; ++iz) {
        const double dz = g.min_image(g.coord(iz) - center[2]);
        for (int iy = 0; iy < g.n; ++iy) {
            const double dy = g.min_image(g.coord(iy) - center[1]);
            for (int ix = 0; ix < g.n; ++ix) {
                const double dx = g.min_image(g.coord(ix) - center[0]);
                s.v[g.index(ix, iy, iz)] = bump_q((dx * dx + dy * dy + dz * dz) * invR2);
            }
        }
    }
    return s;
}

// The effective test function is the trigonometric interpolant of the
// sampled profile, so its gradient and Laplacian are taken spectrally.
// With analytic derivatives of the raw profile instead, the identity
// quadratures pick up the profile's sub-grid edge structure and the residual
// plateaus far above quadrature accuracy.
VectorLattice TestFunctionSpec::spatial_gradient_lattice(const TorusGrid& g) const {
    validate(g);
    VectorLattice grad(g);
    if (spatial_kind == Spatial::constant_one) return grad;
    const SpectralScalar sh = analyze(spatial_lattice(g));
    for (int axis = 0; axis < 3; ++axis)
        grad.c[axis] = synthesize(derivative(sh, axis)).v;
    return grad;
}

ScalarLattice TestFunctionSpec::spatial_laplacian_lattice(const TorusGrid& g) const {
    validate(g);
    ScalarLattice lap(g, 0.0);
    if (spatial_kind == Spatial::constant_one) return lap;
    const SpectralScalar sh = analyze(spatial_lattice(g));
    for (int axis = 0; axis < 3; ++axis) {
        const ScalarLattice second = synthesize(derivative(derivative(sh, axis), axis));
        for (std::size_t i = 0; i < lap.v.size(); ++i) lap.v[i] += second.v[i];
    }
    return lap;
}

} // namespace ckn
