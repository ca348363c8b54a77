#pragma once

#include <vector>

#include "ckn/fft.hpp"

namespace ckn {

// Strictly decreasing positive radii eps_k for a standard-bump mollifier
// family; step k of a sequence uses kernel radius radii[k].
struct MollifierSchedule {
    std::vector<double> radii;

    void validate() const;
    int steps() const { return static_cast<int>(radii.size()); }
};

// Discrete mollification: circular convolution with the compact bump of
// radius eps, sampled on the lattice (min-image) and renormalized to exact
// unit discrete mass. For eps below the spacing only the center cell
// survives, so the kernel is a discrete delta and mollification is the
// identity exactly.
ScalarLattice mollifier_kernel(const TorusGrid& g, double eps);

// Spectral multiplier of the kernel (real; multiplier at k = 0 equals 1).
std::vector<double> mollifier_multiplier(const TorusGrid& g, double eps);

VectorLattice mollify(const VectorLattice& u, double eps);
VectorLattice mollify(const VectorLattice& u, const MollifierSchedule& schedule, int k);

// Continuous unit-mass normalization constant of the 3D bump
// exp(-1/(1 - |z|^2)) on |z| < 1 (for the kernel-mass diagnostics).
double bump_mass_3d();

// Discrete mass of the raw (un-renormalized) kernel samples; approaches 1
// as eps grows past a few spacings. Exposed for the unit-mass invariant.
double mollifier_raw_mass(const TorusGrid& g, double eps);

} // namespace ckn
