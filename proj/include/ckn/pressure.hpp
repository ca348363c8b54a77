#pragma once

#include "ckn/fft.hpp"

namespace ckn {

// Pressure of a divergence-free field: solves -lap pi = d_i d_j (u^i u^j)
// in spectral space, zero-mean gauge (mode 0 set to 0 exactly).
// Rejects inputs whose discrete divergence exceeds div_tol in max norm.
ScalarLattice solve_pressure(const VectorLattice& u, const SpectralVector& spec,
                             double div_tol);
ScalarLattice solve_pressure(const VectorLattice& u, double div_tol);

// Independent slow path: convolves u^i u^j against second derivatives of the
// periodic Newtonian potential, both built by direct mode summation (no
// inverse-Laplacian solve anywhere). O(n^6); refuses grids beyond n = 24.
ScalarLattice pressure_oracle(const VectorLattice& u);

} // namespace ckn
