#pragma once

#include "ckn/fft.hpp"

namespace ckn {

// Zeroes every coefficient with any axis on its Nyquist plane.
void zero_nyquist(SpectralScalar& m);
void zero_nyquist(SpectralVector& m);

// Sets the k = 0 coefficient (the mean) to zero.
void zero_mean_mode(SpectralScalar& m);
void zero_mean_mode(SpectralVector& m);

// Removes every mode with |s_axis| > floor(frac * n/2) on some axis,
// Nyquist planes included. frac = 2/3 is the classic aliasing guard for
// quadratic products.
void dealias(SpectralVector& m, double frac);
void dealias(SpectralScalar& m, double frac);

// In-place projection onto divergence-free fields: m -= k (k.m)/|k|^2.
// Truncates Nyquist planes; leaves the k = 0 (mean) coefficient untouched.
void project_divfree(SpectralVector& m);

// Spectral divergence synthesized to the lattice; max-norm convenience.
ScalarLattice divergence(const SpectralVector& m);
double divergence_max(const SpectralVector& m);

// d/dx_axis via the i*k multiplier (Nyquist zeroed).
SpectralScalar derivative(const SpectralScalar& m, int axis);
ScalarLattice derivative_lattice(const SpectralVector& m, int comp, int axis);

// Pointwise sum over i,j of (d_j u_i)^2, synthesized from nine derivatives.
ScalarLattice grad_norm_sq_lattice(const SpectralVector& m);

// Integral over the box of |grad u|^2 (grid quadrature of the above).
double enstrophy(const SpectralVector& m);

} // namespace ckn
