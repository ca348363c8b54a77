#pragma once

#include <cstddef>
#include <vector>

namespace ckn {

// Integral of uniformly sampled values over [times i0, times i1] (i0 <= i1,
// spacing h) using a 4th-order composite rule built from per-interval cubic
// stencils:
//   interior piece  h (-f[i-1] + 13 f[i] + 13 f[i+1] - f[i+2]) / 24
//   boundary piece  h ( 9 f[a] + 19 f[a+1] - 5 f[a+2] + f[a+3]) / 24
// Stencils may reach one sample beyond [i0, i1] when the array has it, so
// adjacent windows sum to the containing window exactly. Needs >= 4 samples.
double cubic_segment_integral(const std::vector<double>& f, double h, std::size_t i0,
                              std::size_t i1);

// All prefix integrals [0, i] under the same rule; out[0] = 0.
std::vector<double> cubic_segment_prefix(const std::vector<double>& f, double h);

// Overlap length of each sample's cell [t_i - h/2, t_i + h/2] with the
// window [a, b], for midpoint-style quadrature of windows that do not align
// with the sample grid. Weights sum to b - a when the window is inside the
// padded range of the samples.
std::vector<double> window_overlap_weights(const std::vector<double>& times, double h,
                                           double a, double b);

// Exact integral of |z|^p over the cube cell [-h/2, h/2]^3, p > -3.
// Evaluated by reducing to the sphere and a gnomonic face integral with
// cached Gauss-Legendre nodes; p = -1 reproduces the closed form
// h^2 (3 ln(2 + sqrt 3) - pi/2).
double cell_weight_integral(double p, double h);

// The p = -1 constant: integral of 1/|z| over the unit cube cell.
double unit_cell_inverse_distance();

} // namespace ckn
