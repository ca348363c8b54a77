#pragma once

#include <array>
#include <cstdint>

#include "ckn/grid.hpp"

namespace ckn {

// u = A (sin x' cos y' cos z', -cos x' sin y' cos z', 0), x' = 2 pi x / box.
// Divergence-free analytically; every mode sits at |s| = 1 per axis.
VectorLattice taylor_green(const TorusGrid& g, double amplitude);

// Band-limited Gaussian field, projected divergence-free, mean removed,
// rescaled so max |u| = amplitude. Deterministic in (seed).
VectorLattice random_divfree(const TorusGrid& g, std::uint64_t seed, int band,
                             double amplitude);

// 1 inside the min-image ball of radius R about center, else 0.
ScalarLattice ball_indicator(const TorusGrid& g, const std::array<double, 3>& center,
                             double radius);

// All three components equal to the ball indicator (scalar surrogate fixture).
VectorLattice indicator_vector(const TorusGrid& g, const std::array<double, 3>& center,
                               double radius);

// curl of (0, 0, A * B(q)), q = (|d|/R)^2 min-image: compactly supported and
// divergence-free in closed form.
VectorLattice curl_bump(const TorusGrid& g, const std::array<double, 3>& center,
                        double radius, double amplitude);

// Gradient of a fixed smooth periodic potential; projects to zero exactly.
VectorLattice gradient_field(const TorusGrid& g);

void add_scaled(VectorLattice& dst, const VectorLattice& src, double factor);

} // namespace ckn
