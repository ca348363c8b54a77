#pragma once

#include <array>
#include <complex>
#include <vector>

#include "ckn/grid.hpp"

namespace ckn {

// Half-complex spectrum of a real lattice, kx in [0, n/2] fastest.
// Coefficients follow the synthesis convention u(x) = sum_k m[k] e^{i k.x},
// i.e. m = DFT(u)/n^3, so m at k=0 is the mean of u.
struct SpectralScalar {
    TorusGrid grid;
    std::vector<std::complex<double>> m;

    SpectralScalar() = default;
    explicit SpectralScalar(const TorusGrid& g) : grid(g), m(g.spectral_size()) {}

    std::size_t index(int kx, int my, int mz) const {
        return (static_cast<std::size_t>(mz) * grid.n + my) * (grid.n / 2 + 1) + kx;
    }
};

struct SpectralVector {
    TorusGrid grid;
    std::array<SpectralScalar, 3> c;

    SpectralVector() = default;
    explicit SpectralVector(const TorusGrid& g)
        : grid(g), c{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)} {}
};

// Signed integer mode s for storage row m on an n-point axis: s in (-n/2, n/2].
inline int signed_mode(int m, int n) { return m <= n / 2 ? m : m - n; }

// The s = n/2 plane has no conjugate partner; every derivative or solve
// multiplier is zeroed there so that multiplied fields stay real.
inline bool is_nyquist(int s, int n) { return s == n / 2 || s == -n / 2; }

SpectralScalar analyze(const ScalarLattice& u);
ScalarLattice synthesize(const SpectralScalar& m);
SpectralVector analyze(const VectorLattice& u);
VectorLattice synthesize(const SpectralVector& m);

} // namespace ckn
