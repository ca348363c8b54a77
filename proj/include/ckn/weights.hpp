#pragma once

#include <array>
#include <vector>

#include "ckn/fft.hpp"
#include "ckn/mollifier.hpp"

namespace ckn {

// Riesz-style weight (|y - x|^2 + mu^2)^{p/2} around a point x (min-image
// distances). At mu = 0 the singular cell at y = x carries its exact cell
// integral instead of the infinite point value.
struct WeightSpec {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    double mu = 0.0;
    double p = -1.0;

    void validate(const TorusGrid& g) const;
};

ScalarLattice weight_kernel(const TorusGrid& g, const WeightSpec& w);

// int |v|^2 weighted, grid quadrature. Nonnegative, nonincreasing in mu.
double weighted_E(const VectorLattice& v, const WeightSpec& w);
// Same for |grad v|^2; the gradient lattice is derived spectrally.
double weighted_D(const SpectralVector& spec, const WeightSpec& w);
// Weighted integral of an arbitrary nonnegative density (shared kernel).
double weighted_density(const ScalarLattice& density, const WeightSpec& w);

// psi(x) = int |u0 - v0|^2 / |x - y| dy with the singular-cell rule.
double psi_point(const VectorLattice& u0, const VectorLattice& v0,
                 const std::array<double, 3>& x);

// psi at every lattice point at once via circular FFT convolution with the
// same kernel. Values are clamped at 0 (convolution round-off can dip a few
// ulp below zero where the difference field vanishes).
ScalarLattice psi_lattice(const VectorLattice& u0, const VectorLattice& v0);

// mu-ladder {4h, 2h, h} for a weighted density integral: the measured
// values, the Richardson limit of the smooth part (center cell's exact
// 1/mu divergence removed first, then mu^2 extrapolation), plus the exact
// center-cell integral, against the direct mu = 0 singular-cell value.
struct MuLadder {
    std::array<double, 3> mus{};
    std::array<double, 3> values{};
    double extrapolated = 0.0;
    double direct = 0.0;
};

MuLadder mu_ladder(const ScalarLattice& density, const std::array<double, 3>& x);

// psi^k medians across sample points for each schedule step.
struct PsiSequenceTable {
    std::vector<std::array<double, 3>> points;
    std::vector<std::vector<double>> psi; // [k][point]
    std::vector<double> median;           // per k
};

PsiSequenceTable psi_sequence(const VectorLattice& u0, const MollifierSchedule& schedule,
                              const std::vector<std::array<double, 3>>& points);

// Guarded quotient: degenerate marks a 0/0 (both sides vanish identically).
struct Ratio {
    double value = 0.0;
    bool degenerate = false;
};

// || psi^k ||_{L^r(K)} / || u0^k - u0 ||_2^2 over the ball K; r in [1, 3).
Ratio hls_ratio(const VectorLattice& u0, const MollifierSchedule& schedule, int k,
                const std::array<double, 3>& region_center, double region_radius,
                double r_exp);

// Exponent tuple for the weighted interpolation inequality; validate()
// names the condition that fails:
//   (i)   r >= 2, gamma + 3/r > 0, alpha + 3/2 > 0, beta + 3/2 > 0,
//         a in [1/2, 1]
//   (ii)  gamma + 3/r = a (alpha + 1/2) + (1 - a)(beta + 3/2)
//   (iii) a (alpha - 1) + (1 - a) beta <= gamma <= a alpha + (1 - a) beta
struct InterpolationExponents {
    double r = 2.0;
    double gamma = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double a = 1.0;

    void validate() const;
};

// || |d|^gamma v ||_r / ( || |d|^alpha grad v ||_2^a || |d|^beta v ||_2^{1-a} ),
// distances measured from x. Finite for smooth nonzero fields; invariant
// under the box dilation relabeling.
Ratio interpolation_ratio(const VectorLattice& v, const InterpolationExponents& e,
                          const std::array<double, 3>& x);

// Sample points must sit in the box core, >= box/8 away from the wrap seam
// on every axis; throws PreconditionError otherwise.
void require_core_point(const TorusGrid& g, const std::array<double, 3>& x);

double median_of(std::vector<double> v);

} // namespace ckn
