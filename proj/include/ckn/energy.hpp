#pragma once

#include "ckn/snapshot.hpp"
#include "ckn/test_function.hpp"

namespace ckn {

// Weighted grid quadratures shared by both residuals. `weight` may be null
// (plain integral); multiplying by an all-ones lattice gives bitwise the
// same result, which is what makes the constant-test-function degeneracy
// below exact rather than approximate.
double weighted_speed_sq(const VectorLattice& u, const ScalarLattice* weight);
double weighted_grad_sq(const SpectralVector& spec, const ScalarLattice* weight);

struct StrongEnergyReport {
    double energy_start = 0.0;
    double energy_end = 0.0;
    double dissipation_integral = 0.0; // int_s^t ||grad u||_2^2 dtau
    double residual = 0.0;             // E(t) + 2 * integral - E(s)
    double scale = 0.0;                // E(s), for relative comparisons
};

// Energy-balance defect of a run between two snapshot times (unit
// viscosity). Times must match snapshots; dissipation samples are taken
// from the snapshot-time grid and integrated with the 4th-order segment
// rule, so the defect isolates the time-stepping error.
StrongEnergyReport strong_energy_residual(const Trajectory& traj, double t_start,
                                          double t_end);

struct LocalEnergyReport {
    double lhs = 0.0;        // int |u(t)|^2 phi + 2 int int |grad u|^2 phi
    double rhs = 0.0;        // start term + (phi_tau + lap phi) term + cubic term
    double residual = 0.0;   // lhs - rhs
    double scale = 0.0;      // lhs magnitude used for relative tolerance
    double term_start = 0.0;
    double term_phi_tau_lap = 0.0;
    double term_cubic = 0.0; // int int (|u|^2 + 2 pi) u . grad phi
};

// Defect of the localized energy balance
//   int |u(t)|^2 phi(t) + 2 int_s^t int |grad u|^2 phi
//     = int |u(s)|^2 phi(s) + int int |u|^2 (phi_tau + lap phi)
//       + int int (|u|^2 + 2 pi) u . grad phi
// against the given test function. With phi identically 1 in space and a
// temporal plateau covering [s, t], every phi-derivative term vanishes and
// the report reduces to the strong residual exactly.
LocalEnergyReport local_energy_residual(const Trajectory& traj,
                                        const TestFunctionSpec& phi, double t_start,
                                        double t_end);

} // namespace ckn
