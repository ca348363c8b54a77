#pragma once

#include "ckn/snapshot.hpp"

namespace ckn {

// Pseudo-spectral integrator for the incompressible momentum equation at
// unit viscosity on the periodic box. Integrating-factor RK4 in spectral
// space; the viscous factor is applied exactly, the convective term is
// dealiased with the classic 2/3 mask and projected divergence-free.
struct SolverConfig {
    double dt = 1e-3;
    double t_end = 0.1;
    double dealias_frac = 2.0 / 3.0;
    int snapshot_stride = 10;
    double cfl_cap = 0.5;
    double div_tol = 1e-10;
    bool disable_nonlinearity = false; // test hook: pure Stokes decay

    void validate() const;
    std::size_t step_count() const;
};

// Advances one step from a snapshot state. Used by tests and by run(); both
// share the same kernel, so run() restarted from a written snapshot
// reproduces the original continuation bit for bit.
FieldSnapshot step(const FieldSnapshot& state, const SolverConfig& cfg);

// Integrates u0 (must already be mean-free and divergence-free; see
// prepare_initial) from t = 0 to t_end. Snapshots every snapshot_stride
// steps; per-step energy/enstrophy ledger for all steps. On NaN/Inf or a
// CFL rejection the partial trajectory is returned with aborted status.
Trajectory run(const VectorLattice& u0, const SolverConfig& cfg,
               double start_time = 0.0);

// Projection + mean removal + dealiasing for raw initial data; generators
// and file inputs go through this once before run().
VectorLattice prepare_initial(const VectorLattice& u0, double dealias_frac = 2.0 / 3.0);

} // namespace ckn
