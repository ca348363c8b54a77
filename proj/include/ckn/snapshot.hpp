#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ckn/fft.hpp"

namespace ckn {

// One instant of a run: physical velocity, zero-mean pressure, and the
// spectral velocity (always the transform of `velocity`, kept in lockstep).
// Cached energy = int |u|^2, enstrophy = int |grad u|^2 (grid quadrature).
struct FieldSnapshot {
    TorusGrid grid;
    double time = 0.0;
    VectorLattice velocity;
    ScalarLattice pressure;
    SpectralVector spectral_velocity;
    double energy = 0.0;
    double enstrophy = 0.0;

    // Validating factory: checks component means and discrete divergence,
    // solves for the pressure, fills the caches.
    static FieldSnapshot make(const TorusGrid& g, double time, VectorLattice u,
                              double div_tol);

    // Fixture factory for diagnostics: takes velocity and pressure as given,
    // no mean/divergence checks (constant-velocity quadrature checks need it).
    static FieldSnapshot unchecked(const TorusGrid& g, double time, VectorLattice u,
                                   ScalarLattice pi);
};

enum class RunStatus { complete, aborted_blowup };

// Output of a solver run. `snapshots` sample the state every stride steps
// (first and last step always included); step_* arrays are the per-step
// ledger for all integer steps, aligned by index.
struct Trajectory {
    TorusGrid grid;
    double dt = 0.0;
    double viscosity = 1.0;
    std::vector<FieldSnapshot> snapshots;
    std::vector<std::size_t> snapshot_steps;
    std::vector<double> step_times;
    std::vector<double> step_energy;
    std::vector<double> step_enstrophy;
    RunStatus status = RunStatus::complete;
    std::string abort_message;

    double start_time() const { return snapshots.front().time; }
    double end_time() const { return snapshots.back().time; }

    // Index of the snapshot at time t (within tol), or nullopt.
    std::optional<std::size_t> snapshot_at(double t, double tol = 1e-9) const;

    // Uniform snapshot spacing in time; throws if fewer than 2 snapshots.
    double snapshot_dt() const;
};

} // namespace ckn
