#pragma once

#include <cstdint>

#include "ckn/snapshot.hpp"
#include "ckn/weights.hpp"

namespace ckn {

// Threshold bookkeeping for a perturbation w = u - v around one point x.
// Certification thresholds: 1/(4c)^2 = 1/(16 c^2) for the initial-data and
// history tests, 1/(8 c^2) for the evolving weighted-energy bound.
struct PerturbationBudget {
    std::array<double, 3> x{};
    double mu = 0.0;
    double c = 1.0;
    double threshold_initial = 0.0; // 1/(16 c^2)
    double threshold_evolved = 0.0; // 1/(8 c^2)

    std::vector<double> times;
    std::vector<double> energy_w;      // weighted E of w per snapshot
    std::vector<double> diss_w;        // weighted D of w per snapshot
    std::vector<double> diss_w_prefix; // int_0^t of diss_w
    std::vector<double> history_v;     // H(t) = c int ||grad v||^4 + c int E(v) D(v)

    bool initial_ok = false;                 // E_w(0) < 1/(16 c^2)
    std::vector<std::uint8_t> history_ok;    // H(t) < 1/(16 c^2)
    std::vector<std::uint8_t> evolved_ok;    // E_w(t) + 1/2 int D_w < 1/(8 c^2)
};

// Both trajectories must share the grid and the snapshot time grid.
PerturbationBudget weighted_budget(const Trajectory& u_traj, const Trajectory& v_traj,
                                   const std::array<double, 3>& x, double mu, double c);

struct TStarEstimate {
    double t_star = 0.0;
    bool certified = false; // initial test passed and at least t = 0 holds
    bool covers_run = false;
    std::size_t failing_index = 0; // first snapshot index that broke the bound
    bool has_failure = false;
};

// Largest snapshot time T such that every snapshot time t <= T satisfies
// both running bounds; 0 with certified = false when the initial test fails.
TStarEstimate estimate_t_star(const PerturbationBudget& budget);

// Per-x weighted report row (the JSON report is assembled elsewhere).
struct WeightedEnergyReport {
    std::array<double, 3> x{};
    std::array<double, 3> mu_ladder{};
    std::array<double, 3> energy_ladder{};
    std::array<double, 3> diss_ladder{}; // int_0^T D at each ladder mu
    double energy_extrapolated = 0.0;
    double energy_direct = 0.0;
    double diss_direct = 0.0;
    double psi = 0.0;
    double t_star = 0.0;
    bool initial_ok = false;
    bool certified = false;
    bool covers_run = false;
};

// Good sets of a mollification step: E = {psi^k < eta} on the lattice,
// Omega = E restricted to the ball region. k is the minimal schedule step
// whose excluded region measure within the ball is <= epsilon_measure;
// when no step reaches the target the best (last) step is reported with
// target_met = false.
struct GoodSets {
    int k = -1;
    bool target_met = false;
    double coverage = 0.0;         // fraction of region points inside E
    double excluded_measure = 0.0; // h^3 count of region points outside E
    std::vector<std::uint8_t> e_mask;
    std::vector<std::uint8_t> omega_mask;
};

GoodSets good_sets(const VectorLattice& u0, const MollifierSchedule& schedule,
                   double eta, const std::array<double, 3>& region_center,
                   double region_radius, double epsilon_measure);

} // namespace ckn
