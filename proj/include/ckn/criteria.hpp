#pragma once

#include <optional>
#include <string>

#include "ckn/cylinders.hpp"
#include "ckn/snapshot.hpp"

namespace ckn {

// Threshold and constant record shared by the local-regularity criteria.
struct CKNConstants {
    double epsilon1 = 0.05; // smallness threshold for the M functional
    double epsilon3 = 0.05; // threshold for the gradient limsup test
    double c0 = 1.0;        // constant in the sup bound c1 = c0 eps1^{2/3}
    double c = 1.0;         // mass constant of the weighted machinery
    double L0 = 1.0;        // initial-data gauge threshold
};

// Injected-defect hook for the acceptance canary: flips the sign of the
// exponent weighting the pressure term (a plain sign flip on a term would
// stay scale invariant and could not be caught by the invariance check).
struct MHooks {
    bool flip_pressure_exponent_sign = false;
};

// Caches per-snapshot derived lattices (|u|, |pi|, |grad u|^2) so that
// repeated cylinder evaluations over one trajectory pay the spectral
// derivatives once.
class AnalysisContext {
public:
    explicit AnalysisContext(const Trajectory& traj);

    const Trajectory& trajectory() const { return *traj_; }
    const ScalarLattice& speed(std::size_t snap) const;
    const ScalarLattice& speed_sq(std::size_t snap) const;
    const ScalarLattice& abs_pressure(std::size_t snap) const;
    const ScalarLattice& grad_sq(std::size_t snap) const;
    std::vector<double> snapshot_times() const;

private:
    const Trajectory* traj_;
    mutable std::vector<std::optional<ScalarLattice>> speed_;
    mutable std::vector<std::optional<ScalarLattice>> speed_sq_;
    mutable std::vector<std::optional<ScalarLattice>> abs_pressure_;
    mutable std::vector<std::optional<ScalarLattice>> grad_sq_;
};

// Scaling-group relabeling u -> lambda u(lambda^2 t, lambda x): same arrays,
// rescaled metadata. Exact (bit-level) for lambda a power of two.
Trajectory dilate_trajectory(const Trajectory& traj, double lambda);
VectorLattice dilate_field(const VectorLattice& u, double lambda);

// The scaled local smallness functional over Q_r(t, x):
//   M = r^{-2} iint (|u|^3 + |u||pi|) + r^{-13/4} int (int_B |pi|)^{5/4}.
struct MParts {
    double velocity = 0.0; // r^{-2} iint |u|^3
    double mixed = 0.0;    // r^{-2} iint |u| |pi|
    double pressure = 0.0; // r^{-13/4} int (int |pi|)^{5/4}
    double total = 0.0;
};

MParts M_functional(const AnalysisContext& ctx, const ParabolicCylinder& q,
                    const MHooks& hooks = {});

// First criterion: M <= eps1 implies sup_{Q_{r/2}} |u| <= sqrt(c0 eps1^{2/3}) / r.
struct Prop1Verdict {
    MParts m;
    bool m_pass = false;
    double c1 = 0.0;
    double sup_bound = 0.0;    // sqrt(c1) / r
    double measured_sup = 0.0; // grid sup of |u| over Q_{r/2}
    bool sup_holds = false;
};

Prop1Verdict prop1_verdict(const AnalysisContext& ctx, const ParabolicCylinder& q,
                           const CKNConstants& k, const MHooks& hooks = {});

// Second criterion: limsup_r r^{-1} iint_{Q*_r} |grad u|^2 <= eps3,
// approximated by the max over the smallest admissible radii (up to three);
// fewer than three admissible radii set the caveat flag.
struct Prop2Result {
    std::vector<std::pair<double, double>> by_radius; // (r, value), admissible only
    double value = 0.0;
    bool pass = false;
    bool limsup_caveat = false;
};

Prop2Result prop2_limsup(const AnalysisContext& ctx, double t,
                         const std::array<double, 3>& x,
                         const std::vector<double>& r_sequence, double epsilon3);

// Largest window fraction delta (on a 1/1024 bisection grid) such that for
// every sampled t in (0, t_star] the tail surrogate over ((1-delta) t, t),
//   c I + c I^{5/6},  I = int E^{1/2}(u) D(u),
// stays below eps1. A zero trajectory yields the maximal grid value
// 1 - 1/1024; failure even at the smallest grid value reports the offending t.
struct ScheduleDelta {
    double delta = 0.0;
    bool exists = false;
    double offending_t = 0.0;
    std::vector<std::pair<double, double>> margin; // (t, eps1 - surrogate) at delta
};

ScheduleDelta lemma41_delta(const AnalysisContext& ctx, const std::array<double, 3>& x,
                            double t_star, const CKNConstants& k);

// Cylinder schedule: n_samples values s in (0, (6/7) t_star); at each s the
// smallness test runs on Q_{sqrt(s)}((7/6) s, x) and the decay test checks
// sup |u(tau, y)| tau^{1/2} <= c over Q_{sqrt(s/4)}((7/6) s, x). Requires
// the window fraction delta >= 6/7 so the cylinders fit the certified tail.
struct ScheduleSample {
    double s = 0.0;
    double r = 0.0;
    double t_center = 0.0;
    double m_value = 0.0;
    bool m_pass = false;
    double decay_sup = 0.0;
    bool decay_pass = false;
    bool range_ok = true;
};

struct ScheduleResult {
    bool available = false;
    std::string reason;
    double delta = 0.0;
    std::vector<ScheduleSample> samples;
    bool all_pass = false;
};

ScheduleResult theorem_TI_schedule(const AnalysisContext& ctx,
                                   const std::array<double, 3>& x, double t_star,
                                   const CKNConstants& k, int n_samples = 10);

// Initial-data gauge L = || u0 / |y - center|^{1/2} ||_2 and the associated
// paraboloid-like region {(t, y): |y - center|^2 < t (L0 - L)}.
struct InitialDataGauge {
    double L = 0.0;
    double L0 = 1.0;
    std::array<double, 3> center{};
};

InitialDataGauge weighted_data_norm(const VectorLattice& u0,
                                    const std::array<double, 3>& center, double L0);

bool thmD_member(const InitialDataGauge& gauge, const TorusGrid& g, double t,
                 const std::array<double, 3>& y);

// One analyzed sample of the regularity map.
struct RegularitySample {
    double t = 0.0;
    std::array<double, 3> x{};
    double m_value = 0.0;
    bool prop1_pass = false;
    double prop2_value = 0.0;
    bool prop2_pass = false;
    bool prop2_caveat = false;
    double t_star = 0.0;
    double delta = 0.0;
    bool thm_d_member = false;
    std::vector<std::pair<double, double>> m_by_r;
    std::vector<ScheduleSample> schedule;
};

struct CoveringCylinder {
    double t = 0.0;
    std::array<double, 3> x{};
    double r = 0.0;
};

struct CoveringReport {
    std::size_t count = 0;
    double sum_r = 0.0;
    std::vector<CoveringCylinder> cylinders;
    bool all_covered = true;
    std::size_t failing_total = 0;
};

// Greedy parabolic covering of the samples whose verdicts fail (prop1 or
// prop2). rho caps the cylinder radius; r_floor lifts degenerate singles.
CoveringReport singular_candidates(const std::vector<RegularitySample>& samples,
                                   const TorusGrid& g, double rho,
                                   double r_floor = 0.0);

} // namespace ckn
