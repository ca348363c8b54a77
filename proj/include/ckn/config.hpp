#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ckn/criteria.hpp"
#include "ckn/solver.hpp"

namespace ckn {

// Initial-field generator selection. "file" is intentionally absent: runs
// are reproducible from config + seed alone, snapshots are outputs.
struct InitialSpec {
    std::string kind = "taylor_green"; // zero | taylor_green | random_divfree | curl_bump
    double amplitude = 1.0;
    int band = 4;                      // random_divfree only
    double radius = 1.0;               // curl_bump only
    std::array<double, 3> center{0.0, 0.0, 0.0}; // curl_bump; (0,0,0) = box center
};

struct PerturbationSpec {
    std::string kind = "none"; // none | curl_bump
    double amplitude = 1e-3;
    double radius = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0}; // (0,0,0) = box center
};

struct SamplingSpec {
    std::vector<std::array<double, 3>> x_samples; // empty = box center only
    int x_stride = 0;  // > 0 samples the lattice at this stride instead
    int t_stride = 5;  // every t_stride-th snapshot
    std::vector<double> r_sequence{0.45, 0.42, 0.4};
};

struct CoveringSpec {
    double rho = 0.5;
    double r_floor = 0.0;
};

struct RunConfig {
    int grid_n = 32;
    double box = 6.283185307179586; // 2 pi

    // Default horizon long enough that the sample band (which loses r_max^2 at
    // the front and r_max^2/8 at the back) is non-empty for the default radii.
    SolverConfig solver{.t_end = 0.5};

    CKNConstants constants;      // epsilon1, epsilon3, c0, c, L0
    double eta = 1e-3;           // good-set smallness threshold
    double epsilon_measure = 0.01; // good-set measure budget (fraction of |B|)

    InitialSpec initial;
    PerturbationSpec perturbation;
    std::vector<double> mollifier_radii{0.6, 0.42, 0.294, 0.206, 0.144, 0.101};
    int comparison_k = 5; // schedule index used to build the comparison field

    SamplingSpec sampling;
    CoveringSpec covering;
    double mu = 0.0; // weight regularization; 0 = singular-cell rule
    std::uint64_t seed = 1;

    void validate() const;                  // throws ConfigError naming the key
    std::array<double, 3> box_center() const { return {0.5 * box, 0.5 * box, 0.5 * box}; }
};

// Parse from a JSON file / JSON text. Unknown keys and type mismatches are
// ConfigError naming the offending key; missing keys take defaults.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

// Canonical serialization (all fields materialized, keys sorted) and the
// FNV-1a 64 hash over it; the hash stamps every report.
std::string canonical_config_json(const RunConfig& c);
std::string config_hash(const RunConfig& c);

// FNV-1a 64 over arbitrary bytes, hex-encoded (shared by report stamping).
std::string fnv1a_hex(const std::string& bytes);

// Materializes the configured initial field (prepared: projected, mean-free,
// dealiased) on the configured grid.
VectorLattice build_initial_field(const RunConfig& c);
// The comparison field: the initial field mollified at schedule index
// comparison_k (identity when the radius is below the grid spacing).
VectorLattice build_comparison_field(const RunConfig& c, const VectorLattice& u0);

} // namespace ckn
