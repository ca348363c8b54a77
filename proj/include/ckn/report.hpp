#pragma once

#include <string>
#include <vector>

#include "ckn/budget.hpp"
#include "ckn/config.hpp"
#include "ckn/criteria.hpp"

namespace ckn {

// Shortest round-trip decimal form of a double (locale-free); the single
// formatter for every JSON/CSV byte the tool emits, so outputs are
// byte-stable across platforms and thread counts.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Per-x analysis bundle assembled by the orchestration layer.
struct XAnalysis {
    std::array<double, 3> x{};
    PerturbationBudget budget;
    TStarEstimate tstar;
    ScheduleDelta delta;
    ScheduleResult schedule;
    WeightedEnergyReport row;
};

struct AnalysisResult {
    std::string config_hash;
    std::string trajectory_id;
    CKNConstants constants;
    double mu = 0.0;
    InitialDataGauge gauge;
    std::vector<RegularitySample> samples;
    CoveringReport covering;
    std::vector<XAnalysis> per_x;
    PsiSequenceTable psi_table;
    GoodSets goods;
    double goods_region_radius = 0.0;
    std::size_t prop1_pass_count = 0;
    std::size_t prop2_pass_count = 0;
};

// Stable schema stamps; plotdata refuses other versions.
inline constexpr int kMapSchemaVersion = 1;
inline constexpr int kManifestSchemaVersion = 1;

// Trajectory persistence: manifest.json plus one snapshot file per stored
// step, all under dir. load rebuilds spectral state and cached norms from
// the stored lattices, so a loaded trajectory analyzes bit-identically.
std::vector<std::string> write_trajectory(const std::string& dir, const RunConfig& cfg,
                                          const Trajectory& traj);
Trajectory load_trajectory(const std::string& dir);
// The manifest's identity stamp for a run (deterministic).
std::string trajectory_id_of(const RunConfig& cfg, const Trajectory& traj);

std::string map_json(const AnalysisResult& r);
std::string samples_csv(const AnalysisResult& r);
std::string weighted_json(const AnalysisResult& r);
std::string psi_csv(const AnalysisResult& r);

// Plot bundles derived from written reports (pure re-expressions).
std::string plot_m_vs_r_csv(const std::string& map_json_text);
std::string plot_tstar_csv(const std::string& map_json_text);
std::string plot_psi_decay_csv(const std::string& psi_csv_text);

std::string calibration_json(const AnalysisResult& r);

} // namespace ckn
