#include "ckn/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ckn/snapshot_io.hpp"
#include "ckn/spectral_ops.hpp"

namespace ckn {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open \"" + path + "\" for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to \"" + path + "\"");
}

namespace {

json point_json(const std::array<double, 3>& p) { return json::array({p[0], p[1], p[2]}); }

std::string snapshot_filename(std::size_t step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%08zu.cknf", step);
    return buf;
}

json constants_json(const CKNConstants& k) {
    return {{"epsilon1", k.epsilon1},
            {"epsilon3", k.epsilon3},
            {"c0", k.c0},
            {"mass_constant_c", k.c},
            {"L0", k.L0}};
}

// Minimal CSV splitting for our own numeric exports (no quoting involved).
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double(const std::string& s, const char* where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError(std::string("malformed number in ") + where + ": \"" + s + "\"");
    }
}

} // namespace

std::string trajectory_id_of(const RunConfig& cfg, const Trajectory& traj) {
    std::string seedtext = canonical_config_json(cfg);
    seedtext += "|steps=" + std::to_string(traj.step_times.size());
    seedtext += "|t_end=" + format_double(traj.end_time());
    seedtext += "|e_end=" + format_double(traj.snapshots.back().energy);
    seedtext += traj.status == RunStatus::complete ? "|complete" : "|aborted";
    return fnv1a_hex(seedtext);
}

std::vector<std::string> write_trajectory(const std::string& dir, const RunConfig& cfg,
                                          const Trajectory& traj) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory \"" + dir + "\"");

    std::vector<std::string> files;
    json snaps = json::array();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const std::string name = snapshot_filename(traj.snapshot_steps[i]);
        write_snapshot(traj.snapshots[i], dir + "/" + name);
        files.push_back(name);
        snaps.push_back({{"file", name},
                         {"step", traj.snapshot_steps[i]},
                         {"time", traj.snapshots[i].time},
                         {"energy", traj.snapshots[i].energy},
                         {"enstrophy", traj.snapshots[i].enstrophy}});
    }

    json m;
    m["schema_version"] = kManifestSchemaVersion;
    m["config_hash"] = config_hash(cfg);
    m["trajectory_id"] = trajectory_id_of(cfg, traj);
    m["config"] = json::parse(canonical_config_json(cfg));
    m["grid"] = {{"n", traj.grid.n}, {"box", traj.grid.box}};
    m["dt"] = traj.dt;
    m["viscosity"] = traj.viscosity;
    m["status"] = traj.status == RunStatus::complete ? "complete" : "aborted";
    m["abort_message"] = traj.abort_message;
    m["snapshot_stride"] = cfg.solver.snapshot_stride;
    m["snapshots"] = snaps;
    m["step_times"] = traj.step_times;
    m["step_energy"] = traj.step_energy;
    m["step_enstrophy"] = traj.step_enstrophy;
    write_text_file(dir + "/manifest.json", m.dump(2) + "\n");
    return files;
}

Trajectory load_trajectory(const std::string& dir) {
    const std::string text = read_text_file(dir + "/manifest.json");
    json m;
    try {
        m = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError("manifest.json is not valid JSON: " + std::string(e.what()));
    }
    if (!m.contains("schema_version") || m["schema_version"] != kManifestSchemaVersion)
        throw ConfigError("manifest schema_version mismatch: expected " +
                          std::to_string(kManifestSchemaVersion) + ", got " +
                          (m.contains("schema_version") ? m["schema_version"].dump()
                                                        : std::string("none")));
    Trajectory traj;
    try {
        traj.grid = TorusGrid(m.at("grid").at("n").get<int>(),
                              m.at("grid").at("box").get<double>());
        traj.dt = m.at("dt").get<double>();
        traj.viscosity = m.at("viscosity").get<double>();
        traj.status = m.at("status").get<std::string>() == "complete"
                          ? RunStatus::complete
                          : RunStatus::aborted_blowup;
        traj.abort_message = m.at("abort_message").get<std::string>();
        traj.step_times = m.at("step_times").get<std::vector<double>>();
        traj.step_energy = m.at("step_energy").get<std::vector<double>>();
        traj.step_enstrophy = m.at("step_enstrophy").get<std::vector<double>>();
        for (const auto& entry : m.at("snapshots")) {
            const std::string file = entry.at("file").get<std::string>();
            FieldSnapshot s = read_snapshot(dir + "/" + file);
            if (s.grid != traj.grid)
                throw IoError("snapshot \"" + file + "\" grid disagrees with manifest");
            const double t_manifest = entry.at("time").get<double>();
            if (std::fabs(s.time - t_manifest) > 1e-12 * (1.0 + std::fabs(t_manifest)))
                throw IoError("snapshot \"" + file + "\" time disagrees with manifest");
            s.spectral_velocity = analyze(s.velocity);
            s.energy = l2_norm_sq(s.velocity);
            s.enstrophy = ckn::enstrophy(s.spectral_velocity);
            traj.snapshot_steps.push_back(entry.at("step").get<std::size_t>());
            traj.snapshots.push_back(std::move(s));
        }
    } catch (const json::exception& e) {
        throw IoError("manifest.json is missing fields: " + std::string(e.what()));
    }
    if (traj.snapshots.empty()) throw IoError("manifest lists no snapshots");
    return traj;
}

std::string map_json(const AnalysisResult& r) {
    json j;
    j["schema_version"] = kMapSchemaVersion;
    j["meta"] = {{"config_hash", r.config_hash},
                 {"trajectory_id", r.trajectory_id},
                 {"constants", constants_json(r.constants)},
                 {"mu", r.mu},
                 {"initial_gauge",
                  {{"L", r.gauge.L}, {"L0", r.gauge.L0}, {"center", point_json(r.gauge.center)}}}};

    json samples = json::array();
    for (const auto& s : r.samples) {
        json mbr = json::array();
        for (const auto& [rr, mm] : s.m_by_r) mbr.push_back(json::array({rr, mm}));
        json sched = json::array();
        for (const auto& e : s.schedule)
            sched.push_back({{"s", e.s},
                             {"r", e.r},
                             {"t_center", e.t_center},
                             {"m", e.m_value},
                             {"m_pass", e.m_pass},
                             {"decay_sup", e.decay_sup},
                             {"decay_pass", e.decay_pass},
                             {"range_ok", e.range_ok}});
        samples.push_back({{"t", s.t},
                           {"x", point_json(s.x)},
                           {"M", s.m_value},
                           {"prop1_pass", s.prop1_pass},
                           {"prop2_value", s.prop2_value},
                           {"prop2_pass", s.prop2_pass},
                           {"prop2_caveat", s.prop2_caveat},
                           {"t_star", s.t_star},
                           {"delta", s.delta},
                           {"thm_d", s.thm_d_member},
                           {"m_by_r", mbr},
                           {"schedule", sched}});
    }
    j["samples"] = samples;

    json cyls = json::array();
    for (const auto& c : r.covering.cylinders)
        cyls.push_back({{"t", c.t}, {"x", point_json(c.x)}, {"r", c.r}});
    j["covering"] = {{"count", r.covering.count},
                     {"sum_r", r.covering.sum_r},
                     {"cylinders", cyls},
                     {"all_covered", r.covering.all_covered},
                     {"failing_total", r.covering.failing_total}};
    return j.dump(2) + "\n";
}

std::string samples_csv(const AnalysisResult& r) {
    std::string out = "t,x0,x1,x2,m,prop1_pass,prop2_value,prop2_pass,t_star,delta,thm_d\n";
    for (const auto& s : r.samples) {
        out += format_double(s.t) + "," + format_double(s.x[0]) + "," +
               format_double(s.x[1]) + "," + format_double(s.x[2]) + "," +
               format_double(s.m_value) + "," + (s.prop1_pass ? "1" : "0") + "," +
               format_double(s.prop2_value) + "," + (s.prop2_pass ? "1" : "0") + "," +
               format_double(s.t_star) + "," + format_double(s.delta) + "," +
               (s.thm_d_member ? "1" : "0") + "\n";
    }
    return out;
}

std::string weighted_json(const AnalysisResult& r) {
    json j;
    j["schema_version"] = kMapSchemaVersion;
    j["meta"] = {{"config_hash", r.config_hash},
                 {"trajectory_id", r.trajectory_id},
                 {"mu", r.mu},
                 {"mass_constant_c", r.constants.c}};
    json rows = json::array();
    for (const auto& xa : r.per_x) {
        json ladder = json::array();
        for (int i = 0; i < 3; ++i)
            ladder.push_back(json::array(
                {xa.row.mu_ladder[i], xa.row.energy_ladder[i], xa.row.diss_ladder[i]}));
        rows.push_back({{"x", point_json(xa.x)},
                        {"mu_ladder", ladder},
                        {"E", xa.row.energy_direct},
                        {"E_extrapolated", xa.row.energy_extrapolated},
                        {"D_integral", xa.row.diss_direct},
                        {"psi", xa.row.psi},
                        {"t_star", xa.row.t_star},
                        {"delta", xa.delta.exists ? xa.delta.delta : 0.0},
                        {"schedule_available", xa.schedule.available},
                        {"schedule_all_pass", xa.schedule.all_pass},
                        {"certificate_flags",
                         {{"initial_ok", xa.row.initial_ok},
                          {"certified", xa.row.certified},
                          {"covers_run", xa.row.covers_run}}}});
    }
    j["rows"] = rows;
    j["good_sets"] = {{"k", r.goods.k},
                      {"target_met", r.goods.target_met},
                      {"coverage", r.goods.coverage},
                      {"excluded_measure", r.goods.excluded_measure},
                      {"region_radius", r.goods_region_radius}};
    return j.dump(2) + "\n";
}

std::string psi_csv(const AnalysisResult& r) {
    std::string out = "x_index,k,psi_k\n";
    for (std::size_t p = 0; p < r.psi_table.points.size(); ++p)
        for (std::size_t k = 0; k < r.psi_table.psi.size(); ++k)
            out += std::to_string(p) + "," + std::to_string(k) + "," +
                   format_double(r.psi_table.psi[k][p]) + "\n";
    return out;
}

namespace {

json parse_map_checked(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError("map file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.contains("schema_version") || j["schema_version"] != kMapSchemaVersion)
        throw ConfigError(
            "map schema_version mismatch: expected " + std::to_string(kMapSchemaVersion) +
            ", got " +
            (j.contains("schema_version") ? j["schema_version"].dump() : std::string("none")));
    return j;
}

} // namespace

std::string plot_m_vs_r_csv(const std::string& map_json_text) {
    const json j = parse_map_checked(map_json_text);
    std::string out = "t,x0,x1,x2,r,m\n";
    for (const auto& s : j.at("samples")) {
        const double t = s.at("t").get<double>();
        const auto x = s.at("x").get<std::vector<double>>();
        for (const auto& pair : s.at("m_by_r")) {
            out += format_double(t) + "," + format_double(x[0]) + "," +
                   format_double(x[1]) + "," + format_double(x[2]) + "," +
                   format_double(pair.at(0).get<double>()) + "," +
                   format_double(pair.at(1).get<double>()) + "\n";
        }
    }
    return out;
}

std::string plot_tstar_csv(const std::string& map_json_text) {
    const json j = parse_map_checked(map_json_text);
    std::string out = "x0,x1,x2,t_star\n";
    std::vector<std::array<double, 4>> seen;
    for (const auto& s : j.at("samples")) {
        const auto x = s.at("x").get<std::vector<double>>();
        const double ts = s.at("t_star").get<double>();
        const std::array<double, 4> row{x[0], x[1], x[2], ts};
        bool dup = false;
        for (const auto& q : seen)
            if (q == row) {
                dup = true;
                break;
            }
        if (!dup) {
            seen.push_back(row);
            out += format_double(x[0]) + "," + format_double(x[1]) + "," +
                   format_double(x[2]) + "," + format_double(ts) + "\n";
        }
    }
    return out;
}

std::string plot_psi_decay_csv(const std::string& psi_csv_text) {
    std::istringstream in(psi_csv_text);
    std::string line;
    if (!std::getline(in, line) || line != "x_index,k,psi_k")
        throw IoError("psi table header mismatch (expected \"x_index,k,psi_k\")");
    std::vector<std::vector<double>> per_k;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cols = split_csv_line(line);
        if (cols.size() != 3) throw IoError("psi table row needs 3 columns");
        const std::size_t k =
            static_cast<std::size_t>(parse_double(cols[1], "psi table k"));
        const double v = parse_double(cols[2], "psi table value");
        if (per_k.size() <= k) per_k.resize(k + 1);
        per_k[k].push_back(v);
    }
    std::string out = "k,median_psi\n";
    for (std::size_t k = 0; k < per_k.size(); ++k)
        out += std::to_string(k) + "," + format_double(median_of(per_k[k])) + "\n";
    return out;
}

std::string calibration_json(const AnalysisResult& r) {
    double max_m = 0.0, max_p2 = 0.0;
    for (const auto& s : r.samples) {
        max_m = std::max(max_m, s.m_value);
        max_p2 = std::max(max_p2, s.prop2_value);
    }
    const bool pass_now =
        max_m <= r.constants.epsilon1 && max_p2 <= r.constants.epsilon3;
    json j;
    j["schema_version"] = kMapSchemaVersion;
    j["config_hash"] = r.config_hash;
    j["trajectory_id"] = r.trajectory_id;
    j["samples"] = r.samples.size();
    j["max_m"] = max_m;
    j["max_prop2"] = max_p2;
    // The tightest thresholds this run still passes; anything at or above
    // them keeps the smooth-run ground truth green.
    j["epsilon1_floor"] = max_m;
    j["epsilon3_floor"] = max_p2;
    j["epsilon1_configured"] = r.constants.epsilon1;
    j["epsilon3_configured"] = r.constants.epsilon3;
    j["pass_at_configured"] = pass_now;
    return j.dump(2) + "\n";
}

} // namespace ckn
