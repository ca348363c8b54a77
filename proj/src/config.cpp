#include "ckn/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ckn/fields.hpp"
#include "ckn/mollifier.hpp"

namespace ckn {

using nlohmann::json;

namespace {

void expect_keys(const json& j, const std::string& section,
                 std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) {
            const std::string path = section.empty() ? it.key() : section + "." + it.key();
            throw ConfigError("config: unknown key \"" + path + "\"");
        }
    }
}

template <typename T>
void read_field(const json& j, const std::string& section, const char* key, T& into) {
    if (!j.contains(key)) return;
    try {
        into = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: bad value for \"" + section + "." + key + "\"");
    }
}

void read_point(const json& j, const std::string& section, const char* key,
                std::array<double, 3>& into) {
    if (!j.contains(key)) return;
    std::vector<double> v;
    read_field(j, section, key, v);
    if (v.size() != 3)
        throw ConfigError("config: \"" + section + "." + key + "\" needs 3 numbers");
    into = {v[0], v[1], v[2]};
}

json point_json(const std::array<double, 3>& p) { return json::array({p[0], p[1], p[2]}); }

} // namespace

void RunConfig::validate() const {
    if (grid_n < 8 || grid_n % 2 != 0)
        throw ConfigError("config: \"grid.n\" must be even and >= 8");
    if (!(box > 0.0)) throw ConfigError("config: \"grid.box\" must be positive");
    solver.validate();
    if (!(constants.epsilon1 > 0.0))
        throw ConfigError("config: \"constants.epsilon1\" must be positive");
    if (!(constants.epsilon3 > 0.0))
        throw ConfigError("config: \"constants.epsilon3\" must be positive");
    if (!(constants.c0 > 0.0)) throw ConfigError("config: \"constants.c0\" must be positive");
    if (!(constants.c > 0.0))
        throw ConfigError("config: \"constants.mass_constant_c\" must be positive");
    if (!(constants.L0 > 0.0)) throw ConfigError("config: \"constants.L0\" must be positive");
    if (!(eta > 0.0)) throw ConfigError("config: \"constants.eta\" must be positive");
    if (!(epsilon_measure > 0.0))
        throw ConfigError("config: \"constants.epsilon_measure\" must be positive");
    if (!(mu >= 0.0)) throw ConfigError("config: \"weights.mu\" must be >= 0");

    if (mollifier_radii.empty())
        throw ConfigError("config: \"mollifier.radii\" must be nonempty");
    for (std::size_t i = 0; i < mollifier_radii.size(); ++i) {
        const double r = mollifier_radii[i];
        if (!(r > 0.0) || !(r < 0.5 * box))
            throw ConfigError("config: \"mollifier.radii\" entries must lie in (0, box/2)");
        if (i > 0 && !(r < mollifier_radii[i - 1]))
            throw ConfigError("config: \"mollifier.radii\" must be strictly decreasing");
    }
    if (comparison_k < 0 || comparison_k >= static_cast<int>(mollifier_radii.size()))
        throw ConfigError("config: \"mollifier.comparison_k\" out of schedule range");

    if (sampling.t_stride < 1)
        throw ConfigError("config: \"sampling.t_stride\" must be >= 1");
    if (sampling.x_stride < 0)
        throw ConfigError("config: \"sampling.x_stride\" must be >= 0");
    if (sampling.r_sequence.empty())
        throw ConfigError("config: \"sampling.r_sequence\" must be nonempty");
    const double floor_r = 2.0 * box / grid_n;
    for (double r : sampling.r_sequence) {
        if (!(r >= floor_r))
            throw ConfigError("config: \"sampling.r_sequence\" has a radius below the "
                              "resolution floor 2h");
        if (!(r <= 0.25 * box))
            throw ConfigError("config: \"sampling.r_sequence\" has a radius above box/4");
    }
    if (!(covering.rho > 0.0)) throw ConfigError("config: \"covering.rho\" must be positive");
    if (!(covering.r_floor >= 0.0))
        throw ConfigError("config: \"covering.r_floor\" must be >= 0");

    const auto check_bump = [&](const std::string& section, double radius, double amp) {
        if (!(amp >= 0.0))
            throw ConfigError("config: \"" + section + ".amplitude\" must be >= 0");
        if (!(radius > 0.0) || !(radius < 0.5 * box))
            throw ConfigError("config: \"" + section + ".radius\" must lie in (0, box/2)");
    };
    if (initial.kind == "zero" || initial.kind == "taylor_green") {
        if (!(initial.amplitude >= 0.0))
            throw ConfigError("config: \"initial.amplitude\" must be >= 0");
    } else if (initial.kind == "random_divfree") {
        if (initial.band < 1 || initial.band >= grid_n / 2)
            throw ConfigError("config: \"initial.band\" must lie in [1, n/2)");
        if (!(initial.amplitude >= 0.0))
            throw ConfigError("config: \"initial.amplitude\" must be >= 0");
    } else if (initial.kind == "curl_bump") {
        check_bump("initial", initial.radius, initial.amplitude);
    } else {
        throw ConfigError("config: \"initial.kind\" must be one of zero, taylor_green, "
                          "random_divfree, curl_bump");
    }
    if (perturbation.kind == "curl_bump")
        check_bump("perturbation", perturbation.radius, perturbation.amplitude);
    else if (perturbation.kind != "none")
        throw ConfigError("config: \"perturbation.kind\" must be none or curl_bump");
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    expect_keys(j, "",
                {"config_version", "grid", "solver", "constants", "initial", "perturbation",
                 "mollifier", "sampling", "covering", "weights", "seed"});

    RunConfig c;
    if (j.contains("config_version")) {
        int v = 0;
        read_field(j, "", "config_version", v);
        if (v != 1) throw ConfigError("config: \"config_version\" must be 1");
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        expect_keys(g, "grid", {"n", "box"});
        read_field(g, "grid", "n", c.grid_n);
        read_field(g, "grid", "box", c.box);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        expect_keys(s, "solver",
                    {"dt", "t_end", "dealias", "snapshot_stride", "cfl_cap", "div_tol"});
        read_field(s, "solver", "dt", c.solver.dt);
        read_field(s, "solver", "t_end", c.solver.t_end);
        read_field(s, "solver", "dealias", c.solver.dealias_frac);
        read_field(s, "solver", "snapshot_stride", c.solver.snapshot_stride);
        read_field(s, "solver", "cfl_cap", c.solver.cfl_cap);
        read_field(s, "solver", "div_tol", c.solver.div_tol);
    }
    if (j.contains("constants")) {
        const json& k = j.at("constants");
        expect_keys(k, "constants",
                    {"epsilon1", "epsilon3", "c0", "mass_constant_c", "L0", "eta",
                     "epsilon_measure"});
        read_field(k, "constants", "epsilon1", c.constants.epsilon1);
        read_field(k, "constants", "epsilon3", c.constants.epsilon3);
        read_field(k, "constants", "c0", c.constants.c0);
        read_field(k, "constants", "mass_constant_c", c.constants.c);
        read_field(k, "constants", "L0", c.constants.L0);
        read_field(k, "constants", "eta", c.eta);
        read_field(k, "constants", "epsilon_measure", c.epsilon_measure);
    }
    if (j.contains("initial")) {
        const json& i = j.at("initial");
        expect_keys(i, "initial", {"kind", "amplitude", "band", "radius", "center"});
        read_field(i, "initial", "kind", c.initial.kind);
        read_field(i, "initial", "amplitude", c.initial.amplitude);
        read_field(i, "initial", "band", c.initial.band);
        read_field(i, "initial", "radius", c.initial.radius);
        read_point(i, "initial", "center", c.initial.center);
    }
    if (j.contains("perturbation")) {
        const json& p = j.at("perturbation");
        expect_keys(p, "perturbation", {"kind", "amplitude", "radius", "center"});
        read_field(p, "perturbation", "kind", c.perturbation.kind);
        read_field(p, "perturbation", "amplitude", c.perturbation.amplitude);
        read_field(p, "perturbation", "radius", c.perturbation.radius);
        read_point(p, "perturbation", "center", c.perturbation.center);
    }
    if (j.contains("mollifier")) {
        const json& m = j.at("mollifier");
        expect_keys(m, "mollifier", {"radii", "comparison_k"});
        read_field(m, "mollifier", "radii", c.mollifier_radii);
        read_field(m, "mollifier", "comparison_k", c.comparison_k);
        if (m.contains("radii") && !m.contains("comparison_k"))
            c.comparison_k = static_cast<int>(c.mollifier_radii.size()) - 1;
    }
    if (j.contains("sampling")) {
        const json& s = j.at("sampling");
        expect_keys(s, "sampling", {"x_samples", "x_stride", "t_stride", "r_sequence"});
        if (s.contains("x_samples")) {
            std::vector<std::vector<double>> pts;
            read_field(s, "sampling", "x_samples", pts);
            c.sampling.x_samples.clear();
            for (const auto& p : pts) {
                if (p.size() != 3)
                    throw ConfigError(
                        "config: \"sampling.x_samples\" entries need 3 numbers");
                c.sampling.x_samples.push_back({p[0], p[1], p[2]});
            }
        }
        read_field(s, "sampling", "x_stride", c.sampling.x_stride);
        read_field(s, "sampling", "t_stride", c.sampling.t_stride);
        read_field(s, "sampling", "r_sequence", c.sampling.r_sequence);
    }
    if (j.contains("covering")) {
        const json& v = j.at("covering");
        expect_keys(v, "covering", {"rho", "r_floor"});
        read_field(v, "covering", "rho", c.covering.rho);
        read_field(v, "covering", "r_floor", c.covering.r_floor);
    }
    if (j.contains("weights")) {
        const json& w = j.at("weights");
        expect_keys(w, "weights", {"mu"});
        read_field(w, "weights", "mu", c.mu);
    }
    read_field(j, "", "seed", c.seed);

    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("config: cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_config_json(const RunConfig& c) {
    json j;
    j["config_version"] = 1;
    j["grid"] = {{"n", c.grid_n}, {"box", c.box}};
    j["solver"] = {{"dt", c.solver.dt},
                   {"t_end", c.solver.t_end},
                   {"dealias", c.solver.dealias_frac},
                   {"snapshot_stride", c.solver.snapshot_stride},
                   {"cfl_cap", c.solver.cfl_cap},
                   {"div_tol", c.solver.div_tol}};
    j["constants"] = {{"epsilon1", c.constants.epsilon1},
                      {"epsilon3", c.constants.epsilon3},
                      {"c0", c.constants.c0},
                      {"mass_constant_c", c.constants.c},
                      {"L0", c.constants.L0},
                      {"eta", c.eta},
                      {"epsilon_measure", c.epsilon_measure}};
    j["initial"] = {{"kind", c.initial.kind},
                    {"amplitude", c.initial.amplitude},
                    {"band", c.initial.band},
                    {"radius", c.initial.radius},
                    {"center", point_json(c.initial.center)}};
    j["perturbation"] = {{"kind", c.perturbation.kind},
                         {"amplitude", c.perturbation.amplitude},
                         {"radius", c.perturbation.radius},
                         {"center", point_json(c.perturbation.center)}};
    j["mollifier"] = {{"radii", c.mollifier_radii}, {"comparison_k", c.comparison_k}};
    json xs = json::array();
    for (const auto& p : c.sampling.x_samples) xs.push_back(point_json(p));
    j["sampling"] = {{"x_samples", xs},
                     {"x_stride", c.sampling.x_stride},
                     {"t_stride", c.sampling.t_stride},
                     {"r_sequence", c.sampling.r_sequence}};
    j["covering"] = {{"rho", c.covering.rho}, {"r_floor", c.covering.r_floor}};
    j["weights"] = {{"mu", c.mu}};
    j["seed"] = c.seed;
    return j.dump();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    static const char* hexd = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hexd[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string config_hash(const RunConfig& c) { return fnv1a_hex(canonical_config_json(c)); }

VectorLattice build_initial_field(const RunConfig& c) {
    const TorusGrid g(c.grid_n, c.box);
    const auto resolve = [&](const std::array<double, 3>& p) {
        return (p[0] == 0.0 && p[1] == 0.0 && p[2] == 0.0) ? c.box_center() : p;
    };
    VectorLattice base(g);
    if (c.initial.kind == "zero") {
        // stays zero
    } else if (c.initial.kind == "taylor_green") {
        base = taylor_green(g, c.initial.amplitude);
    } else if (c.initial.kind == "random_divfree") {
        base = random_divfree(g, c.seed, c.initial.band, c.initial.amplitude);
    } else if (c.initial.kind == "curl_bump") {
        base = curl_bump(g, resolve(c.initial.center), c.initial.radius,
                         c.initial.amplitude);
    } else {
        throw ConfigError("config: \"initial.kind\" unrecognized");
    }
    if (c.perturbation.kind == "curl_bump") {
        const VectorLattice bump = curl_bump(g, resolve(c.perturbation.center),
                                             c.perturbation.radius,
                                             c.perturbation.amplitude);
        add_scaled(base, bump, 1.0);
    }
    return prepare_initial(base, c.solver.dealias_frac);
}

VectorLattice build_comparison_field(const RunConfig& c, const VectorLattice& u0) {
    MollifierSchedule sched;
    sched.radii = c.mollifier_radii;
    sched.validate();
    return mollify(u0, sched, c.comparison_k);
}

} // namespace ckn
