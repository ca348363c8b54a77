#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ckn/budget.hpp"
#include "ckn/config.hpp"
#include "ckn/criteria.hpp"
#include "ckn/energy.hpp"
#include "ckn/fft.hpp"
#include "ckn/fields.hpp"
#include "ckn/mollifier.hpp"
#include "ckn/pressure.hpp"
#include "ckn/solver.hpp"
#include "ckn/weights.hpp"

namespace py = pybind11;
using namespace ckn;

namespace {

using Point = std::array<double, 3>;

// Velocity fields cross the boundary as float64 arrays of shape
// (3, n, n, n) with axes [component, z, y, x]; scalars as (n, n, n).

py::array_t<double> from_vector(const VectorLattice& u) {
    const int n = u.grid.n;
    py::array_t<double> out({3, n, n, n});
    auto w = out.mutable_unchecked<4>();
    for (int c = 0; c < 3; ++c) {
        const double* src = u.c[c].data();
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    w(c, iz, iy, ix) = src[(static_cast<std::size_t>(iz) * n + iy) * n + ix];
    }
    return out;
}

py::array_t<double> from_scalar(const ScalarLattice& s) {
    const int n = s.grid.n;
    py::array_t<double> out({n, n, n});
    auto w = out.mutable_unchecked<3>();
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                w(iz, iy, ix) = s.v[(static_cast<std::size_t>(iz) * n + iy) * n + ix];
    return out;
}

VectorLattice to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                        double box) {
    if (a.ndim() != 4 || a.shape(0) != 3 || a.shape(1) != a.shape(2) ||
        a.shape(2) != a.shape(3))
        throw ConfigError("field array must have shape (3, n, n, n)");
    const int n = static_cast<int>(a.shape(1));
    const TorusGrid g(n, box);
    VectorLattice u(g);
    auto r = a.unchecked<4>();
    for (int c = 0; c < 3; ++c)
        for (int iz = 0; iz < n; ++iz)
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    u.c[c][(static_cast<std::size_t>(iz) * n + iy) * n + ix] = r(c, iz, iy, ix);
    return u;
}

// Trajectories stay on the C++ side; python reads views of the stored runs.
struct TrajectoryHandle {
    std::shared_ptr<Trajectory> traj;

    const Trajectory& ref() const { return *traj; }
    std::size_t snapshot_count() const { return traj->snapshots.size(); }
    const FieldSnapshot& snap(std::size_t i) const {
        if (i >= traj->snapshots.size())
            throw RangeError("snapshot index out of range");
        return traj->snapshots[i];
    }
};

py::dict m_parts_dict(const MParts& m) {
    py::dict d;
    d["velocity"] = m.velocity;
    d["mixed"] = m.mixed;
    d["pressure"] = m.pressure;
    d["total"] = m.total;
    return d;
}

void register_exceptions(py::module_& m) {
    static py::exception<ConfigError> config_exc(m, "ConfigurationError");
    static py::exception<RangeError> range_exc(m, "RangeLimitError");
    static py::exception<PreconditionError> pre_exc(m, "PreconditionFailure");
    static py::exception<IoError> io_exc(m, "StorageError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            PyErr_SetString(config_exc.ptr(), e.what());
        } catch (const RangeError& e) {
            PyErr_SetString(range_exc.ptr(), e.what());
        } catch (const PreconditionError& e) {
            PyErr_SetString(pre_exc.ptr(), e.what());
        } catch (const IoError& e) {
            PyErr_SetString(io_exc.ptr(), e.what());
        }
    });
}

} // namespace

PYBIND11_MODULE(_ckn, m) {
    m.doc() = "Local regularity diagnostics for periodic incompressible flow fields";
    m.attr("__version__") = "0.1.0";
    register_exceptions(m);

    // ---- field generators -------------------------------------------------
    m.def(
        "taylor_green",
        [](int n, double box, double amplitude) {
            return from_vector(taylor_green(TorusGrid(n, box), amplitude));
        },
        py::arg("n"), py::arg("box"), py::arg("amplitude") = 1.0);
    m.def(
        "random_divfree",
        [](int n, double box, std::uint64_t seed, int band, double amplitude) {
            return from_vector(random_divfree(TorusGrid(n, box), seed, band, amplitude));
        },
        py::arg("n"), py::arg("box"), py::arg("seed"), py::arg("band") = 4,
        py::arg("amplitude") = 1.0);
    m.def(
        "curl_bump",
        [](int n, double box, const Point& center, double radius, double amplitude) {
            return from_vector(curl_bump(TorusGrid(n, box), center, radius, amplitude));
        },
        py::arg("n"), py::arg("box"), py::arg("center"), py::arg("radius") = 1.0,
        py::arg("amplitude") = 1.0);
    m.def(
        "prepare_initial",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
           double box) { return from_vector(prepare_initial(to_vector(u, box))); },
        py::arg("u"), py::arg("box"),
        "Project divergence-free, remove the mean, and dealias raw field data.");

    // ---- pointwise / field operations --------------------------------------
    m.def(
        "solve_pressure",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
           double box, double div_tol) {
            return from_scalar(solve_pressure(to_vector(u, box), div_tol));
        },
        py::arg("u"), py::arg("box"), py::arg("div_tol") = 1e-8,
        "Zero-mean pressure of a divergence-free field.");
    m.def(
        "mollify",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
           double box, double eps) { return from_vector(mollify(to_vector(u, box), eps)); },
        py::arg("u"), py::arg("box"), py::arg("eps"));
    m.def(
        "weighted_energy",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
           double box, const Point& x, double mu) {
            WeightSpec w;
            w.x = x;
            w.mu = mu;
            return weighted_E(to_vector(u, box), w);
        },
        py::arg("u"), py::arg("box"), py::arg("x"), py::arg("mu") = 0.0,
        "Integral of |u|^2 / sqrt(|y - x|^2 + mu^2); mu = 0 uses the exact "
        "singular-cell rule.");
    m.def(
        "weighted_dissipation",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
           double box, const Point& x, double mu) {
            WeightSpec w;
            w.x = x;
            w.mu = mu;
            return weighted_D(analyze(to_vector(u, box)), w);
        },
        py::arg("u"), py::arg("box"), py::arg("x"), py::arg("mu") = 0.0);
    m.def(
        "psi_point",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u0,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& v0,
           double box, const Point& x) {
            return psi_point(to_vector(u0, box), to_vector(v0, box), x);
        },
        py::arg("u0"), py::arg("v0"), py::arg("box"), py::arg("x"),
        "Inverse-distance-weighted squared difference of two fields at x.");

    // ---- time integration ---------------------------------------------------
    py::class_<TrajectoryHandle>(m, "Trajectory")
        .def_property_readonly("n", [](const TrajectoryHandle& t) { return t.ref().grid.n; })
        .def_property_readonly("box",
                               [](const TrajectoryHandle& t) { return t.ref().grid.box; })
        .def_property_readonly("dt", [](const TrajectoryHandle& t) { return t.ref().dt; })
        .def_property_readonly("complete",
                               [](const TrajectoryHandle& t) {
                                   return t.ref().status == RunStatus::complete;
                               })
        .def_property_readonly(
            "abort_message",
            [](const TrajectoryHandle& t) { return t.ref().abort_message; })
        .def_property_readonly("times",
                               [](const TrajectoryHandle& t) {
                                   std::vector<double> out;
                                   for (const auto& s : t.ref().snapshots)
                                       out.push_back(s.time);
                                   return out;
                               })
        .def_property_readonly("step_times",
                               [](const TrajectoryHandle& t) { return t.ref().step_times; })
        .def_property_readonly(
            "step_energy", [](const TrajectoryHandle& t) { return t.ref().step_energy; })
        .def_property_readonly(
            "step_enstrophy",
            [](const TrajectoryHandle& t) { return t.ref().step_enstrophy; })
        .def("__len__", &TrajectoryHandle::snapshot_count)
        .def("velocity",
             [](const TrajectoryHandle& t, std::size_t i) {
                 return from_vector(t.snap(i).velocity);
             },
             py::arg("i"))
        .def("pressure",
             [](const TrajectoryHandle& t, std::size_t i) {
                 return from_scalar(t.snap(i).pressure);
             },
             py::arg("i"))
        .def("energy",
             [](const TrajectoryHandle& t, std::size_t i) { return t.snap(i).energy; },
             py::arg("i"))
        .def("enstrophy",
             [](const TrajectoryHandle& t, std::size_t i) { return t.snap(i).enstrophy; },
             py::arg("i"));

    m.def(
        "run",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u0,
           double box, double dt, double t_end, int snapshot_stride,
           bool disable_nonlinearity) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_end = t_end;
            cfg.snapshot_stride = snapshot_stride;
            cfg.disable_nonlinearity = disable_nonlinearity;
            TrajectoryHandle h;
            h.traj = std::make_shared<Trajectory>(run(to_vector(u0, box), cfg));
            return h;
        },
        py::arg("u0"), py::arg("box"), py::arg("dt") = 1e-3, py::arg("t_end") = 0.1,
        py::arg("snapshot_stride") = 10, py::arg("disable_nonlinearity") = false,
        "Integrate a prepared field at unit viscosity; snapshots every stride steps.");

    // ---- balances and local criteria ---------------------------------------
    m.def(
        "energy_balance",
        [](const TrajectoryHandle& t, double t_start, double t_end) {
            const StrongEnergyReport r = strong_energy_residual(t.ref(), t_start, t_end);
            py::dict d;
            d["energy_start"] = r.energy_start;
            d["energy_end"] = r.energy_end;
            d["dissipation_integral"] = r.dissipation_integral;
            d["residual"] = r.residual;
            d["scale"] = r.scale;
            return d;
        },
        py::arg("traj"), py::arg("t_start"), py::arg("t_end"));
    m.def(
        "smallness",
        [](const TrajectoryHandle& t, double time, const Point& x, double r) {
            AnalysisContext ctx(t.ref());
            ParabolicCylinder q;
            q.t = time;
            q.x = x;
            q.r = r;
            return m_parts_dict(M_functional(ctx, q));
        },
        py::arg("traj"), py::arg("t"), py::arg("x"), py::arg("r"),
        "Scaled local smallness functional over the past cylinder at (t, x, r).");
    m.def(
        "interior_bound",
        [](const TrajectoryHandle& t, double time, const Point& x, double r,
           double epsilon1, double c0) {
            AnalysisContext ctx(t.ref());
            ParabolicCylinder q;
            q.t = time;
            q.x = x;
            q.r = r;
            CKNConstants k;
            k.epsilon1 = epsilon1;
            k.c0 = c0;
            const Prop1Verdict v = prop1_verdict(ctx, q, k);
            py::dict d;
            d["m"] = m_parts_dict(v.m);
            d["m_pass"] = v.m_pass;
            d["sup_bound"] = v.sup_bound;
            d["measured_sup"] = v.measured_sup;
            d["sup_holds"] = v.sup_holds;
            return d;
        },
        py::arg("traj"), py::arg("t"), py::arg("x"), py::arg("r"),
        py::arg("epsilon1") = 0.05, py::arg("c0") = 1.0);
    m.def(
        "gradient_limsup",
        [](const TrajectoryHandle& t, double time, const Point& x,
           const std::vector<double>& radii, double epsilon3) {
            AnalysisContext ctx(t.ref());
            const Prop2Result r = prop2_limsup(ctx, time, x, radii, epsilon3);
            py::dict d;
            d["by_radius"] = r.by_radius;
            d["value"] = r.value;
            d["pass"] = r.pass;
            d["limsup_caveat"] = r.limsup_caveat;
            return d;
        },
        py::arg("traj"), py::arg("t"), py::arg("x"), py::arg("radii"),
        py::arg("epsilon3") = 0.05);
    m.def(
        "perturbation_budget",
        [](const TrajectoryHandle& u_traj, const TrajectoryHandle& v_traj, const Point& x,
           double mu, double c) {
            const PerturbationBudget b =
                weighted_budget(u_traj.ref(), v_traj.ref(), x, mu, c);
            const TStarEstimate ts = estimate_t_star(b);
            py::dict d;
            d["times"] = b.times;
            d["energy_w"] = b.energy_w;
            d["diss_w_prefix"] = b.diss_w_prefix;
            d["history_v"] = b.history_v;
            d["initial_ok"] = b.initial_ok;
            d["threshold_initial"] = b.threshold_initial;
            d["threshold_evolved"] = b.threshold_evolved;
            d["t_star"] = ts.t_star;
            d["certified"] = ts.certified;
            d["covers_run"] = ts.covers_run;
            return d;
        },
        py::arg("u_traj"), py::arg("v_traj"), py::arg("x"), py::arg("mu") = 0.0,
        py::arg("c") = 1.0,
        "Weighted perturbation bookkeeping for u against the comparison run v, "
        "with the certified horizon estimate.");
    m.def(
        "cylinder_schedule",
        [](const TrajectoryHandle& t, const Point& x, double t_star, double epsilon1,
           double c, int n_samples) {
            AnalysisContext ctx(t.ref());
            CKNConstants k;
            k.epsilon1 = epsilon1;
            k.c = c;
            const ScheduleResult r = theorem_TI_schedule(ctx, x, t_star, k, n_samples);
            py::dict d;
            d["available"] = r.available;
            d["reason"] = r.reason;
            d["delta"] = r.delta;
            d["all_pass"] = r.all_pass;
            py::list rows;
            for (const auto& s : r.samples) {
                py::dict e;
                e["s"] = s.s;
                e["r"] = s.r;
                e["t_center"] = s.t_center;
                e["m_value"] = s.m_value;
                e["m_pass"] = s.m_pass;
                e["decay_sup"] = s.decay_sup;
                e["decay_pass"] = s.decay_pass;
                e["range_ok"] = s.range_ok;
                rows.append(e);
            }
            d["samples"] = rows;
            return d;
        },
        py::arg("traj"), py::arg("x"), py::arg("t_star"), py::arg("epsilon1") = 0.05,
        py::arg("c") = 1.0, py::arg("n_samples") = 10,
        "Shrinking-cylinder smallness and decay checks along a certified tail.");

    // ---- configuration ------------------------------------------------------
    m.def("canonical_config", [](const std::string& text) {
        return canonical_config_json(parse_config(text));
    });
    m.def("config_hash",
          [](const std::string& text) { return config_hash(parse_config(text)); });
}
