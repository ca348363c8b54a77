"""End-to-end smoke checks of the python bindings at small resolution."""

import math

import numpy as np
import pytest

import cknlab as ck

N = 16
BOX = 2.0 * math.pi
CENTER = (math.pi, math.pi, math.pi)


def test_generators_shapes_and_ranges():
    u = ck.taylor_green(N, BOX, amplitude=0.5)
    assert u.shape == (3, N, N, N)
    assert u.dtype == np.float64
    assert np.max(np.abs(u)) == pytest.approx(0.5, abs=1e-12)

    v = ck.random_divfree(N, BOX, seed=7, band=4, amplitude=0.3)
    assert v.shape == (3, N, N, N)
    # normalized by peak point speed, not per-component max
    speed = np.sqrt((v**2).sum(axis=0))
    assert speed.max() == pytest.approx(0.3, rel=1e-12)
    # mean-free per component
    assert np.max(np.abs(v.mean(axis=(1, 2, 3)))) < 1e-13

    # same seed reproduces, different seed does not
    assert np.array_equal(v, ck.random_divfree(N, BOX, seed=7, band=4, amplitude=0.3))
    assert not np.array_equal(v, ck.random_divfree(N, BOX, seed=8, band=4, amplitude=0.3))


def test_prepare_initial_and_pressure_gauge():
    rng = np.random.default_rng(3)
    raw = rng.standard_normal((3, N, N, N))
    u = ck.prepare_initial(raw, BOX)
    # prepared fields are accepted by the strict divergence check
    p = ck.solve_pressure(u, BOX, div_tol=1e-10)
    assert p.shape == (N, N, N)
    assert abs(p.mean()) < 1e-13  # zero-mean gauge
    # raw random data is not divergence-free
    with pytest.raises(ck.PreconditionFailure):
        ck.solve_pressure(raw, BOX, div_tol=1e-10)


def test_bad_shape_rejected():
    with pytest.raises(ck.ConfigurationError):
        ck.solve_pressure(np.zeros((3, N, N, N + 1)), BOX)


def test_run_energy_decay_and_balance():
    u0 = ck.taylor_green(N, BOX, amplitude=1.0)
    traj = ck.run(u0, BOX, dt=1e-3, t_end=0.05, snapshot_stride=10)
    assert traj.complete
    assert traj.n == N and traj.box == pytest.approx(BOX)
    assert len(traj) == 6
    times = traj.times
    assert times[0] == 0.0 and times[-1] == pytest.approx(0.05)

    energies = [traj.energy(i) for i in range(len(traj))]
    assert all(b < a for a, b in zip(energies, energies[1:]))  # dissipation only

    rep = ck.energy_balance(traj, times[0], times[-1])
    assert abs(rep["residual"]) < 1e-6 * rep["scale"]

    v = traj.velocity(2)
    assert v.shape == (3, N, N, N)
    assert np.all(np.isfinite(v))
    assert traj.pressure(2).shape == (N, N, N)


def test_stokes_decay_exact_rate():
    # Cellular initial data lives on wavenumbers with |k|^2 = 3; with the
    # nonlinear term disabled the integrator applies the viscous factor
    # exactly, so energy decays as exp(-6 t) to round-off.
    u0 = ck.taylor_green(N, BOX, amplitude=1.0)
    traj = ck.run(u0, BOX, dt=1e-3, t_end=0.02, snapshot_stride=20,
                  disable_nonlinearity=True)
    e0, e1 = traj.energy(0), traj.energy(1)
    assert e1 / e0 == pytest.approx(math.exp(-6.0 * 0.02), rel=1e-12)


def test_weighted_energy_monotone_in_mu():
    u = ck.random_divfree(N, BOX, seed=11, band=4, amplitude=0.4)
    h = BOX / N
    vals = [ck.weighted_energy(u, BOX, CENTER, mu=mu) for mu in (2 * h, h, 0.0)]
    assert vals[0] <= vals[1] <= vals[2]  # weight grows as mu shrinks
    assert ck.weighted_dissipation(u, BOX, CENTER, mu=0.0) > 0.0


def test_psi_zero_on_identical_fields():
    u = ck.taylor_green(N, BOX, amplitude=0.7)
    assert ck.psi_point(u, u, BOX, CENTER) == 0.0
    v = ck.random_divfree(N, BOX, seed=5, band=4, amplitude=0.7)
    assert ck.psi_point(u, v, BOX, CENTER) > 0.0


def test_mollify_identity_below_spacing():
    u = ck.random_divfree(N, BOX, seed=2, band=4, amplitude=0.5)
    h = BOX / N
    assert np.array_equal(ck.mollify(u, BOX, 0.5 * h), u)
    smoothed = ck.mollify(u, BOX, 3.0 * h)
    assert np.sum(smoothed**2) < np.sum(u**2)  # genuine smoothing loses energy


def test_smallness_and_interior_bound():
    u0 = ck.random_divfree(N, BOX, seed=90, band=4, amplitude=0.2)
    traj = ck.run(u0, BOX, dt=1e-3, t_end=0.7, snapshot_stride=50)
    # past window (t - r^2, t] must stay inside the run: 0.65 - 0.64 > 0
    m = ck.smallness(traj, 0.65, CENTER, 0.8)
    assert m["total"] == pytest.approx(m["velocity"] + m["mixed"] + m["pressure"])
    assert m["total"] > 0.0

    verdict = ck.interior_bound(traj, 0.65, CENTER, 0.8, epsilon1=10.0, c0=1.0)
    assert verdict["m_pass"] is True
    assert verdict["sup_holds"] == (verdict["measured_sup"] <= verdict["sup_bound"])

    g = ck.gradient_limsup(traj, 0.6, CENTER, [0.8, 0.82], epsilon3=10.0)
    assert g["limsup_caveat"] is True  # fewer than three admissible radii
    assert g["value"] == pytest.approx(max(v for _, v in g["by_radius"]))


def test_perturbation_budget_identical_runs_certify():
    u0 = ck.taylor_green(N, BOX, amplitude=0.05)
    traj = ck.run(u0, BOX, dt=2e-3, t_end=0.05, snapshot_stride=5)
    b = ck.perturbation_budget(traj, traj, CENTER, mu=0.0, c=1.0)
    assert b["threshold_initial"] == pytest.approx(1.0 / 16.0)
    assert b["threshold_evolved"] == pytest.approx(1.0 / 8.0)
    assert max(b["energy_w"]) == 0.0  # identical runs: zero difference field
    assert b["certified"] and b["covers_run"]
    assert b["t_star"] == pytest.approx(traj.times[-1])


def test_cylinder_schedule_quiescent_tail():
    # snapshot every step: the smallest scheduled decay window spans ~s/4
    # ~ 0.027 and needs >= 4 snapshot samples for the quadrature
    u0 = ck.taylor_green(N, BOX, amplitude=1e-4)
    traj = ck.run(u0, BOX, dt=5e-3, t_end=1.4, snapshot_stride=1)
    sched = ck.cylinder_schedule(traj, CENTER, traj.times[-1], epsilon1=0.05, c=1.0)
    assert sched["available"]
    assert len(sched["samples"]) == 10
    assert sched["all_pass"]
    for row in sched["samples"]:
        assert row["r"] == pytest.approx(math.sqrt(row["s"]))
        assert row["t_center"] == pytest.approx(7.0 / 6.0 * row["s"])

    none = ck.cylinder_schedule(traj, CENTER, 0.0)
    assert not none["available"]
    assert "t_star" in none["reason"]


def test_config_hash_round_trip():
    canon = ck.canonical_config("{}")
    assert ck.canonical_config(canon) == canon  # fixed point
    assert ck.config_hash("{}") == ck.config_hash(canon)
    assert ck.config_hash('{"seed": 2}') != ck.config_hash("{}")
    with pytest.raises(ck.ConfigurationError):
        ck.canonical_config('{"grid": {"m": 3}}')  # unknown key
