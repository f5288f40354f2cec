import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import linalg

from radical_compass import dynamics, model, spinlin
from radical_compass.errors import IntegrationError, UnsupportedRegimeError

import oracles

B0 = model.B0_GEOMAGNETIC
G = model.GAMMA_E


def bare(noise=None):
    """Two free electrons, no field, no hyperfine coupling."""
    return model.RpParams(model.StaticField(0.0, 0.0), model.HyperfineTensor(0, 0, 0), k=1.0,
                          noise=noise)


def test_spectral_matches_expm(reference, rng):
    h = model.hamiltonian(reference)
    rho0 = reference.initial_state()
    for t in rng.uniform(0, 5e-6, size=20):
        got = dynamics.evolve_spectral(h, rho0, t)
        assert np.max(np.abs(got - oracles.expm_evolve(h, rho0, t))) <= 1e-9


def test_stepped_matches_spectral_when_static(reference):
    rho0 = reference.initial_state()
    t = 3.7e-6
    got = dynamics.evolve_stepped(reference, rho0, t)
    ref = dynamics.evolve_spectral(model.hamiltonian(reference), rho0, t)
    assert np.max(np.abs(got - ref)) <= 1e-8


def test_zero_rf_amplitude_is_no_rf(reference):
    silent = reference.with_(osc_field=model.perpendicular_rf(B0, 0.0))
    assert np.array_equal(model.hamiltonian(silent, 1e-7), model.hamiltonian(reference))
    rho0 = reference.initial_state()
    a = dynamics.evolve_stepped(silent, rho0, 1e-6)
    b = dynamics.evolve_spectral(model.hamiltonian(reference), rho0, 1e-6)
    assert np.max(np.abs(a - b)) <= 1e-8


def test_stepped_rejects_noise():
    p = model.reference_params(noise=model.NoiseSpec("dephasing", 1e3))
    with pytest.raises(UnsupportedRegimeError):
        dynamics.evolve_stepped(p, p.initial_state(), 1e-6)


def test_stepped_unitaries_match_ode_oracle():
    p = model.reference_params(theta=0.9, rf=model.perpendicular_rf(B0, 5e-6))
    period = 2 * np.pi / p.osc_field.omega
    t = 3 * period
    _, us = oracles.propagator_ode(lambda s: model.hamiltonian(p, s), t)
    u = dynamics.stepped_unitaries(p, t, 600)
    assert np.max(np.abs(u[-1] - us[-1])) <= 1e-8


def test_magnus_fourth_order():
    p = model.reference_params(theta=0.9, rf=model.perpendicular_rf(B0, 20e-6))
    period = 2 * np.pi / p.osc_field.omega
    t = 2 * period
    _, us = oracles.propagator_ode(lambda s: model.hamiltonian(p, s), t)
    errs = [np.max(np.abs(dynamics.stepped_unitaries(p, t, n)[-1] - us[-1])) for n in (40, 80)]
    assert errs[0] / errs[1] >= 8


def test_stepped_reports_non_convergence():
    p = model.reference_params(rf="perpendicular")
    spec = dynamics.PropagatorSpec(dt=2e-8, rtol=1e-15, max_halvings=1)
    with pytest.raises(IntegrationError) as exc:
        dynamics.evolve_stepped(p, p.initial_state(), 1e-6, spec)
    assert exc.value.residual > 1e-15


def test_rwa_propagator_basics():
    u0 = dynamics.rwa_propagator(3.0, 0.1, 0.0)
    assert np.allclose(u0, np.eye(2))
    for t in (0.3, 1.1, 7.0):
        u = dynamics.rwa_propagator(3.0, 0.1, t)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2))) <= 1e-14
    flip = dynamics.rwa_propagator(3.0, 0.1, np.pi / 0.1)
    assert abs(abs(flip[1, 0]) - 1) <= 1e-14
    with pytest.warns(RuntimeWarning):
        dynamics.rwa_propagator(1.0, 0.5, 1.0)


@pytest.mark.parametrize("pulse", [np.pi / 2, np.pi])
def test_rwa_matches_stepped_single_electron(pulse):
    theta = 0.7
    f = model.perpendicular_rf(B0, 2e-6, electrons=("electron1",))
    p = model.reference_params(theta=theta, rf=f)
    Omega = G * f.magnitude_T
    t = pulse / Omega
    phi1, phi2 = model.electron1_eigenstates(theta)
    rho0 = np.kron(np.outer(phi1, phi1.conj()), np.eye(4) / 4)
    spec = dynamics.PropagatorSpec(rtol=1e-5)
    rho = dynamics.evolve_stepped(p, rho0, t, spec)
    e1 = np.einsum("aibi->ab", rho.reshape(2, 4, 2, 4))
    basis = np.stack([phi1, phi2], axis=1)
    got = basis.conj().T @ e1 @ basis
    u = dynamics.rwa_propagator(G * B0, Omega, t)
    want = u @ np.diag([1.0, 0.0]) @ u.conj().T
    assert np.max(np.abs(got - want)) <= 0.02


def test_liouvillian_structure(reference, rng):
    p = reference.with_(noise=model.NoiseSpec("depolarizing", 1e4))
    L = dynamics.build_liouvillian(p)
    assert np.max(np.abs(spinlin.vec(np.eye(8)).conj() @ L)) <= 1e-6
    h = model.hamiltonian(reference)
    r = spinlin.random_hermitian(8, rng)
    got = dynamics.liouvillian(h) @ spinlin.vec(r)
    assert np.allclose(got, spinlin.vec(-1j * (h @ r - r @ h)))
    with pytest.raises(UnsupportedRegimeError):
        dynamics.build_liouvillian(model.reference_params(rf="perpendicular"))


def _evolve_lv(p, rho0, t):
    return spinlin.unvec(linalg.expm(dynamics.build_liouvillian(p) * t) @ spinlin.vec(rho0))


def test_dephasing_rate():
    g = 2.0
    p = bare(model.NoiseSpec("dephasing", g))
    plus = (spinlin.UP + spinlin.DOWN) / np.sqrt(2)
    rho0 = np.kron(np.kron(np.outer(plus, plus), spinlin.projector(spinlin.UP)), np.eye(2) / 2)
    for t in (0.1, 0.5, 1.3):
        rho = _evolve_lv(p, rho0, t)
        e1 = np.einsum("aibi->ab", rho.reshape(2, 4, 2, 4))
        assert e1[0, 1].real == pytest.approx(0.5 * np.exp(-2 * g * t), rel=1e-10)


def test_amplitude_damping_rate():
    g = 3.0
    p = bare(model.NoiseSpec("amplitude_damping", g))
    up = spinlin.projector(spinlin.UP)
    rho0 = np.kron(np.kron(up, up), np.eye(2) / 2)
    for t in (0.1, 0.4):
        rho = _evolve_lv(p, rho0, t)
        e1 = np.einsum("aibi->ab", rho.reshape(2, 4, 2, 4))
        assert e1[0, 0].real == pytest.approx(np.exp(-g * t), rel=1e-10)


def test_depolarizing_fixed_point(reference):
    p = reference.with_(noise=model.NoiseSpec("depolarizing", 1e6))
    rho = _evolve_lv(p, p.initial_state(), 2e-5)
    assert np.max(np.abs(spinlin.partial_trace_nucleus(rho) - np.eye(4) / 4)) <= 1e-10


def test_lindblad_evolve_matches_ode():
    p = model.reference_params(theta=0.5, noise=model.NoiseSpec("amplitude_damping", 2e5))
    rho0 = p.initial_state()
    t = 1e-6
    ops = dynamics.lindblad_operators(p.noise)
    ref = oracles.lindblad_ode(model.hamiltonian(p), ops, rho0, t)
    dt = dynamics.default_dt(p)
    errs = [np.max(np.abs(dynamics.lindblad_evolve(p, rho0, t, dt=d) - ref)) for d in (dt, dt / 4)]
    assert errs[0] <= 1e-5
    assert errs[1] <= 1e-7
    assert errs[0] / errs[1] >= 100  # fourth order


def test_lindblad_step_preserves_trace(rng):
    p = model.reference_params(rf="perpendicular", noise=model.NoiseSpec("depolarizing", 1e4))
    rho = p.initial_state()
    dt = dynamics.default_dt(p)
    for j in range(200):
        nxt = dynamics.lindblad_step(p, rho, j * dt, dt)
        assert abs(np.trace(nxt) - np.trace(rho)) <= 1e-12
        rho = nxt


def test_superoperators_match_state_evolution():
    p = model.reference_params(rf="perpendicular", noise=model.NoiseSpec("dephasing", 1e4))
    t, n = 2e-7, 200
    props = list(dynamics.iter_superoperators(p, t, n))
    rho = dynamics.lindblad_evolve(p, p.initial_state(), t, dt=t / n)
    assert np.max(np.abs(spinlin.unvec(props[-1] @ spinlin.vec(p.initial_state())) - rho)) <= 1e-12


@given(st.floats(0, np.pi / 2), st.floats(0, 2e-6))
def test_nuclear_sectors_evolve_independently(theta, t):
    p = model.reference_params(theta=theta)
    full = dynamics.evolve_spectral(model.hamiltonian(p), p.initial_state(), t)
    hp, hm = model.effective_hamiltonians(p)
    s = spinlin.singlet_state()
    split = 0.5 * (oracles.expm_evolve(hp, s, t) + oracles.expm_evolve(hm, s, t))
    assert np.max(np.abs(spinlin.partial_trace_nucleus(full) - split)) <= 1e-9
