import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import linalg

from radical_compass import metrology as mt
from radical_compass import model, spinlin, steady
from radical_compass.errors import DomainError, UnstableDerivativeError

import baselines
import oracles

G = model.GAMMA_E
B0 = model.B0_GEOMAGNETIC
seeds = st.integers(0, 2**32 - 1)
inner = st.floats(0.2, 1.4)


def pure_family(theta):
    psi = np.cos(theta / 2) * spinlin.kets("00") + np.sin(theta / 2) * spinlin.kets("11")
    return spinlin.projector(psi)


def rotated_family(seed):
    """theta -> U(theta) D U(theta)^+ with full-rank D."""
    rng = np.random.default_rng(seed)
    g = spinlin.random_hermitian(4, rng)
    d = np.diag(rng.dirichlet(np.ones(4)) * 0.9 + 0.025)

    def family(theta):
        u = linalg.expm(-1j * theta * g)
        return u @ d @ u.conj().T

    return family, g, d


@pytest.mark.parametrize("theta", [0.3, 0.8, 1.3])
def test_pure_state_qfi_is_one(theta):
    assert mt.qfi_spectral(pure_family, theta) == pytest.approx(1.0, abs=1e-8)


def test_constant_family_has_zero_qfi():
    s = spinlin.singlet_state()
    assert mt.qfi_spectral(lambda t: s, 0.4) == 0.0


@given(seeds, inner)
def test_qfi_matches_sylvester_sld(seed, theta):
    family, g, _ = rotated_family(seed)
    rho = family(theta)
    drho = -1j * (g @ rho - rho @ g)
    assert mt.qfi_spectral(family, theta) == pytest.approx(oracles.sld_qfi(rho, drho), rel=1e-6)
    ell = mt.sld(rho, drho)
    assert np.max(np.abs(rho @ ell + ell @ rho - 2 * drho)) <= 1e-10
    assert mt.qfi_from_derivative(rho, drho) == pytest.approx(
        np.real(np.trace(rho @ ell @ ell)), rel=1e-10)


@given(seeds, inner)
def test_qfi_is_basis_independent(seed, theta):
    family, _, _ = rotated_family(seed)
    v = spinlin.random_unitary(4, np.random.default_rng(seed + 1))
    turned = lambda t: v @ family(t) @ v.conj().T
    assert mt.qfi_spectral(turned, theta) == pytest.approx(mt.qfi_spectral(family, theta), rel=1e-6)


def test_cfi_example():
    obs = spinlin.embed(spinlin.pauli("z"), "electron1", 4)
    assert mt.cfi_projective(pure_family, obs, 0.7) == pytest.approx(1.0, abs=1e-8)
    # S_z^2 lumps |00> and |11> into one outcome
    assert mt.cfi_projective(pure_family, spinlin.total_sz_sq(), 0.7) == pytest.approx(0, abs=1e-12)


def test_spectral_projectors_merge_degeneracies():
    projs = mt.spectral_projectors(spinlin.total_spin_sq())
    assert [round(v, 12) for v, _ in projs] == [0, 2]
    assert np.allclose(sum(p for _, p in projs), np.eye(4))


@pytest.mark.parametrize("theta", [0.2, np.pi / 4, 1.2])
def test_binary_cfi_equals_error_propagation(reference, theta):
    fam = steady.SteadyMapFamily(reference).family()
    stn = mt.Stencil(fam, theta)
    for obs in (spinlin.total_spin_sq(), spinlin.total_sz_sq()):
        f = mt.cfi_projective(None, obs, theta, stencil=stn)
        e = mt.error_propagation(None, obs, theta, stencil=stn)
        assert not e.flat_signal
        assert e.inv_var == pytest.approx(f, rel=1e-9)


def test_flat_signal_is_flagged():
    e = mt.error_propagation(lambda t: spinlin.singlet_state(), spinlin.total_spin_sq(), 0.5)
    assert e.flat_signal and e.inv_var == 0


def test_unstable_derivative_is_rejected(rng):
    noisy = lambda t: pure_family(t) + 1e-6 * rng.normal() * np.eye(4)
    with pytest.raises(UnstableDerivativeError):
        mt.qfi_spectral(noisy, 0.5)


def test_exact_qfi_baselines(reference):
    fam = steady.SteadyMapFamily(reference).family()
    assert mt.qfi_spectral(fam, np.pi / 4) == pytest.approx(baselines.QFI_UNDRIVEN, rel=1e-7)
    driven = steady.SteadyMapFamily(model.reference_params(rf="perpendicular")).family()
    assert mt.qfi_spectral(driven, np.pi / 4) == pytest.approx(baselines.QFI_DRIVEN, rel=1e-5)


def test_singlet_sector_coefficients():
    theta = 0.9
    c = mt.sector_coefficients(spinlin.singlet_state(), theta)
    assert c.off(1).real == pytest.approx(-np.sin(theta) / 4, abs=1e-15)
    assert c.off(0).real == pytest.approx(np.sin(theta) / 4, abs=1e-15)
    assert c.diag(0, 1) == pytest.approx(np.cos(theta / 2) ** 2 / 2)
    assert c.diag(1, 1) == pytest.approx(np.sin(theta / 2) ** 2 / 2)
    assert c.total == pytest.approx(1.0)


def test_static_closed_form_singlet():
    for theta in np.linspace(0.01, np.pi / 2, 46):
        got = mt.qfi_strong_hf_static(spinlin.singlet_state(), theta)
        assert abs(got - (1 + np.cos(theta) ** 2)) <= 1e-12


def _random_coefficients(rng):
    c = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    c[:, [0, 1], [0, 1]] = rng.uniform(0.05, 1.0, size=(2, 2))
    return mt.SectorCoefficients(c)


def test_driven_form_reduces_to_static(rng):
    for _ in range(50):
        c = _random_coefficients(rng)
        a = mt.qfi_strong_hf_static(c)
        assert mt.qfi_strong_hf_driven(c, None, 1e4, 0.0) == pytest.approx(a, rel=1e-12)


def test_driven_form_limits():
    s = spinlin.singlet_state()
    k = 1e4
    assert mt.qfi_strong_hf_driven(s, 0.7, k, 100 * k) < 1e-2
    omega = G * model.B_RF_REFERENCE
    for theta in np.linspace(0.05, np.pi / 2, 12):
        assert mt.qfi_strong_hf_driven(s, theta, k, omega) < mt.qfi_strong_hf_static(s, theta)


def test_closed_form_domain_errors():
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0], c[0, 0, 1], c[0, 1, 0] = 1.0, 0.3, 0.3
    with pytest.raises(DomainError):
        mt.qfi_strong_hf_static(mt.SectorCoefficients(c))
    # strong RF with a large imaginary coherence pushes a population negative
    c = np.zeros((2, 2, 2), dtype=complex)
    c[0, 0, 0] = c[0, 1, 1] = 0.01
    c[0, 0, 1] = 5j
    with pytest.raises(DomainError):
        mt.qfi_strong_hf_driven(mt.SectorCoefficients(c), None, 1.0, 1.0)


@pytest.mark.parametrize("theta", [0.1, 0.7, 1.5])
def test_cramer_rao_chain(reference, theta):
    fam = steady.SteadyMapFamily(reference).family()
    r = mt.metrology_report(fam, theta, method="unitary_resolvent")
    assert r.qfi >= r.cfi_s2 - 1e-9 and r.qfi >= r.cfi_sz2 - 1e-9
    assert r.method_tags["steady_state"] == "unitary_resolvent"
    with pytest.raises(DomainError):
        mt.MetrologyReport(theta, 0.1, 0.5, 0.0, 0.0, 0.0, 0.3)


def test_yield_and_contrast(reference):
    assert mt.singlet_yield(spinlin.singlet_state()) == pytest.approx(1.0)
    s = steady.steady_state(reference)
    assert mt.singlet_yield(s) == mt.singlet_yield(s.rho_bar)
    assert mt.signal_contrast([0.2, 0.5, 0.3]) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        mt.signal_contrast([])


def test_sld_has_zero_mean(reference):
    stn = mt.Stencil(steady.SteadyMapFamily(reference).family(), 0.6)
    ell = mt.sld(stn.rho, stn.derivative())
    assert abs(np.trace(stn.rho @ ell)) <= 1e-9
    assert abs(np.trace(stn.derivative())) <= 1e-15


def test_identity_holds_on_full_grid(reference):
    fam = steady.SteadyMapFamily(reference).family()
    for theta in np.linspace(0.01, np.pi / 2, 46):
        stn = mt.Stencil(fam, theta)
        for obs in (spinlin.total_spin_sq(), spinlin.total_sz_sq()):
            e = mt.error_propagation(None, obs, theta, stencil=stn)
            f = mt.cfi_projective(None, obs, theta, stencil=stn)
            if not e.flat_signal:
                assert abs(e.inv_var - f) <= 1e-9 * f
