import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from radical_compass import spinlin
from radical_compass.errors import ConfigurationError, ContractError

import oracles

SLOTS = ("electron1", "electron2", "nucleus")


def test_pauli_definitions():
    assert np.allclose(spinlin.pauli("z"), np.diag([1, -1]))
    x, y, z = (spinlin.pauli(a) for a in "xyz")
    assert np.allclose(x @ x, np.eye(2))
    assert np.allclose(x @ y, 1j * z)
    for m in (x, y, z):
        assert abs(np.trace(m)) == 0
        assert spinlin.hermiticity_defect(m) == 0
    with pytest.raises(ValueError):
        spinlin.pauli("w")


def test_basis_labels():
    # |1> is spin up: sigma_z |1> = +|1>
    assert np.allclose(spinlin.pauli("z") @ spinlin.ket(1), spinlin.ket(1))
    assert np.allclose(spinlin.pauli("z") @ spinlin.ket(0), -spinlin.ket(0))
    assert np.allclose(spinlin.sigma_minus() @ spinlin.ket(1), spinlin.ket(0))


def test_embed_examples():
    z = spinlin.pauli("z")
    assert np.allclose(spinlin.embed(z, "electron1", 4), np.kron(z, np.eye(2)))
    assert np.allclose(spinlin.embed(np.eye(2), "electron2", 8), np.eye(8))
    assert abs(np.trace(spinlin.embed(spinlin.pauli("x"), "nucleus", 8))) == 0
    # ordering: electron1 (x) electron2 (x) nucleus, nucleus fastest
    assert np.allclose(spinlin.embed(z, "nucleus", 8), oracles.kron(oracles.I2, oracles.I2, z))


def test_embed_rejects_bad_slots():
    with pytest.raises(ConfigurationError):
        spinlin.embed(spinlin.pauli("x"), "nucleus", 4)
    with pytest.raises(ConfigurationError):
        spinlin.embed(spinlin.pauli("x"), "proton", 8)
    with pytest.raises(ConfigurationError):
        spinlin.embed(np.eye(4), "electron1", 8)


@given(st.integers(0, 2**32 - 1), st.sampled_from(SLOTS))
def test_embed_multiplicative_and_trace(seed, slot):
    rng = np.random.default_rng(seed)
    a, b = spinlin.random_hermitian(2, rng), spinlin.random_hermitian(2, rng)
    ea, eb = spinlin.embed(a, slot, 8), spinlin.embed(b, slot, 8)
    assert np.max(np.abs(ea @ eb - spinlin.embed(a @ b, slot, 8))) <= 1e-12
    assert abs(np.trace(ea) - 4 * np.trace(a)) <= 1e-12


@given(st.integers(0, 2**32 - 1), st.sampled_from(SLOTS), st.sampled_from(SLOTS))
def test_different_slots_commute(seed, s1, s2):
    if s1 == s2:
        return
    rng = np.random.default_rng(seed)
    a = spinlin.embed(spinlin.random_hermitian(2, rng), s1, 8)
    b = spinlin.embed(spinlin.random_hermitian(2, rng), s2, 8)
    assert np.max(np.abs(a @ b - b @ a)) <= 1e-12


def test_eig_examples():
    d = spinlin.eig_hermitian(np.diag([3.0, 1.0]))
    assert np.allclose(d.values, [1, 3])
    d = spinlin.eig_hermitian(spinlin.pauli("x"))
    assert np.allclose(d.values, [-1, 1])
    minus = (spinlin.ket(1) - spinlin.ket(0)) / np.sqrt(2)
    assert abs(abs(np.vdot(minus, d.vectors[:, 0])) - 1) < 1e-12


def test_eig_rejects_non_hermitian():
    with pytest.raises(ContractError):
        spinlin.eig_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4, 8, 16]))
def test_eig_reconstruction(seed, dim):
    m = spinlin.random_hermitian(dim, np.random.default_rng(seed))
    values, v = spinlin.eig_hermitian(m)
    assert np.all(np.diff(values) >= 0)
    assert np.max(np.abs(m - (v * values) @ v.conj().T)) <= 1e-10
    assert np.max(np.abs(v.conj().T @ v - np.eye(dim))) <= 1e-10


def test_singlet():
    s = spinlin.singlet_state()
    assert abs(np.trace(s) - 1) < 1e-15
    assert abs(np.vdot(spinlin.singlet_vector(), spinlin.singlet_vector()) - 1) < 1e-15
    assert abs(spinlin.expect(spinlin.total_spin_sq(), s)) < 1e-15
    assert np.allclose(s, oracles.singlet())


def test_spin_observables():
    assert np.allclose(np.linalg.eigvalsh(spinlin.total_spin_sq()), [0, 2, 2, 2])
    assert np.allclose(np.linalg.eigvalsh(spinlin.total_sz_sq()), [0, 0, 1, 1])
    mixed = spinlin.maximally_mixed(4)
    assert abs(spinlin.expect(spinlin.total_spin_sq(), mixed) - 1.5) < 1e-15
    for op in (spinlin.total_spin_sq(), spinlin.total_sz_sq()):
        assert spinlin.hermiticity_defect(op) <= 1e-12


def test_density_checks():
    spinlin.check_density(spinlin.singlet_state())
    with pytest.raises(ContractError):
        spinlin.check_density(2 * spinlin.singlet_state())
    with pytest.raises(ContractError):
        spinlin.check_density(np.diag([1.5, -0.5, 0, 0]).astype(complex))


@given(st.integers(0, 2**32 - 1))
def test_partial_trace_and_vec(seed):
    rng = np.random.default_rng(seed)
    r8 = spinlin.random_hermitian(8, rng)
    assert np.allclose(spinlin.partial_trace_nucleus(r8), oracles.ptrace_nucleus(r8))
    r4 = spinlin.random_hermitian(4, rng)
    assert np.allclose(spinlin.with_mixed_nucleus(r4), np.kron(r4, np.eye(2) / 2))
    assert np.allclose(spinlin.partial_trace_nucleus(spinlin.with_mixed_nucleus(r4)), r4)
    # column stacking: vec(A X B) = (B^T kron A) vec(X)
    a, b = spinlin.random_hermitian(4, rng), spinlin.random_unitary(4, rng)
    assert np.allclose(spinlin.vec(a @ r4 @ b), np.kron(b.T, a) @ spinlin.vec(r4))
    assert np.allclose(spinlin.unvec(spinlin.vec(r4)), r4)


def test_random_unitary(rng):
    u = spinlin.random_unitary(4, rng)
    assert np.max(np.abs(u.conj().T @ u - np.eye(4))) < 1e-12
