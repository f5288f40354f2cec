"""Spin operators and the small dense Hermitian linear-algebra kernel.

Operators are plain ``numpy`` complex arrays. Tensor ordering is fixed
globally as ``electron1 (x) electron2 (x) nucleus`` with the nucleus index
running fastest.

Basis labels follow the physics convention used throughout the package:
``|1>`` is the sigma_z = +1 eigenstate (array index 0) and ``|0>`` is the
sigma_z = -1 eigenstate (array index 1).
"""

from typing import NamedTuple

import numpy as np

from .errors import ConfigurationError, ContractError

HERMITIAN_ATOL = 1e-12
EIG_ATOL = 1e-10
TRACE_ATOL = 1e-10
PSD_ATOL = 1e-10

SLOTS = ("electron1", "electron2", "nucleus")

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}

UP = np.array([1.0, 0.0], dtype=complex)  # |1>
DOWN = np.array([0.0, 1.0], dtype=complex)  # |0>


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def ket(label):
    """Single-spin basis ket: ``ket(1)`` is spin up, ``ket(0)`` spin down."""
    if label == 1:
        return UP.copy()
    if label == 0:
        return DOWN.copy()
    raise ValueError(f"basis label must be 0 or 1, got {label!r}")


def kets(labels):
    """Product ket, e.g. ``kets("10")`` = |1>|0>."""
    out = np.ones(1, dtype=complex)
    for ch in labels:
        out = np.kron(out, ket(int(ch)))
    return out


def pauli(axis):
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}") from None


def sigma_minus():
    """Lowering operator |0><1| (spin up to spin down)."""
    return np.outer(DOWN, UP.conj())


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def hermitize(m):
    m = np.asarray(m, dtype=complex)
    return 0.5 * (m + dagger(m))


def hermiticity_defect(m):
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def check_hermitian(m, atol=HERMITIAN_ATOL):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {m.shape}")
    defect = hermiticity_defect(m)
    if defect > atol:
        raise ContractError(f"matrix is not Hermitian (defect {defect:.3e} > {atol:.0e})")
    return m


def check_density(rho, atol=TRACE_ATOL, psd_atol=PSD_ATOL):
    """Validate trace, Hermiticity and positivity; returns the array."""
    rho = check_hermitian(rho, atol=max(HERMITIAN_ATOL, atol))
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise ContractError(f"density matrix trace is {tr.real:.12g}, expected 1")
    lo = np.linalg.eigvalsh(hermitize(rho))[0]
    if lo < -psd_atol:
        raise ContractError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def embed(op, slot, total_dim):
    """Place a single-spin operator in ``slot`` of a 2- or 3-spin register."""
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ConfigurationError(f"embed expects a 2x2 operator, got {op.shape}")
    if total_dim not in (4, 8):
        raise ConfigurationError(f"total_dim must be 4 or 8, got {total_dim}")
    n = 2 if total_dim == 4 else 3
    if slot not in SLOTS:
        raise ConfigurationError(f"unknown slot {slot!r}")
    index = SLOTS.index(slot)
    if index >= n:
        raise ConfigurationError(f"slot {slot!r} requires total_dim=8")
    factors = [np.eye(2, dtype=complex)] * n
    factors[index] = op
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def spin_vector(slot, total_dim):
    """(sigma_x, sigma_y, sigma_z) embedded in ``slot``; shape (3, d, d)."""
    return np.stack([embed(pauli(a), slot, total_dim) for a in "xyz"])


def eig_hermitian(op, atol=HERMITIAN_ATOL):
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    op = check_hermitian(op, atol=atol)
    values, vectors = np.linalg.eigh(hermitize(op))
    return EigenDecomposition(values, vectors)


def singlet_vector():
    """(|10> - |01>)/sqrt(2)."""
    return (kets("10") - kets("01")) / np.sqrt(2.0)


def triplet0_vector():
    return (kets("10") + kets("01")) / np.sqrt(2.0)


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def singlet_state():
    return projector(singlet_vector())


def maximally_mixed(dim=4):
    return np.eye(dim, dtype=complex) / dim


def total_spin_sq():
    """S^2 = (S1 + S2)^2 with spin-1/2 components sigma/2; spectrum {0, 2, 2, 2}."""
    total = 0.5 * (spin_vector("electron1", 4) + spin_vector("electron2", 4))
    return hermitize(sum(c @ c for c in total))


def total_sz_sq():
    """S_z^2 = (S1z + S2z)^2 with spin-1/2 components; spectrum {0, 0, 1, 1}."""
    sz = 0.5 * (embed(pauli("z"), "electron1", 4) + embed(pauli("z"), "electron2", 4))
    return hermitize(sz @ sz)


def partial_trace_nucleus(rho8):
    """Trace out the last (nuclear) qubit of an 8x8 operator, or a stack of them."""
    rho8 = np.asarray(rho8)
    shape = rho8.shape[:-2]
    r = rho8.reshape(*shape, 4, 2, 4, 2)
    return np.einsum("...aibi->...ab", r)


def with_mixed_nucleus(rho4):
    """rho4 (x) I/2, for one 4x4 matrix or a stack of them."""
    rho4 = np.asarray(rho4, dtype=complex)
    out = np.einsum("...ab,ij->...aibj", rho4, np.eye(2) / 2.0)
    return out.reshape(*rho4.shape[:-2], 8, 8)


def vec(x):
    """Column-stack the last two axes."""
    x = np.asarray(x)
    return np.swapaxes(x, -1, -2).reshape(*x.shape[:-2], -1)


def unvec(v, dim=None):
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.shape[-1])))
    return np.swapaxes(v.reshape(*v.shape[:-1], dim, dim), -1, -2)


def expect(op, rho):
    return float(np.real(np.trace(op @ rho)))


def random_hermitian(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hermitize(g)


def random_unitary(dim, rng):
    """Haar-random unitary via QR with phase fix."""
    g = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))
