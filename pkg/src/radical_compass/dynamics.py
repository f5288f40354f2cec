"""Propagation engines: spectral, time-ordered stepping, RWA and Lindblad.

Superoperators use column-stacking vectorisation, ``vec(A X B) =
(B^T kron A) vec(X)``.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from . import spinlin
from .errors import IntegrationError, UnsupportedRegimeError
from .model import hamiltonian, hamiltonian_frequency_bound, rf_hamiltonian, static_hamiltonian

SAMPLES_PER_PERIOD = 50
PSD_FAIL = -1e-8


@dataclass(frozen=True)
class PropagatorSpec:
    method: str = "stepped"
    dt: float = None
    rtol: float = 1e-8
    max_halvings: int = 4

    def __post_init__(self):
        if self.method not in ("spectral", "stepped", "rwa"):
            raise ValueError(f"unknown propagation method {self.method!r}")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be > 0")


def default_dt(p):
    """2 pi / (50 omega_max); the decay rate k also limits the step."""
    w = max(hamiltonian_frequency_bound(p), p.k)
    return 2.0 * np.pi / (SAMPLES_PER_PERIOD * w)


def _n_steps(t, dt):
    # tolerate t/dt landing a rounding error above an integer
    return max(1, int(np.ceil(t / dt * (1 - 1e-12))))


vec = spinlin.vec
unvec = spinlin.unvec


# ---------------------------------------------------------------- unitary


def evolve_spectral(h, rho0, t):
    """e^{-iHt} rho0 e^{iHt} through the eigendecomposition of H."""
    values, vectors = spinlin.eig_hermitian(h)
    u = (vectors * np.exp(-1j * values * t)) @ vectors.conj().T
    return spinlin.hermitize(u @ rho0 @ u.conj().T)


def _magnus4_steps(h0, v, omega, t0, dt, n):
    """Fourth-order Magnus one-step propagators for H(t) = h0 + cos(omega t) v.

    Two-point Gauss nodes plus the commutator correction. Returns an
    (n, d, d) array; step j covers [t0 + j dt, t0 + (j+1) dt].
    """
    starts = t0 + dt * np.arange(n)
    c = np.sqrt(3.0) / 6.0
    c1 = np.cos(omega * (starts + (0.5 - c) * dt))
    c2 = np.cos(omega * (starts + (0.5 + c) * dt))
    # H_i = h0 + c_i v, so [H2, H1] = (c2 - c1) [v, h0]
    comm = v @ h0 - h0 @ v
    gen = (
        0.5 * dt * (2.0 * h0[None] + (c1 + c2)[:, None, None] * v[None])
        - 1j * (np.sqrt(3.0) / 12.0) * dt**2 * (c2 - c1)[:, None, None] * comm[None]
    )
    gen = 0.5 * (gen + np.conj(np.swapaxes(gen, -1, -2)))
    w, q = np.linalg.eigh(gen)
    return (q * np.exp(-1j * w)[:, None, :]) @ np.conj(np.swapaxes(q, -1, -2))


def stepped_unitaries(p, t_end, n):
    """U(t_j) on the uniform grid t_j = j t_end / n, shape (n + 1, 8, 8)."""
    h0 = static_hamiltonian(p)
    v = rf_hamiltonian(p)
    omega = p.osc_field.omega if p.osc_field is not None else 0.0
    dt = t_end / n
    if not p.driven:
        step = evolve_step_static(h0, dt)
        steps = None
    else:
        steps = _magnus4_steps(h0, v, omega, 0.0, dt, n)
    out = np.empty((n + 1, 8, 8), dtype=complex)
    out[0] = np.eye(8)
    for j in range(n):
        out[j + 1] = (step if steps is None else steps[j]) @ out[j]
    return out


def evolve_step_static(h, dt):
    values, vectors = spinlin.eig_hermitian(h)
    return (vectors * np.exp(-1j * values * dt)) @ vectors.conj().T


def _stepped_final(p, rho0, t, n):
    if t == 0:
        return np.array(rho0, dtype=complex)
    h0 = static_hamiltonian(p)
    v = rf_hamiltonian(p)
    omega = p.osc_field.omega if p.osc_field is not None else 0.0
    dt = t / n
    u = np.eye(8, dtype=complex)
    chunk = 4096
    for start in range(0, n, chunk):
        m = min(chunk, n - start)
        steps = _magnus4_steps(h0, v, omega, start * dt, dt, m)
        for s in steps:
            u = s @ u
    return spinlin.hermitize(u @ rho0 @ u.conj().T)


def evolve_stepped(p, rho0, t, spec=None):
    """Time-ordered evolution under H(t) with piecewise Magnus-4 steps.

    The step is halved until successive results differ by less than
    ``spec.rtol`` (max-norm); returns the finer result.
    """
    spec = spec or PropagatorSpec()
    if spec.method != "stepped":
        raise ValueError("evolve_stepped requires method='stepped'")
    if p.noisy:
        raise UnsupportedRegimeError("evolve_stepped is noise-free; use lindblad_evolve")
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    dt = spec.dt or default_dt(p)
    n = _n_steps(t, dt)
    prev = _stepped_final(p, rho0, t, n)
    residual = np.inf
    for _ in range(spec.max_halvings):
        n *= 2
        cur = _stepped_final(p, rho0, t, n)
        residual = float(np.max(np.abs(cur - prev)))
        if residual < spec.rtol:
            return cur
        prev = cur
    raise IntegrationError(
        f"stepped propagation did not converge after {spec.max_halvings} halvings "
        f"(residual {residual:.3e} >= rtol {spec.rtol:.1e})",
        residual=residual,
    )


def rwa_propagator(omega0, Omega, t):
    """Rotating-wave propagator of the resonant electron in the |phi_1>, |phi_2> basis."""
    if omega0 > 0 and Omega > 0.1 * omega0:
        warnings.warn("RWA used with Omega > 0.1 omega0", RuntimeWarning, stacklevel=2)
    c, s = np.cos(Omega * t / 2), np.sin(Omega * t / 2)
    em, ep = np.exp(-1j * omega0 * t), np.exp(1j * omega0 * t)
    return np.array([[c * em, 1j * s * em], [1j * s * ep, c * ep]])


# ---------------------------------------------------------------- Lindblad


def lindblad_operators(noise):
    """(operator, rate) pairs acting on each electron individually."""
    if noise is None or noise.gamma_rate == 0:
        return []
    singles = {
        "amplitude_damping": [spinlin.sigma_minus()],
        "dephasing": [spinlin.pauli("z")],
        "depolarizing": [spinlin.pauli(a) for a in "xyz"],
    }[noise.kind]
    return [
        (spinlin.embed(op, slot, 8), noise.gamma_rate)
        for slot in ("electron1", "electron2")
        for op in singles
    ]


def commutator_superop(h):
    d = h.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def dissipator_superop(ops):
    d = ops[0][0].shape[0] if ops else 8
    eye = np.eye(d)
    out = np.zeros((d * d, d * d), dtype=complex)
    for op, rate in ops:
        ld = op.conj().T @ op
        out += rate * (np.kron(op.conj(), op) - 0.5 * np.kron(eye, ld) - 0.5 * np.kron(ld.T, eye))
    return out


def liouvillian(h, ops=()):
    return commutator_superop(np.asarray(h, dtype=complex)) + dissipator_superop(list(ops))


def build_liouvillian(p):
    """64x64 generator of the master equation for time-independent fields."""
    if p.driven:
        raise UnsupportedRegimeError("time-dependent field present; use lindblad_step")
    return liouvillian(hamiltonian(p), lindblad_operators(p.noise))


def lindblad_rhs(h, ops, rho):
    out = -1j * (h @ rho - rho @ h)
    for op, rate in ops:
        ld = op.conj().T @ op
        out += rate * (op @ rho @ op.conj().T - 0.5 * (ld @ rho + rho @ ld))
    return out


def lindblad_step(p, rho, t, dt, check=True):
    """Classical RK4 step of the master equation with H(t)."""
    ops = lindblad_operators(p.noise)
    h_a = hamiltonian(p, t)
    h_b = hamiltonian(p, t + dt / 2)
    h_c = hamiltonian(p, t + dt)
    k1 = lindblad_rhs(h_a, ops, rho)
    k2 = lindblad_rhs(h_b, ops, rho + 0.5 * dt * k1)
    k3 = lindblad_rhs(h_b, ops, rho + 0.5 * dt * k2)
    k4 = lindblad_rhs(h_c, ops, rho + dt * k3)
    out = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    out = spinlin.hermitize(out)
    if check:
        lo = np.linalg.eigvalsh(out)[0]
        if lo < PSD_FAIL:
            raise IntegrationError(f"state lost positivity (eigenvalue {lo:.3e})", residual=lo)
    return out


def lindblad_evolve(p, rho0, t, dt=None, check=True):
    """Integrate the master equation from 0 to t with uniform RK4 steps."""
    rho = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho.copy()
    dt = dt or default_dt(p)
    n = _n_steps(t, dt)
    dt = t / n
    for j in range(n):
        rho = lindblad_step(p, rho, j * dt, dt, check=check)
    return rho


def iter_superoperators(p, t_end, n):
    """Yield the master-equation propagator P(t_j), j = 0..n, by RK4 on P."""
    ops = lindblad_operators(p.noise)
    l0 = liouvillian(static_hamiltonian(p), ops)
    l1 = commutator_superop(rf_hamiltonian(p))
    omega = p.osc_field.omega if p.osc_field is not None else 0.0
    dt = t_end / n
    prop = np.eye(l0.shape[0], dtype=complex)
    yield prop
    for j in range(n):
        t = j * dt
        la = l0 + np.cos(omega * t) * l1
        lb = l0 + np.cos(omega * (t + dt / 2)) * l1
        lc = l0 + np.cos(omega * (t + dt)) * l1
        k1 = la @ prop
        k2 = lb @ (prop + 0.5 * dt * k1)
        k3 = lb @ (prop + 0.5 * dt * k2)
        k4 = lc @ (prop + dt * k3)
        prop = prop + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        yield prop
