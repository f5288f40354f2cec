"""Recombination-weighted steady state of the electron pair.

    rho_bar = int_0^inf k exp(-k t) Tr_I[rho(t)] dt

Three routes are provided:

* ``steady_unitary_resolvent`` -- closed form in the energy eigenbasis,
  entries weighted by k / (k + i (E_m - E_n)); static, noise-free only.
* ``steady_liouvillian_resolvent`` -- k (k - L)^{-1} applied to vec(rho(0));
  static field, any noise.
* ``steady_quadrature`` -- time integration of the propagated state on
  [0, T] with T >= 40 / k; the only route valid with RF driving.

The quadrature splits the horizon into equal panels. For a driven pair the
panel is one RF period, so the propagator over panel n is W^n for the
one-panel map W and the sum over panels is a geometric series, evaluated
by repeated doubling. Inside a panel, the integrand is sampled on the
propagation grid and integrated with composite Boole weights.
"""

import functools
from dataclasses import dataclass

import numpy as np

from . import spinlin
from .dynamics import build_liouvillian, default_dt, iter_superoperators, stepped_unitaries
from .errors import ContractError, IntegrationError, UnsupportedRegimeError
from .model import hamiltonian

HORIZON_LIFETIMES = 40.0
QUAD_RTOL = 1e-7
MAX_REFINEMENTS = 4
STATIC_PANEL_STEPS = 64


@dataclass(frozen=True)
class SteadyState:
    rho_bar: np.ndarray
    method: str
    tail_bound: float = 0.0
    residual: float = None
    n_steps: int = None

    __hash__ = object.__hash__

    @property
    def singlet_yield(self):
        s = spinlin.singlet_vector()
        return float(np.real(s.conj() @ self.rho_bar @ s))


def _finish(rho4):
    rho4 = spinlin.hermitize(rho4)
    spinlin.check_density(rho4, atol=1e-9, psd_atol=1e-9)
    return rho4


# ------------------------------------------------------------ linear maps
#
# Maps act on column-stacked 4x4 electron states: vec(rho_bar) = M vec(rho_s(0)).


@functools.cache
def _electron_maps():
    """(E, T): E sends vec(rho_e) to vec(rho_e (x) I/2); T is the nuclear trace."""
    basis4 = np.eye(16, dtype=complex).reshape(16, 4, 4).swapaxes(-1, -2)
    embed = spinlin.vec(spinlin.with_mixed_nucleus(basis4)).T
    basis8 = np.eye(64, dtype=complex).reshape(64, 8, 8).swapaxes(-1, -2)
    trace = spinlin.vec(spinlin.partial_trace_nucleus(basis8)).T
    return embed, trace


def _restrict(superop):
    embed, trace = _electron_maps()
    return trace @ superop @ embed


def apply_map(m, rho4):
    return spinlin.unvec(m @ spinlin.vec(rho4))


def unitary_resolvent_map(p):
    if p.driven or p.noisy:
        raise UnsupportedRegimeError("unitary resolvent requires a static field and no noise")
    values, vectors = spinlin.eig_hermitian(hamiltonian(p))
    k = p.k
    weights = k / (k + 1j * (values[:, None] - values[None, :]))
    # vec(V (W o (V^+ X V)) V^+) = (conj V kron V) diag(vec W) (V^T kron V^+) vec X
    left = np.kron(vectors.conj(), vectors)
    right = np.kron(vectors.T, vectors.conj().T)
    return _restrict(left @ (spinlin.vec(weights)[:, None] * right))


def liouvillian_resolvent_map(p):
    if p.driven:
        raise UnsupportedRegimeError("Liouvillian resolvent requires a static field")
    embed, trace = _electron_maps()
    a = p.k * np.eye(64) - build_liouvillian(p)
    rhs = p.k * embed
    sol = np.linalg.solve(a, rhs)
    # normwise relative backward error of the solve
    scale = np.linalg.norm(a, np.inf) * np.linalg.norm(sol, np.inf) + np.linalg.norm(rhs, np.inf)
    residual = float(np.linalg.norm(a @ sol - rhs, np.inf) / scale)
    if residual > 1e-10:
        raise ContractError(f"resolvent solve residual {residual:.3e}")
    return trace @ sol


# ------------------------------------------------------------ quadrature


def _boole_weights(n, h):
    if n % 4:
        raise ValueError("Boole rule needs a multiple of 4 intervals")
    w = np.empty(n + 1)
    w[0::4] = 14.0
    w[1::2] = 32.0
    w[2::4] = 12.0
    w[0] = w[-1] = 7.0
    return w * (2.0 * h / 45.0)


@dataclass(frozen=True)
class QuadratureGrid:
    panel: float  # seconds
    n_steps: int  # propagation steps per panel
    n_doublings: int

    @property
    def horizon(self):
        return self.panel * 2**self.n_doublings

    def tail_bound(self, k):
        return float(np.exp(-k * self.horizon))


def quadrature_grid(p, n_steps=None, dt=None):
    """Panel length, steps per panel and number of panel doublings.

    Driven pairs use one RF period per panel; otherwise a panel spans
    ``STATIC_PANEL_STEPS`` default steps. ``n_steps`` is rounded up to a
    multiple of 4.
    """
    dt = dt or default_dt(p)
    if p.driven and p.osc_field.omega > 0:
        panel = 2.0 * np.pi / p.osc_field.omega
        base = int(np.ceil(panel / dt))
    else:
        base = STATIC_PANEL_STEPS
        panel = STATIC_PANEL_STEPS * dt
    n = base if n_steps is None else n_steps
    n = int(4 * np.ceil(n / 4))
    needed = HORIZON_LIFETIMES / p.k
    doublings = max(0, int(np.ceil(np.log2(needed / panel)))) if needed > panel else 0
    return QuadratureGrid(panel, n, doublings)


def _geometric_doubling(w, q, doublings):
    """sum_{n < 2^doublings} q^n W^n."""
    g = np.eye(w.shape[0], dtype=complex)
    wp, qp = w, q
    for _ in range(doublings):
        g = g + qp * (wp @ g)
        wp = wp @ wp
        qp = qp * qp
    return g


def _panel_superops(p, grid):
    """(J, W): weighted panel integral of the propagator and the one-panel map."""
    n = grid.n_steps
    h = grid.panel / n
    s = h * np.arange(n + 1)
    c = _boole_weights(n, h) * p.k * np.exp(-p.k * s)
    if p.noisy:
        j = np.zeros((64, 64), dtype=complex)
        prop = None
        for idx, prop in enumerate(iter_superoperators(p, grid.panel, n)):
            j += c[idx] * prop
        return j, prop
    u = stepped_unitaries(p, grid.panel, n)
    # conj(U) kron U, weighted and summed over the grid
    j = np.einsum("j,jab,jcd->acbd", c, u.conj(), u).reshape(64, 64)
    w = np.kron(u[-1].conj(), u[-1])
    return j, w


def quadrature_map(p, grid):
    j, w = _panel_superops(p, grid)
    q = np.exp(-p.k * grid.panel)
    return _restrict(j @ _geometric_doubling(w, q, grid.n_doublings))


def calibrate_quadrature(p, rtol=QUAD_RTOL, max_refinements=MAX_REFINEMENTS, dt=None):
    """Refine the grid until successive maps agree to ``rtol``.

    Returns ``(grid, map, residual)`` for the finer accepted grid.
    """
    grid = quadrature_grid(p, dt=dt)
    prev = quadrature_map(p, grid)
    residual = np.inf
    for _ in range(max_refinements):
        grid = QuadratureGrid(grid.panel, 2 * grid.n_steps, grid.n_doublings)
        cur = quadrature_map(p, grid)
        residual = float(np.max(np.abs(cur - prev)))
        if residual < rtol:
            return grid, cur, residual
        prev = cur
    raise IntegrationError(
        f"quadrature did not converge after {max_refinements} refinements "
        f"(residual {residual:.3e} >= {rtol:.1e})",
        residual=residual,
    )


# ------------------------------------------------------------ public API


def steady_unitary_resolvent(p):
    m = unitary_resolvent_map(p)
    return SteadyState(_finish(apply_map(m, p.initial_electron_state)), "unitary_resolvent")


def steady_liouvillian_resolvent(p):
    m = liouvillian_resolvent_map(p)
    return SteadyState(_finish(apply_map(m, p.initial_electron_state)), "liouvillian_resolvent")


def steady_quadrature(p, spec=None, grid=None):
    """Quadrature route; ``grid`` pins the discretisation and skips refinement."""
    dt = getattr(spec, "dt", None)
    if grid is None:
        grid, m, residual = calibrate_quadrature(p, dt=dt)
    else:
        m, residual = quadrature_map(p, grid), None
    tail = grid.tail_bound(p.k)
    if tail > 1e-8:
        raise IntegrationError(f"truncation tail {tail:.2e} exceeds 1e-8", residual=tail)
    rho = _finish(apply_map(m, p.initial_electron_state))
    return SteadyState(rho, "quadrature", tail, residual, grid.n_steps)


def default_method(p):
    if p.driven:
        return "quadrature"
    if p.noisy:
        return "liouvillian_resolvent"
    return "unitary_resolvent"


def steady_state(p, method=None):
    method = method or default_method(p)
    return {
        "unitary_resolvent": steady_unitary_resolvent,
        "liouvillian_resolvent": steady_liouvillian_resolvent,
        "quadrature": steady_quadrature,
    }[method](p)


class SteadyMapFamily:
    """theta -> 16x16 steady-state map with a frozen discretisation.

    Finite differences in theta need every stencil point computed on the
    same grid; the quadrature grid is calibrated once at ``p.theta``.
    """

    def __init__(self, p, method=None, dt=None):
        self.params = p
        self.method = method or default_method(p)
        self.grid = None
        if self.method == "quadrature":
            self.grid, m, _ = calibrate_quadrature(p, dt=dt)
            self._cache = {float(p.theta): m}
        else:
            self._cache = {}

    def map(self, theta):
        key = float(theta)
        if key not in self._cache:
            q = self.params.with_theta(theta)
            if self.method == "unitary_resolvent":
                m = unitary_resolvent_map(q)
            elif self.method == "liouvillian_resolvent":
                m = liouvillian_resolvent_map(q)
            else:
                m = quadrature_map(q, self.grid)
            self._cache[key] = m
        return self._cache[key]

    def state(self, theta, rho0=None):
        rho0 = self.params.initial_electron_state if rho0 is None else rho0
        return spinlin.hermitize(apply_map(self.map(theta), rho0))

    def family(self, rho0=None):
        """A theta -> rho_bar callable for one initial electron state."""
        return lambda theta: self.state(theta, rho0)
