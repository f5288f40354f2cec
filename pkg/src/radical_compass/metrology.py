"""Fisher information of the steady state and its closed-form approximations.

A *family* is any callable ``theta -> rho(theta)`` returning 4x4 density
matrices. Derivatives are central differences with step ``h``; each call
also evaluates the stencil at ``h/2`` and refuses results whose two
estimates disagree.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spinlin
from .errors import DomainError, UnstableDerivativeError
from .model import electron1_eigenstates

H_DEFAULT = 1e-5
EPS = 1e-12
RICHARDSON_RTOL = 1e-3
RICHARDSON_ATOL = 1e-8
# value-level noise of the quadrature maps; a derivative inherits FD_NOISE / h
FD_NOISE = 1e-11
DEGENERACY_TOL = 1e-9


def _unit_trace(rho):
    # rounding drift in Tr(rho) would otherwise be amplified by 1/h
    rho = np.asarray(rho)
    return rho / np.real(np.trace(rho))


class Stencil:
    """Family evaluated at theta, theta +/- h and theta +/- h/2 (trace-normalised)."""

    def __init__(self, family, theta, h=H_DEFAULT):
        self.theta, self.h = float(theta), float(h)
        self.rho = _unit_trace(family(theta))
        self.plus, self.minus = _unit_trace(family(theta + h)), _unit_trace(family(theta - h))
        self.plus2, self.minus2 = (
            _unit_trace(family(theta + h / 2)),
            _unit_trace(family(theta - h / 2)),
        )

    def derivative(self, half=False):
        """Central difference of rho, projected onto traceless matrices."""
        if half:
            d = (self.plus2 - self.minus2) / self.h
        else:
            d = (self.plus - self.minus) / (2 * self.h)
        d = spinlin.hermitize(d)
        return d - np.trace(d).real / d.shape[0] * np.eye(d.shape[0])

    def scalar(self, fn):
        """(value, derivative at h, derivative at h/2) of a functional linear in rho."""
        return fn(self.rho), fn(self.derivative()), fn(self.derivative(half=True))


def _consistent(a, b, what, h=H_DEFAULT):
    scale = max(abs(a), abs(b))
    if abs(a - b) > RICHARDSON_RTOL * scale + RICHARDSON_ATOL + FD_NOISE / h:
        raise UnstableDerivativeError(
            f"{what}: step-halving estimates disagree ({a:.10g} vs {b:.10g})"
        )


# ------------------------------------------------------------- QFI and SLD


def qfi_from_derivative(rho, drho, eps=EPS):
    """2 sum_{p_j + p_k > eps} |<j|drho|k>|^2 / (p_j + p_k)."""
    p, v = np.linalg.eigh(spinlin.hermitize(rho))
    d = v.conj().T @ drho @ v
    s = p[:, None] + p[None, :]
    mask = s > eps
    return float(2.0 * np.sum(np.abs(d[mask]) ** 2 / s[mask]))


def sld(rho, drho, eps=EPS):
    """Symmetric logarithmic derivative, zero outside the support of rho."""
    p, v = np.linalg.eigh(spinlin.hermitize(rho))
    d = v.conj().T @ drho @ v
    s = p[:, None] + p[None, :]
    ell = np.where(s > eps, 2.0 * d / np.where(s > eps, s, 1.0), 0.0)
    return spinlin.hermitize(v @ ell @ v.conj().T)


def qfi_spectral(family, theta, h=H_DEFAULT, eps=EPS, stencil=None):
    st = stencil or Stencil(family, theta, h)
    q1 = qfi_from_derivative(st.rho, st.derivative(), eps)
    q2 = qfi_from_derivative(st.rho, st.derivative(half=True), eps)
    _consistent(q1, q2, "QFI", st.h)
    return q1


# ------------------------------------------------------------- measurements


def spectral_projectors(observable, tol=DEGENERACY_TOL):
    """Projectors onto the distinct eigenvalues (degenerate ones merged)."""
    values, vectors = spinlin.eig_hermitian(observable)
    groups = []
    for i, val in enumerate(values):
        if groups and abs(val - groups[-1][0]) <= tol:
            groups[-1][1].append(i)
        else:
            groups.append((val, [i]))
    return [
        (val, vectors[:, idx] @ vectors[:, idx].conj().T) for val, idx in groups
    ]


def _cfi(probs, dprobs, eps):
    keep = probs > eps
    return float(np.sum(dprobs[keep] ** 2 / probs[keep]))


def cfi_projective(family, observable, theta, h=H_DEFAULT, eps=EPS, stencil=None):
    """Classical Fisher information of a projective measurement of ``observable``."""
    st = stencil or Stencil(family, theta, h)
    projs = [pr for _, pr in spectral_projectors(observable)]

    def probs(rho):
        return np.array([np.real(np.trace(pr @ rho)) for pr in projs])

    p0, d1, d2 = st.scalar(probs)
    f1, f2 = _cfi(p0, d1, eps), _cfi(p0, d2, eps)
    _consistent(f1, f2, "CFI", st.h)
    return f1


@dataclass(frozen=True)
class ErrorPropagation:
    mean: float
    variance: float
    slope: float
    inv_var: float
    flat_signal: bool


def error_propagation(family, observable, theta, h=H_DEFAULT, eps=EPS, stencil=None):
    """|d<A>/dtheta|^2 / Var(A); zero with ``flat_signal`` at stationary points."""
    st = stencil or Stencil(family, theta, h)
    a2 = observable @ observable
    mean, s1, s2 = st.scalar(lambda r: spinlin.expect(observable, r))
    var = spinlin.expect(a2, st.rho) - mean**2
    if abs(s1) <= eps or var <= eps:
        return ErrorPropagation(mean, var, s1, 0.0, True)
    _consistent(s1, s2, "signal slope", st.h)
    return ErrorPropagation(mean, var, s1, s1**2 / var, False)


def error_propagation_inv_var(family, observable, theta, h=H_DEFAULT, stencil=None):
    return error_propagation(family, observable, theta, h, stencil=stencil).inv_var


def singlet_yield(state):
    """<S|rho_bar|S>; accepts a SteadyState or a 4x4 matrix."""
    rho = getattr(state, "rho_bar", state)
    s = spinlin.singlet_vector()
    return float(np.real(s.conj() @ rho @ s))


def signal_contrast(yields):
    yields = np.asarray(list(yields), dtype=float)
    if yields.size == 0:
        raise ValueError("signal contrast needs at least one yield")
    return float(yields.max() - yields.min())


# ------------------------------------------------------------- report


@dataclass(frozen=True)
class MetrologyReport:
    theta: float
    qfi: float
    cfi_s2: float
    cfi_sz2: float
    inv_var_s2: float
    inv_var_sz2: float
    singlet_yield: float
    method_tags: dict = field(default_factory=dict)

    def __post_init__(self):
        slack = 1e-6
        if self.qfi < self.cfi_s2 - slack or self.qfi < self.cfi_sz2 - slack:
            raise DomainError(
                f"Cramer-Rao chain violated at theta={self.theta}: "
                f"QFI={self.qfi}, CFI={self.cfi_s2}, {self.cfi_sz2}"
            )
        if not -1e-9 <= self.singlet_yield <= 1 + 1e-9:
            raise DomainError(f"singlet yield {self.singlet_yield} outside [0, 1]")


def metrology_report(family, theta, h=H_DEFAULT, method="exact"):
    st = Stencil(family, theta, h)
    s2, sz2 = spinlin.total_spin_sq(), spinlin.total_sz_sq()
    return MetrologyReport(
        theta=float(theta),
        qfi=qfi_spectral(family, theta, stencil=st),
        cfi_s2=cfi_projective(family, s2, theta, stencil=st),
        cfi_sz2=cfi_projective(family, sz2, theta, stencil=st),
        inv_var_s2=error_propagation_inv_var(family, s2, theta, stencil=st),
        inv_var_sz2=error_propagation_inv_var(family, sz2, theta, stencil=st),
        singlet_yield=singlet_yield(st.rho),
        method_tags={
            "steady_state": method,
            "derivative": f"central difference h={h:g} with h/2 check",
            "qfi": "spectral",
        },
    )


# ------------------------------------------------------------- closed forms


@dataclass(frozen=True)
class SectorCoefficients:
    """rho[i, j-1, k-1] = <phi_j|<i| rho_s(0) |phi_k>|i> for electron-2 label i."""

    rho: np.ndarray

    __hash__ = object.__hash__

    def __post_init__(self):
        r = np.asarray(self.rho, dtype=complex)
        if r.shape != (2, 2, 2):
            raise ValueError("sector coefficients have shape (2, 2, 2)")
        object.__setattr__(self, "rho", r)

    def diag(self, i, j):
        return float(np.real(self.rho[i, j - 1, j - 1]))

    def off(self, i):
        return complex(self.rho[i, 0, 1])

    @property
    def total(self):
        return sum(self.diag(i, j) for i in (0, 1) for j in (1, 2))


def sector_coefficients(rho0, theta):
    rho0 = np.asarray(rho0, dtype=complex)
    phis = electron1_eigenstates(theta)
    out = np.empty((2, 2, 2), dtype=complex)
    for i in (0, 1):
        vecs = [np.kron(phi, spinlin.ket(i)) for phi in phis]
        for j in range(2):
            for k in range(2):
                out[i, j, k] = vecs[j].conj() @ rho0 @ vecs[k]
    return SectorCoefficients(out)


def _coefficients(rho0, theta):
    if isinstance(rho0, SectorCoefficients):
        return rho0
    return sector_coefficients(rho0, theta)


def _diag_sector_qfi(re12_sq, p11, p22, eps=EPS):
    out = 0.0
    for p in (p11, p22):
        if p > eps:
            out += re12_sq / p
        elif re12_sq > eps:
            raise DomainError(
                f"sector population {p:.3e} vanishes while Re[rho^12]^2 = {re12_sq:.3e}"
            )
    if p11 + p22 > eps:
        out += (p11 - p22) ** 2 / (p11 + p22)
    return out


def qfi_strong_hf_static(rho0, theta=None, eps=EPS):
    """Strong-hyperfine QFI without RF; accepts a state or SectorCoefficients."""
    c = _coefficients(rho0, theta)
    return float(
        sum(_diag_sector_qfi(c.off(i).real ** 2, c.diag(i, 1), c.diag(i, 2), eps) for i in (0, 1))
    )


def driven_populations(c, k, Omega):
    """P_i^{jj} = rho_i^{jj} + (-1)^j chi_i; returns array [i, j-1]."""
    denom = k**2 + Omega**2
    out = np.empty((2, 2))
    for i in (0, 1):
        r11, r22 = c.diag(i, 1), c.diag(i, 2)
        chi = Omega**2 / (2 * denom) * (r11 - r22) - Omega * k / denom * c.off(i).imag
        out[i] = (r11 - chi, r22 + chi)
    return out


def qfi_strong_hf_driven(rho0, theta, k, Omega, eps=EPS):
    """Strong-hyperfine QFI under a perpendicular resonant RF field of Rabi rate Omega."""
    c = _coefficients(rho0, theta)
    pops = driven_populations(c, k, Omega)
    if pops.min() < -eps:
        raise DomainError(f"negative driven population {pops.min():.3e}")
    scale = k**4 / (k**2 + Omega**2) ** 2
    return float(
        sum(
            _diag_sector_qfi(scale * c.off(i).real ** 2, pops[i, 0], pops[i, 1], eps)
            for i in (0, 1)
        )
    )
