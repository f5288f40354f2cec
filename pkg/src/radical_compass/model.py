"""Physical configuration of the radical pair and Hamiltonian assembly.

Units: fields in tesla, frequencies and couplings in rad/s (hbar = 1).
The Hamiltonian uses Pauli matrices for the electron and nuclear spins,
with the factor 1/2 absorbed into ``gamma``.
"""

from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants

from . import spinlin
from .errors import ConfigurationError, UnsupportedRegimeError

# mu_B g_s / (2 hbar) with g_s = 2
GAMMA_E = constants.physical_constants["Bohr magneton"][0] / constants.hbar

B0_GEOMAGNETIC = 46e-6
B0_WEAK = 32.2e-6
B0_STRONG = 59.8e-6
B_RF_REFERENCE = 150e-9
AZ_REFERENCE = 6.0 * GAMMA_E * B0_GEOMAGNETIC
K_VALUES = (1e4, 1e5, 1e6)

# finite-difference stencils step slightly outside [0, pi/2]
THETA_SLACK = 1e-3

NOISE_KINDS = ("amplitude_damping", "dephasing", "depolarizing")


@dataclass(frozen=True)
class StaticField:
    magnitude_T: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.magnitude_T >= 0:
            raise ConfigurationError("static field magnitude must be >= 0", key="field.magnitude_T")
        if not (-THETA_SLACK <= self.theta <= np.pi / 2 + THETA_SLACK):
            raise ConfigurationError(
                f"theta={self.theta} outside [0, pi/2]", key="field.theta"
            )


@dataclass(frozen=True)
class OscillatingField:
    """Linearly polarised RF field ``B_rf cos(omega t) n(alpha, beta)``.

    With ``track_theta`` the polar angle applied is ``theta + alpha``, so a
    perpendicular (alpha=pi/2) or parallel (alpha=0) geometry is kept while
    the static-field direction varies. ``electrons`` lists the spins the RF
    couples to.
    """

    magnitude_T: float
    omega: float
    alpha: float
    beta: float = 0.0
    track_theta: bool = False
    electrons: tuple = ("electron1", "electron2")

    def __post_init__(self):
        if not self.magnitude_T >= 0:
            raise ConfigurationError("rf magnitude must be >= 0", key="rf.magnitude_T")
        if not self.omega >= 0:
            raise ConfigurationError("rf omega must be >= 0", key="rf.omega")
        if not self.electrons or any(e not in ("electron1", "electron2") for e in self.electrons):
            raise ConfigurationError(f"bad rf electrons {self.electrons!r}", key="rf.electrons")


@dataclass(frozen=True)
class HyperfineTensor:
    ax: float
    ay: float
    az: float

    def __post_init__(self):
        if self.ax != self.ay:
            raise ConfigurationError(
                f"hyperfine tensor must be axially symmetric: ax={self.ax} != ay={self.ay}",
                key="hyperfine.ay",
            )
        if self.ax < 0 or self.az < 0:
            raise ConfigurationError("hyperfine couplings must be >= 0", key="hyperfine.az")
        if self.az < self.ax:
            raise ConfigurationError(
                f"cigar-shaped tensor requires az >= ax (az={self.az}, ax={self.ax})",
                key="hyperfine.az",
            )

    @property
    def diagonal(self):
        return np.array([self.ax, self.ay, self.az])


@dataclass(frozen=True)
class NoiseSpec:
    kind: str
    gamma_rate: float

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ConfigurationError(f"unknown noise kind {self.kind!r}", key="noise.kind")
        if not self.gamma_rate >= 0:
            raise ConfigurationError("noise rate must be >= 0", key="noise.gamma_rate")


@dataclass(frozen=True)
class RpParams:
    static_field: StaticField
    hf: HyperfineTensor
    k: float
    osc_field: OscillatingField = None
    gamma: float = GAMMA_E
    initial_electron_state: np.ndarray = field(default_factory=spinlin.singlet_state)
    noise: NoiseSpec = None

    def __post_init__(self):
        if not self.k > 0:
            raise ConfigurationError("recombination rate k must be > 0", key="rates.k")
        if not self.gamma > 0:
            raise ConfigurationError("gamma must be > 0", key="rates.gamma")
        rho = np.asarray(self.initial_electron_state, dtype=complex)
        if rho.shape != (4, 4):
            raise ConfigurationError("initial electron state must be 4x4", key="initial_state")
        try:
            spinlin.check_density(rho)
        except Exception as exc:
            raise ConfigurationError(str(exc), key="initial_state") from exc
        rho = spinlin.hermitize(rho)
        rho.setflags(write=False)
        object.__setattr__(self, "initial_electron_state", rho)

    # frozen dataclass with an ndarray field: identity hash is fine
    __hash__ = object.__hash__

    @property
    def theta(self):
        return self.static_field.theta

    @property
    def driven(self):
        f = self.osc_field
        return f is not None and f.magnitude_T > 0

    @property
    def noisy(self):
        return self.noise is not None and self.noise.gamma_rate > 0

    def with_theta(self, theta):
        return replace(self, static_field=replace(self.static_field, theta=float(theta)))

    def with_(self, **changes):
        return replace(self, **changes)

    def initial_state(self):
        """Full 8x8 initial state with the nucleus maximally mixed."""
        return spinlin.with_mixed_nucleus(self.initial_electron_state)


def field_vector(f):
    s = np.sin(f.theta)
    return f.magnitude_T * np.array([s * np.cos(f.phi), s * np.sin(f.phi), np.cos(f.theta)])


def rf_direction(f, theta=0.0):
    alpha = f.alpha + theta if f.track_theta else f.alpha
    s = np.sin(alpha)
    return np.array([s * np.cos(f.beta), s * np.sin(f.beta), np.cos(alpha)])


def osc_vector(f, t, theta=0.0):
    """Instantaneous RF vector; ``t`` counts from radical-pair creation."""
    return f.magnitude_T * np.cos(f.omega * t) * rf_direction(f, theta)


def perpendicular_alpha(theta):
    return theta + np.pi / 2


def resonant_omega(b0_T, gamma=GAMMA_E):
    """Larmor frequency of a free electron, 2 gamma B0."""
    return 2.0 * gamma * b0_T


def perpendicular_rf(b0_T, b_rf_T=B_RF_REFERENCE, gamma=GAMMA_E, **kw):
    return OscillatingField(b_rf_T, resonant_omega(b0_T, gamma), np.pi / 2, 0.0, True, **kw)


def parallel_rf(b0_T, b_rf_T=B_RF_REFERENCE, gamma=GAMMA_E, **kw):
    return OscillatingField(b_rf_T, resonant_omega(b0_T, gamma), 0.0, 0.0, True, **kw)


def axial_hyperfine(az=AZ_REFERENCE, ratio=0.0):
    """A = diag(ratio az, ratio az, az)."""
    return HyperfineTensor(ratio * az, ratio * az, az)


def reference_params(theta=np.pi / 4, b0_T=B0_GEOMAGNETIC, k=1e4, rf=None, hf=None,
                     initial_state=None, noise=None, gamma=GAMMA_E):
    """Reference radical pair: A_z = 6 gamma x 46 uT, A_x = A_y = 0, singlet start.

    ``rf`` may be ``None``, ``"perpendicular"``, ``"parallel"`` or an
    :class:`OscillatingField`; the string forms carry a resonant 150 nT field.
    """
    if isinstance(rf, str):
        builders = {"perpendicular": perpendicular_rf, "parallel": parallel_rf}
        if rf not in builders:
            raise ConfigurationError(f"unknown rf preset {rf!r}", key="rf")
        rf = builders[rf](b0_T, gamma=gamma)
    return RpParams(
        static_field=StaticField(b0_T, theta),
        hf=hf if hf is not None else axial_hyperfine(),
        k=k,
        osc_field=rf,
        gamma=gamma,
        initial_electron_state=spinlin.singlet_state() if initial_state is None else initial_state,
        noise=noise,
    )


_E1 = spinlin.spin_vector("electron1", 8)
_E2 = spinlin.spin_vector("electron2", 8)
_NUC = spinlin.spin_vector("nucleus", 8)
_HF_TERMS = np.stack([_NUC[a] @ _E2[a] for a in range(3)])


def static_hamiltonian(p):
    """Time-independent part: Zeeman coupling to B0 plus hyperfine term."""
    b = field_vector(p.static_field)
    h = p.gamma * np.tensordot(b, _E1 + _E2, axes=1)
    h = h + np.tensordot(p.hf.diagonal, _HF_TERMS, axes=1)
    return spinlin.hermitize(h)


def rf_hamiltonian(p):
    """Amplitude of the RF coupling; H(t) = H_static + cos(omega t) * this."""
    f = p.osc_field
    if f is None:
        return np.zeros((8, 8), dtype=complex)
    spins = sum(_E1 if e == "electron1" else _E2 for e in f.electrons)
    n = f.magnitude_T * rf_direction(f, p.theta)
    return spinlin.hermitize(p.gamma * np.tensordot(n, spins, axes=1))


def hamiltonian(p, t=0.0):
    h = static_hamiltonian(p)
    if p.osc_field is not None:
        h = h + np.cos(p.osc_field.omega * t) * rf_hamiltonian(p)
    return spinlin.hermitize(h)


def nuclear_sector_blocks(h8):
    """Split an 8x8 operator into its nuclear-up and nuclear-down 4x4 blocks."""
    r = np.asarray(h8).reshape(4, 2, 4, 2)
    return r[:, 0, :, 0], r[:, 1, :, 1]


def effective_hamiltonians(p):
    """H_{+/-} = gamma B0 . (sigma_1 + sigma_2) +/- A_z sigma_2z on the electron pair."""
    b = field_vector(p.static_field)
    s1 = spinlin.spin_vector("electron1", 4)
    s2 = spinlin.spin_vector("electron2", 4)
    zeeman = p.gamma * np.tensordot(b, s1 + s2, axes=1)
    hz = p.hf.az * s2[2]
    return zeeman + hz, zeeman - hz


@dataclass(frozen=True)
class EffectiveBasis:
    theta_plus: float
    theta_minus: float
    b_plus: float
    b_minus: float
    phi1: np.ndarray
    phi2: np.ndarray
    psi: dict  # sign -> (psi1, psi2)
    energies: dict  # sign -> E[i, j] for |phi_i>|psi_j>

    __hash__ = object.__hash__

    def state(self, sign, i, j):
        """|phi_i>|psi_{j,sign}> with i, j in {1, 2}."""
        phi = self.phi1 if i == 1 else self.phi2
        return np.kron(phi, self.psi[sign][j - 1])


def electron1_eigenstates(theta):
    """|phi_1> = cos(t/2)|1> + sin(t/2)|0>, |phi_2> = sin(t/2)|1> - cos(t/2)|0>."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return c * spinlin.UP + s * spinlin.DOWN, s * spinlin.UP - c * spinlin.DOWN


def effective_eigenbasis(p):
    """Closed-form eigenstructure of H_{+/-} when A_x = A_y = 0."""
    if p.hf.ax != 0 or p.hf.ay != 0:
        raise UnsupportedRegimeError("effective eigenbasis requires A_x = A_y = 0")
    if p.static_field.phi != 0:
        raise UnsupportedRegimeError("effective eigenbasis assumes phi = 0")
    b0, theta = p.static_field.magnitude_T, p.theta
    bx, bz = b0 * np.sin(theta), b0 * np.cos(theta)
    shift = p.hf.az / p.gamma
    phi1, phi2 = electron1_eigenstates(theta)
    angles, mags, psi, energies = {}, {}, {}, {}
    for sign, label in ((1, "+"), (-1, "-")):
        bzs = bz + sign * shift
        mag = np.hypot(bx, bzs)
        ang = np.arctan2(bx, bzs)
        angles[label], mags[label] = ang, mag
        c, s = np.cos(ang / 2), np.sin(ang / 2)
        psi[label] = (c * spinlin.UP + s * spinlin.DOWN, s * spinlin.UP - c * spinlin.DOWN)
        e1 = np.array([1.0, -1.0]) * p.gamma * b0
        e2 = np.array([1.0, -1.0]) * p.gamma * mag
        energies[label] = e1[:, None] + e2[None, :]
    return EffectiveBasis(angles["+"], angles["-"], mags["+"], mags["-"], phi1, phi2, psi, energies)


def hamiltonian_frequency_bound(p):
    """Theta-independent upper bound on the fastest frequency in H(t).

    max(2 gamma (B0 + B_rf), A_z, bound on |E_i - E_j|) with the level-spread
    bound 2 (2 gamma (B0 + B_rf) + A_x + A_y + A_z).
    """
    b = p.static_field.magnitude_T
    if p.osc_field is not None:
        b = b + p.osc_field.magnitude_T
    zeeman = 2.0 * p.gamma * b
    spread = 2.0 * (zeeman + p.hf.ax + p.hf.ay + p.hf.az)
    return max(zeeman, p.hf.az, spread)
