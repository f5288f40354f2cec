"""Two-qubit concurrence of the electron-pair steady state."""

from dataclasses import dataclass

import numpy as np

from . import spinlin
from .errors import UnsupportedRegimeError
from .metrology import qfi_spectral
from .steady import SteadyMapFamily

_YY = np.kron(spinlin.pauli("y"), spinlin.pauli("y"))


def concurrence(rho):
    """Wootters concurrence max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)).

    The l_i are the eigenvalues, in decreasing order, of
    rho (sy x sy) rho* (sy x sy), with conjugation in the computational basis.
    Their square roots are taken directly as the singular values of
    sqrt(rho) (sy x sy) sqrt(rho)*, which stays accurate for low-rank states.
    """
    rho = spinlin.check_density(np.asarray(rho, dtype=complex), atol=1e-9, psd_atol=1e-9)
    w, v = np.linalg.eigh(rho)
    root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    s = np.linalg.svd(root @ _YY @ root.conj(), compute_uv=False)
    return float(max(0.0, s[0] - s[1:].sum()))


def werner_state(p):
    """p |S><S| + (1 - p) I/4."""
    return p * spinlin.singlet_state() + (1 - p) * spinlin.maximally_mixed(4)


@dataclass(frozen=True)
class ConcurrenceResult:
    value: float
    k: float
    theta: float
    qfi: float = None

    def __post_init__(self):
        if not -1e-12 <= self.value <= 1 + 1e-9:
            raise ValueError(f"concurrence {self.value} outside [0, 1]")


def concurrence_vs_k(p, k_grid, with_qfi=True):
    """Concurrence (and QFI) of the steady state at each recombination rate."""
    if p.driven:
        raise UnsupportedRegimeError("concurrence_vs_k needs a static field")
    out = []
    for k in k_grid:
        fam = SteadyMapFamily(p.with_(k=float(k)))
        rho = fam.state(p.theta)
        q = qfi_spectral(fam.family(), p.theta) if with_qfi else None
        out.append(ConcurrenceResult(concurrence(rho), float(k), float(p.theta), q))
    return out
