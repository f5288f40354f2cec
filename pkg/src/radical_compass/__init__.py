"""Quantum-metrology model of the radical-pair avian compass.

Modules: ``spinlin`` (operators and linear algebra), ``model`` (parameters
and Hamiltonian), ``dynamics`` (propagators), ``steady`` (recombination-
weighted steady state), ``metrology`` (Fisher information),
``entanglement`` (concurrence), ``scenarios`` (figure sweeps), ``config``
and ``cli``.
"""

from .errors import (CompassError, ConfigurationError, ContractError, DomainError,
                     IntegrationError, ScenarioError, UnstableDerivativeError,
                     UnsupportedRegimeError)
from .model import RpParams, reference_params
from .steady import SteadyMapFamily, steady_state

__version__ = "0.1.0"
