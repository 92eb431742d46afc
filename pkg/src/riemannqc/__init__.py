"""Riemannian unitaries, states and circuits built from Riemann zeta zeros.

Submodules: ``zeros`` (zero tables and Riemann-Siegel root finding),
``unitary``, ``state``, ``entanglement``, ``circuit``, ``qpe`` and ``cli``.
"""

from .state import StateVector, eigenbasis, riemann_state
from .unitary import RiemannUnitary, build_unitary, eigenphases, theta_exact
from .zeros import ZeroTable, embedded_zeros, first_zeros, load_zeros_file

__version__ = "0.1.0"

__all__ = [
    "RiemannUnitary",
    "StateVector",
    "ZeroTable",
    "build_unitary",
    "eigenbasis",
    "eigenphases",
    "embedded_zeros",
    "first_zeros",
    "load_zeros_file",
    "riemann_state",
    "theta_exact",
]
