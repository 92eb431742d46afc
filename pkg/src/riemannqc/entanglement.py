"""Reduced density matrices, entropies and bipartition-averaged entanglement.

Qubit masks use bit i for qubit i (qubit 0 = most significant amplitude
bit).  Von Neumann entropies are in bits (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .state import StateVector, riemann_state

EIG_FLOOR = 1e-14
DM_TOL = 1e-10
MEASURES = ("vn", "linear")


@dataclass(frozen=True)
class Bipartition:
    n: int
    mask: int  # retained qubits

    def __post_init__(self):
        full = (1 << self.n) - 1
        if not (0 < self.mask < full):
            raise ValueError("both sides of a bipartition must be nonempty")

    @property
    def kept(self) -> list[int]:
        return [q for q in range(self.n) if self.mask >> q & 1]

    @property
    def traced(self) -> list[int]:
        return [q for q in range(self.n) if not self.mask >> q & 1]

    def complement(self) -> "Bipartition":
        return Bipartition(self.n, ((1 << self.n) - 1) ^ self.mask)

    def label(self) -> str:
        names = [chr(ord("A") + q) if self.n <= 26 else f"q{q}" for q in range(self.n)]
        return "".join(names[q] for q in self.kept) + "_" + "".join(names[q] for q in self.traced)


def enumerate_bipartitions(n: int) -> list[Bipartition]:
    """The 2^(n-1) - 1 unordered splits, each listed by the side without qubit n-1."""
    if n < 2:
        raise ValueError("need at least two qubits")
    return [Bipartition(n, m) for m in range(1, 1 << (n - 1))]


def single_qubit_bipartitions(n: int) -> list[Bipartition]:
    if n < 2:
        raise ValueError("need at least two qubits")
    return [Bipartition(n, 1 << q) for q in range(n)]


def _amplitudes(state) -> np.ndarray:
    return state.amplitudes if isinstance(state, StateVector) else np.asarray(state, dtype=complex)


def _split(state, part: Bipartition) -> np.ndarray:
    amp = _amplitudes(state)
    if amp.size != 1 << part.n:
        raise ValueError("bipartition does not match the state size")
    kept, traced = part.kept, part.traced
    tensor = amp.reshape((2,) * part.n).transpose(kept + traced)
    return tensor.reshape(1 << len(kept), 1 << len(traced))


def partial_trace(state, keep: Bipartition) -> np.ndarray:
    """Reduced density matrix over ``keep.kept``, rows in ascending qubit order."""
    m = _split(state, keep)
    return m @ m.conj().T


def check_density_matrix(rho: np.ndarray, tol: float = DM_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError("density matrix trace differs from 1")
    return rho


def _entropy_from_spectrum(lam: np.ndarray, measure: str) -> float:
    lam = np.clip(lam, 0.0, 1.0)
    if measure == "vn":
        lam = lam[lam > EIG_FLOOR]
        return float(max(0.0, -np.sum(lam * np.log2(lam))))
    if measure == "linear":
        return float(max(0.0, 2.0 * (1.0 - np.sum(lam * lam))))
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr rho log2 rho (bits)."""
    rho = check_density_matrix(rho)
    return _entropy_from_spectrum(np.linalg.eigvalsh(rho), "vn")


def linear_entropy(rho: np.ndarray) -> float:
    """2 (1 - Tr rho^2)."""
    rho = check_density_matrix(rho)
    return float(2.0 * (1.0 - np.sum(np.abs(rho) ** 2)))


def bipartition_entropy(state, part: Bipartition, measure: str = "vn") -> float:
    """Entropy of either side of a pure-state split via the Schmidt spectrum."""
    sv = np.linalg.svd(_split(state, part), compute_uv=False)
    return _entropy_from_spectrum(sv * sv, measure)


def _average(state, parts: list[Bipartition], measure: str) -> float:
    vals = np.array([bipartition_entropy(state, p, measure) for p in parts])
    return float(vals.sum() / vals.size)


def _n_qubits(state) -> int:
    return _amplitudes(state).size.bit_length() - 1


def e1_average(state, measure: str = "vn") -> float:
    """Mean entropy over every bipartition."""
    return _average(state, enumerate_bipartitions(_n_qubits(state)), measure)


def e2_average(state, measure: str = "vn") -> float:
    """Mean entropy over the n one-qubit-versus-rest bipartitions."""
    return _average(state, single_qubit_bipartitions(_n_qubits(state)), measure)


class EntanglementRow(NamedTuple):
    n_qubits: int
    E1_vn: float
    E1_lin: float
    E2_vn: float
    E2_lin: float


def entanglement_row(state) -> EntanglementRow:
    # one SVD per bipartition serves both measures
    n = _n_qubits(state)
    out = {}
    for name, parts in (("E1", enumerate_bipartitions(n)), ("E2", single_qubit_bipartitions(n))):
        acc = {"vn": 0.0, "linear": 0.0}
        for p in parts:
            sv = np.linalg.svd(_split(state, p), compute_uv=False)
            for meas in acc:
                acc[meas] += _entropy_from_spectrum(sv * sv, meas)
        out[name] = {m: v / len(parts) for m, v in acc.items()}
    return EntanglementRow(n, out["E1"]["vn"], out["E1"]["linear"], out["E2"]["vn"], out["E2"]["linear"])


def entanglement_sweep(zeros_for: Callable[[int], object], n_min: int, n_max: int) -> list[EntanglementRow]:
    """Rows for n = n_min..n_max; ``zeros_for(k)`` supplies k zeros."""
    if not 2 <= n_min <= n_max <= 16:
        raise ValueError("need 2 <= n_min <= n_max <= 16")
    rows = []
    for n in range(n_min, n_max + 1):
        zeros = zeros_for(1 << n)
        if len(zeros) < 1 << n:
            raise ValueError(f"insufficient zeros for n = {n}")
        rows.append(entanglement_row(riemann_state(zeros)))
    return rows
