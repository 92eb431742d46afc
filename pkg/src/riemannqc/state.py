"""Riemannian state, reference states and fidelities.

Basis convention: amplitude index i is the bitstring of qubits 0..n-1 with
qubit 0 as the most significant bit, so |00...01> is index 1.  Eigenvector
|psi_j> for j >= 3 is the canonical vector e_{k-j}; |psi_1>, |psi_2> are
(e_{k-2} +- e_{k-1}) / sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .unitary import RiemannUnitary, build_unitary, eigenphases, theta_exact
from .zeros import ZeroTable

NORM_TOL = 1e-10
MAX_QUBITS = 16


def qubits_for(k: int) -> int:
    """n with 2**n == k, or ValueError."""
    n = int(k).bit_length() - 1
    if k < 2 or (1 << n) != k:
        raise ValueError(f"k = {k} is not a power of two >= 2")
    return n


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        qubits_for(amp.size)
        norm = np.vdot(amp, amp).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} differs from 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)


def basis_state(n: int, index: int) -> StateVector:
    amp = np.zeros(1 << n, dtype=complex)
    amp[index] = 1.0
    return StateVector(amp)


@dataclass(frozen=True)
class EigenbasisMap:
    """Canonical-basis expansion of the eigenvectors |psi_1>..|psi_k>.

    ``plus_index`` (1 or 2) names the eigenvector (e_{k-2} + e_{k-1})/sqrt(2);
    it is resolved by applying U_R, not assumed.
    """

    k: int
    plus_index: int
    thetas: np.ndarray  # theta_1..theta_k
    unitary: RiemannUnitary

    @property
    def minus_index(self) -> int:
        return 3 - self.plus_index

    @property
    def plus_phase(self) -> float:
        return float(self.thetas[self.plus_index - 1])

    @property
    def minus_phase(self) -> float:
        return float(self.thetas[self.minus_index - 1])

    def vector(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.k:
            raise IndexError(j)
        out = np.zeros(self.k, dtype=complex)
        if j >= 3:
            out[self.k - j] = 1.0
        else:
            sign = 1.0 if j == self.plus_index else -1.0
            out[-2], out[-1] = 1 / math.sqrt(2), sign / math.sqrt(2)
        return out

    def matrix(self) -> np.ndarray:
        """Columns psi_1..psi_k (dense; small k only)."""
        return np.stack([self.vector(j) for j in range(1, self.k + 1)], axis=1)

    def to_eigen(self, vec: np.ndarray) -> np.ndarray:
        """Coefficients <psi_j|vec> for j = 1..k (entry j-1)."""
        vec = np.asarray(vec, dtype=complex)
        out = np.empty_like(vec)
        out[2:] = vec[-3::-1]
        p = (vec[-2] + vec[-1]) / math.sqrt(2)
        m = (vec[-2] - vec[-1]) / math.sqrt(2)
        out[self.plus_index - 1], out[self.minus_index - 1] = p, m
        return out

    def from_eigen(self, coef: np.ndarray) -> np.ndarray:
        coef = np.asarray(coef, dtype=complex)
        out = np.empty_like(coef)
        out[:-2] = coef[:1:-1]
        p, m = coef[self.plus_index - 1], coef[self.minus_index - 1]
        out[-2] = (p + m) / math.sqrt(2)
        out[-1] = (p - m) / math.sqrt(2)
        return out


def eigenbasis(zeros) -> EigenbasisMap:
    u = build_unitary(zeros)
    qubits_for(u.k)
    thetas = eigenphases(u)
    plus = np.zeros(u.k, dtype=complex)
    plus[-2:] = 1 / math.sqrt(2)
    image = u.apply(plus)[-2:] / plus[-2:]
    err = [abs(image[0] - np.exp(1j * thetas[i])) for i in (0, 1)]
    plus_index = 1 if err[0] <= err[1] else 2
    return EigenbasisMap(u.k, plus_index, thetas, u)


def uniform_eigen_superposition(emap: EigenbasisMap) -> StateVector:
    return StateVector(emap.from_eigen(np.full(emap.k, 1 / math.sqrt(emap.k))))


def riemann_state(zeros, method: str = "closed_form", convention: str = "pinned") -> StateVector:
    """U_R applied to the uniform eigen-superposition.

    ``closed_form`` writes the amplitudes directly; ``apply_unitary`` applies
    the structured U_R.  ``convention="printed"`` evaluates the closed form
    with the block phases as printed (sin((theta_2 - theta_1)/2)), which
    assumes the opposite eigenvector labelling and differs from U_R.
    """
    emap = eigenbasis(zeros)
    if method == "apply_unitary":
        return StateVector(emap.unitary.apply(uniform_eigen_superposition(emap).amplitudes))
    if method != "closed_form":
        raise ValueError(f"unknown method {method!r}")
    if convention == "pinned":
        tp, tm = emap.plus_phase, emap.minus_phase
    elif convention == "printed":
        tp, tm = emap.thetas[1], emap.thetas[0]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    k = emap.k
    amp = np.empty(k, dtype=complex)
    amp[:-2] = np.exp(1j * emap.thetas[:1:-1])
    mean = np.exp(1j * (tp + tm) / 2)
    amp[-2] = math.sqrt(2) * mean * math.cos((tm - tp) / 2)
    amp[-1] = 1j * math.sqrt(2) * mean * math.sin((tp - tm) / 2)
    return StateVector(amp / math.sqrt(k))


def hadamard_state(n: int) -> StateVector:
    if n < 1:
        raise ValueError("n must be >= 1")
    return StateVector(np.full(1 << n, 1 / math.sqrt(1 << n), dtype=complex))


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def fidelity_closed_form(zeros) -> float:
    """(1/k^2) |sum_j e^{i theta_j} - e^{i theta_m} + (sqrt2 - 1) e^{i theta_p}|^2.

    theta_p / theta_m are the phases of the (e+f)/sqrt2 and (e-f)/sqrt2
    block eigenvectors; under the pinned labelling these are theta_1 and
    theta_2, which is the printed form of the formula.
    """
    emap = eigenbasis(zeros)
    total = np.exp(1j * emap.thetas).sum()
    total += -np.exp(1j * emap.minus_phase) + (math.sqrt(2) - 1) * np.exp(1j * emap.plus_phase)
    return float(abs(total) ** 2 / emap.k**2)


def phase_sum_sq(zeros) -> float:
    """|sum_j e^{i theta_j}|^2 with exact phases, any k >= 1."""
    b = zeros.b if isinstance(zeros, ZeroTable) else np.asarray(zeros, dtype=float).reshape(-1)
    if b.size < 1:
        raise ValueError("at least one zero is required")
    return float(abs(np.exp(1j * np.atleast_1d(theta_exact(b))).sum()) ** 2)


def random_state(n: int, rng: np.random.Generator) -> StateVector:
    amp = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(amp / np.linalg.norm(amp))
