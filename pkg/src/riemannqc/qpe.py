"""Translation operator, composed eigenbasis operators and phase estimation.

Operators are stored as a permutation with phases over eigen-indices:
``op |psi_j> = phases[j] |psi_{perm[j]}>`` (0-based j), which keeps powers
such as (T U_R)^k exact and O(k log k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .state import EigenbasisMap, StateVector, eigenbasis, uniform_eigen_superposition

EIGEN_TOL = 1e-8
DEFAULT_T_BITS = 12
TWO_PI = 2 * math.pi


def circular_distance(a, b):
    """|a - b| measured on the circle, in [0, pi]."""
    d = np.mod(np.asarray(a) - np.asarray(b) + math.pi, TWO_PI) - math.pi
    out = np.abs(d)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EigenbasisOperator:
    perm: np.ndarray
    phases: np.ndarray
    emap: EigenbasisMap

    @property
    def k(self) -> int:
        return self.perm.size

    def __matmul__(self, other: "EigenbasisOperator") -> "EigenbasisOperator":
        # (self @ other)|psi_j> = other.phases[j] * self.phases[other.perm[j]] |psi_{self.perm[other.perm[j]]}>
        return EigenbasisOperator(
            self.perm[other.perm], other.phases * self.phases[other.perm], self.emap
        )

    def adjoint(self) -> "EigenbasisOperator":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.k)
        return EigenbasisOperator(inv, np.conj(self.phases[inv]), self.emap)

    def power(self, m: int) -> "EigenbasisOperator":
        if m < 0:
            return self.adjoint().power(-m)
        result = identity_operator(self.emap)
        base = self
        while m:
            if m & 1:
                result = base @ result
            base = base @ base
            m >>= 1
        return result

    def apply_eigen(self, coef: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(coef, dtype=complex))
        out[self.perm] = self.phases * coef
        return out

    def apply(self, vec) -> np.ndarray:
        vec = vec.amplitudes if isinstance(vec, StateVector) else np.asarray(vec, dtype=complex)
        return self.emap.from_eigen(self.apply_eigen(self.emap.to_eigen(vec)))

    def matrix(self) -> np.ndarray:
        """Canonical-basis matrix (dense, small k)."""
        psi = self.emap.matrix()
        p = np.zeros((self.k, self.k), dtype=complex)
        p[self.perm, np.arange(self.k)] = self.phases
        return psi @ p @ psi.conj().T


def identity_operator(emap: EigenbasisMap) -> EigenbasisOperator:
    return EigenbasisOperator(np.arange(emap.k), np.ones(emap.k, dtype=complex), emap)


def translation_operator(emap: EigenbasisMap) -> EigenbasisOperator:
    """T|psi_j> = |psi_{j+1}>, T|psi_k> = |psi_1>."""
    return EigenbasisOperator(np.roll(np.arange(emap.k), -1), np.ones(emap.k, dtype=complex), emap)


def unitary_operator(emap: EigenbasisMap) -> EigenbasisOperator:
    return EigenbasisOperator(np.arange(emap.k), np.exp(1j * emap.thetas), emap)


def _emap(zeros) -> EigenbasisMap:
    return zeros if isinstance(zeros, EigenbasisMap) else eigenbasis(zeros)


def theta_sum_operator(zeros) -> EigenbasisOperator:
    """(T U_R)^k, which multiplies every eigenvector by exp(i sum theta)."""
    emap = _emap(zeros)
    return (translation_operator(emap) @ unitary_operator(emap)).power(emap.k)


def spacing_operator(zeros) -> EigenbasisOperator:
    """R = (T U_R)^dagger (U_R T); R|psi_j> = exp(i(theta_{j+1} - theta_j))|psi_j>, cyclic."""
    emap = _emap(zeros)
    t, u = translation_operator(emap), unitary_operator(emap)
    return (t @ u).adjoint() @ (u @ t)


def spacing_sum_operator(zeros) -> EigenbasisOperator:
    """T (T R)^(k-1); on |psi_1> it contributes exp(i(theta_k - theta_1))."""
    emap = _emap(zeros)
    t = translation_operator(emap)
    return t @ (t @ spacing_operator(emap)).power(emap.k - 1)


class QpeResult(NamedTuple):
    t_bits: int
    distribution: np.ndarray
    top_outcome: int
    phase_estimate: float
    true_phase: float


def dirichlet_distribution(phase: float, t_bits: int) -> np.ndarray:
    """Outcome probabilities of textbook phase estimation for eigenphase ``phase``."""
    size = 1 << t_bits
    x = (phase / TWO_PI) % 1.0 * size  # true phase in units of outcomes
    frac = x - math.floor(x)
    dist = min(frac, 1.0 - frac)
    if dist < 1e-9:
        # within 1e-9 of an outcome the peak differs from 1 by < 1e-17
        out = np.zeros(size)
        out[int(round(x)) % size] = 1.0
        return out
    # |(1/N) sum_y e^{2 pi i y (x - m)/N}|^2 = sin^2(pi (x-m)) / (N sin(pi (x-m)/N))^2.
    # The numerator is sin^2(pi frac) for every m.  Offsets are folded into
    # (-N/2, N/2] by subtractions that are exact in floating point; the usual
    # (d + 1/2) % 1 - 1/2 wrap rounds away the low bits of small offsets.
    off = x - np.arange(size)
    off = np.where(off > size / 2, off - size, np.where(off <= -size / 2, off + size, off))
    num = math.sin(math.pi * dist)
    return (num / (size * np.sin(np.pi * off / size))) ** 2


def qpe_distribution(op: EigenbasisOperator, eigenstate, t_bits: int = DEFAULT_T_BITS) -> QpeResult:
    if not 1 <= t_bits <= 16:
        raise ValueError("t_bits must be in 1..16")
    v = eigenstate.amplitudes if isinstance(eigenstate, StateVector) else np.asarray(eigenstate, dtype=complex)
    w = op.apply(v)
    lam = np.vdot(v, w)
    if np.linalg.norm(w - lam * v) > EIGEN_TOL:
        raise ValueError("state is not an eigenvector of the operator")
    phase = float(np.angle(lam) % TWO_PI)
    dist = dirichlet_distribution(phase, t_bits)
    top = int(np.argmax(dist))
    return QpeResult(t_bits, dist, top, TWO_PI * top / (1 << t_bits), phase)


def qpe_statevector(unitary: np.ndarray, eigenstate, t_bits: int) -> np.ndarray:
    """Outcome probabilities from a full ancilla + system simulation.

    Hadamards on t ancillas, controlled U^(2^(t-1-a)) from ancilla a (ancilla
    0 most significant), inverse Fourier transform on the ancillas.
    """
    v = eigenstate.amplitudes if isinstance(eigenstate, StateVector) else np.asarray(eigenstate, dtype=complex)
    size = 1 << t_bits
    reg = np.tile(v, (size, 1)) / math.sqrt(size)  # rows: ancilla basis state
    rows = np.arange(size)
    for a in range(t_bits):
        weight = 1 << (t_bits - 1 - a)
        power = np.linalg.matrix_power(unitary, weight)
        hit = (rows & weight) != 0
        reg[hit] = reg[hit] @ power.T
    m = np.arange(size)
    inv_qft = np.exp(-2j * math.pi * np.outer(m, m) / size) / math.sqrt(size)
    reg = inv_qft @ reg
    return np.sum(np.abs(reg) ** 2, axis=1)


class Estimate(NamedTuple):
    estimate: float
    truth: float
    error: float
    result: QpeResult


def estimate_theta_sum(zeros, t_bits: int = DEFAULT_T_BITS) -> Estimate:
    emap = _emap(zeros)
    res = qpe_distribution(theta_sum_operator(emap), uniform_eigen_superposition(emap), t_bits)
    truth = float(np.sum(emap.thetas) % TWO_PI)
    return Estimate(res.phase_estimate, truth, circular_distance(res.phase_estimate, truth), res)


def estimate_spacing_sum(zeros, t_bits: int = DEFAULT_T_BITS) -> Estimate:
    emap = _emap(zeros)
    res = qpe_distribution(spacing_sum_operator(emap), emap.vector(1), t_bits)
    truth = float((emap.thetas[-1] - emap.thetas[0]) % TWO_PI)
    return Estimate(res.phase_estimate, truth, circular_distance(res.phase_estimate, truth), res)
