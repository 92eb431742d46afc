"""The Cayley-transform unitary whose eigenvalues are s*/s for given zeros.

Layout convention (shared by every module): the dense k x k matrices carry
b_k, b_{k-1}, ..., b_3 on the first k-2 diagonal slots and the 2x2 block
mixing b_1 and b_2 on the last two rows/columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .zeros import ZeroTable

MAX_DENSE = 4096


def imag_parts(zeros) -> np.ndarray:
    """Imaginary parts b_1..b_k from a ZeroTable or a plain sequence."""
    b = zeros.b if isinstance(zeros, ZeroTable) else np.asarray(zeros, dtype=float).reshape(-1)
    if b.size < 2:
        raise ValueError("at least two zeros are required")
    if np.unique(b).size != b.size:
        raise ValueError("duplicate zeros are not supported")
    if np.any(b <= 0.5):
        raise ValueError("zero imaginary parts must exceed 1/2")
    return np.array(b, dtype=float)


def wrap_phase(x):
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x, dtype=float), 2 * np.pi)


def _check_b(b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if np.any(b <= 0.5):
        raise ValueError("phase formula requires b > 1/2")
    return b


def theta_exact(b):
    """Eigenphase -pi + arctan(-b / (1/4 - b^2)) of (1/2 - ib)/(1/2 + ib)."""
    b = _check_b(b)
    out = wrap_phase(-np.pi + np.arctan(-b / (0.25 - b * b)))
    return float(out) if out.ndim == 0 else out


def theta_approx(b):
    """Large-b approximation -pi + 1/b."""
    b = _check_b(b)
    out = -np.pi + 1.0 / b
    return float(out) if out.ndim == 0 else out


def cayley_phase(b):
    """(1 - 2ib) / (1 + 2ib), i.e. s*/s for s = 1/2 + ib."""
    b = np.asarray(b, dtype=float)
    return (1.0 - 2j * b) / (1.0 + 2j * b)


@dataclass(frozen=True)
class HermitianB:
    k: int
    diag: np.ndarray  # b_k, b_{k-1}, ..., b_3
    block: np.ndarray  # real symmetric 2x2 built from b_1, b_2

    def dense(self) -> np.ndarray:
        out = np.zeros((self.k, self.k))
        out[np.arange(self.k - 2), np.arange(self.k - 2)] = self.diag
        out[-2:, -2:] = self.block
        return out

    def eigenvalues(self) -> np.ndarray:
        """b_1, b_2, ..., b_k from the structure (no eigensolver)."""
        p, q = self.block[0, 0], self.block[0, 1]
        return np.concatenate([[p + q, p - q], self.diag[::-1]])


def build_b_matrix(zeros) -> HermitianB:
    b = imag_parts(zeros)
    b1, b2 = b[0], b[1]
    block = np.array([[(b1 + b2) / 2, (b1 - b2) / 2], [(b1 - b2) / 2, (b1 + b2) / 2]])
    return HermitianB(b.size, b[:1:-1].copy(), block)


def build_g_matrix(zeros) -> np.ndarray:
    """Dense G = I/2 + iB; its eigenvalues are the zeros 1/2 + i b_j."""
    hb = build_b_matrix(zeros)
    return 0.5 * np.eye(hb.k) + 1j * hb.dense()


@dataclass(frozen=True)
class RiemannUnitary:
    """Structured U_R = (I - 2iB)(I + 2iB)^{-1}: k-2 phases plus a 2x2 block."""

    k: int
    diag_phases: np.ndarray  # e^{i theta_j}, j = k..3
    block: np.ndarray
    b: np.ndarray  # source b_1..b_k in input order

    def dense(self, force: bool = False) -> np.ndarray:
        if self.k > MAX_DENSE and not force:
            raise ValueError(f"dense U_R limited to k <= {MAX_DENSE}; pass force=True")
        out = np.zeros((self.k, self.k), dtype=complex)
        out[np.arange(self.k - 2), np.arange(self.k - 2)] = self.diag_phases
        out[-2:, -2:] = self.block
        return out

    def apply(self, vec: np.ndarray, adjoint: bool = False) -> np.ndarray:
        """U_R @ vec (or U_R^dagger @ vec) in O(k); vec may carry trailing batch axes."""
        vec = np.asarray(vec, dtype=complex)
        if vec.shape[0] != self.k:
            raise ValueError("dimension mismatch")
        diag = np.conj(self.diag_phases) if adjoint else self.diag_phases
        block = self.block.conj().T if adjoint else self.block
        out = np.empty_like(vec)
        shape = (self.k - 2,) + (1,) * (vec.ndim - 1)
        out[:-2] = diag.reshape(shape) * vec[:-2]
        out[-2:] = np.tensordot(block, vec[-2:], axes=(1, 0))
        return out


def _block_cayley(block: np.ndarray) -> np.ndarray:
    # closed-form (I - 2iM)(I + 2iM)^{-1} for M = [[p, q], [q, p]]
    p, q = block[0, 0], block[0, 1]
    x, y = 1 + 2j * p, 2j * q
    inv = np.array([[x, -y], [-y, x]]) / (x * x - y * y)
    return np.array([[1 - 2j * p, -2j * q], [-2j * q, 1 - 2j * p]]) @ inv


def build_unitary(zeros) -> RiemannUnitary:
    b = imag_parts(zeros)
    hb = build_b_matrix(b)
    return RiemannUnitary(hb.k, cayley_phase(hb.diag), _block_cayley(hb.block), b)


def eigenphases(u: RiemannUnitary) -> np.ndarray:
    """theta_1..theta_k, ordered by source-zero position."""
    # the block is symmetric with equal diagonal: eigenvectors (1, +-1)/sqrt(2)
    lam1 = u.block[0, 0] + u.block[0, 1]
    lam2 = u.block[0, 0] - u.block[0, 1]
    return wrap_phase(np.angle(np.concatenate([[lam1, lam2], u.diag_phases[::-1]])))


class Spacing(NamedTuple):
    theta: np.ndarray
    delta: np.ndarray


def _ordered(zeros) -> np.ndarray:
    b = imag_parts(zeros)
    if not np.all(np.diff(b) > 0):
        raise ValueError("spacing requires strictly increasing zeros")
    return b


def spacing_series(zeros) -> Spacing:
    """(theta_j, theta_j - theta_{j+1}) for consecutive zeros, exact phases."""
    th = theta_exact(_ordered(zeros))
    return Spacing(th[:-1], th[:-1] - th[1:])


def spacing_analytic(zeros, variant: str = "density") -> Spacing:
    """Mean-gap prediction of the phase spacing.

    ``density`` uses the mean zero gap 2 pi / ln(b_j / 2 pi); ``literal``
    uses 2 pi ln(j) with the ordinal j, which needs known ordinals.  Both
    are multiplied by (pi + theta_{j+1})(pi + theta_j).
    """
    b = _ordered(zeros)
    th = theta_exact(b)
    factor = (np.pi + th[1:]) * (np.pi + th[:-1])
    if variant == "density":
        gap = 2 * np.pi / np.log(b[:-1] / (2 * np.pi))
    elif variant == "literal":
        idx = zeros.index if isinstance(zeros, ZeroTable) else np.zeros(b.size, dtype=int)
        if np.any(idx <= 0):
            raise ValueError("literal variant needs known zero ordinals")
        gap = 2 * np.pi * np.log(idx[:-1].astype(float))
    else:
        raise ValueError(f"unknown spacing variant {variant!r}")
    return Spacing(th[:-1], gap * factor)


def windowed_mean(values, width: int) -> np.ndarray:
    """Means over consecutive non-overlapping windows; a short tail is dropped."""
    values = np.asarray(values, dtype=float)
    n = values.size // width
    return values[: n * width].reshape(n, width).mean(axis=1)


def approximation_error(b: float) -> float:
    """|theta_exact(b) - theta_approx(b)|, about 1/(12 b^3)."""
    return abs(theta_exact(b) - theta_approx(b))


__all__ = [
    "HermitianB",
    "MAX_DENSE",
    "RiemannUnitary",
    "Spacing",
    "approximation_error",
    "build_b_matrix",
    "build_g_matrix",
    "build_unitary",
    "cayley_phase",
    "eigenphases",
    "imag_parts",
    "spacing_analytic",
    "spacing_series",
    "theta_approx",
    "theta_exact",
    "windowed_mean",
    "wrap_phase",
]
