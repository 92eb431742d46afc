"""Riemann-Siegel theta and Z functions on the critical line.

``rs_z`` is real valued and its real roots are the imaginary parts of the
nontrivial zeta zeros.  Two evaluators are used:

* below ``EM_CUTOFF`` the zeta value is summed directly with Euler-Maclaurin
  (accurate to ~1e-12 there, and the Riemann-Siegel remainder series is too
  coarse at these heights);
* above it, the Riemann-Siegel main sum plus the remainder terms C0..C4.

Both accept scalars or numpy arrays.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy.special import bernoulli, factorial

TWO_PI = 2.0 * math.pi

EM_CUTOFF = 400.0
_EM_TERMS = 16
_CHUNK = 2048


def _theta_series(t):
    return (
        t / 2.0 * np.log(t / TWO_PI)
        - t / 2.0
        - math.pi / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
        + 127.0 / (430080.0 * t**7)
    )


def rs_theta(t):
    """Riemann-Siegel theta function from its large-t asymptotic series.

    Requires ``t >= 1``; the series is accurate to ~1e-9 at t = 10 and to
    machine precision from t ~ 30 on.
    """
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 1.0):
        raise ValueError("rs_theta requires t >= 1")
    out = _theta_series(arr)
    return float(out) if out.ndim == 0 else out


# Taylor coefficients of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
# about p = 1/2, in the variable h = p - 1/2.  Psi is entire (every zero of
# the denominator is also a zero of the numerator) so the series converges on
# the whole interval p in [0, 1).


def _psi_taylor(order: int = 64) -> np.ndarray:
    # numerator: cos(2 pi h^2 - 5 pi / 8); denominator: -cos(2 pi h).
    # The quotient recurrence amplifies rounding by ~16x per h^2 order (the
    # denominator vanishes at h = +-1/4), so it runs in extended precision.
    with mpmath.workdps(120):
        two_pi = 2 * mpmath.pi
        c, s = mpmath.cos(5 * mpmath.pi / 8), mpmath.sin(5 * mpmath.pi / 8)
        num = [mpmath.mpf(0)] * order
        den = [mpmath.mpf(0)] * order
        for m in range(order // 2):
            x = two_pi**m / mpmath.factorial(m)
            num[2 * m] += (c, s, -c, -s)[m % 4] * x
            den[2 * m] = -((-1) ** m) * two_pi ** (2 * m) / mpmath.factorial(2 * m)
        out = []
        for n in range(order):
            acc = num[n] - mpmath.fsum(out[i] * den[n - i] for i in range(n))
            out.append(acc / den[0])
        return np.array([float(v) for v in out])


_PSI = _psi_taylor()


def _psi_derivative(h: np.ndarray, d: int) -> np.ndarray:
    n = np.arange(d, _PSI.size)
    coef = _PSI[d:] * factorial(n) / factorial(n - d)
    # Horner in h
    acc = np.zeros_like(h)
    for c in coef[::-1]:
        acc = acc * h + c
    return acc


def _remainder(a: np.ndarray, p: np.ndarray) -> np.ndarray:
    h = p - 0.5
    d = {k: _psi_derivative(h, k) for k in (0, 1, 2, 3, 4, 5, 6, 8, 9, 12)}
    pi2, pi4, pi6, pi8 = math.pi**2, math.pi**4, math.pi**6, math.pi**8
    c0 = d[0]
    c1 = -d[3] / (96 * pi2)
    c2 = d[6] / (18432 * pi4) + d[2] / (64 * pi2)
    c3 = -d[9] / (5308416 * pi6) - d[5] / (3840 * pi4) - d[1] / (64 * pi2)
    c4 = (
        d[12] / (2038431744 * pi8)
        + 11 * d[8] / (5898240 * pi6)
        + 19 * d[4] / (24576 * pi4)
        + d[0] / (128 * pi2)
    )
    inv = 1.0 / a
    return np.sqrt(inv) * (c0 + inv * (c1 + inv * (c2 + inv * (c3 + inv * c4))))


def _z_siegel(t: np.ndarray) -> np.ndarray:
    a = np.sqrt(t / TWO_PI)
    nmax = np.floor(a).astype(int)
    p = a - nmax
    n = np.arange(1, int(nmax.max()) + 1, dtype=float)
    phase = _theta_series(t)[:, None] - t[:, None] * np.log(n)[None, :]
    terms = np.cos(phase) / np.sqrt(n)[None, :]
    terms[n[None, :] > nmax[:, None]] = 0.0
    main = 2.0 * terms.sum(axis=1)
    sign = np.where(nmax % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return main + sign * _remainder(a, p)


_BERN = bernoulli(2 * _EM_TERMS)
_EM_WEIGHTS = np.array([_BERN[2 * k] / math.factorial(2 * k) for k in range(1, _EM_TERMS + 1)])


def _z_euler_maclaurin(t: np.ndarray) -> np.ndarray:
    s = 0.5 + 1j * t
    cut = (t / math.pi).astype(int) + 30
    n = np.arange(1, int(cut.max()), dtype=float)
    terms = np.exp(-s[:, None] * np.log(n)[None, :])
    terms[n[None, :] >= cut[:, None]] = 0.0
    big = cut.astype(float)
    total = terms.sum(axis=1) + big ** (1 - s) / (s - 1) + 0.5 * big ** (-s)
    fac = s * big ** (-s - 1)
    for k in range(1, _EM_TERMS + 1):
        total = total + _EM_WEIGHTS[k - 1] * fac
        fac = fac * (s + 2 * k - 1) * (s + 2 * k) / big**2
    return (np.exp(1j * _theta_series(t)) * total).real


def rs_z(t):
    """Hardy Z function Z(t) = exp(i theta(t)) zeta(1/2 + i t), for t >= 10."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 10.0):
        raise ValueError("rs_z requires t >= 10")
    flat = arr.ravel()
    out = np.empty_like(flat)
    low = flat < EM_CUTOFF
    for mask, fn in ((low, _z_euler_maclaurin), (~low, _z_siegel)):
        idx = np.flatnonzero(mask)
        for start in range(0, idx.size, _CHUNK):
            sel = idx[start : start + _CHUNK]
            out[sel] = fn(flat[sel])
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out
