"""Zero tables: loading, validation, Gram-interval root finding and counting."""

from __future__ import annotations

import functools
import math
import threading
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np
from scipy.special import lambertw

from .siegel import TWO_PI, rs_theta, rs_z

MIN_IMAG = 6.0
SUBDIVISIONS = 8
REFINE_POINTS = 33
REFINE_DEPTH = 3
EMBEDDED_COUNT = 100


class ZeroFileError(ValueError):
    """A zero file could not be parsed or is not strictly increasing."""


@dataclass(frozen=True)
class ZetaZero:
    index: int
    b: float

    @property
    def a(self) -> float:
        return 0.5

    @property
    def s(self) -> complex:
        return complex(0.5, self.b)


@dataclass(frozen=True)
class ZeroSource:
    kind: str  # "file", "embedded", "computed" or "values"
    path: str | None = None
    t_lo: float | None = None
    t_hi: float | None = None

    def __str__(self) -> str:
        if self.kind == "file":
            return f"file({self.path})"
        if self.kind == "computed":
            return f"computed({self.t_lo}, {self.t_hi})"
        return self.kind


@dataclass(frozen=True)
class ZeroTable:
    """Ordered imaginary parts of critical-line zeros.

    ``index`` holds 1-based ordinals, or 0 where the ordinal is unknown.
    """

    b: np.ndarray
    index: np.ndarray
    source: ZeroSource = field(default_factory=lambda: ZeroSource("values"))

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float).reshape(-1)
        index = np.asarray(self.index, dtype=np.int64).reshape(-1)
        if index.shape != b.shape:
            raise ValueError("index and b must have the same length")
        if b.size and not np.all(b > MIN_IMAG):
            raise ValueError(f"zero imaginary parts must exceed {MIN_IMAG}")
        if b.size > 1 and not np.all(np.diff(b) > 0):
            raise ValueError("zero table must be strictly increasing")
        b.setflags(write=False)
        index.setflags(write=False)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "index", index)

    @classmethod
    def from_values(cls, values: Sequence[float], first_index: int = 0, source=None) -> "ZeroTable":
        b = np.asarray(values, dtype=float)
        if first_index:
            index = np.arange(first_index, first_index + b.size)
        else:
            index = np.zeros(b.size, dtype=np.int64)
        return cls(b, index, source or ZeroSource("values"))

    def __len__(self) -> int:
        return int(self.b.size)

    @property
    def k(self) -> int:
        return len(self)

    @property
    def s(self) -> np.ndarray:
        return 0.5 + 1j * self.b

    def __getitem__(self, item):
        if isinstance(item, slice):
            return ZeroTable(self.b[item], self.index[item], self.source)
        return ZetaZero(int(self.index[item]), float(self.b[item]))

    def __iter__(self) -> Iterator[ZetaZero]:
        for i in range(len(self)):
            yield self[i]

    def take(self, count: int, offset: int = 1) -> "ZeroTable":
        """Return ``count`` zeros starting at 1-based position ``offset``."""
        if offset < 1 or count < 0:
            raise ValueError("offset must be >= 1 and count >= 0")
        if offset - 1 + count > len(self):
            raise ValueError(
                f"table holds {len(self)} zeros, {offset - 1 + count} requested"
            )
        return self[offset - 1 : offset - 1 + count]


def load_zeros_file(path, max_count: int | None = None, first_index: int = 1) -> ZeroTable:
    """Read one positive decimal per line; '#' starts a comment.

    The file is assumed to start at ordinal ``first_index`` (Odlyzko-style
    tables start at the first zero); pass 0 when ordinals are unknown.
    """
    if max_count is not None and max_count < 1:
        raise ValueError("max_count must be a positive integer")
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except (OSError, UnicodeDecodeError) as exc:
        raise ZeroFileError(f"cannot read zero file {path}: {exc}") from exc
    values: list[float] = []
    prev = -math.inf
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            val = float(line)
        except ValueError:
            raise ZeroFileError(f"{path}:{lineno}: cannot parse {line!r}") from None
        if not (val > 0 and math.isfinite(val)):
            raise ZeroFileError(f"{path}:{lineno}: value must be positive and finite")
        if val <= prev:
            raise ZeroFileError(f"{path}:{lineno}: sequence not strictly increasing")
        if val <= MIN_IMAG:
            raise ZeroFileError(f"{path}:{lineno}: {val} is below the first nontrivial zero")
        prev = val
        values.append(val)
        if max_count is not None and len(values) >= max_count:
            break
    return ZeroTable.from_values(values, first_index, ZeroSource("file", path=str(path)))


def format_zeros(table: ZeroTable) -> str:
    """Canonical file text: shortest round-trip repr, one value per line."""
    return "".join(f"{v!r}\n" for v in table.b.tolist())


def write_zeros_file(table: ZeroTable, path) -> None:
    Path(path).write_text(format_zeros(table), encoding="ascii", newline="\n")


def count_zeros_asymptotic(T: float) -> float:
    """Main term (T / 2 pi) log(T / 2 pi e) of the Riemann-von Mangoldt count."""
    if not T > TWO_PI * math.e:
        raise ValueError("count_zeros_asymptotic requires T > 2 pi e")
    return T / TWO_PI * math.log(T / (TWO_PI * math.e))


def _smooth_count(t):
    # theta(t)/pi + 1 tracks N(t) up to S(t) and O(1/t)
    return np.asarray(rs_theta(t)) / math.pi + 1.0


def gram_points(n_lo: int, n_hi: int) -> np.ndarray:
    """Gram points g_n (theta(g_n) = n pi) for n_lo <= n <= n_hi, n >= -1."""
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    if n.size == 0:
        return n
    if n[0] < -1:
        raise ValueError("Gram points are defined here for n >= -1")
    x = n + 0.125
    g = TWO_PI * x / np.real(lambertw(x / math.e))
    for _ in range(6):
        g = g - (rs_theta(g) - n * math.pi) / (0.5 * np.log(g / TWO_PI))
    return g


def _bisect(lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    z_lo = rs_z(lo)
    while lo.size and np.max(hi - lo) >= tol:
        mid = 0.5 * (lo + hi)
        z_mid = rs_z(mid)
        left = np.sign(z_mid) == np.sign(z_lo)
        lo = np.where(left, mid, lo)
        z_lo = np.where(left, z_mid, z_lo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _brackets(grid: np.ndarray, z: np.ndarray, depth: int = 0):
    """Sign-change brackets on ``grid``, refining around near-miss dips.

    A local minimum of |Z| without a sign change between its neighbours is
    the signature of two close zeros falling inside one grid cell.
    """
    exact = grid[1:][z[1:] == 0.0]
    sz = np.sign(z)
    change = np.flatnonzero(sz[:-1] * sz[1:] < 0)
    lo, hi = [grid[change]], [grid[change + 1]]
    ex = [exact]
    if depth < REFINE_DEPTH and grid.size >= 3:
        az = np.abs(z)
        inner = np.arange(1, grid.size - 1)
        dip = inner[
            (az[inner] < az[inner - 1])
            & (az[inner] < az[inner + 1])
            & (sz[inner - 1] == sz[inner])
            & (sz[inner] == sz[inner + 1])
        ]
        for i in dip:
            fine = np.linspace(grid[i - 1], grid[i + 1], REFINE_POINTS)
            f_lo, f_hi, f_ex = _brackets(fine, rs_z(fine), depth + 1)
            lo.append(f_lo)
            hi.append(f_hi)
            ex.append(f_ex)
    return np.concatenate(lo), np.concatenate(hi), np.concatenate(ex)


def find_zeros_in_range(t_lo: float, t_hi: float, tol: float = 1e-10) -> ZeroTable:
    """All sign changes of Z on (t_lo, t_hi], refined by bisection to ``tol``.

    The scan grid is the Gram points inside the window, each interval cut
    into 8 pieces; cells around non-crossing dips of |Z| are re-sampled.
    A warning is issued when the count strays from the smooth counting
    function by more than 2.
    """
    if not (10.0 <= t_lo < t_hi):
        raise ValueError("find_zeros_in_range requires 10 <= t_lo < t_hi")
    n_lo = int(math.floor(rs_theta(t_lo) / math.pi))
    n_hi = int(math.ceil(rs_theta(t_hi) / math.pi))
    g = gram_points(max(n_lo, -1), n_hi)
    knots = np.concatenate([[t_lo], g[(g > t_lo) & (g < t_hi)], [t_hi]])
    frac = np.arange(SUBDIVISIONS) / SUBDIVISIONS
    grid = (knots[:-1, None] + np.diff(knots)[:, None] * frac[None, :]).ravel()
    grid = np.append(grid, t_hi)
    lo, hi, exact = _brackets(grid, rs_z(grid))
    roots = _bisect(lo, hi, tol)
    roots = np.unique(np.concatenate([roots, exact]))
    expected = float(_smooth_count(t_hi) - _smooth_count(t_lo))
    if abs(roots.size - expected) > 2:
        warnings.warn(
            f"found {roots.size} zeros in [{t_lo}, {t_hi}], counting function "
            f"suggests {expected:.1f}; some zeros may have been missed",
            RuntimeWarning,
            stacklevel=2,
        )
    first = 1 if t_lo <= 14.0 else 0
    return ZeroTable.from_values(roots, first, ZeroSource("computed", t_lo=t_lo, t_hi=t_hi))


@functools.lru_cache(maxsize=1)
def embedded_zeros() -> ZeroTable:
    """The first 100 zeros shipped with the package."""
    ref = resources.files("riemannqc.zeros") / "data" / "zeros100.txt"
    with resources.as_file(ref) as p:
        table = load_zeros_file(p)
    return ZeroTable(table.b, table.index, ZeroSource("embedded"))


# largest computed table so far; shorter requests are served from it
_computed: list[ZeroTable] = []
_computed_lock = threading.Lock()


def height_for_count(count: int) -> float:
    """A height T whose smooth zero count exceeds ``count`` by a small margin."""
    target = count + 3 + 0.01 * count
    # theta(T)/pi + 1 = target  <=>  T is a Gram point of order target - 1
    return float(gram_points(int(math.ceil(target)), int(math.ceil(target)))[0])


def first_zeros(count: int, offset: int = 1) -> ZeroTable:
    """Zeros with ordinals offset .. offset+count-1, embedded when possible."""
    last = offset - 1 + count
    if last <= EMBEDDED_COUNT:
        return embedded_zeros().take(count, offset)
    with _computed_lock:
        if not _computed or len(_computed[0]) < last:
            _computed[:] = [find_zeros_in_range(10.0, round(height_for_count(last), 3))]
        table = _computed[0]
    return table.take(count, offset)
