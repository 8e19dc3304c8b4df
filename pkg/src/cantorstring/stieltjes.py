"""Eigenvalue counting for discrete Krein/Stieltjes strings.

A string is a finite set of point masses m_1..m_n at positions
a < x_1 < ... < x_n < b. Its transverse vibration spectrum is the
generalized eigenvalue problem K u = lambda M u with M = diag(m) and K the
tridiagonal stiffness built from the inverse link lengths l_k:

    Dirichlet (ends clamped, boundary links included)

        K_D[k, k]   = 1/l_{k-1} + 1/l_k       l_0 = x_1 - a, l_n = b - x_n
        K_D[k, k+1] = -1/l_k

    Neumann (free ends, interior links only)

        K_N[1, 1] = 1/l_1,  K_N[n, n] = 1/l_{n-1},  interior rows as K_D

K_N is singular with the constant null vector, so the Neumann count
includes the zero eigenvalue and is >= 1 for every shift x >= 0.

Counting N(x) = #{lambda <= x} is one symmetric factorization of K - x M:
by Sylvester's law of inertia the number of non-positive pivots of the
d_k recurrence

    d_k = (K - x M)[k, k] - b_{k-1}^2 / d_{k-1}

equals the count. Ties are pulled inside the count by shifting to
x * (1 + 1e-15); a vanishing pivot is replaced by a tiny negative value
(the classical bisection safeguard), which only matters on a measure-zero
set of shifts.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .measure import AtomizedMeasure, atomize, build_cells
from .tree import RandomTree

TIE_SHIFT = 1.0 + 1e-15
_SAFMIN = np.finfo(float).tiny

_BOUNDARIES = ("dirichlet", "neumann")


class StieltjesString:
    """Point masses on an interval, with cached link lengths.

    Atoms must lie strictly inside (a, b); coincident positions are merged
    at construction (masses summed), so interior links are strictly
    positive.
    """

    def __init__(self, interval: Tuple[float, float],
                 positions: Sequence[float], masses: Sequence[float]):
        a, b = float(interval[0]), float(interval[1])
        pos = np.asarray(positions, dtype=float)
        mas = np.asarray(masses, dtype=float)
        if pos.size == 0:
            raise ValueError("string needs at least one atom")
        if np.any(mas <= 0):
            raise ValueError("masses must be positive")
        order = np.argsort(pos, kind="stable")
        pos, mas = pos[order], mas[order]
        keep = np.concatenate(([True], np.diff(pos) > 0))
        if not np.all(keep):
            merged = np.add.reduceat(mas, np.flatnonzero(keep))
            pos, mas = pos[keep], merged
        if pos[0] <= a or pos[-1] >= b:
            raise ValueError("atoms must lie strictly inside the interval")
        self.interval = (a, b)
        self.positions = pos
        self.masses = mas
        self.links = np.diff(np.concatenate(([a], pos, [b])))

    @property
    def n(self) -> int:
        return self.positions.size

    @classmethod
    def from_measure(cls, measure: AtomizedMeasure) -> "StieltjesString":
        return cls(measure.interval, measure.positions, measure.masses)

    @classmethod
    def uniform(cls, n: int, interval: Tuple[float, float] = (0.0, 1.0),
                total_mass: float = 1.0) -> "StieltjesString":
        """n equal masses at the midpoints of n equal subintervals."""
        a, b = interval
        pos = a + (b - a) * (2 * np.arange(1, n + 1) - 1) / (2 * n)
        return cls(interval, pos, np.full(n, total_mass / n))

    def pencil(self, boundary: str) -> Tuple[np.ndarray, np.ndarray]:
        """(diagonal of K, off-diagonal of K) for the requested boundary."""
        if boundary not in _BOUNDARIES:
            raise ValueError(f"boundary must be one of {_BOUNDARIES}, got {boundary!r}")
        inv = 1.0 / self.links
        if boundary == "dirichlet":
            return inv[:-1] + inv[1:], -inv[1:-1]
        diag = np.zeros(self.n)
        diag[:-1] += inv[1:-1]
        diag[1:] += inv[1:-1]
        return diag, -inv[1:-1]


@dataclass(frozen=True)
class CountingSample:
    x: float
    count_dirichlet: int
    count_neumann: int


def _pivot_counts(diag: np.ndarray, off: np.ndarray, masses: np.ndarray,
                  xs: np.ndarray) -> np.ndarray:
    """Non-positive pivot counts of K - x' M for every shift, x' = x * (1 + 1e-15)."""
    shifts = xs * TIE_SHIFT
    off2 = off * off
    pivmin = _SAFMIN * max(1.0, off2.max() if off2.size else 1.0)
    d = diag[0] - shifts * masses[0]
    np.copyto(d, -pivmin, where=np.abs(d) < pivmin)
    counts = (d <= 0).astype(np.int64)
    for k in range(1, diag.size):
        d = diag[k] - shifts * masses[k] - off2[k - 1] / d
        np.copyto(d, -pivmin, where=np.abs(d) < pivmin)
        counts += d <= 0
    return counts


def _counts(string: StieltjesString, xs: Sequence[float], boundary: str) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs < 0):
        raise ValueError("spectral parameter x must be >= 0")
    diag, off = string.pencil(boundary)
    counts = _pivot_counts(diag, off, string.masses, xs)
    if boundary == "neumann":
        # the constant vector is an exact null vector of K_N, so the zero
        # eigenvalue belongs to the count for every x >= 0; the final pivot
        # carries it and floats may round it either way
        np.maximum(counts, 1, out=counts)
    return counts


def count_dirichlet(string: StieltjesString, x: float) -> int:
    """Number of Dirichlet eigenvalues <= x."""
    return int(_counts(string, [x], "dirichlet")[0])


def count_neumann(string: StieltjesString, x: float) -> int:
    """Number of Neumann eigenvalues <= x, the zero mode included."""
    return int(_counts(string, [x], "neumann")[0])


def counting_curve(string: StieltjesString, xs: Sequence[float]) -> List[CountingSample]:
    """Both counting functions on a grid, one pivot sweep per boundary."""
    xs = sorted(float(x) for x in xs)
    nd = _counts(string, xs, "dirichlet")
    nn = _counts(string, xs, "neumann")
    return [CountingSample(x, int(d), int(n)) for x, d, n in zip(xs, nd, nn)]


def eigenvalue(string: StieltjesString, k: int, boundary: str = "dirichlet") -> float:
    """k-th eigenvalue by bisection on the counting function.

    Dirichlet eigenvalues are indexed 1..n, Neumann 0..n-1. Relative
    tolerance 1e-10.
    """
    n = string.n
    if boundary == "dirichlet":
        if not 1 <= k <= n:
            raise ValueError(f"Dirichlet index must be in 1..{n}, got {k}")
        target = k
    elif boundary == "neumann":
        if not 0 <= k <= n - 1:
            raise ValueError(f"Neumann index must be in 0..{n - 1}, got {k}")
        target = k + 1
    else:
        raise ValueError(f"boundary must be one of {_BOUNDARIES}, got {boundary!r}")
    diag, off = string.pencil(boundary)
    floor = 1 if boundary == "neumann" else 0

    def count(x: float) -> int:
        raw = int(_pivot_counts(diag, off, string.masses, np.array([x]))[0])
        return max(raw, floor)

    if count(0.0) >= target:
        return 0.0
    lo, hi = 0.0, 1.0
    while count(hi) < target:
        lo, hi = hi, hi * 2.0
        if hi > 1e300:
            raise RuntimeError("eigenvalue bracket exceeded float range")
    while hi - lo > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if count(mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Dense oracle (small strings)
# ---------------------------------------------------------------------------

def dense_eigenvalues(string: StieltjesString, boundary: str) -> np.ndarray:
    """All pencil eigenvalues via a dense symmetric tridiagonal solve.

    The generalized problem is reduced to standard form with
    D = diag(1/sqrt(m)): eig(D K D).
    """
    diag, off = string.pencil(boundary)
    m = string.masses
    if string.n == 1:
        return np.array([diag[0] / m[0]])
    s = 1.0 / np.sqrt(m)
    return eigvalsh_tridiagonal(diag / m, off * s[:-1] * s[1:])


def dense_count(string: StieltjesString, x: float, boundary: str) -> int:
    if x < 0:
        raise ValueError("spectral parameter x must be >= 0")
    count = int((dense_eigenvalues(string, boundary) <= x * TIE_SHIFT).sum())
    if boundary == "neumann":
        count = max(count, 1)  # exact zero mode, same reasoning as _counts
    return count


# ---------------------------------------------------------------------------
# Bracketing check
# ---------------------------------------------------------------------------

def check_bracketing(tree: RandomTree, n: int, x: float) -> bool:
    """Four-term chain between the whole string and its root-child pieces.

        sum_i N_D^(i)(r_i m_i x) <= N_D(x) <= N_N(x) <= sum_i N_N^(i)(r_i m_i x)

    The whole string is the depth-n atomization; piece i is the depth-(n-1)
    atomization of the subtree rooted at child i, evaluated at the composed
    scale r_i * m_i * x.
    """
    if n < 1:
        raise ValueError(f"bracketing needs generation n >= 1, got {n}")
    if x < 0:
        raise ValueError("spectral parameter x must be >= 0")
    whole = StieltjesString.from_measure(atomize(build_cells(tree, n)))
    nd, nn = count_dirichlet(whole, x), count_neumann(whole, x)
    root_letter = tree.letter_at(())
    sum_d = 0
    sum_n = 0
    for i, (s, w) in enumerate(zip(root_letter.maps, root_letter.weights), start=1):
        piece = StieltjesString.from_measure(atomize(build_cells(tree.subtree((i,)), n - 1)))
        y = s.ratio * w * x
        sum_d += count_dirichlet(piece, y)
        sum_n += count_neumann(piece, y)
    return sum_d <= nd <= nn <= sum_n


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def export_curve_csv(samples: Iterable[CountingSample], path: str | Path,
                     header: str = "", boundary: str = "both") -> None:
    lines = []
    if header:
        lines.append(header)
    if boundary == "both":
        lines.append("x,N_D,N_N")
        for s in samples:
            lines.append(f"{s.x!r},{s.count_dirichlet},{s.count_neumann}")
    elif boundary == "dirichlet":
        lines.append("x,N_D")
        for s in samples:
            lines.append(f"{s.x!r},{s.count_dirichlet}")
    else:
        lines.append("x,N_N")
        for s in samples:
            lines.append(f"{s.x!r},{s.count_neumann}")
    Path(path).write_text("\n".join(lines) + "\n")


def export_string_txt(string: StieltjesString, path: str | Path, header: str = "") -> None:
    lines = []
    if header:
        lines.append(header)
    for p, m in zip(string.positions, string.masses):
        lines.append(f"{float(p)!r} {float(m)!r}")
    Path(path).write_text("\n".join(lines) + "\n")
