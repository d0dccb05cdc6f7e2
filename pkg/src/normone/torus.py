"""Characters, Weyl sums, star discrepancy and counting fits over enumeration reports."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InvalidInput
from .hilbert90 import EnumerationReport


@dataclass(frozen=True)
class Character:
    """chi_k(t) = exp(2 pi i k.t) on R^rank / Z^rank."""

    k: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))

    @property
    def trivial(self) -> bool:
        return not any(self.k)

    def __len__(self):
        return len(self.k)


def _as_character(k) -> Character:
    if isinstance(k, Character):
        return k
    if isinstance(k, int):
        return Character((k,))
    return Character(tuple(k))


def character_eval(k, t: Sequence[float]) -> complex:
    k = _as_character(k)
    if len(k.k) != len(t):
        raise InvalidInput(f"character has dimension {len(k.k)}, point has {len(t)}")
    if k.trivial:
        return 1 + 0j
    phase = math.fsum(ki * ti for ki, ti in zip(k.k, t))
    return cmath.exp(2j * math.pi * (phase % 1.0))


@dataclass(frozen=True)
class WeylReport:
    r: float
    k: tuple[int, ...]
    S: complex
    count: int
    err: float

    @property
    def normalized(self) -> float:
        return abs(self.S) / self.count if self.count else 0.0

    def csv_row(self) -> list:
        return [repr(float(self.r)), *self.k, repr(self.S.real), repr(self.S.imag), repr(self.normalized), self.count]


def weyl_sum(report: EnumerationReport, k) -> WeylReport:
    """Sum of chi_k over the torus points of ``report`` (in report order)."""
    k = _as_character(k)
    if len(k.k) != report.rank:
        raise InvalidInput(f"character has dimension {len(k.k)}, torus has {report.rank}")
    if k.trivial:
        return WeylReport(report.bound, k.k, complex(report.count), report.count, 0.0)
    pts = report.points()
    kv = np.array(k.k, dtype=float)
    phase = np.mod(pts @ kv, 1.0)
    z = np.exp(2j * np.pi * phase)
    S = complex(math.fsum(z.real), math.fsum(z.imag))
    tol = np.array([c.err for c in report.classes])
    err = float(2 * math.pi * np.abs(kv).sum() * tol.sum()) + report.count * 4e-16
    return WeylReport(report.bound, k.k, S, report.count, err)


def _points(data) -> np.ndarray:
    if isinstance(data, EnumerationReport):
        pts = data.points()
    else:
        pts = np.asarray(data, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
    return np.mod(pts, 1.0)


def star_discrepancy(data, grid: int = 256) -> float:
    """Star discrepancy of points in [0, 1)^dim.

    Exact in dimension 1.  In higher dimension, the sup over anchored boxes is
    taken over corners on the lattice (1/grid) Z^dim only, so the value is an
    approximation with resolution 1/grid.
    """
    pts = _points(data)
    n = len(pts)
    if n == 0:
        raise InvalidInput("star discrepancy of an empty point set")
    dim = pts.shape[1]
    if dim == 0:
        return 0.0
    if dim == 1:
        x = np.sort(pts[:, 0])
        i = np.arange(1, n + 1)
        return float(max(np.max(i / n - x), np.max(x - (i - 1) / n)))
    if grid < 1:
        raise InvalidInput("grid must be positive")
    cells = np.minimum((pts * grid).astype(np.int64), grid - 1)
    hist = np.zeros((grid,) * dim, dtype=np.int64)
    np.add.at(hist, tuple(cells.T), 1)
    counts = hist
    for axis in range(dim):
        counts = np.cumsum(counts, axis=axis)
    # counts[i_1..i_k] = #points with t_j < (i_j + 1)/grid
    edges = np.arange(1, grid + 1) / grid
    vol = edges
    for _ in range(dim - 1):
        vol = np.multiply.outer(vol, edges)
    return float(np.max(np.abs(counts / n - vol)))


class CountingFit(NamedTuple):
    C_hat: float
    residuals: np.ndarray
    exponent: float  # diagnostic log-log slope; 1 is expected


def counting_fit(data) -> CountingFit:
    """Least-squares fit count ~ C_hat * r through the origin.

    ``data`` is a sequence of EnumerationReports or of (r, count) pairs with
    at least three strictly increasing bounds.
    """
    pairs = [(rep.bound, rep.count) if isinstance(rep, EnumerationReport) else tuple(rep) for rep in data]
    if len(pairs) < 3:
        raise InvalidInput(f"counting_fit needs at least 3 bounds, got {len(pairs)}")
    r = np.array([float(p[0]) for p in pairs])
    c = np.array([float(p[1]) for p in pairs])
    if np.any(np.diff(r) <= 0):
        raise InvalidInput("bounds must be strictly increasing")
    C_hat = float(np.dot(r, c) / np.dot(r, r))
    residuals = c - C_hat * r
    exponent = float(np.polyfit(np.log(r), np.log(np.maximum(c, 1)), 1)[0])
    return CountingFit(C_hat, residuals, exponent)
