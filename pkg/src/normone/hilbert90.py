"""The Hilbert-90 map, visible points, and enumeration of visible classes.

A visible class is the orbit ``U * alpha`` of a primitive algebraic integer
(coordinate gcd 1 over the integral basis).  Each class is stored through a
canonical representative (see :func:`normone.units.unit_reduce`) together
with its height ``h = |N(alpha)|`` and the torus point of ``alpha / sigma(alpha)``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import InvalidInput, ResourceError
from .field import Element, apply_sigma, div_exact, norm, sigma_place_permutation
from .units import LogVector, UnitSystem, log_embed, torus_coordinates, unit_reduce

DEFAULT_MAX_BOX_POINTS = 4 * 10**8
CHUNK_POINTS = 1 << 19
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class VisibleClass:
    alpha: Element
    h: int
    torus_point: tuple[float, ...]
    err: float

    @property
    def coords(self) -> tuple[int, ...]:
        return self.alpha.int_coords()


@dataclass
class EnumerationReport:
    """Visible classes with ``h < bound``, sorted by (h, coordinates)."""

    bound: float
    classes: list[VisibleClass]
    field_name: str = ""
    rank: int = 0
    precision: int = 0
    wall_clock: float = 0.0
    assumptions: tuple[str, ...] = ()
    box_radius: tuple[int, ...] = dc_field(default=())

    @property
    def count(self) -> int:
        return len(self.classes)

    def points(self) -> np.ndarray:
        return np.array([c.torus_point for c in self.classes], dtype=float).reshape(self.count, self.rank)

    def heights(self) -> np.ndarray:
        return np.array([c.h for c in self.classes], dtype=np.int64)

    def restrict(self, bound: float) -> EnumerationReport:
        """Sub-report of the classes with ``h < bound`` (bound <= self.bound)."""
        if bound > self.bound:
            raise InvalidInput(f"cannot restrict a report for h < {self.bound} to h < {bound}")
        return EnumerationReport(bound, [c for c in self.classes if c.h < bound], self.field_name,
                                 self.rank, self.precision, self.wall_clock, self.assumptions)

    def class_keys(self) -> set[tuple[int, tuple[int, ...]]]:
        return {(c.h, c.coords) for c in self.classes}

    def to_csv(self, fh=None) -> str:
        d = len(self.classes[0].coords) if self.classes else 0
        buf = io.StringIO(newline="")
        writer = csv.writer(buf, lineterminator="\n")
        header = ["h"] + [f"coord_{i + 1}" for i in range(d)] + [f"t_{i + 1}" for i in range(self.rank)] + ["err"]
        writer.writerow(header)
        for c in self.classes:
            writer.writerow([c.h, *c.coords, *(repr(t) for t in c.torus_point), f"{c.err:.3e}"])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    def to_dict(self) -> dict:
        return {
            "field": self.field_name,
            "bound": self.bound,
            "count": self.count,
            "rank": self.rank,
            "precision": self.precision,
            "wall_clock": self.wall_clock,
            "assumptions": list(self.assumptions),
            "box_radius": list(self.box_radius),
            "classes": [
                {"h": c.h, "alpha": list(c.coords), "torus_point": list(c.torus_point), "err": c.err}
                for c in self.classes
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


# -- pointwise operations ----------------------------------------------------

def pi_map(a: Element) -> Element:
    """alpha / sigma(alpha); always of norm 1."""
    if a.is_zero():
        raise InvalidInput("pi_map of the zero element")
    return div_exact(a, apply_sigma(a, 1))


def _check_integral_nonzero(a: Element) -> tuple[int, ...]:
    if a.is_zero():
        raise InvalidInput("expected a nonzero element")
    if not a.is_integral:
        raise InvalidInput(f"{a} is not an algebraic integer")
    return a.int_coords()


def is_primitive(a: Element) -> bool:
    return reduce(math.gcd, _check_integral_nonzero(a)) == 1


def visible_decompose(g: Element) -> tuple[int, Element]:
    """Write ``g = n * alpha`` with ``n >= 1`` and ``alpha`` primitive."""
    coords = _check_integral_nonzero(g)
    n = reduce(math.gcd, coords)
    return n, Element(g.field, [c // n for c in coords])


def log_pi(a: Element, prec: int | None = None) -> LogVector:
    """log vector of pi(a) without dividing: log||sigma(a)||_v = log||a||_tau(v)."""
    la = log_embed(a, prec)
    tau = sigma_place_permutation(a.field)
    return LogVector(tuple(x - la.values[t] for x, t in zip(la.values, tau)), 2 * la.err, la.prec)


def visible_class(alpha: Element, units: UnitSystem) -> VisibleClass:
    """VisibleClass for an already canonical primitive ``alpha``."""
    t, err = torus_coordinates(log_pi(alpha), units)
    return VisibleClass(alpha, abs(int(norm(alpha))), t, err)


def canonical_class(a: Element, units: UnitSystem) -> VisibleClass:
    """VisibleClass of the orbit of a primitive integral ``a``."""
    if not is_primitive(a):
        raise InvalidInput(f"{a} is not primitive")
    return visible_class(unit_reduce(a, units)[0], units)


# -- enumeration -------------------------------------------------------------

def search_box(units: UnitSystem, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Integer coordinate radii of a box holding every canonical class with h < r,
    and the per-place bounds on |alpha_v| used to derive it."""
    K = units.field
    n = K.n_places
    log_bounds = math.log(r) / n + units.cell_radii  # on log ||alpha||_v
    abs_bounds = np.exp(log_bounds)
    abs_bounds[K.r1:] = np.sqrt(abs_bounds[K.r1:])  # ||.||_v is |.|^2 at complex places
    row_bounds = []
    for v in range(n):
        row_bounds.extend([abs_bounds[v]] * (1 if v < K.r1 else 2))
    einv = np.linalg.inv(K.embedding_matrix)
    radius = np.abs(einv) @ np.array(row_bounds)
    radius = np.floor(radius * (1 + 1e-9) + 1e-9).astype(np.int64)
    return radius, abs_bounds


class _Scanner:
    """Vectorised scan of a slab of the search box; shared by every worker."""

    def __init__(self, units: UnitSystem, r: float, abs_bounds: np.ndarray | None):
        K = units.field
        self.units = units
        self.K = K
        self.r = r
        self.abs_bounds = abs_bounds
        self.E = K.embedding_matrix
        self.B, self.Binv = units.float_lattice
        self.band = 2.0 ** (-53 / 4)
        self.form = [(np.array(m), int(c)) for m, c in K.norm_form]
        if any(c.denominator != 1 for _, c in K.norm_form):
            raise InvalidInput("norm form is not integral; basis is not integral")
        self.unit_mats: dict[tuple[int, ...], np.ndarray] = {}

    def norms(self, X: np.ndarray, radius: Sequence[int]) -> np.ndarray:
        worst = sum(abs(c) * math.prod(int(R) ** int(e) for R, e in zip(radius, m)) for m, c in self.form)
        if worst >= _INT64_SAFE:
            X = X.astype(object)
        out = np.zeros(len(X), dtype=X.dtype)
        for m, c in self.form:
            term = np.full(len(X), c, dtype=X.dtype)
            for j, e in enumerate(m):
                if e:
                    term = term * X[:, j] ** int(e)
            out = out + term
        return out

    def place_values(self, X: np.ndarray) -> np.ndarray:
        """|alpha_v| per place (float)."""
        Y = X.astype(float) @ self.E.T
        K = self.K
        cols = [np.abs(Y[:, v]) for v in range(K.r1)]
        for k in range(K.r2):
            cols.append(np.hypot(Y[:, K.r1 + 2 * k], Y[:, K.r1 + 2 * k + 1]))
        return np.stack(cols, axis=1)

    def unit_matrix(self, m: tuple[int, ...]) -> np.ndarray:
        """Integer matrix of multiplication by prod u_i^(-m_i) acting on row vectors."""
        if m not in self.unit_mats:
            u = self.K.one()
            for i, mi in enumerate(m):
                if mi:
                    u = u * self.units.unit_power(i, -mi)
            rows = [(Element(self.K, [int(j == k) for j in range(self.K.degree)]) * u).int_coords()
                    for k in range(self.K.degree)]
            self.unit_mats[m] = np.array(rows, dtype=object)
        return self.unit_mats[m]

    def scan(self, X: np.ndarray, radius: Sequence[int]) -> dict[tuple[int, ...], int]:
        """Canonical coordinates -> h for the primitive points of X with 0 < |N| < r."""
        if len(X) == 0:
            return {}
        X = X[np.any(X != 0, axis=1)]
        if self.abs_bounds is not None:
            vals = self.place_values(X)
            keep = np.all(vals <= self.abs_bounds * (1 + 1e-9) + 1e-9, axis=1)
            X = X[keep]
        N = self.norms(X, radius)
        absN = np.abs(N)
        keep = (absN > 0) & (absN < self.r)
        X, absN = X[keep], absN[keep]
        g = np.gcd.reduce(X, axis=1)
        keep = g == 1
        X, absN = X[keep], absN[keep]
        out: dict[tuple[int, ...], int] = {}
        if len(X) == 0:
            return out
        K, units = self.K, self.units
        n = K.n_places
        if units.rank:
            vals = self.place_values(X)
            logs = np.log(vals)
            logs[:, K.r1:] *= 2
            proj = logs - logs.mean(axis=1, keepdims=True)
            c = proj[:, : units.rank] @ self.Binv.T
            shifted = c + 0.5
            m = np.floor(shifted)
            frac = shifted - m
            safe = np.all((frac > self.band) & (frac < 1 - self.band), axis=1)
            m = m.astype(np.int64)
        else:
            safe = np.ones(len(X), dtype=bool)
            m = np.zeros((len(X), 0), dtype=np.int64)
        for idx in np.flatnonzero(~safe):
            red, _ = unit_reduce(Element(K, [int(x) for x in X[idx]]), units)
            out[red.int_coords()] = int(absN[idx])
        Xs, ms, Ns = X[safe], m[safe], absN[safe]
        if len(Xs) == 0:
            return out
        keys, inverse = np.unique(ms, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        for gi, key in enumerate(keys):
            rows = np.flatnonzero(inverse == gi)
            U = self.unit_matrix(tuple(int(x) for x in key))
            big = int(np.abs(Xs[rows]).max()) * max(abs(int(x)) for x in U.flat) * K.degree
            R = Xs[rows] @ U.astype(np.int64) if big < _INT64_SAFE else Xs[rows].astype(object) @ U
            for row, h in zip(R, Ns[rows]):
                coords = [int(x) for x in row]
                out[self._orient(coords)] = int(h)
        return out

    def _orient(self, coords: list[int]) -> tuple[int, ...]:
        K = self.K
        if K.r1:
            first = float(np.dot(self.E[0], np.array(coords, dtype=float)))
            if abs(first) > 1e-6:
                return tuple(coords) if first > 0 else tuple(-x for x in coords)
        else:
            w = self.units.w
            y = self.E[0:2] @ np.array(coords, dtype=float)
            turn = (math.atan2(y[1], y[0]) % (2 * math.pi)) * w / (2 * math.pi)
            j = math.floor(turn)
            if self.band < turn - j < 1 - self.band:
                return (Element(K, coords) * self.units.zeta_power(-j)).int_coords()
        from .units import _orient
        return _orient(Element(K, coords), self.units, K.precision).int_coords()


_WORKER: dict = {}


def _worker_init(units, r, abs_bounds, radius):
    _WORKER["scanner"] = _Scanner(units, r, abs_bounds)
    _WORKER["radius"] = radius


def _worker_scan(first_values: tuple[int, ...]):
    return _scan_slab(_WORKER["scanner"], _WORKER["radius"], first_values)


def _scan_slab(scanner: _Scanner, radius: Sequence[int], first_values: Sequence[int]):
    rest = [np.arange(-R, R + 1, dtype=np.int64) for R in radius[1:]]
    grids = np.meshgrid(*rest, indexing="ij") if rest else []
    tail = np.stack([gr.reshape(-1) for gr in grids], axis=1) if rest else np.zeros((1, 0), dtype=np.int64)
    out: dict = {}
    for x1 in first_values:
        X = np.concatenate([np.full((len(tail), 1), x1, dtype=np.int64), tail], axis=1)
        out.update(scanner.scan(X, radius))
    return out


def _slabs(radius: Sequence[int], workers: int) -> list[tuple[int, ...]]:
    per_value = math.prod(2 * int(R) + 1 for R in radius[1:])
    step = max(1, CHUNK_POINTS // max(per_value, 1))
    values = list(range(-int(radius[0]), int(radius[0]) + 1))
    return [tuple(values[i:i + step]) for i in range(0, len(values), step)]


def _classes_from(found: dict, units: UnitSystem) -> list[VisibleClass]:
    K = units.field
    ordered = sorted(found.items(), key=lambda kv: (kv[1], kv[0]))
    return [visible_class(Element(K, coords), units) for coords, _ in ordered]


def _torus_batch(args):
    units, items = args
    return [visible_class(Element(units.field, coords), units) for coords in items]


def enumerate_visible(units: UnitSystem, r: float, workers: int = 1,
                      max_box_points: int = DEFAULT_MAX_BOX_POINTS) -> EnumerationReport:
    """One VisibleClass per unit orbit of primitive integers with |N(alpha)| < r.

    The canonical representative of any orbit satisfies
    ||alpha||_v <= r^(1/(r1+r2)) * exp(rho_v), which bounds a coordinate box via
    the inverse embedding matrix.  The box is scanned in slabs of the first
    coordinate (spread over ``workers`` processes), filtered by exact norm and
    primitivity, reduced to canonical form, de-duplicated and sorted.  Output
    does not depend on ``workers``.
    """
    start = time.perf_counter()
    K = units.field
    meta = dict(field_name=K.name, rank=units.rank, precision=K.precision, assumptions=units.assumptions)
    if r <= 1:
        return EnumerationReport(r, [], wall_clock=time.perf_counter() - start, **meta)
    radius, abs_bounds = search_box(units, r)
    volume = math.prod(2 * int(R) + 1 for R in radius)
    if volume > max_box_points:
        raise ResourceError(f"search box for r={r:g} has {volume} points, budget is {max_box_points}", volume)
    slabs = _slabs(radius, workers)
    found: dict = {}
    if workers > 1 and len(slabs) > 1:
        with ProcessPoolExecutor(workers, initializer=_worker_init,
                                 initargs=(units, r, abs_bounds, tuple(radius))) as pool:
            for part in pool.map(_worker_scan, slabs):
                found.update(part)
            ordered = [coords for coords, _ in sorted(found.items(), key=lambda kv: (kv[1], kv[0]))]
            batch = max(1, len(ordered) // (4 * workers) + 1)
            chunks = [(units, ordered[i:i + batch]) for i in range(0, len(ordered), batch)]
            classes = [c for part in pool.map(_torus_batch, chunks) for c in part]
    else:
        scanner = _Scanner(units, r, abs_bounds)
        for slab in slabs:
            found.update(_scan_slab(scanner, radius, slab))
        classes = _classes_from(found, units)
    return EnumerationReport(r, classes, wall_clock=time.perf_counter() - start,
                             box_radius=tuple(int(x) for x in radius), **meta)


def brute_force_oracle(units: UnitSystem, box_radius: int, r: float) -> EnumerationReport:
    """Every primitive integer in [-box_radius, box_radius]^d with 0 < |N| < r, by orbit.

    No fundamental-domain bound is used; each survivor is canonicalised
    pointwise with the exact :func:`unit_reduce`.
    """
    start = time.perf_counter()
    K = units.field
    meta = dict(field_name=K.name, rank=units.rank, precision=K.precision, assumptions=units.assumptions)
    if box_radius <= 0 or r <= 1:
        return EnumerationReport(r, [], wall_clock=time.perf_counter() - start, **meta)
    axes = [np.arange(-box_radius, box_radius + 1, dtype=np.int64)] * K.degree
    X = np.stack([g.reshape(-1) for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    found: dict = {}
    for row in X:
        coords = [int(x) for x in row]
        if not any(coords) or reduce(math.gcd, coords) != 1:
            continue
        a = Element(K, coords)
        h = abs(norm(a))
        if h >= r:
            continue
        red, _ = unit_reduce(a, units)
        found[red.int_coords()] = int(h)
    classes = _classes_from(found, units)
    return EnumerationReport(r, classes, wall_clock=time.perf_counter() - start,
                             box_radius=(box_radius,) * K.degree, **meta)


def collision_scan(report: EnumerationReport, tol: float) -> list[list[VisibleClass]]:
    """Groups of classes whose torus points agree within ``tol`` (wrap-aware, sup norm)
    but whose heights differ."""
    if not report.classes:
        return []
    if report.rank == 0:
        comps = np.zeros(report.count, dtype=int)
    else:
        pts = np.mod(report.points(), 1.0)
        pts[pts >= 1.0] = 0.0
        tree = cKDTree(pts, boxsize=1.0)
        pairs = tree.query_pairs(tol, p=np.inf, output_type="ndarray")
        n = report.count
        graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n)) if len(pairs) \
            else coo_matrix((n, n))
        _, comps = connected_components(graph, directed=False)
    groups: dict[int, list[VisibleClass]] = {}
    for idx, comp in enumerate(comps):
        groups.setdefault(int(comp), []).append(report.classes[idx])
    return [g for _, g in sorted(groups.items()) if len({c.h for c in g}) > 1]
