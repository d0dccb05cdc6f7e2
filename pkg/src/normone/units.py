"""Unit group data: fundamental units, the log-unit lattice, reduction modulo units.

Torus coordinates are taken in the basis formed by the log vectors of the
fundamental units themselves (no orthogonalisation), so characters of the
torus are indexed by integer vectors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .errors import InvalidInput, NotNormOneError, PrecisionError
from .field import Element, FieldSpec, apply_sigma, embed, mp_context, norm

# Escalation ladder multiplier and number of rungs above the working precision.
ESCALATION_STEPS = 2


@dataclass(frozen=True)
class LogVector:
    """(log ||a||_v) over the places, squared absolute value at complex places."""

    values: tuple
    err: float
    prec: int

    def total(self):
        return sum(self.values)

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


def log_embed(a: Element, prec: int | None = None) -> LogVector:
    if a.is_zero():
        raise InvalidInput("log of the zero element")
    K = a.field
    prec = prec or K.precision
    ctx = mp_context(prec + 16)
    vals, err = embed(a, prec)
    out = []
    log_err = 0.0
    for v, z in enumerate(vals):
        mag = abs(z)
        if mag <= 2 * err:
            raise PrecisionError(f"embedding {v} of {a} is below the error bound", 2 * prec)
        weight = 1 if v < K.r1 else 2
        out.append(weight * ctx.log(mag))
        log_err = max(log_err, weight * 2 * err / float(mag))
    return LogVector(tuple(out), log_err, prec)


@dataclass(frozen=True, eq=False)
class UnitSystem:
    """Fundamental units, roots of unity and the log lattice they span.

    ``log_basis`` has one column per fundamental unit and one row per place.
    ``regulator`` is |det| of its first ``rank`` rows (1 by convention for rank 0).
    """

    field: FieldSpec
    fundamental_units: tuple[Element, ...]
    w: int
    zeta: Element  # generator of the roots of unity, first-place argument 2*pi/w
    log_basis: tuple
    regulator: object
    class_number_hint: int = 1
    assumptions: tuple[str, ...] = ()
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.fundamental_units)

    def __reduce__(self):
        return (_rebuild_units, (self.field, [u.coords for u in self.fundamental_units], self.assumptions))

    def lattice(self, prec: int | None = None):
        """(B, inverse of its leading rank x rank block) at ``prec`` bits, as mpmath matrices."""
        prec = prec or self.field.precision
        if prec not in self._cache:
            ctx = mp_context(prec + 16)
            if prec == self.field.precision:
                cols = [[ctx.mpf(x) for x in row] for row in self.log_basis]
            else:
                logs = [log_embed(u, prec).values for u in self.fundamental_units]
                cols = [[logs[i][v] for i in range(self.rank)] for v in range(self.field.n_places)]
            B = ctx.matrix(cols) if self.rank else None
            inv = ctx.inverse(B[: self.rank, :]) if self.rank else None
            self._cache[prec] = (B, inv)
        return self._cache[prec]

    @property
    def float_lattice(self):
        if "float" not in self._cache:
            n, r = self.field.n_places, self.rank
            B = np.array([[float(self.log_basis[v][i]) for i in range(r)] for v in range(n)]).reshape(n, r)
            inv = np.linalg.inv(B[:r, :]) if r else np.zeros((0, 0))
            self._cache["float"] = (B, inv)
        return self._cache["float"]

    def unit_power(self, i: int, m: int) -> Element:
        """u_i ** m (m may be negative), cached."""
        cache = self._cache.setdefault("pow", {})
        key = (i, m)
        if key not in cache:
            if m == 0:
                cache[key] = self.field.one()
            elif m > 0:
                cache[key] = self.unit_power(i, m - 1) * self.fundamental_units[i]
            else:
                cache[key] = self.unit_power(i, m + 1) * self.unit_inverse(i)
        return cache[key]

    def unit_inverse(self, i: int) -> Element:
        cache = self._cache.setdefault("inv", {})
        if i not in cache:
            cache[i] = Element.__truediv__(self.field.one(), self.fundamental_units[i])
        return cache[i]

    def zeta_power(self, j: int) -> Element:
        cache = self._cache.setdefault("zpow", {})
        j %= self.w
        if j not in cache:
            cache[j] = self.zeta ** j
        return cache[j]

    @property
    def cell_radii(self) -> np.ndarray:
        """rho_v = 1/2 * sum_i |B[v, i]|: the largest log offset of a reduced element."""
        B, _ = self.float_lattice
        return 0.5 * np.abs(B).sum(axis=1) if self.rank else np.zeros(self.field.n_places)

    def describe(self) -> dict:
        return {
            "fundamental_units": [[str(c) for c in u.coords] for u in self.fundamental_units],
            "unit_norms": [str(norm(u)) for u in self.fundamental_units],
            "roots_of_unity": self.w,
            "regulator": float(self.regulator),
            "class_number_hint": self.class_number_hint,
            "assumptions": list(self.assumptions),
        }


def pell_fundamental_unit(K: FieldSpec) -> Element:
    """Fundamental unit eps > 1 of a real quadratic field from a continued fraction.

    Units x + y*omega with x, y > 0 have x/y a convergent of -sigma(omega), so
    the first convergent of norm +-1 is the smallest unit above 1.
    """
    if K.degree != 2 or K.signature != (2, 0):
        raise InvalidInput("pell_fundamental_unit needs a real quadratic field")
    D = -K.min_poly[0]
    s = math.isqrt(D)
    # -sigma(omega) = (P + sqrt(D)) / Q
    P, Q = (-1, 2) if D % 4 == 1 else (0, 1)
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    for _ in range(10 * (D + 10)):
        a = (P + s) // Q if Q > 0 else -((P + s) // -Q + 1)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        eps = Element(K, [p, q])
        if q > 0 and abs(norm(eps)) == 1:
            return eps
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError(f"continued fraction for D={D} did not reach a unit")


def _find_zeta(K: FieldSpec, w: int) -> Element:
    if w == 2:
        return -K.one()
    if K.r1:
        raise InvalidInput(f"a totally real field has w = 2, config says {w}")
    # roots of unity have every |embedding| = 1; bound the coordinate box
    bound = np.abs(np.linalg.inv(K.embedding_matrix)).sum(axis=1)
    radius = [int(math.floor(b + 1e-9)) for b in bound]
    ctx = mp_context(K.precision + 16)
    target = 2 * ctx.pi / w
    best = None
    for coords in itertools.product(*[range(-R, R + 1) for R in radius]):
        z = Element(K, coords)
        if z.is_zero() or z ** w != K.one():
            continue
        if any(z ** k == K.one() for k in range(1, w) if w % k == 0):
            continue
        arg = ctx.arg(embed(z)[0][0])
        if abs(arg - target) < ctx.mpf(2) ** (-K.precision // 2):
            best = z
            break
    if best is None:
        raise InvalidInput(f"no primitive {w}-th root of unity found in the field")
    return best


def unit_system(K: FieldSpec, units: Sequence | None = None) -> UnitSystem:
    """Assemble the unit system of ``K``.

    Units come from ``units`` (coordinate vectors or Elements), else from the
    field config, else (real quadratic fields) from the continued fraction.
    Supplied units are checked for norm +-1 and independence; their
    fundamentality is recorded as an assumption.
    """
    rank = K.unit_rank
    assumptions = []
    if units is None and K.fundamental_units:
        units = K.fundamental_units
    if units is None or (rank == 0 and not units):
        if rank == 0:
            elems = []
        elif K.degree == 2:
            elems = [pell_fundamental_unit(K)]
        else:
            raise InvalidInput(f"{K.name}: fundamental units must be supplied for degree {K.degree}")
    else:
        elems = [u if isinstance(u, Element) else Element(K, u) for u in units]
        assumptions.append("fundamental units supplied by config; index 1 in U/W is trusted, not proven")
    if len(elems) != rank:
        raise InvalidInput(f"{K.name}: expected {rank} fundamental units, got {len(elems)}")
    for u in elems:
        if not u.is_integral or abs(norm(u)) != 1:
            raise InvalidInput(f"{u} is not a unit (norm {norm(u)})")
    ctx = mp_context(K.precision + 16)
    logs = [log_embed(u).values for u in elems]
    cols = tuple(tuple(logs[i][v] for i in range(rank)) for v in range(K.n_places))
    if rank:
        reg = abs(ctx.det(ctx.matrix([list(row) for row in cols[:rank]])))
        if reg <= 1e-10:
            raise InvalidInput("supplied units are multiplicatively dependent (regulator ~ 0)")
        for i in range(rank):
            col_sum = sum(cols[v][i] for v in range(K.n_places))
            if abs(col_sum) > 1e-20:
                raise InvalidInput(f"log vector of unit {i} does not lie in ker Sigma")
    else:
        reg = ctx.mpf(1)
    return UnitSystem(
        field=K, fundamental_units=tuple(elems), w=K.roots_of_unity, zeta=_find_zeta(K, K.roots_of_unity),
        log_basis=cols, regulator=reg, class_number_hint=K.class_number_hint,
        assumptions=tuple(assumptions),
    )


def _rebuild_units(K, coords, assumptions):
    return replace(unit_system(K, coords or None), assumptions=tuple(assumptions))


# -- reduction modulo units --------------------------------------------------

def _guard(prec: int) -> float:
    return 2.0 ** (-prec / 4)


def lattice_coordinates(lv: LogVector, units: UnitSystem, project: bool = True):
    """Coordinates of (the ker-Sigma projection of) ``lv`` in the log basis, with error."""
    K = units.field
    ctx = mp_context(lv.prec + 16)
    vals = list(lv.values)
    if project:
        mean = ctx.fsum(vals) / K.n_places
        vals = [x - mean for x in vals]
    if not units.rank:
        return [], 0.0
    _, inv = units.lattice(lv.prec)
    r = units.rank
    c = [ctx.fsum(inv[i, j] * vals[j] for j in range(r)) for i in range(r)]
    amp = max(sum(abs(float(inv[i, j])) for j in range(r)) for i in range(r))
    return c, 2 * amp * lv.err + 2.0 ** (-lv.prec + 8)


def unit_reduce(a: Element, units: UnitSystem, prec: int | None = None,
                escalate: bool = True) -> tuple[Element, tuple[int, ...]]:
    """Canonical representative of the orbit of ``a`` under units.

    Returns ``(reduced, m)`` with ``reduced = zeta^j * a * prod u_i^(-m_i)``,
    where ``m`` rounds the lattice coordinates half-up so the reduced
    coordinates lie in [-1/2, 1/2), and ``zeta^j`` fixes the orientation
    (first real embedding positive, or argument at the first complex place
    in [0, 2*pi/w)).

    A coordinate inside the 2^(-p/4) guard band of the cell boundary raises
    PrecisionError when ``escalate`` is false.  Otherwise the precision is
    doubled up to ``ESCALATION_STEPS`` times; a coordinate that still sits on
    the boundary is treated as an exact tie, and the tied candidate with the
    lexicographically smallest coordinates is returned.
    """
    if a.is_zero():
        raise InvalidInput("unit_reduce of the zero element")
    K = a.field
    base = prec or K.precision
    ladder = [base * 2 ** k for k in range(ESCALATION_STEPS + 1)] if escalate else [base]
    for p in ladder:
        c, err = lattice_coordinates(log_embed(a, p), units)
        band = max(_guard(p), err)
        m, tied = [], []
        for i, ci in enumerate(c):
            shifted = ci + 0.5
            mi = int(mpmath.floor(shifted))
            nearest = int(mpmath.nint(shifted))
            if float(abs(shifted - nearest)) < band:  # boundary sits at integer `shifted`
                tied.append(i)
                mi = nearest
            m.append(mi)
        if not tied:
            return _orient(_apply_units(a, units, m), units, base), tuple(m)
        if not escalate:
            raise PrecisionError(f"lattice coordinate of {a} within 2^-{p // 4} of the cell boundary", 2 * p)
    candidates = []
    for flips in itertools.product((0, 1), repeat=len(tied)):
        mm = list(m)
        for i, f in zip(tied, flips):
            mm[i] -= f
        red = _orient(_apply_units(a, units, mm), units, base)
        candidates.append((red.coords, red, tuple(mm)))
    candidates.sort(key=lambda t: t[0])
    return candidates[0][1], candidates[0][2]


def _apply_units(a: Element, units: UnitSystem, m: Sequence[int]) -> Element:
    out = a
    for i, mi in enumerate(m):
        if mi:
            out = out * units.unit_power(i, -mi)
    return out


def _orient(a: Element, units: UnitSystem, prec: int) -> Element:
    K = a.field
    if K.r1:
        for p in (prec, 2 * prec, 4 * prec):
            vals, err = embed(a, p)
            if abs(vals[0]) > 2 * err:
                return a if vals[0] > 0 else -a
        raise PrecisionError(f"sign of first embedding of {a} undetermined", 8 * prec)
    w = units.w
    conj = K.degree // 2  # complex conjugation is sigma^(d/2) in a cyclic CM-type group
    for p in (prec, 2 * prec, 4 * prec):
        ctx = mp_context(p + 16)
        vals, err = embed(a, p)
        turn = (ctx.arg(vals[0]) % (2 * ctx.pi)) * w / (2 * ctx.pi)
        j = int(ctx.floor(turn))
        frac = float(turn - j)
        if _guard(p) <= frac <= 1 - _guard(p):
            return a * units.zeta_power(-j)
        for jj in (j - 1, j, j + 1):
            b = a * units.zeta_power(-jj)
            if apply_sigma(b, conj) == b and embed(b, p)[0][0].real > 0:
                return b
    raise PrecisionError(f"orientation of {a} undetermined", 8 * prec)


def torus_coordinates(x: Element | LogVector, units: UnitSystem) -> tuple[tuple[float, ...], float]:
    """Point of ker Sigma / log U, in [0, 1)^rank, and its error bound.

    Accepts an element of norm +-1 or a LogVector already in ker Sigma.
    Coordinates within their error bound of an integer are snapped to 0.
    """
    lv = x if isinstance(x, LogVector) else log_embed(x)
    total = float(lv.total())
    if abs(total) > max(10 * lv.err * units.field.n_places, 2.0 ** (-lv.prec / 2)):
        raise NotNormOneError(f"log vector has Sigma = {total:.3g}, not in ker Sigma")
    c, err = lattice_coordinates(lv, units, project=False)
    out = []
    for ci in c:
        frac = float(ci - mpmath.floor(ci))
        if frac <= err or frac >= 1 - err or frac >= 1.0:
            frac = 0.0
        out.append(frac)
    return tuple(out), err
