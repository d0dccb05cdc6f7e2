"""Exact arithmetic in a cyclic number field.

A field is described by a monic integer polynomial for a generator ``theta``,
an integral basis written in powers of ``theta``, and the matrix of a Galois
generator ``sigma`` on that basis.  Elements carry exact rational coordinates
over the integral basis; archimedean embeddings are computed with mpmath at a
configurable precision and are only used for logarithms and diagnostics.
"""
from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import mpmath
import numpy as np
from mpmath.ctx_mp import MPContext

from .errors import ConfigError, InvalidInput

DEFAULT_PRECISION = 192
MIN_PRECISION = 64


def default_precision() -> int:
    raw = os.environ.get("NORMONE_PRECISION_BITS")
    if not raw:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError:
        raise InvalidInput(f"NORMONE_PRECISION_BITS={raw!r} is not an integer")
    if bits < MIN_PRECISION:
        raise InvalidInput(f"precision must be >= {MIN_PRECISION} bits, got {bits}")
    return bits


@lru_cache(maxsize=None)
def mp_context(prec: int) -> MPContext:
    """Independent mpmath context at ``prec`` bits (never mutated after creation)."""
    ctx = MPContext()
    ctx.prec = prec
    return ctx


def parse_rational(value) -> Fraction:
    """Exact rational from an int, a ``Fraction``, or a string ``"p/q"`` / ``"1.25"``."""
    if isinstance(value, bool):
        raise ConfigError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse rational {value!r}")
    raise ConfigError(f"expected int or 'p/q' string, got {type(value).__name__} {value!r}")


# -- exact linear algebra ----------------------------------------------------

def det_exact(rows: Sequence[Sequence]) -> Fraction | int:
    """Determinant by fraction-free Bareiss elimination.

    Integer input stays in integers; anything else is promoted to Fraction.
    """
    n = len(rows)
    if n == 0:
        return 1
    integral = all(isinstance(x, int) for row in rows for x in row)
    if not integral:
        rows = [[Fraction(x) for x in row] for row in rows]
    m = [list(row) for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                num = row_i[j] * pivot - mik * row_k[j]
                row_i[j] = num // prev if integral else num / prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def solve_exact(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``a @ x = b`` over the rationals; raises ZeroDivisionError if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def invert_exact(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    cols = [solve_exact(a, [int(i == j) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _poly_mulmod(p: Sequence[Fraction], q: Sequence[Fraction], min_poly: Sequence[int]) -> list[Fraction]:
    d = len(min_poly) - 1
    prod = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, pi in enumerate(p):
        if pi:
            for j, qj in enumerate(q):
                prod[i + j] += pi * qj
    # min_poly is monic: theta^d = -sum(c_k theta^k)
    for top in range(len(prod) - 1, d - 1, -1):
        c = prod[top]
        if c:
            prod[top] = Fraction(0)
            for k in range(d):
                prod[top - d + k] -= c * min_poly[k]
    out = prod[:d] + [Fraction(0)] * max(0, d - len(prod))
    return out[:d]


# -- field description -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """Exact description of a cyclic number field plus embeddings at ``precision`` bits.

    ``min_poly`` and the rows of ``integral_basis`` list coefficients in
    ascending powers of ``theta``.  Row ``i`` of ``sigma_matrix`` holds the
    basis coordinates of ``sigma(omega_i)``, so ``sigma(a) = a @ sigma_matrix``.
    ``mult_table[i][j]`` holds the coordinates of ``omega_i * omega_j``.
    """

    name: str
    degree: int
    min_poly: tuple[int, ...]
    integral_basis: tuple[tuple[Fraction, ...], ...]
    mult_table: tuple[tuple[tuple[Fraction, ...], ...], ...]
    sigma_matrix: tuple[tuple[int, ...], ...]
    signature: tuple[int, int]
    discriminant: int
    roots: tuple  # one mpmath root per place: real roots (descending), then Im > 0
    precision: int
    roots_of_unity: int = 2
    class_number_hint: int = 1
    fundamental_units: tuple[tuple[Fraction, ...], ...] = ()
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def key(self) -> tuple:
        return (self.min_poly, self.integral_basis, self.sigma_matrix)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def r1(self) -> int:
        return self.signature[0]

    @property
    def r2(self) -> int:
        return self.signature[1]

    @property
    def n_places(self) -> int:
        return self.r1 + self.r2

    @property
    def unit_rank(self) -> int:
        return self.r1 + self.r2 - 1

    @property
    def totally_real(self) -> bool:
        return self.r2 == 0

    def element(self, coords: Iterable) -> Element:
        return Element(self, coords)

    def one(self) -> Element:
        return Element(self, [1] + [0] * (self.degree - 1))

    def zero(self) -> Element:
        return Element(self, [0] * self.degree)

    def rational(self, q) -> Element:
        return Element(self, [q] + [0] * (self.degree - 1))

    def from_theta_poly(self, coeffs: Sequence) -> Element:
        """Element given by a polynomial in theta (ascending coefficients)."""
        p = [Fraction(c) for c in coeffs]
        p = _poly_mulmod(p, [Fraction(1)], self.min_poly)
        return Element(self, _row_times(p, self._basis_inverse))

    @property
    def theta(self) -> Element:
        return self.from_theta_poly([0, 1])

    # -- cached derived data --

    @property
    def _basis_inverse(self) -> list[list[Fraction]]:
        if "binv" not in self._cache:
            self._cache["binv"] = invert_exact(self.integral_basis)
        return self._cache["binv"]

    @property
    def integral_mult_table(self) -> tuple | None:
        """``mult_table`` as plain ints when every structure constant is integral."""
        if "imt" not in self._cache:
            ok = all(c.denominator == 1 for row in self.mult_table for cell in row for c in cell)
            self._cache["imt"] = (
                tuple(tuple(tuple(int(c) for c in cell) for cell in row) for row in self.mult_table)
                if ok else None
            )
        return self._cache["imt"]

    def sigma_power(self, k: int) -> tuple[tuple[int, ...], ...]:
        k %= self.degree
        cache = self._cache.setdefault("sigma_pow", {})
        if k not in cache:
            m = np.array(self.sigma_matrix, dtype=object)
            acc = np.identity(self.degree, dtype=object)
            for _ in range(k):
                acc = acc.dot(m)
            cache[k] = tuple(tuple(int(x) for x in row) for row in acc)
        return cache[k]

    def basis_embeddings(self, prec: int | None = None) -> tuple[tuple, ...]:
        """``omega_j`` evaluated at each place's root, at ``prec`` bits."""
        prec = prec or self.precision
        cache = self._cache.setdefault("bemb", {})
        if prec not in cache:
            ctx = mp_context(prec + 16)
            roots = self.roots if prec <= self.precision else _find_roots(self.min_poly, prec)[0]
            out = []
            for root in roots:
                root = ctx.mpmathify(root)
                powers = [ctx.mpf(1)]
                for _ in range(self.degree - 1):
                    powers.append(powers[-1] * root)
                out.append(tuple(
                    ctx.fsum(ctx.mpf(c.numerator) / c.denominator * pw for c, pw in zip(row, powers) if c)
                    for row in self.integral_basis
                ))
            cache[prec] = tuple(out)
        return cache[prec]

    @property
    def embedding_matrix(self) -> np.ndarray:
        """Real d x d float matrix sending basis coordinates to (real parts..., Re/Im pairs)."""
        if "emat" not in self._cache:
            rows = []
            for v, vals in enumerate(self.basis_embeddings()):
                if v < self.r1:
                    rows.append([float(x) for x in vals])
                else:
                    rows.append([float(x.real) for x in vals])
                    rows.append([float(x.imag) for x in vals])
            self._cache["emat"] = np.array(rows, dtype=float)
        return self._cache["emat"]

    @property
    def norm_form(self) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
        """Monomials ``(exponents, coefficient)`` of N(sum x_j omega_j) as a form in x."""
        if "nform" not in self._cache:
            self._cache["nform"] = _norm_form(self)
        return self._cache["nform"]

    def __reduce__(self):
        # rebuild from the exact data; mpmath values from private contexts do not pickle
        return (_build, (self.name, self.min_poly, self.integral_basis, self.sigma_matrix,
                         self.signature, self.discriminant, self.precision, self.roots_of_unity,
                         self.class_number_hint, self.fundamental_units))

    def with_precision(self, prec: int) -> FieldSpec:
        if prec == self.precision:
            return self
        roots = _find_roots(self.min_poly, prec)[0]
        return replace(self, roots=roots, precision=prec, _cache={})

    def describe(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "min_poly": list(self.min_poly),
            "integral_basis": [[str(c) for c in row] for row in self.integral_basis],
            "sigma_on_basis": [list(row) for row in self.sigma_matrix],
            "signature": list(self.signature),
            "discriminant": self.discriminant,
            "roots_of_unity": self.roots_of_unity,
            "class_number_hint": self.class_number_hint,
            "precision": self.precision,
            "embeddings": [mpmath.nstr(r, 20) for r in self.roots],
        }


def _row_times(row: Sequence[Fraction], mat: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    n = len(mat[0])
    return [sum((row[i] * mat[i][j] for i in range(len(row)) if row[i]), Fraction(0)) for j in range(n)]


def _norm_form(K: FieldSpec):
    """Expand det(sum_j x_j M_j) with M_j multiplication by omega_j, via Leibniz."""
    d = K.degree
    # entry (r, c) of the multiplication matrix as a linear form {j: coeff}
    # row r = coordinates of a * omega_r, with a = sum x_j omega_j
    lin = [[{j: K.mult_table[j][r][c] for j in range(d) if K.mult_table[j][r][c]} for c in range(d)]
           for r in range(d)]
    total: dict[tuple[int, ...], Fraction] = {}
    for perm in itertools.permutations(range(d)):
        inversions = sum(1 for i in range(d) for j in range(i + 1, d) if perm[i] > perm[j])
        poly = {(0,) * d: Fraction(-1 if inversions % 2 else 1)}
        for r in range(d):
            form = lin[r][perm[r]]
            nxt: dict = {}
            for mono, coef in poly.items():
                for j, c in form.items():
                    m = list(mono)
                    m[j] += 1
                    m = tuple(m)
                    nxt[m] = nxt.get(m, 0) + coef * c
            poly = nxt
            if not poly:
                break
        for mono, coef in poly.items():
            total[mono] = total.get(mono, 0) + coef
    return tuple(sorted((m, Fraction(c)) for m, c in total.items() if c))


def _find_roots(min_poly: Sequence[int], prec: int):
    """Roots at ``prec`` bits, one per place; also the max residual |f(root)| and r1."""
    ctx = mp_context(prec + 32)
    desc = list(reversed(min_poly))
    roots = ctx.polyroots(desc, maxsteps=400, extraprec=2 * prec + 64)
    poly = lambda z: ctx.polyval(desc, z)
    dpoly = [c * (len(desc) - 1 - i) for i, c in enumerate(desc[:-1])]
    polished = []
    for z in roots:
        for _ in range(4):
            dz = ctx.polyval(dpoly, z)
            if dz == 0:
                break
            z = z - poly(z) / dz
        polished.append(z)
    tol = ctx.mpf(2) ** (-(prec // 2))
    real, cplx = [], []
    for z in polished:
        zc = ctx.mpc(z)
        if abs(zc.imag) <= tol * max(1, abs(zc)):
            real.append(ctx.mpf(zc.real))
        elif zc.imag > 0:
            cplx.append(zc)
    real.sort(reverse=True)
    cplx.sort(key=lambda z: (-z.real, z.imag))
    residual = max(abs(poly(z)) for z in real + cplx)
    return tuple(real + cplx), residual, len(real)


# -- construction & validation -----------------------------------------------

def _build(name, min_poly, basis, sigma, signature, discriminant, precision,
           roots_of_unity=2, class_number_hint=1, fundamental_units=()) -> FieldSpec:
    d = len(min_poly) - 1
    if d < 1 or min_poly[-1] != 1:
        raise ConfigError("min_poly must be monic of degree >= 1", "min_poly")
    if len(basis) != d or any(len(row) != d for row in basis):
        raise ConfigError(f"integral_basis must be {d} rows of {d} coefficients", "schema")
    if tuple(basis[0]) != tuple([Fraction(1)] + [Fraction(0)] * (d - 1)):
        raise ConfigError("first integral basis element must be 1", "integral_basis")
    if len(sigma) != d or any(len(row) != d for row in sigma):
        raise ConfigError(f"sigma_on_basis must be a {d}x{d} integer matrix", "schema")
    if det_exact(basis) == 0:
        raise ConfigError("integral basis is linearly dependent", "integral_basis")
    for q in _rational_root_candidates(min_poly):
        if sum(c * q ** k for k, c in enumerate(min_poly)) == 0:
            raise ConfigError(f"min_poly has rational root {q}; not irreducible", "min_poly")

    binv = invert_exact(basis)
    table = []
    for i in range(d):
        row = []
        for j in range(d):
            prod = _poly_mulmod(basis[i], basis[j], min_poly)
            row.append(tuple(_row_times(prod, binv)))
        table.append(tuple(row))
    table = tuple(table)
    if any(c.denominator != 1 for row in table for cell in row for c in cell):
        raise ConfigError("basis products are not integral; basis is not an integral basis",
                          "integral_basis")

    r1, r2 = signature
    if r1 + 2 * r2 != d:
        raise ConfigError(f"signature ({r1}, {r2}) inconsistent with degree {d}", "signature")
    if r1 and r2:
        raise ConfigError("cyclic field must be totally real or totally imaginary", "signature")

    roots, residual, real_count = _find_roots(min_poly, precision)
    if (real_count, len(roots) - real_count) != (r1, r2):
        raise ConfigError(
            f"min_poly has signature ({real_count}, {len(roots) - real_count}), config says ({r1}, {r2})",
            "signature")
    if residual >= mpmath.mpf(2) ** (-(precision // 2)):
        raise ConfigError("root refinement failed to reach working precision", "embeddings")

    K = FieldSpec(
        name=name, degree=d, min_poly=tuple(min_poly),
        integral_basis=tuple(tuple(row) for row in basis), mult_table=table,
        sigma_matrix=tuple(tuple(int(x) for x in row) for row in sigma),
        signature=(r1, r2), discriminant=int(discriminant), roots=roots, precision=precision,
        roots_of_unity=roots_of_unity, class_number_hint=class_number_hint,
        fundamental_units=tuple(tuple(parse_rational(c) for c in u) for u in fundamental_units),
    )
    verify_field(K)
    return K


def _rational_root_candidates(min_poly):
    c0 = abs(min_poly[0])
    if c0 == 0:
        return [0]
    divs = [k for k in range(1, math.isqrt(c0) + 1) if c0 % k == 0]
    divs = set(divs + [c0 // k for k in divs])
    return [s * k for k in divs for s in (1, -1)]


def verify_field(K: FieldSpec) -> None:
    """Check the exact invariants of ``K``; raise ConfigError naming the first violation."""
    d = K.degree
    S = np.array(K.sigma_matrix, dtype=object)
    if det_exact(K.sigma_matrix) not in (1, -1):
        raise ConfigError("sigma matrix is not unimodular", "sigma_order")
    ident = np.identity(d, dtype=object)
    acc = ident
    order = None
    for k in range(1, d + 1):
        acc = acc.dot(S)
        if (acc == ident).all():
            order = k
            break
    if order != d:
        shown = "> %d" % d if order is None else str(order)
        raise ConfigError(f"σ has order {shown} ≠ {d}", "sigma_order")

    basis = [Element(K, [int(i == j) for j in range(d)]) for i in range(d)]
    for i in range(d):
        for j in range(d):
            lhs = apply_sigma(basis[i] * basis[j], 1)
            rhs = apply_sigma(basis[i], 1) * apply_sigma(basis[j], 1)
            if lhs != rhs:
                raise ConfigError(f"σ is not a ring homomorphism on (omega_{i + 1}, omega_{j + 1})",
                                  "sigma_homomorphism")
    if apply_sigma(K.one(), 1) != K.one():
        raise ConfigError("σ does not fix 1", "sigma_homomorphism")

    disc = det_exact([[trace(basis[i] * basis[j]) for j in range(d)] for i in range(d)])
    if disc != K.discriminant:
        raise ConfigError(f"discriminant of the basis is {disc}, config says {K.discriminant}",
                          "discriminant")
    sigma_place_permutation(K)


def make_real_quadratic(d_sf: int, precision: int | None = None) -> FieldSpec:
    if isinstance(d_sf, bool) or not isinstance(d_sf, int) or d_sf <= 1 or not _squarefree(d_sf):
        raise InvalidInput(f"d_sf must be a squarefree integer > 1, got {d_sf!r}")
    return _quadratic(d_sf, precision)


def make_imaginary_quadratic(d_sf: int, precision: int | None = None) -> FieldSpec:
    """Q(sqrt(d_sf)) for squarefree d_sf < 0; w is 4 for Q(i), 6 for Q(sqrt -3), else 2."""
    if isinstance(d_sf, bool) or not isinstance(d_sf, int) or d_sf >= 0 or not _squarefree(-d_sf):
        raise InvalidInput(f"d_sf must be a negative squarefree integer, got {d_sf!r}")
    return _quadratic(d_sf, precision)


def _quadratic(D: int, precision: int | None) -> FieldSpec:
    precision = precision or default_precision()
    if D % 4 == 1:
        basis = [[Fraction(1), Fraction(0)], [Fraction(1, 2), Fraction(1, 2)]]
        sigma = [[1, 0], [1, -1]]  # sigma((1+t)/2) = (1-t)/2 = 1 - omega
        disc = D
    else:
        basis = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
        sigma = [[1, 0], [0, -1]]
        disc = 4 * D
    w = {-1: 4, -3: 6}.get(D, 2)
    sig = (2, 0) if D > 0 else (0, 1)
    name = f"sqrt{D}" if D > 0 else f"sqrt({D})"
    return _build(name, (-D, 0, 1), basis, sigma, sig, disc, precision, roots_of_unity=w)


def _squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


_REQUIRED = ("degree", "min_poly", "integral_basis", "sigma_on_basis", "signature", "discriminant")


def load_field(config, precision: int | None = None) -> FieldSpec:
    """Build a FieldSpec from a config mapping or a path to a JSON config document."""
    name = "config"
    if isinstance(config, (str, Path)):
        path = Path(config)
        name = path.stem
        with open(path, encoding="utf-8") as fh:
            try:
                config = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: not valid JSON ({exc})")
    if not isinstance(config, dict):
        raise ConfigError("field config must be a key/value document")
    missing = [k for k in _REQUIRED if k not in config]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    d = config["degree"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ConfigError("degree must be a positive integer")
    min_poly = config["min_poly"]
    if not isinstance(min_poly, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in min_poly):
        raise ConfigError("min_poly must be an integer array")
    if len(min_poly) != d + 1:
        raise ConfigError(f"min_poly has degree {len(min_poly) - 1}, expected {d}", "min_poly")
    try:
        basis = [[parse_rational(c) for c in row] for row in config["integral_basis"]]
        sigma = [[int(x) for x in row] for row in config["sigma_on_basis"]]
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed matrix: {exc}")
    sig = config["signature"]
    if not (isinstance(sig, list) and len(sig) == 2 and all(isinstance(x, int) and x >= 0 for x in sig)):
        raise ConfigError("signature must be [r1, r2]")
    units = config.get("fundamental_units", [])
    w = config.get("roots_of_unity", 2)
    h = config.get("class_number_hint", 1)
    if not (isinstance(w, int) and w >= 2 and w % 2 == 0):
        raise ConfigError("roots_of_unity must be an even integer >= 2")
    if not (isinstance(h, int) and h >= 1):
        raise ConfigError("class_number_hint must be a positive integer")
    return _build(config.get("name", name), min_poly, basis, sigma, tuple(sig), config["discriminant"],
                  precision or default_precision(), roots_of_unity=w, class_number_hint=h,
                  fundamental_units=units)


BUILTIN_CONFIGS = ("cubic13", "cubic49")


def builtin_field(name: str, precision: int | None = None) -> FieldSpec:
    """``sqrtD`` / ``sqrt-D`` quadratics and the shipped cubic configs."""
    name = name.removeprefix("builtin:")
    if name.startswith("sqrt"):
        try:
            D = int(name[4:].strip("()"))
        except ValueError:
            raise InvalidInput(f"unknown builtin field {name!r}")
        return make_real_quadratic(D, precision) if D > 0 else make_imaginary_quadratic(D, precision)
    if name in BUILTIN_CONFIGS:
        text = resources.files("normone.data").joinpath(f"{name}.json").read_text(encoding="utf-8")
        cfg = json.loads(text)
        cfg.setdefault("name", name)
        return load_field(cfg, precision)
    raise InvalidInput(f"unknown builtin field {name!r}")


# -- elements ----------------------------------------------------------------

class Element:
    """Field element with exact rational coordinates over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldSpec, coords: Iterable):
        coords = tuple(c if type(c) is Fraction else Fraction(c) if type(c) is int else parse_rational(c)
                       for c in coords)
        if len(coords) != field.degree:
            raise InvalidInput(f"expected {field.degree} coordinates, got {len(coords)}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __reduce__(self):
        return (Element, (self.field, self.coords))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def int_coords(self) -> tuple[int, ...]:
        if not self.is_integral:
            raise InvalidInput(f"{self} is not integral")
        return tuple(int(c) for c in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.coords == other.coords and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self.coords == self.field.rational(other).coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"Element({self.field.name}, ({', '.join(str(c) for c in self.coords)}))"

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.field is not self.field and other.field != self.field:
                raise InvalidInput("elements belong to different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Element(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Element(self.field, _mul_coords(self.field, self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return div_exact(self, other)

    def __pow__(self, k: int):
        if k < 0:
            return div_exact(self.field.one(), self) ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def _as_scaled(coords: Sequence) -> tuple[list[int], int]:
    """Integer vector and common denominator with coords = vector / den."""
    den = 1
    for c in coords:
        if type(c) is Fraction and c.denominator != 1:
            den = den * c.denominator // math.gcd(den, c.denominator)
    if den == 1:
        return [int(c) for c in coords], 1
    return [int(c * den) for c in coords], den


def _mul_ints(table, d: int, a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * d
    for i, ai in enumerate(a):
        if not ai:
            continue
        row = table[i]
        for j, bj in enumerate(b):
            if not bj:
                continue
            p = ai * bj
            cell = row[j]
            for k in range(d):
                if cell[k]:
                    out[k] += p * cell[k]
    return out


def _mul_coords(K: FieldSpec, a: Sequence, b: Sequence) -> list:
    d = K.degree
    table = K.integral_mult_table
    if table is None:
        return _mul_ints(K.mult_table, d, a, b)
    # integer products on scaled vectors, one division at the end
    A, da = _as_scaled(a)
    B, db = _as_scaled(b)
    out = _mul_ints(table, d, A, B)
    den = da * db
    return out if den == 1 else [Fraction(x, den) for x in out]


def add(a: Element, b: Element) -> Element:
    return a + b


def sub(a: Element, b: Element) -> Element:
    return a - b


def mul(a: Element, b: Element) -> Element:
    return a * b


def mult_matrix(a: Element) -> list[list]:
    """Rows are the coordinates of ``a * omega_r``."""
    return _mult_matrix_coords(a.field, a.coords)


def _mult_matrix_coords(K: FieldSpec, coords: Sequence) -> list[list]:
    d = K.degree
    return [_mul_coords(K, coords, [int(j == r) for j in range(d)]) for r in range(d)]


def div_exact(a: Element, b: Element) -> Element:
    """The unique ``c`` with ``c * b == a``.

    Uses b^-1 = sigma(b) sigma^2(b) ... sigma^(d-1)(b) / N(b), valid because
    the Galois group is generated by sigma.
    """
    b = a._coerce(b)
    if b.is_zero():
        raise ZeroDivisionError("division by the zero element")
    K = a.field
    conj = K.one()
    for k in range(1, K.degree):
        conj = conj * apply_sigma(b, k)
    nb = (b * conj).coords[0]  # b * conj = N(b), a rational multiple of omega_1 = 1
    return Element(K, [c / nb for c in _mul_coords(K, a.coords, conj.coords)])


def apply_sigma(a: Element, k: int = 1) -> Element:
    """sigma^k(a), with k reduced mod the degree."""
    K = a.field
    k %= K.degree
    if k == 0:
        return a
    S = K.sigma_power(k)
    d = K.degree
    A, den = _as_scaled(a.coords)
    out = [sum(A[i] * S[i][j] for i in range(d) if A[i]) for j in range(d)]
    return Element(K, out if den == 1 else [Fraction(x, den) for x in out])


def norm(a: Element) -> Fraction:
    """N_{K/Q}(a) as the exact determinant of multiplication by ``a``."""
    coords = a.coords
    if all(c.denominator == 1 for c in coords):
        coords = [int(c) for c in coords]
    return Fraction(det_exact(_mult_matrix_coords(a.field, coords)))


def trace(a: Element) -> Fraction:
    m = mult_matrix(a)
    return Fraction(sum(m[i][i] for i in range(len(m))))


def embed(a: Element, prec: int | None = None) -> tuple[tuple, float]:
    """Images of ``a`` at each place (real places first) and an absolute error bound."""
    K = a.field
    prec = prec or K.precision
    ctx = mp_context(prec + 16)
    xs = [ctx.mpf(c.numerator) if c.denominator == 1 else ctx.mpf(c.numerator) / c.denominator
          for c in a.coords]
    vals = tuple(ctx.fdot(xs, bemb) for bemb in K.basis_embeddings(prec))
    err = 2.0 ** (-prec / 2) * (1 + float(sum(abs(c) for c in a.coords)))
    return vals, err


def sigma_place_permutation(K: FieldSpec) -> tuple[int, ...]:
    """``tau`` with |sigma(a)_v| = |a_tau(v)| for every element ``a`` and place ``v``."""
    if "tau" not in K._cache:
        images, err = embed(apply_sigma(K.theta, 1))
        tau = []
        for z in images:
            dist = [min(abs(z - r), abs(z - r.conjugate())) for r in K.roots]
            best = min(range(len(dist)), key=dist.__getitem__)
            if dist[best] > 1e-20:
                raise ConfigError("sigma(theta) does not match any root of min_poly", "sigma_homomorphism")
            tau.append(best)
        if sorted(tau) != list(range(K.n_places)):
            raise ConfigError("sigma does not permute the places", "sigma_homomorphism")
        K._cache["tau"] = tuple(tau)
    return K._cache["tau"]
