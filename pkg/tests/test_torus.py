from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from normone.errors import InvalidInput
from normone.hilbert90 import enumerate_visible
from normone.torus import Character, character_eval, counting_fit, star_discrepancy, weyl_sum


def test_character_examples():
    assert character_eval((0,), (0.37,)) == 1
    assert abs(character_eval((1,), (0.5,)) + 1) < 1e-15
    assert abs(character_eval(2, (0.25,)) + 1) < 1e-15
    assert Character((0, 0)).trivial and not Character((0, 1)).trivial
    with pytest.raises(InvalidInput):
        character_eval((1, 2), (0.5,))


def test_weyl_examples(U2):
    rep3 = enumerate_visible(U2, 3)
    assert weyl_sum(rep3, 1).S == 2
    rep8 = enumerate_visible(U2, 8)
    w = weyl_sum(rep8, 1)
    # independent evaluation of 2 + 2 cos(2 pi t) with t from logs at 300 bits
    with mpmath.workprec(300):
        t = mpmath.log((11 + 6 * mpmath.sqrt(2)) / 7) / mpmath.log(1 + mpmath.sqrt(2))
        want = float(2 + 2 * mpmath.cos(2 * mpmath.pi * t))
    assert abs(w.S - want) < 1e-12
    assert abs(w.S.imag) < 1e-12
    assert abs(w.S.real - 3.059) < 5e-3
    assert abs(w.normalized - want / 4) < 1e-12
    assert weyl_sum(rep8, 0).S == 4


def test_weyl_dimension_check(Ucubic):
    rep = enumerate_visible(Ucubic, 50)
    with pytest.raises(InvalidInput):
        weyl_sum(rep, 1)
    assert weyl_sum(rep, (0, 0)).S == rep.count


def test_cubic_weyl_sums_share_modulus(Ucubic):
    # sigma permutes the visible classes and acts on characters, carrying (1,0) to (0,1) and (1,1) up to sign
    rep = enumerate_visible(Ucubic, 2000)
    mags = [abs(weyl_sum(rep, k).S) for k in ((1, 0), (0, 1), (1, 1))]
    assert max(mags) - min(mags) < 1e-9 * rep.count


def test_discrepancy_examples():
    assert star_discrepancy([0.5]) == 0.5
    assert star_discrepancy([0.25, 0.75]) == 0.25
    assert star_discrepancy([0.0, 0.5]) == 0.5
    with pytest.raises(InvalidInput):
        star_discrepancy([])


@pytest.mark.parametrize("n", range(1, 65))
def test_centred_points_discrepancy(n):
    pts = [(2 * j - 1) / (2 * n) for j in range(1, n + 1)]
    assert abs(star_discrepancy(pts) - 1 / (2 * n)) < 1e-12


def test_discrepancy_2d_grid_approximation():
    g = 16
    xs = (np.arange(g) + 0.5) / g
    pts = np.array([(x, y) for x in xs for y in xs])
    assert star_discrepancy(pts, grid=g) < 1e-12
    # a point mass at the origin has discrepancy close to 1
    assert star_discrepancy(np.zeros((10, 2)), grid=64) > 0.99


def test_counting_fit_examples():
    fit = counting_fit([(1e3, 379), (1e4, 3790), (1e5, 37900)])
    assert abs(fit.C_hat - 0.379) < 1e-12
    assert abs(fit.exponent - 1) < 1e-12
    with pytest.raises(InvalidInput):
        counting_fit([(1e3, 379)])
    with pytest.raises(InvalidInput):
        counting_fit([(1e3, 1), (1e3, 2), (1e4, 3)])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=40),
       st.lists(st.integers(-3, 3), min_size=1, max_size=40), st.integers(-5, 5))
def test_weyl_wrap_robust(ts, shifts, k):
    from normone.hilbert90 import EnumerationReport, VisibleClass
    cls = [VisibleClass(None, i + 1, (t,), 0.0) for i, t in enumerate(ts)]
    shifted = [VisibleClass(None, i + 1, (t + shifts[i % len(shifts)],), 0.0) for i, t in enumerate(ts)]
    a = weyl_sum(EnumerationReport(100, cls, rank=1), k)
    b = weyl_sum(EnumerationReport(100, shifted, rank=1), k)
    assert abs(abs(a.S) - abs(b.S)) < 1e-9
    assert weyl_sum(EnumerationReport(100, cls, rank=1), 0).S == len(ts)
    direct = sum(cmath.exp(2j * math.pi * k * t) for t in ts)
    assert abs(a.S - direct) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=60))
def test_discrepancy_bounds(ts):
    D = star_discrepancy(ts)
    assert 1 / (2 * len(ts)) - 1e-12 <= D <= 1
