from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from normone.errors import InvalidInput
from normone.field import builtin_field
from normone.hilbert90 import enumerate_visible
from normone.lseries import identity_check, l_truncated, residue_prediction, xi1_truncated, zeta
from normone.units import unit_system


def test_zeta_values():
    assert abs(zeta(2).value - math.pi ** 2 / 6) < 1e-12
    assert abs(zeta(4).value - math.pi ** 4 / 90) < 1e-12
    for s in (1.01, 1.5, 3, 6.5, 20):
        assert abs(zeta(s).value - float(mpmath.zeta(s))) < 1e-9 * max(1, zeta(s).value)
        assert zeta(s).err < 1e-12 * max(1.0, zeta(s).value)
    for bad in (1, 0.5, -2):
        with pytest.raises(InvalidInput):
            zeta(bad)


def test_truncated_examples(U2):
    assert l_truncated(U2, 0, 2, 2).value == 1.25
    assert l_truncated(U2, 1, 2, 2).value == 1.25
    assert l_truncated(U2, 1, 2, 0.5).value == 0
    assert xi1_truncated(U2, 0, 2, 4).value == 1.3125
    assert xi1_truncated(U2, 0, 2, 1).value == 1.0
    assert xi1_truncated(U2, 0, 2, 0.9).value == 0
    with pytest.raises(InvalidInput):
        l_truncated(U2, 0, 1, 10)


def test_identity_degenerate_cutoff(U2):
    chk = identity_check(U2, 0, 2, 1)
    assert chk.insufficient_cutoff
    assert abs(chk.ratio - 1 / zeta(4).value) < 1e-15


def test_identity_at_moderate_cutoff(U2):
    rep = enumerate_visible(U2, 3001)
    for k in (0, 1, 2):
        chk = identity_check(rep, k, 2, 3000)
        assert chk.verdict == "zeta(ds)" and chk.residual < 1e-3
        assert not chk.insufficient_cutoff


def test_residue_predictions():
    U = unit_system(builtin_field("sqrt2"))
    pred = residue_prediction(U)
    assert abs(pred.kappa - 0.62322) < 1e-5 and abs(pred.C - 0.37887) < 1e-5
    want = 4 * math.log(1 + math.sqrt(2)) / (2 * math.sqrt(8)) / (math.pi ** 2 / 6)
    assert abs(pred.C - want) < 1e-12
    assert any("class number" in a for a in pred.assumptions)


@pytest.mark.parametrize("name", ["sqrt5", "sqrt-1", "sqrt-3", "sqrt-2"])
def test_prediction_matches_enumeration(name):
    U = unit_system(builtin_field(name))
    r = 20000
    C = residue_prediction(U).C
    count = enumerate_visible(U, r).count
    assert abs(count / r - C) / C < 0.03


@settings(max_examples=25, deadline=None)
@given(st.floats(1.05, 4), st.integers(-3, 3), st.floats(1, 400))
def test_series_inequalities(s, k, X):
    from normone.acceptance import report_for
    rep = report_for("sqrt2", 1000)
    L0 = l_truncated(rep, 0, s, X).value
    Lk = l_truncated(rep, k, s, X).value
    assert abs(Lk) <= L0.real + 1e-12
    a = xi1_truncated(rep, 0, s, X).value.real
    b = xi1_truncated(rep, 0, s, X * 1.7).value.real
    assert a <= b + 1e-12


def test_identity_ratio_converges(U2):
    rep = enumerate_visible(U2, 10001)
    res = [identity_check(rep, 0, 2, X) for X in (10, 100, 1000, 10000)]
    gaps = [abs(c.ratio - 1) for c in res]
    assert all(b <= a for a, b in zip(gaps, gaps[1:]))
    for c in res:
        assert abs(c.ratio - 1) <= 4 * c.L.tail / abs(c.L.value) + 1e-12
