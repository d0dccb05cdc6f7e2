from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

from normone.errors import InvalidInput, ResourceError
from normone.field import Element, apply_sigma, builtin_field, norm
from normone.hilbert90 import (EnumerationReport, brute_force_oracle, canonical_class, collision_scan,
                               enumerate_visible, is_primitive, log_pi, pi_map, search_box,
                               visible_decompose)
from normone.units import log_embed, unit_system


def test_pi_map_examples(sqrt2):
    t = sqrt2.theta
    assert pi_map(sqrt2.one()) == sqrt2.one()
    assert pi_map(2 + t) == 3 + 2 * t
    assert pi_map(1 + t) == -3 - 2 * t
    with pytest.raises(InvalidInput):
        pi_map(sqrt2.zero())


def test_primitivity_and_decomposition(sqrt2):
    t = sqrt2.theta
    assert is_primitive(2 + t)
    assert not is_primitive(2 + 2 * t)
    assert not is_primitive(sqrt2.rational(3))
    assert visible_decompose(6 + 3 * t) == (3, 2 + t)
    assert visible_decompose(3 + t) == (1, 3 + t)
    assert visible_decompose(sqrt2.rational(4)) == (4, sqrt2.one())
    with pytest.raises(InvalidInput):
        visible_decompose(sqrt2.zero())
    with pytest.raises(InvalidInput):
        is_primitive((1 + t) / 2)


def test_log_pi_matches_division(Ucubic):
    K = Ucubic.field
    a = Element(K, (3, -1, 2))
    direct = log_embed(pi_map(a)).values
    fast = log_pi(a).values
    assert all(abs(x - y) < 1e-40 for x, y in zip(direct, fast))


def test_enumeration_examples(U2):
    assert enumerate_visible(U2, 0.5).count == 0
    assert enumerate_visible(U2, 1).count == 0
    rep = enumerate_visible(U2, 1.5)
    assert [(c.h, c.coords, c.torus_point) for c in rep.classes] == [(1, (1, 0), (0.0,))]
    rep = enumerate_visible(U2, 3)
    assert [(c.h, c.torus_point) for c in rep.classes] == [(1, (0.0,)), (2, (0.0,))]
    rep = enumerate_visible(U2, 8)
    assert [c.h for c in rep.classes] == [1, 2, 7, 7]
    ts = sorted(c.torus_point[0] for c in rep.classes[2:])
    assert abs(ts[0] - 0.16154) < 1e-5 and abs(ts[1] - 0.83846) < 1e-5
    assert abs(ts[0] + ts[1] - 1) < 1e-12


def test_strict_bound_excludes_ties(U2):
    assert max(c.h for c in enumerate_visible(U2, 7).classes) == 2
    assert enumerate_visible(U2, 7.0001).count == 4


def test_oracle_examples(U2):
    assert brute_force_oracle(U2, 20, 8).class_keys() == enumerate_visible(U2, 8).class_keys()
    assert brute_force_oracle(U2, 20, 1.5).class_keys() == {(1, (1, 0))}
    assert brute_force_oracle(U2, 0, 8).count == 0


@pytest.mark.parametrize("name, r", [("sqrt5", 200), ("sqrt7", 150), ("sqrt-1", 200), ("sqrt-3", 200),
                                     ("cubic13", 60), ("cubic49", 60)])
def test_enumeration_matches_oracle(name, r):
    U = unit_system(builtin_field(name))
    box = 12 if U.field.degree == 3 else 40
    assert enumerate_visible(U, r).class_keys() == brute_force_oracle(U, box, r).class_keys()


def test_enumeration_is_sorted_and_unique(U3):
    rep = enumerate_visible(U3, 300)
    keys = [(c.h, c.coords) for c in rep.classes]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    K = U3.field
    for c in rep.classes:
        assert c.h == abs(norm(c.alpha)) < 300 and is_primitive(c.alpha)
        assert canonical_class(c.alpha, U3).coords == c.coords


def test_workers_do_not_change_output(U2):
    a = enumerate_visible(U2, 3000, workers=1)
    b = enumerate_visible(U2, 3000, workers=3)
    assert a.to_csv() == b.to_csv()


def test_resource_budget(U2):
    with pytest.raises(ResourceError) as info:
        enumerate_visible(U2, 1e6, max_box_points=1000)
    assert info.value.box_volume > 1000
    radius, _ = search_box(U2, 1e6)
    assert info.value.box_volume == math.prod(2 * int(R) + 1 for R in radius)


def test_report_serialisation(U2):
    rep = enumerate_visible(U2, 8)
    lines = rep.to_csv().split("\n")
    assert lines[0] == "h,coord_1,coord_2,t_1,err" and lines[-1] == ""
    assert len(lines) == 6
    d = rep.to_dict()
    assert d["count"] == 4 and d["classes"][0]["alpha"] == [1, 0]
    sub = rep.restrict(3)
    assert sub.count == 2
    with pytest.raises(InvalidInput):
        rep.restrict(9)


def test_collision_probe(U2):
    rep = enumerate_visible(U2, 3)
    for tol in (1e-8, 0.0):
        groups = collision_scan(rep, tol)
        assert len(groups) == 1
        assert sorted(c.h for c in groups[0]) == [1, 2]
    assert collision_scan(EnumerationReport(3, []), 1e-8) == []
    # 3 + 2 sqrt2 is a norm-one unit, yet not pi of any unit; its minimal preimage is in theta's orbit
    t = U2.field.theta
    eps = U2.fundamental_units[0]
    assert pi_map(2 + t) == 3 + 2 * t and abs(norm(2 + t)) == 2
    assert all(pi_map(s * eps ** k) != 3 + 2 * t for k in range(-6, 7) for s in (1, -1))
    assert pi_map(t) == -U2.field.one()

small = st.integers(-20, 20)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(["sqrt2", "cubic13"]), st.lists(small, min_size=3, max_size=3), st.integers(1, 9))
def test_visible_decomposition_properties(name, xs, n):
    K = builtin_field(name)
    g = Element(K, xs[:K.degree])
    if g.is_zero():
        return
    m, alpha = visible_decompose(g)
    assert alpha * m == g and is_primitive(alpha)
    assert pi_map(g) == pi_map(alpha)
    assert norm(pi_map(g)) == 1
    prod = K.one()
    for k in range(K.degree):
        prod = prod * apply_sigma(pi_map(g), k)
    assert prod == K.one()
    assert abs(norm(alpha * n)) == n ** K.degree * abs(norm(alpha))
