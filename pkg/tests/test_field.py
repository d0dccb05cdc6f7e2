from __future__ import annotations

import json
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from normone.errors import ConfigError, InvalidInput
from normone.field import (Element, apply_sigma, builtin_field, det_exact, div_exact, embed,
                           load_field, make_imaginary_quadratic, make_real_quadratic, norm,
                           sigma_place_permutation, trace)

small = st.integers(-30, 30)


def _cfg(name="cubic13"):
    from importlib import resources
    return json.loads(resources.files("normone.data").joinpath(f"{name}.json").read_text())


def test_real_quadratic_constructions():
    K = make_real_quadratic(2)
    assert K.min_poly == (-2, 0, 1)
    assert K.discriminant == 8
    assert K.integral_basis == ((1, 0), (0, 1))
    K5 = make_real_quadratic(5)
    assert K5.integral_basis[1] == (Fraction(1, 2), Fraction(1, 2))
    assert K5.discriminant == 5
    for bad in (12, 1, 0, -3, 4):
        with pytest.raises(InvalidInput):
            make_real_quadratic(bad)


def test_imaginary_quadratic_roots_of_unity():
    assert make_imaginary_quadratic(-1).roots_of_unity == 4
    assert make_imaginary_quadratic(-3).roots_of_unity == 6
    K = make_imaginary_quadratic(-7)
    assert K.signature == (0, 1) and K.roots_of_unity == 2 and K.discriminant == -7


def test_discriminant_matches_trace_form():
    for D in (2, 3, 5, 6, 7, 13, 17, 21, -1, -2, -3, -5, -15):
        K = builtin_field(f"sqrt{D}")
        basis = [Element(K, [int(i == j) for j in range(2)]) for i in range(2)]
        tf = det_exact([[trace(a * b) for b in basis] for a in basis])
        expected = D if D % 4 == 1 else 4 * D
        assert tf == K.discriminant == expected


def test_simplest_cubic_config_is_valid():
    K = builtin_field("cubic13")
    assert K.signature == (3, 0)
    assert K.min_poly == (-1, -4, -1, 1)
    theta = K.theta
    # sigma has exact order 3 and theta's conjugates are roots of min_poly
    for k in range(3):
        t = apply_sigma(theta, k)
        assert t ** 3 - t ** 2 - 4 * t - 1 == K.zero()
    assert apply_sigma(theta, 3) == theta
    assert apply_sigma(theta, 1) != theta


def test_sigma_order_two_rejected():
    cfg = _cfg()
    cfg["sigma_on_basis"] = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    with pytest.raises(ConfigError, match="σ has order 2 ≠ 3") as info:
        load_field(cfg)
    assert info.value.invariant == "sigma_order"


def test_mixed_signature_rejected():
    cfg = _cfg()
    cfg["signature"] = [1, 1]
    with pytest.raises(ConfigError, match="cyclic field must be totally real or totally imaginary"):
        load_field(cfg)


@pytest.mark.parametrize("mutate, invariant", [
    (lambda c: c.__setitem__("discriminant", 170), "discriminant"),
    (lambda c: c.__setitem__("min_poly", [1, 0, 0, 1]), "min_poly"),
    (lambda c: c.__setitem__("sigma_on_basis", [[1, 0, 0], [0, 1, 0], [0, 0, 2]]), "sigma_order"),
    (lambda c: c.pop("signature"), "schema"),
    (lambda c: c.__setitem__("integral_basis", [[1, 0, 0], [0, "1/2", 0], [0, 0, 1]]), "integral_basis"),
])
def test_config_errors_name_the_invariant(mutate, invariant):
    cfg = _cfg()
    mutate(cfg)
    with pytest.raises(ConfigError) as info:
        load_field(cfg)
    assert info.value.invariant == invariant


def test_load_field_from_path(tmp_path):
    p = tmp_path / "c49.json"
    p.write_text(json.dumps(_cfg("cubic49")))
    K = load_field(p)
    assert K.discriminant == 49 and K.signature == (3, 0)
    with pytest.raises(OSError):
        load_field(tmp_path / "missing.json")
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigError):
        load_field(tmp_path / "bad.json")


def test_arithmetic_examples(sqrt2):
    t = sqrt2.theta
    assert (1 + t) * (1 - t) == Element(sqrt2, (-1, 0))
    a = Element(sqrt2, (3, 1))
    assert a * 1 == a
    assert div_exact(a, a) == sqrt2.one()
    assert apply_sigma(3 + t) == 3 - t
    assert norm(3 + 2 * t) == 1
    assert norm(t) == -2
    assert norm(sqrt2.rational(7)) == 49


def test_element_rational_coordinates(sqrt2):
    a = Element(sqrt2, (3, 1)) / Element(sqrt2, (1, 2))
    assert not a.is_integral
    assert a * Element(sqrt2, (1, 2)) == Element(sqrt2, (3, 1))
    assert norm(a) == Fraction(7, -7)
    with pytest.raises(ZeroDivisionError):
        div_exact(a, sqrt2.zero())


def test_embed_values(sqrt2):
    vals, err = embed(sqrt2.one())
    assert [float(v) for v in vals] == [1.0, 1.0]
    vals, err = embed(sqrt2.theta)
    with mpmath.workprec(300):
        root2 = mpmath.sqrt(2)
        assert abs(vals[0] - root2) < err and abs(vals[1] + root2) < err
    assert err < 1e-25


def test_place_permutation():
    assert sigma_place_permutation(builtin_field("sqrt2")) == (1, 0)
    assert sigma_place_permutation(builtin_field("sqrt-3")) == (0,)
    tau = sigma_place_permutation(builtin_field("cubic13"))
    assert sorted(tau) == [0, 1, 2] and all(tau[i] != i for i in range(3))


def test_mult_table_associative():
    for name in ("sqrt2", "sqrt5", "sqrt-3", "cubic13", "cubic49"):
        K = builtin_field(name)
        d = K.degree
        basis = [Element(K, [int(i == j) for j in range(d)]) for i in range(d)]
        for a in basis:
            for b in basis:
                for c in basis:
                    assert (a * b) * c == a * (b * c)


def test_fields_pickle():
    import pickle
    K = builtin_field("cubic13")
    K2 = pickle.loads(pickle.dumps(K))
    assert K2 == K and K2.sigma_matrix == K.sigma_matrix


def test_precision_env_override(monkeypatch):
    monkeypatch.setenv("NORMONE_PRECISION_BITS", "256")
    assert make_real_quadratic(3).precision == 256
    monkeypatch.setenv("NORMONE_PRECISION_BITS", "32")
    with pytest.raises(InvalidInput):
        make_real_quadratic(3)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sqrt2", "sqrt5", "sqrt-7", "cubic13"]), st.lists(small, min_size=6, max_size=6))
def test_norm_multiplicative_and_sigma_invariant(name, xs):
    K = builtin_field(name)
    d = K.degree
    a, b = Element(K, xs[:d]), Element(K, xs[3:3 + d])
    assert norm(a * b) == norm(a) * norm(b)
    assert norm(apply_sigma(a, 1)) == norm(a)
    assert apply_sigma(a * b) == apply_sigma(a) * apply_sigma(b)
    assert apply_sigma(a, d) == a


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["sqrt2", "sqrt-3", "cubic13"]), st.lists(small, min_size=3, max_size=3))
def test_log_sum_is_log_norm(name, xs):
    K = builtin_field(name)
    a = Element(K, xs[:K.degree])
    if a.is_zero():
        return
    vals, err = embed(a)
    total = math.fsum(float(mpmath.log(abs(v))) * (1 if i < K.r1 else 2) for i, v in enumerate(vals))
    bound = 10 * sum(float(err / abs(v)) for v in vals) + 1e-12
    assert abs(total - math.log(abs(norm(a)))) <= bound
