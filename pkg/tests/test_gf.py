import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bilmetric.gf import ExtensionField, FieldError, FieldSpec, field_of_order, make_field
from bilmetric.linalg import matmul


def naive_polymul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def reducible_monics(p, e):
    """All monic degree-e products of two monic polynomials of lower degree."""
    found = set()
    for k in range(1, e):
        for lo in itertools.product(range(p), repeat=k):
            for hi in itertools.product(range(p), repeat=e - k):
                found.add(tuple(naive_polymul(list(lo) + [1], list(hi) + [1], p)))
    return found


FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4)]


def test_prime_fields():
    f2 = make_field(2, 1)
    assert f2.q == 2 and list(f2.elements()) == [0, 1]
    assert f2.modulus == (0, 1)
    f3 = make_field(3, 1)
    assert f3.arith(1, 2, "add") == 0


def test_f4_modulus_and_product():
    f4 = make_field(2, 2)
    assert f4.modulus == (1, 1, 1)
    assert f4.arith(2, 2, "mul") == 3


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_modulus_is_smallest_irreducible(p, e):
    f = make_field(p, e)
    bad = reducible_monics(p, e)
    assert f.modulus not in bad
    for coeffs in itertools.product(range(p), repeat=e):
        cand = coeffs + (1,)
        if cand == f.modulus:
            break
        assert cand in bad


@pytest.mark.parametrize("p,e", FIELDS)
def test_field_axioms_exhaustive(p, e):
    f = make_field(p, e)
    els = range(f.q)
    for a, b in itertools.product(els, repeat=2):
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        assert f.sub(f.add(a, b), b) == a
        for c in els:
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    for a in range(1, f.q):
        assert f.mul(a, f.inv(a)) == 1
    assert f.inv(1) == 1


def test_characteristic_two():
    for e in (1, 2, 3, 4):
        f = make_field(2, e)
        assert all(f.add(a, a) == 0 for a in f.elements())


def test_untabled_field_matches_definition():
    f = make_field(2, 9)  # q = 512, no tables
    assert not f.has_tables
    for a in (1, 2, 77, 300, 511):
        assert f.mul(a, f.inv(a)) == 1
    a = np.array([3, 5, 7])
    assert list(f.mul(a, a)) == [f.mul(3, 3), f.mul(5, 5), f.mul(7, 7)]


def test_errors():
    with pytest.raises(FieldError):
        make_field(4, 1)
    with pytest.raises(FieldError):
        make_field(2, 0)
    with pytest.raises(FieldError):
        make_field(2, 17)
    with pytest.raises(ZeroDivisionError):
        make_field(3).arith(1, 0, "div")
    with pytest.raises(FieldError):
        make_field(3).arith(1, 3, "add")
    with pytest.raises(FieldError):
        field_of_order(6)


def test_json_round_trip():
    f = make_field(3, 2)
    assert FieldSpec.from_dict(f.to_dict()) == f
    assert f.to_json() == '{"e": 2, "modulus": [1, 0, 1], "p": 3}'  # x^2 + 1: -1 is a non-square mod 3


def test_mul_matrix_small_cases():
    ext = ExtensionField(make_field(2), 2)
    assert np.array_equal(ext.mul_matrix(1), np.eye(2, dtype=int))
    assert not ext.mul_matrix(0).any()
    # x*1 = x -> (0,1); x*x = x+1 -> (1,1)
    assert ext.mul_matrix(2).tolist() == [[0, 1], [1, 1]]


@pytest.mark.parametrize("q,t", [(2, 3), (2, 4), (3, 2), (4, 2), (2, 6)])
def test_mul_matrix_is_ring_homomorphism(q, t):
    base = field_of_order(q)
    ext = ExtensionField(base, t)
    mats = {a: ext.mul_matrix(a) for a in range(ext.order)}
    assert len({m.tobytes() for m in mats.values()}) == ext.order
    pairs = itertools.product(range(ext.order), repeat=2)
    if ext.order > 16:
        rng = np.random.default_rng(1)
        pairs = rng.integers(0, ext.order, size=(400, 2)).tolist()
    for a, b in pairs:
        assert np.array_equal(mats[ext.mul(a, b)], matmul(base, mats[a], mats[b]))


def test_mul_matrix_injective_up_to_4096():
    ext = ExtensionField(make_field(2), 12)
    seen = {ext.mul_matrix(a).tobytes() for a in range(ext.order)}
    assert len(seen) == 4096


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_division_inverts_multiplication(pe, data):
    f = make_field(*pe)
    a = data.draw(st.integers(0, f.q - 1))
    b = data.draw(st.integers(1, f.q - 1))
    assert f.arith(f.arith(a, b, "mul"), b, "div") == a
