import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidorbits.perm import (DegreeMismatch, Permutation, compose, conjugate, cycle_type,
                              element_order, fixed_points, inverse, parse_cycles, perm_index)

perms16 = st.permutations(range(16)).map(Permutation)


def test_compose_applies_left_first():
    a = parse_cycles("(1,2)", 3)
    b = parse_cycles("(2,3)", 3)
    # 1 -> 2 under a, then 2 -> 3 under b
    assert compose(a, b).images[0] == 2
    assert compose(a, a).is_identity()
    c = parse_cycles("(1,2,3)", 3)
    assert compose(c, c) == parse_cycles("(1,3,2)", 3)


def test_inverse_law_random():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a = Permutation(rng.permutation(16))
        assert compose(a, inverse(a)).is_identity()


def test_conjugate_examples():
    assert conjugate(parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)) == parse_cycles("(1,3)", 3)
    a = parse_cycles("(1,4,2)(3,5)", 6)
    assert conjugate(a, Permutation.identity(6)) == a


def test_orders_and_indices():
    assert element_order(parse_cycles("(1,2,3,4,5,6,7)", 8)) == 7
    assert perm_index(Permutation.identity(8)) == 0
    assert perm_index(parse_cycles("(1,2,3,4,5,6,7)", 8)) == 6
    assert perm_index(parse_cycles("(1,2)(3,4)", 8)) == 2
    assert fixed_points(Permutation.identity(16)) == 16
    assert cycle_type(parse_cycles("(1,2)(3,4,5)", 6)) == (3, 2, 1)


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        compose(Permutation.identity(3), Permutation.identity(4))
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])


def test_cycle_string_roundtrip():
    a = parse_cycles("(1,5,2)(3,4)", 7)
    assert parse_cycles(a.cycle_string(), 7) == a
    assert Permutation.identity(4).cycle_string() == "()"


def test_agl42_involution_fixed_points(group):
    G = group("AGL(4,2)")
    fix = sorted({fixed_points(c.rep_perm) for c in G.classes if c.order == 2})
    assert fix == [0, 4, 8]


@given(perms16, perms16, perms16)
@settings(max_examples=200, deadline=None)
def test_group_axioms(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    e = Permutation.identity(16)
    assert compose(a, e) == a == compose(e, a)
    assert inverse(inverse(a)) == a
    assert conjugate(a, b) == compose(compose(inverse(b), a), b)


@given(perms16, perms16)
@settings(max_examples=200, deadline=None)
def test_conjugation_preserves_cycle_type(a, g):
    assert cycle_type(conjugate(a, g)) == cycle_type(a)
    assert element_order(conjugate(a, g)) == element_order(a)


@given(perms16)
@settings(max_examples=200, deadline=None)
def test_index_plus_cycles_is_degree(a):
    assert perm_index(a) + len(a.cycles(include_fixed=True)) == 16
