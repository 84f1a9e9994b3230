import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidorbits.braid import RamificationType
from braidorbits.classic import orbit_partition
from braidorbits.genus0 import (classify, class_indices_of, enumerate_triples, fixed_space_codims,
                                rh_candidate_types, rh_galois_check, scott_filter)
from braidorbits.group import NotAffine
from braidorbits.perm import perm_index


def test_rh_candidates_sum(group):
    G = group("ASL(3,2)")
    cands = rh_candidate_types(G)
    assert cands
    for rt in cands:
        assert sum(perm_index(G.cls(lab).rep_perm) for lab in rt.labels) == 2 * (8 - 1)
    assert RamificationType.parse("2B,2B,2B,2B,2B,2B,2B") in cands


def test_rh_galois():
    # (2,3,7) triangle group quotient of order 168 has genus 3
    assert rh_galois_check([2, 3, 7], 168, 3)
    assert not rh_galois_check([2, 3, 7], 168, 0)
    assert rh_galois_check([2, 3, 5], 60, 0)


def test_codims_affine(group):
    G = group("AGL(2,3)")
    v = fixed_space_codims(G, 3, 2)
    assert v[G.identity_class.index] == 0
    assert all(0 <= x <= 2 for x in v.values())


def test_scott_filter_rejects_small_sums(group):
    G = group("AGL(2,3)")
    rt = RamificationType.parse("2A,2A,2A,2A,3A")
    assert scott_filter(rt, G, 3, 2)
    with pytest.raises(NotAffine):
        classify(G, 2, 3)


def test_triples_match_pure_orbits(group):
    G = group("AGL(2,3)")
    for rt in rh_candidate_types(G):
        if rt.r != 3:
            continue
        a = enumerate_triples(G, rt)
        b = orbit_partition(G, rt, policy="pure")
        assert a.num_orbits == b.num_orbits
        assert a.total_tuples == b.total_tuples


@pytest.mark.parametrize("name", ["3^2:D(2x4)", "AGL(2,3)", "ASL(3,2)"])
def test_scott_on_off_same_systems(catalog, name):
    e = catalog.entry(name)
    G = e.group(validate=False)
    on = classify(G, e.p, e.e, scott=True)
    off = classify(G, e.p, e.e, scott=False)
    assert on.rows() == off.rows()
    assert on.counts["scott"] <= off.counts["riemann_hurwitz"]


def test_degree9_total(catalog):
    total = 0
    for e in catalog.of_degree(9):
        c = classify(e.group(validate=False), e.p, e.e)
        if not c.metabelian:
            total += c.components
    assert total == 26


@given(st.lists(st.integers(2, 12), min_size=3, max_size=6), st.integers(1, 2000))
@settings(max_examples=200, deadline=None)
def test_rh_galois_matches_genus_formula(orders, n):
    from fractions import Fraction
    g2 = n * sum(1 - Fraction(1, o) for o in orders) - 2 * n + 2
    if g2.denominator == 1 and g2 % 2 == 0 and g2 >= 0:
        assert rh_galois_check(orders, n, int(g2) // 2)
    else:
        assert not rh_galois_check(orders, n, 0) or g2 == 0


def test_class_indices(group):
    G = group("ASL(3,2)")
    ind = class_indices_of(G)
    assert G.identity_class.index not in ind
    assert sorted(set(ind.values())) == sorted({perm_index(c.rep_perm) for c in G.classes if c.order > 1})
