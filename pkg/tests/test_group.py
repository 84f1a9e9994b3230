import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidorbits.group import PermGroup, Subgroup, double_cosets
from braidorbits.perm import compose, conjugate, parse_cycles


def brute_product_one(G, labels):
    """Count product-one tuples by walking all tuples directly on permutations."""
    members = [[G.perm(x) for x in G.cls(lab).members] for lab in labels]
    n = 0
    for tup in itertools.product(*members):
        acc = tup[0]
        for g in tup[1:]:
            acc = compose(acc, g)
        n += acc.is_identity()
    return n


def test_s4_classes(s4):
    assert s4.order == 24
    assert [(c.label, c.size) for c in s4.sorted_classes] == [
        ("1A", 1), ("2A", 3), ("2B", 6), ("3A", 8), ("4A", 6)]
    assert s4.cls("1A").rep == 0


@pytest.mark.parametrize("labels", [("2B", "3A", "4A"), ("2A", "2B", "2B"), ("3A", "3A", "3A"),
                                    ("2B", "2B", "2B", "2B")])
def test_structure_constants_brute_force_s4(s4, labels):
    assert s4.product_one_count(labels) == brute_product_one(s4, labels)


@pytest.mark.parametrize("labels", [("2A", "3A", "5A"), ("3A", "3A", "5B"), ("2A", "5A", "5B")])
def test_structure_constants_brute_force_a5(a5, labels):
    assert a5.product_one_count(labels) == brute_product_one(a5, labels)


def test_class_formula_matches_sizes(a5):
    # sum over all classes K of |K| f[K] counts every pair
    f = a5.product_counts(["3A", "5A"])
    assert sum(f[c.index] * c.size for c in a5.classes) == a5.cls("3A").size * a5.cls("5A").size


def test_unknown_label_suggests(s4):
    with pytest.raises(KeyError, match="did you mean"):
        s4.cls("4B")


def test_pin_labels(s4):
    G = PermGroup(s4.generators, name="S4")
    G.pin_labels({"2A": parse_cycles("(1,2)", 4), "2B": parse_cycles("(1,2)(3,4)", 4)})
    assert G.cls("2A").size == 6 and G.cls("2B").size == 3
    with pytest.raises(ValueError):
        G.pin_labels({"2A": parse_cycles("(1,2)", 4), "2C": parse_cycles("(3,4)", 4)})


def test_center_centralizer_derived(s4, a5, group):
    assert s4.center.order == 1
    assert s4.centralizer(s4.cls("4A").rep).order == 4
    assert s4.derived_subgroup.order == 12
    assert not s4.second_derived_trivial()
    assert a5.derived_subgroup.order == 60
    assert group("5^2:3").second_derived_trivial()
    assert not group("AGL(2,3)").second_derived_trivial()
    N = group("AGL(2,3)").socle_regular_elementary(3, 2)
    assert N.order == 9


def test_generates(s4):
    assert s4.generates([parse_cycles("(1,2)", 4), parse_cycles("(1,2,3,4)", 4)])
    assert not s4.generates([parse_cycles("(1,2)", 4), parse_cycles("(3,4)", 4)])


def test_double_cosets_partition(s4):
    t = s4.table
    W = Subgroup(s4, np.arange(24))
    A = s4.subgroup([parse_cycles("(1,2)", 4)])
    B = s4.subgroup([parse_cycles("(1,2,3)", 4)])
    reps, table = double_cosets(A, B, W)
    sizes = np.bincount(table)
    # each double coset has |A||B| / |A cap x B x^-1| elements
    for d, x in enumerate(reps):
        inter = np.intersect1d(A.elements, t.conj(B.elements, int(t.inv[x])))
        assert sizes[d] == A.order * B.order // inter.size
    assert sizes.sum() == 24


def test_backends_agree(group):
    G = group("AGL(2,3)")
    H = PermGroup(G.generators, name="x", backend="numpy")
    J = PermGroup(G.generators, name="y", backend="numba")
    assert H.order == J.order == 432
    assert (H.class_mult == J.class_mult).all()
    assert (H.class_ids == J.class_ids).all()


@given(st.integers(0, 431), st.integers(0, 431))
@settings(max_examples=100, deadline=None)
def test_table_matches_permutations(a, b):
    from conftest import catalog_group
    G = catalog_group("AGL(2,3)")
    t = G.table
    assert G.perm(int(t.mul(a, b))) == compose(G.perm(a), G.perm(b))
    assert G.perm(int(t.conj(a, b))) == conjugate(G.perm(a), G.perm(b))
    assert G.class_of(int(t.conj(a, b))).index == G.class_of(a).index


def test_centralizer_order_identity(group):
    G = group("ASL(3,2)")
    assert sum(c.size for c in G.classes) == G.order
    for c in G.classes:
        assert G.centralizer(c.rep).order * c.size == G.order
