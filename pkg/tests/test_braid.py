import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidorbits.braid import (BraidWord, GTuple, RamificationType, apply_Qi, apply_Qi_inv, apply_Qij,
                               apply_steps, apply_steps_array, apply_word, apply_word_array, default_k,
                               orbit_generators, parabolic_generators, pure_generators, qij_steps,
                               qij_steps_alt, split_type_generators)
from braidorbits.perm import Permutation, cycle_type, inverse

GROUPS = ["AGL(2,3)", "ASL(3,2)", "5^2:S3"]


def random_product_one(G, r, n, rng):
    t = G.table
    T = rng.integers(t.N, size=(n, r))
    T[:, -1] = t.inv[t.product(T[:, :-1])]
    return T


def class_multiset(G, T):
    return np.sort(G.class_ids[T], axis=1)


def test_qi_definition():
    a = Permutation([1, 0, 2])
    b = Permutation([0, 2, 1])
    t = apply_Qi(GTuple([a, b]), 1)
    assert t[0] == b
    assert t[1] == Permutation([2, 1, 0])
    assert apply_Qi_inv(t, 1) == GTuple([a, b])


def test_word_parse_and_inverse():
    w = BraidWord.parse("Q1 Q2^-1 Q13")
    assert BraidWord.parse(str(w)) == w
    assert w.inverse().inverse() == w
    assert w.max_position() == 3


def test_qij_validation():
    with pytest.raises(ValueError):
        qij_steps(3, 2)
    with pytest.raises(IndexError):
        apply_Qij(GTuple([Permutation.identity(3)] * 3), 1, 4)


def test_default_k_and_generators():
    assert [default_k(r) for r in (3, 4, 5, 6, 7)] == [2, 2, 2, 3, 3]
    assert len(pure_generators(5)) == 10
    rt = RamificationType.parse("2A,2A,3A,3A")
    par = parabolic_generators(rt)
    assert BraidWord.Q(1) in par and BraidWord.Q(3) in par and BraidWord.Q(2) not in par
    assert orbit_generators(RamificationType.parse("2A,3A,7A"), "auto") == pure_generators(3)
    with pytest.raises(ValueError):
        orbit_generators(rt, "bogus")
    with pytest.raises(ValueError):
        split_type_generators(rt, 1)


@pytest.mark.parametrize("name", GROUPS)
def test_relations_on_arrays(group, name):
    G = group(name)
    t = G.table
    rng = np.random.default_rng(7)
    T = random_product_one(G, 5, 2000, rng)
    Q = lambda X, *steps: apply_steps_array(X, steps, t)
    for i in range(1, 4):
        assert (Q(T, (i, 1), (i + 1, 1), (i, 1)) == Q(T, (i + 1, 1), (i, 1), (i + 1, 1))).all()
        assert (Q(T, (i, 1), (i, -1)) == T).all()
    assert (Q(T, (1, 1), (3, 1)) == Q(T, (3, 1), (1, 1))).all()
    assert (Q(T, (1, 1), (4, 1)) == Q(T, (4, 1), (1, 1))).all()


@pytest.mark.parametrize("name", GROUPS)
def test_qij_formulas_agree(group, name):
    G = group(name)
    t = G.table
    T = random_product_one(G, 6, 1000, np.random.default_rng(3))
    for i in range(1, 6):
        for j in range(i + 1, 7):
            a = apply_steps_array(T, qij_steps(i, j), t)
            b = apply_steps_array(T, qij_steps_alt(i, j), t)
            assert (a == b).all()
            assert (t.product(a) == 0).all()
            assert (class_multiset(G, a) == class_multiset(G, T)).all()
            # pure braids keep every entry's class in place
            assert (G.class_ids[a] == G.class_ids[T]).all()


def test_perm_and_array_routes_agree(group):
    G = group("AGL(2,3)")
    rng = np.random.default_rng(5)
    T = random_product_one(G, 4, 50, rng)
    w = BraidWord.parse("Q1 Q2^-1 Q3 Q13")
    A = apply_word_array(T, w, G.table)
    for row, img in zip(T, A):
        gt = apply_word(GTuple([G.perm(x) for x in row]), w)
        assert [G.index(x) for x in gt] == list(img)


perm_lists = st.lists(st.permutations(range(6)).map(Permutation), min_size=2, max_size=5)


@given(perm_lists, st.data())
@settings(max_examples=150, deadline=None)
def test_braid_action_invariants(entries, data):
    t = GTuple(entries + [inverse(GTuple(entries).product())])
    r = len(t)
    i = data.draw(st.integers(1, r - 1))
    u = apply_Qi(t, i)
    assert u.product().is_identity()
    assert sorted(map(cycle_type, u)) == sorted(map(cycle_type, t))
    assert apply_Qi_inv(u, i) == t
    if i + 1 < r:
        lhs = apply_steps(t, [(i, 1), (i + 1, 1), (i, 1)])
        rhs = apply_steps(t, [(i + 1, 1), (i, 1), (i + 1, 1)])
        assert lhs == rhs
    j = data.draw(st.integers(2, r))
    i = data.draw(st.integers(1, j - 1))
    assert apply_steps(t, qij_steps(i, j)) == apply_steps(t, qij_steps_alt(i, j))
