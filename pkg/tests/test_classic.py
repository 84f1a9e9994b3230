import itertools

import numpy as np
import pytest

from braidorbits.braid import GTuple, RamificationType, apply_word, orbit_generators
from braidorbits.classic import (canonical_form, compute_heads, compute_tails, enumerate_tuple_arrays,
                                 enumerate_tuples, orbit_partition)
from braidorbits.perm import compose, inverse


def brute_orbits(G, rt, policy="auto"):
    """Independent oracle: BFS on permutation tuples, classes taken by explicit conjugation."""
    members = [[G.perm(x) for x in G.cls(lab).members] for lab in rt.labels]
    elems = [G.perm(i) for i in range(G.order)]

    def key(t):
        return min(tuple(p.images for p in t.conjugate(g)) for g in elems)

    todo = {}
    for tup in itertools.product(*members[:-1]):
        acc = tup[0]
        for g in tup[1:]:
            acc = compose(acc, g)
        last = inverse(acc)
        if G.class_of(last).label == rt.labels[-1]:
            t = GTuple(list(tup) + [last])
            todo.setdefault(key(t), t)
    words = orbit_generators(rt, policy)
    seen, out = set(), []
    for k0, t0 in todo.items():
        if k0 in seen:
            continue
        orbit, stack = {k0}, [t0]
        while stack:
            t = stack.pop()
            for w in words:
                u = apply_word(t, w)
                ku = key(u)
                if ku not in orbit:
                    orbit.add(ku)
                    stack.append(u)
        seen |= orbit
        out.append((len(orbit), G.generates(list(t0))))
    return sorted(n for n, gen in out if gen)


CASES = [("S4", "2B,2B,2B,2B"), ("S4", "2B,2B,2B,2B,2B,2B"), ("S4", "2B,3A,4A"),
         ("A5", "2A,2A,3A,3A"), ("A5", "3A,3A,5A")]


@pytest.mark.parametrize("gname,text", CASES)
def test_matches_brute_force(s4, a5, gname, text):
    G = {"S4": s4, "A5": a5}[gname]
    rt = RamificationType.parse(text)
    rep = orbit_partition(G, rt)
    assert sorted(rep.lengths) == brute_orbits(G, rt)
    assert sum(o.tuples for o in rep.orbits) == G.product_one_count(rt.labels)


def test_known_orbits(group):
    rep = orbit_partition(group("ASL(3,2)"), RamificationType.parse("2B,2B,2B,2B,2B,3A"))
    assert rep.summary() == "1 orbit, length 6480"
    rep = orbit_partition(group("AGL(2,3)"), RamificationType.parse("2A,2A,2A,2A,3A"))
    assert rep.summary() == "1 orbit, length 216"


def test_policies_refine(group):
    G = group("AGL(2,3)")
    rt = RamificationType.parse("2A,2A,2A,2A,3A")
    full = orbit_partition(G, rt, policy="parabolic")
    pure = orbit_partition(G, rt, policy="pure")
    # pure braid orbits refine the parabolic ones
    assert sum(pure.lengths) == sum(full.lengths)
    assert pure.num_orbits >= full.num_orbits


def test_canonical_form_invariant(s4):
    rng = np.random.default_rng(0)
    t = (int(s4.cls("2B").members[0]), int(s4.cls("3A").members[0]))
    c = canonical_form(s4, t)
    for g in rng.integers(24, size=10):
        u = tuple(int(x) for x in s4.table.conj(np.array(t), int(g)))
        assert canonical_form(s4, u) == c
    gt = GTuple([s4.perm(x) for x in t])
    assert [s4.index(x) for x in canonical_form(s4, gt)] == list(c)


def test_enumerate_counts(group, s4):
    G = group("AGL(2,3)")
    rt = RamificationType.parse("2A,3A,6A")
    n = sum(T.shape[0] for T in enumerate_tuple_arrays(G, rt))
    assert n == G.product_one_count(rt.labels)
    rt = RamificationType.parse("2B,2B,2B,2B")
    rows = [tuple(G_.images for G_ in t) for t in enumerate_tuples(s4, rt, generating_only=True)]
    assert len(rows) == len(set(rows))
    assert len(rows) == 24 * sum(orbit_partition(s4, rt).lengths)


def test_heads_and_tails(group):
    G = group("AGL(2,3)")
    rt = RamificationType.parse("2A,2A,2A,2A,3A")
    heads = compute_heads(G, rt, 2, "2A")
    tails = compute_tails(G, rt, 2, "2A")
    assert sum(o.tuples for o in heads) == G.product_one_count(["2A", "2A", "2A"])
    assert sum(o.tuples for o in tails) == G.product_one_count(["2A", "2A", "2A", "3A"])
