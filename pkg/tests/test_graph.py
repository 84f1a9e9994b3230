import copy

import pytest

from braidorbits.braid import RamificationType
from braidorbits.classic import orbit_partition
from braidorbits.graph import DETERMINISTIC, check_witnesses, orbit_of, sample_edges, verify_components
from braidorbits.matching import MatchingIndex


@pytest.fixture(scope="module")
def agl23(group):
    G = group("AGL(2,3)")
    rt = RamificationType.parse("2A,2A,2A,2A,3A")
    return G, rt, MatchingIndex(G, rt, k=2)


def test_components_match_classic(agl23):
    G, rt, idx = agl23
    g = sample_edges(idx, seed=1)
    assert g.lengths == [216]
    assert g.verdict == DETERMINISTIC
    assert verify_components(g, orbit_partition(G, rt))
    assert check_witnesses(g)
    assert sum(c.tuples for c in g.components) == idx.node_total + sum(n for _, n in idx.skipped_generating)


def test_determinism(agl23):
    _, _, idx = agl23
    a = sample_edges(idx, seed=42)
    b = sample_edges(idx, seed=42)
    assert a.edges == b.edges
    assert (a.tries == b.tries).all() and (a.successes == b.successes).all()


def test_stopping_rule(agl23):
    _, _, idx = agl23
    g = sample_edges(idx, s=3, t=10, seed=0)
    for c, d in zip(g.tries, g.successes):
        assert d == 3 or (d == 0 and c == 10)


def test_single_node(group):
    G = group("3^2:(2'A4)")
    idx = MatchingIndex(G, RamificationType.parse("3A,3A,3A,2A"), k=2)
    g = sample_edges(idx, seed=0)
    assert len(g.components) == 1
    if len(idx.nodes) == 1:
        assert not g.edges


def test_corrupted_edge_is_caught(agl23):
    _, _, idx = agl23
    g = sample_edges(idx, seed=3)
    assert g.edges
    bad = copy.copy(g)
    (a, b), wit = next(iter(g.edges.items()))
    other = next(n.id for n in idx.nodes if n.id not in (a, b))
    bad.edges = dict(g.edges)
    bad.edges[(min(a, other), max(a, other))] = wit
    del bad.edges[(a, b)]
    assert not check_witnesses(bad)


def test_wrong_oracle_rejected(agl23, group):
    G, rt, idx = agl23
    g = sample_edges(idx, seed=0)
    oracle = orbit_partition(G, rt)
    oracle.orbits[0].length += 1
    assert not verify_components(g, oracle)


def test_orbit_of_representatives(agl23):
    G, rt, idx = agl23
    g = sample_edges(idx, seed=0)
    for o in orbit_partition(G, rt).generating:
        assert 0 <= orbit_of(idx, o.rep) < len(idx.nodes)
