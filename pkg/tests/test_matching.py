import numpy as np
import pytest

from braidorbits.braid import BraidWord, RamificationType, apply_word_array
from braidorbits.classic import enumerate_tuple_arrays
from braidorbits.matching import SKIPPED, MatchingIndex

CASES = [("AGL(2,3)", "2A,2A,2A,2A,3A", 2), ("AGL(2,3)", "2A,2A,2A,2A,3A", 3),
         ("3^2:D(2x4)", "2A,2A,2C,2C,2B", 2), ("3^2:D(2x4)", "2A,2C,2B,4A", 2),
         ("ASL(3,2)", "2B,2B,2B,4B,3A", 2), ("ASL(3,2)", "2B,2B,3A,7A", 2)]


def all_generating(G, rt):
    return np.concatenate(list(enumerate_tuple_arrays(G, rt, generating_only=True)))


@pytest.mark.parametrize("name,text,k", CASES)
@pytest.mark.parametrize("skip", [True, False])
def test_nodes_cover_generating_tuples(group, name, text, k, skip):
    G = group(name)
    rt = RamificationType.parse(text)
    idx = MatchingIndex(G, rt, k=k, skip_type1=skip)
    T = all_generating(G, rt)
    ids = idx.identify(T)
    assert (ids >= 0).sum() + (ids == SKIPPED).sum() == T.shape[0]
    counts = np.bincount(ids[ids >= 0], minlength=len(idx.nodes))
    # node length formula against brute-force node cardinality
    assert [int(c) for c in counts] == [n.length for n in idx.nodes]
    assert int((ids == SKIPPED).sum()) == sum(n for _, n in idx.skipped_generating)
    assert idx.prenode_total == G.product_one_count(rt.labels)
    if not skip:
        assert not idx.skipped_generating


def test_identify_invariances(group):
    G = group("AGL(2,3)")
    t = G.table
    rt = RamificationType.parse("2A,2A,2A,2A,3A")
    idx = MatchingIndex(G, rt, k=3)
    rng = np.random.default_rng(11)
    for node in idx.nodes:
        assert idx.identify(np.array(node.rep))[0] == node.id
        T = np.stack([idx.random_tuple(node, rng) for _ in range(20)])
        assert (idx.identify(T) == node.id).all()
        g = rng.integers(G.order, size=20)
        assert (idx.identify(t.conj(T, g[:, None])) == node.id).all()
        for w in idx.left + idx.right:
            assert (idx.identify(apply_word_array(T, w, t)) == node.id).all()


def test_heads_match_tails(group):
    G = group("ASL(3,2)")
    idx = MatchingIndex(G, RamificationType.parse("2B,2B,3A,7A"), k=2)
    for c, td in idx.types.items():
        x0 = td.x0
        assert (G.table.product(td.head.tuples) == G.table.inv[x0]).all()
        assert (G.table.product(td.tail.tuples) == x0).all()
        assert G.class_ids[x0] == c


def test_counts_tables(group):
    G = group("AGL(2,3)")
    idx = MatchingIndex(G, RamificationType.parse("2A,2A,2A,2A,3A"), k=2)
    pairs = idx.matching_pairs()
    heads = idx.head_orbit_counts()
    tails = idx.tail_orbit_counts()
    assert all(pairs[c] == heads[c] * tails[c] for c in pairs)


def test_bad_split(group):
    rt = RamificationType.parse("2A,2A,3A,3C")
    for k in (1, 4):
        with pytest.raises(ValueError):
            MatchingIndex(group("AGL(2,3)"), rt, k=k)


def test_type_change_witness(group):
    G = group("AGL(2,3)")
    rt = RamificationType.parse("2A,2A,2A,2A,3A")
    idx = MatchingIndex(G, rt, k=2)
    T = all_generating(G, rt)
    x = G.table.product(T[:, 2:])
    for row in T[x == 0][:50]:
        img, w = idx.type_change_witness(tuple(int(v) for v in row))
        assert isinstance(w, BraidWord)
        assert G.table.product(img[None, 2:])[0] != 0
