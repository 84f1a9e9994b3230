"""Exhaustive orbit engine.

Every product-one tuple of a ramification type is enumerated up to
diagonal conjugation, and the canonical forms are split into orbits of a
braid group given by generating words.  This is the reference engine that
the matching engine is checked against.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .braid import BraidWord, GTuple, RamificationType, apply_word_array, orbit_generators, split_type_generators
from .group import PermGroup, Subgroup
from .tuples import Canonizer, WorkCapExceeded, lookup_sorted, product_tuples

log = logging.getLogger(__name__)

DEFAULT_WORK_CAP = 10 ** 7


@dataclass
class Orbit:
    length: int                 # number of G-classes of tuples
    rep: tuple                  # element indices
    generating: bool
    tuples: int                 # number of tuples
    comp: int = -1              # component id in the partition labels
    forms: np.ndarray | None = field(default=None, repr=False)


@dataclass
class OrbitReport:
    rtype: RamificationType
    orbits: list                # generating orbits first
    total_tuples: int           # all product-one tuples, generating or not
    engine: str = "classic"
    params: dict = field(default_factory=dict)

    @property
    def generating(self) -> list[Orbit]:
        return [o for o in self.orbits if o.generating]

    @property
    def num_orbits(self) -> int:
        return len(self.generating)

    @property
    def lengths(self) -> list[int]:
        return sorted((o.length for o in self.generating), reverse=True)

    @property
    def largest(self) -> int:
        return max(self.lengths, default=0)

    def summary(self) -> str:
        n = self.num_orbits
        ls = self.lengths
        if n == 1:
            return f"1 orbit, length {ls[0]}"
        return f"{n} orbits, lengths {ls}" if n else "0 orbits"


def class_indices(G: PermGroup, rt: RamificationType) -> list[int]:
    return [G.cls(lab).index for lab in rt.labels]


def canonical_form(G: PermGroup, t, under: Subgroup | None = None):
    """Lexicographically least conjugate of ``t`` under ``under`` (default ``G``).

    ``t`` is a :class:`GTuple` or a sequence of element indices; the result
    has the same kind.  Comparison is on element indices, position by position.
    """
    as_perm = isinstance(t, GTuple)
    idx = np.array([G.index(x) for x in t] if as_perm else list(t), np.int64)
    els = np.arange(G.table.N) if under is None else under.elements
    imgs = G.table.conj(np.repeat(idx[None, :], els.size, axis=0), els[:, None])
    best = imgs[np.lexsort(imgs.T[::-1])[0]]
    if as_perm:
        return GTuple(G.perm(i) for i in best)
    return tuple(int(i) for i in best)


def orbit_partition_classes(G: PermGroup, classes: Sequence[int], words: Sequence[BraidWord],
                            work_cap: int = DEFAULT_WORK_CAP, test_generation: bool = True):
    """Split canonical tuples of the class list into orbits of ``<words>``.

    Returns ``(orbits, canonizer, forms, labels)``; orbits are sorted with
    generating ones first, then by decreasing length.
    """
    t = G.table
    canon = Canonizer(G, classes)
    F = canon.enumerate(work_cap=work_cap)
    keys = canon.encode(F)
    n = F.shape[0]
    if n == 0:
        return [], canon, F, np.empty(0, np.int64)
    rows, cols = [np.arange(n)], [np.arange(n)]
    for w in words:
        img = canon.canon(apply_word_array(F, w, t))
        pos = lookup_sorted(keys, canon.encode(img))
        if (pos < 0).any():
            raise RuntimeError(f"braid word {w} left the tuple set")
        rows.append(np.arange(n))
        cols.append(pos)
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    g = coo_matrix((np.ones(r.size, np.int8), (r, c)), shape=(n, n))
    ncomp, lab = connected_components(g, directed=True, connection="weak")
    per = G.order // canon.centralizer_orders(F)
    first = np.full(ncomp, n, np.int64)
    np.minimum.at(first, lab, np.arange(n))
    sizes = np.bincount(lab, minlength=ncomp)
    tup = np.zeros(ncomp, np.int64)
    np.add.at(tup, lab, per)
    orbits = []
    for o in range(ncomp):
        rep = F[first[o]]
        gen = G.generates(list(rep)) if test_generation else True
        orbits.append(Orbit(int(sizes[o]), tuple(int(x) for x in rep), gen, int(tup[o]), o))
    orbits.sort(key=lambda o: (not o.generating, -o.length, o.rep))
    return orbits, canon, F, lab


def orbit_partition(G: PermGroup, rt: RamificationType, policy: str = "auto",
                    exact: bool = False, work_cap: int = DEFAULT_WORK_CAP) -> OrbitReport:
    """Braid orbits on the Nielsen class of ``rt`` by exhaustive search."""
    classes = class_indices(G, rt)
    words = orbit_generators(rt, policy, exact)
    orbits, _, _, _ = orbit_partition_classes(G, classes, words, work_cap)
    total = G.product_one_count(classes)
    if sum(o.tuples for o in orbits) != total:
        raise RuntimeError("tuple count does not match the structure constant")
    return OrbitReport(rt, orbits, total, "classic", {"policy": policy, "exact": exact})


def enumerate_tuples(G: PermGroup, rt: RamificationType, generating_only: bool = False,
                     chunk: int = 1 << 16) -> Iterator[GTuple]:
    """Every product-one tuple of the type, each exactly once."""
    for T in enumerate_tuple_arrays(G, rt, generating_only):
        for row in T:
            yield GTuple(G.perm(i) for i in row)


def enumerate_tuple_arrays(G: PermGroup, rt: RamificationType, generating_only: bool = False,
                           policy: str = "auto") -> Iterator[np.ndarray]:
    """Chunks of index rows; see :func:`enumerate_tuples`.

    Without generation filtering this is plain pruned backtracking.  With
    it, generation is decided once per braid orbit and the orbit's canonical
    forms are expanded by conjugation.
    """
    classes = class_indices(G, rt)
    if not generating_only:
        yield from product_tuples(G, classes, 0)
        return
    orbits, canon, F, lab = orbit_partition_classes(G, classes, orbit_generators(rt, policy))
    t = G.table
    gen = np.zeros(len(orbits), np.bool_)
    for o in orbits:
        gen[o.comp] = o.generating
    keep = gen[lab] if lab.size else np.zeros(0, np.bool_)
    allg = np.arange(t.N)
    for row in F[keep]:
        imgs = t.conj(np.repeat(row[None, :], t.N, axis=0), allg[:, None])
        yield np.unique(imgs, axis=0)


# ---------------------------------------------------------------------------
# heads and tails

def head_classes(G: PermGroup, rt: RamificationType, k: int, C) -> list[int]:
    classes = class_indices(G, rt)
    return classes[:k] + [G._as_class(C).index]


def tail_classes(G: PermGroup, rt: RamificationType, k: int, D) -> list[int]:
    classes = class_indices(G, rt)
    return [G._as_class(D).index] + classes[k:]


def compute_heads(G: PermGroup, rt: RamificationType, k: int, C, policy: str = "auto",
                  exact: bool = False) -> list[Orbit]:
    """(L_k x G)-orbits on tuples ``(g_1..g_k, x)`` with ``x`` in ``C`` and product one."""
    left, _, _ = split_type_generators(rt, k, policy, exact)
    orbits, *_ = orbit_partition_classes(G, head_classes(G, rt, k, C), left, test_generation=False)
    return orbits


def compute_tails(G: PermGroup, rt: RamificationType, k: int, D, policy: str = "auto",
                  exact: bool = False) -> list[Orbit]:
    """(R_k x G)-orbits on tuples ``(y, g_{k+1}..g_r)`` with ``y`` in ``D`` and product one."""
    _, right, _ = split_type_generators(rt, k, policy, exact)
    words = [w.shifted(1 - k) for w in right]
    orbits, *_ = orbit_partition_classes(G, tail_classes(G, rt, k, D), words, test_generation=False)
    return orbits
