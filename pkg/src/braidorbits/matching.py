"""Node construction by matching heads with tails.

A product-one tuple ``(g_1..g_r)`` is cut after position ``k`` into a head
``(g_1..g_k)`` and a tail ``(g_{k+1}..g_r)``.  The tail product ``x`` has a
conjugacy class ``C`` (the nodal type).  Conjugating so that ``x`` becomes
the fixed representative ``x0`` of ``C`` lands the head in the head shadow
``{h : prod(h) = x0^-1}`` and the tail in the tail shadow
``{w : prod(w) = x0}``.  Braids supported left (right) of the cut act on
each shadow; ``Z = C_G(x0)`` acts on both by conjugation.

Nodes are orbits of (left braids x right braids x G).  Those sitting over
one pair (head orbit, tail orbit) correspond to the double cosets
``N_t \\ Z / N_h``, where ``N_h`` (``N_t``) is the stabiliser in ``Z`` of a
fixed braid orbit ``O_h`` (``O_t``).  With ``e`` a double coset
representative the node contains ``(u, w^e)`` for ``u`` in ``O_h`` and ``w`` in
``O_t``; its size is ``|O_h| |O_t| |Z| / |N_h cap e^-1 N_t e|`` times ``|C|``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .braid import (BraidWord, RamificationType, apply_word_array, default_k, orbit_generators,
                    split_type_generators)
from .group import PermGroup, Subgroup, double_cosets, small_generating_set
from .tuples import TupleCodec, lookup_sorted, product_tuples, small_gens

log = logging.getLogger(__name__)

SKIPPED = -2


def _components(n: int, rows: list, cols: list) -> np.ndarray:
    if n == 0:
        return np.empty(0, np.int64)
    r = np.concatenate([np.arange(n)] + rows)
    c = np.concatenate([np.arange(n)] + cols)
    g = coo_matrix((np.ones(r.size, np.int8), (r, c)), shape=(n, n))
    _, lab = connected_components(g, directed=True, connection="weak")
    # relabel by first occurrence
    first = np.full(lab.max() + 1, n, np.int64)
    np.minimum.at(first, lab, np.arange(n))
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    return relabel[lab]


class Shadow:
    """All head (or tail) tuples over a fixed ``x0``, split into orbits."""

    def __init__(self, G: PermGroup, classes: Sequence[int], target: int, x0: int,
                 words: Sequence[BraidWord], offset: int, Z: np.ndarray, cache=None):
        self.G = G
        self.classes = list(classes)
        self.x0 = x0
        self.Z = Z
        m = len(classes)
        self.codec = TupleCodec(G, classes, list(range(m - 1)))
        data = None
        if cache is not None:
            from .catalog import group_fingerprint
            key = cache.key("shadow", group_fingerprint(G), tuple(classes), target, x0,
                            tuple(str(w) for w in words), offset)
            data = cache.get(key)
        if data is None:
            data = self._compute(target, words, offset)
            if cache is not None:
                cache.put(key, data)
        self.cache_key = key if cache is not None else None
        self.tuples = data["tuples"]
        self.keys = data["keys"]
        self.blabel = data["blabel"]
        self.orbit_of_b = data["orbit_of_b"]
        n = self.size = self.tuples.shape[0]
        nb = self.nb = int(self.blabel.max()) + 1 if n else 0
        self.bsize = np.bincount(self.blabel, minlength=nb)
        first = np.full(nb, n, np.int64)
        np.minimum.at(first, self.blabel, np.arange(n))
        self.brep = first
        self.norbits = int(self.orbit_of_b.max()) + 1 if nb else 0
        self.base_b = np.full(self.norbits, nb, np.int64)
        np.minimum.at(self.base_b, self.orbit_of_b, np.arange(nb))
        self.conj_b = np.full(nb, -1, np.int64)
        self._norm: dict[int, Subgroup] = {}
        self._normal: dict[int, bool] = {}

    def _compute(self, target: int, words, offset: int) -> dict:
        G = self.G
        t = G.table
        m = len(self.classes)
        chunks = list(product_tuples(G, self.classes, target))
        T = np.concatenate(chunks) if chunks else np.empty((0, m), np.int64)
        keys = self.codec.encode(T)
        order = np.argsort(keys, kind="stable")
        T = T[order]
        keys = keys[order]
        n = T.shape[0]
        rows, cols = [], []
        for w in words:
            img = apply_word_array(T, w, t, offset)
            pos = lookup_sorted(keys, self.codec.encode(img))
            if (pos < 0).any():
                raise RuntimeError(f"braid word {w} left the shadow")
            rows.append(np.arange(n))
            cols.append(pos)
        blabel = _components(n, rows, cols)
        nb = int(blabel.max()) + 1 if n else 0
        first = np.full(nb, n, np.int64)
        np.minimum.at(first, blabel, np.arange(n))
        # orbits of braids x Z: join braid orbits moved into each other by Z
        zg = small_gens(G, self.Z) if self.Z.size > 1 else []
        rows, cols = [], []
        reps = T[first]
        for c in zg:
            pos = lookup_sorted(keys, self.codec.encode(t.conj(reps, c)))
            rows.append(np.arange(nb))
            cols.append(blabel[pos])
        orbit_of_b = _components(nb, rows, cols)
        return {"tuples": T, "keys": keys, "blabel": blabel, "orbit_of_b": orbit_of_b}

    def locate(self, T: np.ndarray) -> np.ndarray:
        pos = lookup_sorted(self.keys, self.codec.encode(T))
        if (pos < 0).any():
            raise LookupError("tuple not in shadow")
        return pos

    def orbit_size(self, o: int) -> int:
        """Number of shadow tuples in the (braids x Z)-orbit ``o``."""
        return int(self.bsize[self.orbit_of_b == o].sum())

    def normalizer(self, o: int) -> Subgroup:
        """Stabiliser in Z of the base braid orbit of orbit ``o``; also fills ``conj_b``."""
        if o not in self._norm:
            t = self.G.table
            b0 = self.base_b[o]
            u = self.tuples[self.brep[b0]]
            lab = np.empty(self.Z.size, np.int64)
            step = max(1, (1 << 20) // max(1, u.size))
            for s in range(0, self.Z.size, step):
                zz = self.Z[s:s + step]
                imgs = t.conj(np.broadcast_to(u, (zz.size, u.size)), zz[:, None])
                lab[s:s + step] = self.blabel[self.locate(imgs)]
            ub, idx = np.unique(lab, return_index=True)
            self.conj_b[ub] = self.Z[idx]
            self._norm[o] = Subgroup(self.G, self.Z[lab == b0])
        return self._norm[o]

    def generated_normal(self, o: int) -> bool:
        """Whether the subgroup generated by the orbit's tuples is normal in G."""
        if o not in self._normal:
            G = self.G
            u = [G.perm(i) for i in self.tuples[self.brep[self.base_b[o]]] if i != 0]
            if not u:
                self._normal[o] = True
            else:
                H = PermGroup(u, enum_cap=0)
                self._normal[o] = all(H.contains(h ^ s) for h in u for s in G.generators)
        return self._normal[o]


@dataclass
class Node:
    id: int
    cls: int                 # nodal class index
    head: int                # head orbit id within the class
    tail: int                # tail orbit id within the class
    dc_rep: int              # double coset representative e (element index)
    rep: tuple               # representative tuple (element indices)
    shadow_length: int
    length: int              # number of tuples
    generating: bool
    type1: bool = False


@dataclass
class PairData:
    cls: int
    head: int
    tail: int
    skipped: bool
    dc_table: np.ndarray | None = field(default=None, repr=False)   # over Z positions
    dc_reps: np.ndarray | None = field(default=None, repr=False)
    node_of_dc: np.ndarray | None = field(default=None, repr=False)   # -1: non-generating
    total: int = 0           # tuples over this pair


@dataclass
class TypeData:
    cls: int
    x0: int
    Z: np.ndarray
    head: Shadow
    tail: Shadow


def side_generators(rt: RamificationType, k: int, policy: str = "auto", exact: bool = False,
                    sides: str = "pure"):
    """(left, right, crossing) words for the cut after position ``k``.

    ``sides="full"`` takes left and right from the orbit generators supported
    on each side.  ``sides="pure"`` uses the pure braids of each side, and
    every orbit generator outside them becomes a crossing word, so the
    three sets still generate the orbit group.
    """
    if sides == "full":
        return split_type_generators(rt, k, policy, exact)
    if sides != "pure":
        raise ValueError(f"unknown sides {sides!r}")
    r = rt.r
    if not 1 < k < r:
        raise ValueError(f"split point k={k} must satisfy 1 < k < {r}")
    left = [BraidWord.Qij(i, j) for i in range(1, k) for j in range(i + 1, k + 1)]
    right = [BraidWord.Qij(i, j) for i in range(k + 1, r) for j in range(i + 1, r + 1)]
    inside = set(left) | set(right)
    cross = [w for w in orbit_generators(rt, policy, exact) if w not in inside]
    return left, right, cross


class MatchingIndex:
    """All level-k nodes of a ramification type, with node identification."""

    def __init__(self, G: PermGroup, rt: RamificationType, k: int | None = None,
                 policy: str = "auto", exact: bool = False, skip_type1: bool = True,
                 sides: str = "pure", cache=None):
        self.G = G
        self.cache = cache
        self.rt = rt
        r = self.r = rt.r
        self.k = k = default_k(r) if k is None else k
        self.policy = policy
        self.skip_type1 = skip_type1
        self.sides = sides
        self.left, self.right, self.cross = side_generators(rt, self.k, policy, exact, sides)
        self.classes = [G.cls(lab).index for lab in rt.labels]
        self.identity = G.identity_class.index
        self.types: dict[int, TypeData] = {}
        self.pairs: dict[tuple[int, int, int], PairData] = {}
        self.nodes: list[Node] = []
        self.prenode_total = 0      # tuples over all prenodes, generating or not
        self.prenode_counts: dict[int, list[int]] = {}   # class -> [prenodes, generating]
        self.skipped_generating: list[tuple] = []   # (rep tuple, length) of skipped type-1 nodes
        self._build()

    # construction ------------------------------------------------------
    def _build(self) -> None:
        G = self.G
        t = G.table
        k = self.k
        head_cls = self.classes[:k]
        tail_cls = self.classes[k:]
        tail_words = [w.shifted(-k) for w in self.right]
        fh = G.product_counts(head_cls)
        ft = G.product_counts(tail_cls)
        inv_class = G._inv_class
        for C in G.classes:
            c = C.index
            # head product must be in C^-1, tail product in C
            if not fh[inv_class[c]] or not ft[c]:
                continue
            x0 = C.rep
            Z = G._rep_centralizer(c)
            head = Shadow(G, head_cls, int(t.inv[x0]), x0, self.left, 0, Z, self.cache)
            tail = Shadow(G, tail_cls, x0, x0, tail_words, 0, Z, self.cache)
            self.types[c] = TypeData(c, x0, Z, head, tail)
        for c, td in self.types.items():
            for h in range(td.head.norbits):
                for w in range(td.tail.norbits):
                    self._build_pair(td, h, w)

    def _build_pair(self, td: TypeData, h: int, w: int) -> None:
        G = self.G
        t = G.table
        c = td.cls
        total = td.head.orbit_size(h) * td.tail.orbit_size(w) * G.classes[c].size
        self.prenode_total += total
        skipped = (self.skip_type1 and c == self.identity
                   and not (td.head.generated_normal(h) and td.tail.generated_normal(w)))
        pd = PairData(c, h, w, skipped, total=total)
        self.pairs[(c, h, w)] = pd
        if skipped:
            self._attribute_skipped(td, h, w)
            return
        self._cosets(td, h, w, pd)
        pd.node_of_dc = np.full(pd.dc_reps.size, -1, np.int64)
        cnt = self.prenode_counts.setdefault(c, [0, 0])
        for i, (rep, length, shadow_len, e, gen) in enumerate(self._prenodes(td, h, w, pd)):
            cnt[0] += 1
            cnt[1] += gen
            type1 = c == self.identity
            if type1 and gen and self.skip_type1:
                # kept only when head and tail groups commute (exact criterion)
                gen = gen and self._commute(rep)
            if not gen:
                continue
            nid = len(self.nodes)
            self.nodes.append(Node(nid, c, h, w, e, rep, shadow_len, length, True, type1))
            pd.node_of_dc[i] = nid

    def _commute(self, rep: tuple) -> bool:
        t = self.G.table
        a = np.array(rep[:self.k], np.int64)
        b = np.array(rep[self.k:], np.int64)
        return bool((t.mul(a[:, None], b[None, :]) == t.mul(b[None, :], a[:, None])).all())

    def _cosets(self, td: TypeData, h: int, w: int, pd: PairData) -> None:
        Nh = td.head.normalizer(h)
        Nt = td.tail.normalizer(w)
        reps, table = double_cosets(Nt, Nh, Subgroup(self.G, td.Z))
        pd.dc_table = table.astype(np.int32)
        pd.dc_reps = reps

    def _prenodes(self, td: TypeData, h: int, w: int, pd: PairData):
        """Yield ``(rep, length, shadow_length, e, generating)`` per double coset."""
        G = self.G
        t = G.table
        Nh = td.head.normalizer(h)
        Nt = td.tail.normalizer(w)
        u = td.head.tuples[td.head.brep[td.head.base_b[h]]]
        v = td.tail.tuples[td.tail.brep[td.tail.base_b[w]]]
        oh = int(td.head.bsize[td.head.base_b[h]])
        ot = int(td.tail.bsize[td.tail.base_b[w]])
        csize = G.classes[td.cls].size
        for e in pd.dc_reps:
            e = int(e)
            rep = tuple(int(x) for x in u) + tuple(int(x) for x in t.conj(v, e))
            # |N_h cap e^-1 N_t e|: n in N_h with e n e^-1 in N_t
            moved = t.conj(Nh.elements, int(t.inv[e]))
            inter = int(Nt.contains_all(moved).sum())
            shadow_len = oh * ot * td.Z.size // inter
            yield rep, shadow_len * csize, shadow_len, e, G.generates(list(rep))

    def _attribute_skipped(self, td: TypeData, h: int, w: int) -> None:
        """Record generating prenodes of a skipped type-1 pair with their lengths."""
        pd = PairData(td.cls, h, w, True)
        self._cosets(td, h, w, pd)
        cnt = self.prenode_counts.setdefault(td.cls, [0, 0])
        for rep, length, _, _, gen in self._prenodes(td, h, w, pd):
            cnt[0] += 1
            cnt[1] += gen
            if gen:
                self.skipped_generating.append((rep, length))

    # queries -------------------------------------------------------------
    @property
    def node_total(self) -> int:
        return sum(n.length for n in self.nodes)

    def matching_pairs(self) -> dict[int, int]:
        """Number of (head orbit, tail orbit) pairs per nodal class."""
        out: dict[int, int] = {}
        for (c, _, _) in self.pairs:
            out[c] = out.get(c, 0) + 1
        return out

    def head_orbit_counts(self) -> dict[int, int]:
        return {c: td.head.norbits for c, td in self.types.items()}

    def tail_orbit_counts(self) -> dict[int, int]:
        return {c: td.tail.norbits for c, td in self.types.items()}

    def identify(self, T: np.ndarray) -> np.ndarray:
        """Node id of each row; ``SKIPPED`` for rows in skipped type-1 prenodes."""
        G = self.G
        t = G.table
        T = np.atleast_2d(np.asarray(T, np.int64))
        k = self.k
        x = t.product(T[:, k:])
        cls = G.class_ids[x]
        g = G.conj_to_rep[x]
        T = t.conj(T, g[:, None])
        out = np.full(T.shape[0], -1, np.int64)
        for c in np.unique(cls):
            rows = np.flatnonzero(cls == c)
            td = self.types.get(int(c))
            if td is None:
                raise LookupError("tuple has a nodal type with no nodes")
            bh = td.head.blabel[td.head.locate(T[rows, :k])]
            bt = td.tail.blabel[td.tail.locate(T[rows, k:])]
            ho = td.head.orbit_of_b[bh]
            to = td.tail.orbit_of_b[bt]
            for i, row in enumerate(rows):
                pd = self.pairs[(int(c), int(ho[i]), int(to[i]))]
                if pd.skipped:
                    out[row] = SKIPPED
                    continue
                td.head.normalizer(int(ho[i]))
                td.tail.normalizer(int(to[i]))
                a = td.head.conj_b[bh[i]]
                b = td.tail.conj_b[bt[i]]
                e = int(t.mul(b, t.inv[a]))
                pos = int(np.searchsorted(td.Z, e))
                out[row] = pd.node_of_dc[pd.dc_table[pos]]
        return out

    def random_tuple(self, node: Node, rng: np.random.Generator) -> np.ndarray:
        G = self.G
        t = G.table
        td = self.types[node.cls]
        hb = td.head.base_b[node.head]
        tb = td.tail.base_b[node.tail]
        hmem = np.flatnonzero(td.head.blabel == hb)
        tmem = np.flatnonzero(td.tail.blabel == tb)
        u = td.head.tuples[hmem[rng.integers(hmem.size)]]
        w = td.tail.tuples[tmem[rng.integers(tmem.size)]]
        tup = np.concatenate([u, t.conj(w, node.dc_rep)])
        c = td.Z[rng.integers(td.Z.size)]
        g = rng.integers(t.N)
        return t.conj(t.conj(tup, c), g)

    def type_change_witness(self, rep: tuple) -> tuple[np.ndarray, BraidWord]:
        """A pure braid moving a type-1 tuple whose halves do not commute to another type.

        Uses partial products ``h_s = g_s ... g_k``: some ``h_s`` fails to
        commute with some ``g_t`` (t > k), and ``Q_st`` changes the type.
        """
        t = self.G.table
        k = self.k
        T = np.array(rep, np.int64)
        for s in range(k, 0, -1):
            hs = int(t.product(T[None, s - 1:k])[0])
            for tt in range(k + 1, self.r + 1):
                g = int(T[tt - 1])
                if t.mul(hs, g) != t.mul(g, hs):
                    w = BraidWord.Qij(s, tt)
                    img = apply_word_array(T[None, :], w, t)[0]
                    x = int(t.product(img[None, k:])[0])
                    if x != 0:
                        return img, w
        raise RuntimeError("head and tail commute; no type-changing pure braid")
