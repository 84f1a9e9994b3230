"""Shared machinery for tuples of group elements stored as index arrays.

* :class:`TupleCodec` packs rows into sortable keys for set membership.
* :func:`product_tuples` enumerates tuples in given classes with a given
  product by pruned backtracking, in memory-bounded chunks.
* :func:`conj_orbits` splits a set of elements into orbits of a subgroup.
* :class:`Canonizer` maps tuples to a canonical member of their orbit under
  diagonal conjugation by the whole group.
"""
from __future__ import annotations

from typing import Iterator, Sequence

import numpy as np

from .group import PermGroup

CHUNK = 1 << 19


class TupleCodec:
    """Packs the entries at ``positions`` into one sortable key per row."""

    def __init__(self, G: PermGroup, classes: Sequence[int], positions: Sequence[int] | None = None):
        self.G = G
        self.classes = list(classes)
        self.positions = list(range(len(classes)) if positions is None else positions)
        sizes = [G.classes[self.classes[p]].size for p in self.positions]
        total = 1
        for s in sizes:
            total *= s
        self.wide = total >= 2 ** 62
        mult, m = [], 1
        for s in reversed(sizes):
            mult.append(m)
            m *= s
        self.mult = np.array(mult[::-1], np.int64) if not self.wide else None

    def encode(self, T: np.ndarray) -> np.ndarray:
        T = np.asarray(T, np.int64)
        if not self.positions:
            return np.zeros(T.shape[0], np.int64)
        loc = self.G.local_index[T[:, self.positions]]
        if not self.wide:
            return loc @ self.mult
        be = np.ascontiguousarray(loc.astype(">u4"))
        return be.view(f"V{4 * len(self.positions)}").ravel()


def lookup_sorted(keys: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Positions of ``q`` in sorted ``keys``; -1 where absent."""
    if keys.size == 0:
        return np.full(q.shape[0], -1, np.int64)
    pos = np.searchsorted(keys, q)
    pos = np.minimum(pos, keys.size - 1)
    return np.where(keys[pos] == q, pos, -1).astype(np.int64)


def reachable_classes(G: PermGroup, classes: Sequence[int]) -> list[set[int]]:
    """``out[j]`` = classes containing some product of ``classes[j:]``."""
    r = len(classes)
    out: list[set[int]] = [set() for _ in range(r + 1)]
    out[r] = {G.identity_class.index}
    for j in range(r - 1, -1, -1):
        f = G.product_counts(classes[j:])
        out[j] = {K for K, v in enumerate(f) if v}
    return out


def product_tuples(G: PermGroup, classes: Sequence[int], target: int,
                   start: np.ndarray | None = None, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Yield chunks of tuples ``(g_0..g_{r-1})`` with ``g_j`` in ``classes[j]``
    and ``g_0 ... g_{r-1} == target``.

    ``start`` optionally fixes the first columns (a ``(B, j0)`` array of
    admissible prefixes); the remaining positions range over whole classes
    and the last one is solved for.
    """
    t = G.table
    r = len(classes)
    cls = G.class_ids
    reach = reachable_classes(G, classes)
    members = [G.classes[c].members for c in classes]
    if start is None:
        start = np.empty((1, 0), np.int64)
    start = np.asarray(start, np.int64)
    j0 = start.shape[1]
    if j0 >= r:
        P = t.product(start)
        yield start[P == target]
        return
    P = t.product(start) if j0 else np.zeros(start.shape[0], np.int64)
    need = t.mul(t.inv[P], target)
    ok = np.isin(cls[need], list(reach[j0]))
    yield from _extend(t, cls, reach, members, classes, start[ok], P[ok], j0, target, chunk)


def _extend(t, cls, reach, members, classes, T, P, j, target, chunk):
    r = len(classes)
    if T.shape[0] == 0:
        return
    if j == r - 1:
        last = t.mul(t.inv[P], target)
        ok = cls[last] == classes[j]
        yield np.concatenate([T[ok], last[ok, None]], axis=1)
        return
    mem = members[j]
    step = max(1, chunk // mem.size)
    ncls = int(cls.max()) + 1
    allowed = np.zeros(ncls, np.bool_)
    allowed[list(reach[j + 1])] = True
    for s in range(0, T.shape[0], step):
        TT = T[s:s + step]
        PP = P[s:s + step]
        B = TT.shape[0]
        newP = t.mul(np.repeat(PP, mem.size), np.tile(mem, B))
        need = t.mul(t.inv[newP], target)
        ok = allowed[cls[need]]
        if not ok.any():
            continue
        rows = np.repeat(np.arange(B), mem.size)[ok]
        NT = np.concatenate([TT[rows], np.tile(mem, B)[ok, None]], axis=1)
        yield from _extend(t, cls, reach, members, classes, NT, newP[ok], j + 1, target, chunk)


def conj_orbits(G: PermGroup, points: np.ndarray, gens: Sequence[int]):
    """Orbits of ``<gens>`` acting by conjugation on the sorted element set ``points``.

    Returns ``(label, to_min, mins)``: orbit id per point (ids ordered by
    least member), an element ``c`` with ``point^c`` the least member, and
    the least members.
    """
    t = G.table
    points = np.asarray(points, np.int64)
    n = points.size
    label = np.full(n, -1, np.int64)
    to_min = np.zeros(n, np.int64)
    mins = []
    gens = [int(g) for g in gens if g != 0]
    nxt = 0
    while True:
        free = np.flatnonzero(label[nxt:] < 0)
        if free.size == 0:
            break
        s0 = nxt + int(free[0])
        nxt = s0 + 1
        o = len(mins)
        mins.append(int(points[s0]))
        label[s0] = o
        frontier = np.array([s0], np.int64)
        while frontier.size:
            new = []
            for g in gens:
                img = t.conj(points[frontier], g)
                pos = np.searchsorted(points, img)
                fresh = label[pos] < 0
                if not fresh.any():
                    continue
                pos, src = pos[fresh], frontier[fresh]
                pos, first = np.unique(pos, return_index=True)
                src = src[first]
                label[pos] = o
                to_min[pos] = t.mul(t.inv[g], to_min[src])
                new.append(pos)
            frontier = np.concatenate(new) if new else np.empty(0, np.int64)
    return label, to_min, np.asarray(mins, np.int64)


def stabilizer_in(G: PermGroup, elements: np.ndarray, fixed: Sequence[int]) -> np.ndarray:
    """Members of ``elements`` commuting with every element of ``fixed``."""
    t = G.table
    keep = np.ones(elements.size, np.bool_)
    for x in fixed:
        keep &= t.conj(np.full(elements.size, x), elements) == x
    return elements[keep]


class _Node:
    __slots__ = ("elems", "level", "label", "to_min", "mins", "children")

    def __init__(self, elems: np.ndarray, level: int):
        self.elems = elems
        self.level = level          # next position (in cyclic order) to pin
        self.label = None
        self.to_min = None
        self.mins = None
        self.children: dict[int, int] = {}


class Canonizer:
    """Canonical representatives for diagonal conjugation by ``G``.

    A pivot position ``p0`` (the one with the largest class) is conjugated to
    the class representative ``x0``.  The remaining positions are then
    pinned one at a time in cyclic order: each is moved to the least element
    of its orbit under the stabiliser of the entries pinned so far.  The
    stabilisers form a tree cached by pinned values, so most tuples are
    finished by table lookups.  Two tuples get the same result iff they are
    conjugate.
    """

    def __init__(self, G: PermGroup, classes: Sequence[int]):
        self.G = G
        self.classes = list(classes)
        r = self.r = len(classes)
        if r < 2:
            raise ValueError("tuples of length at least 2 required")
        sizes = [G.classes[c].size for c in classes]
        self.p0 = int(np.argmax(sizes))
        self.cyc = [(self.p0 + j) % r for j in range(r)]
        self.p1 = self.cyc[1]
        C0 = G.classes[classes[self.p0]]
        self.x0 = C0.rep
        self.Z = G._rep_centralizer(C0.index)
        self.nodes: list[_Node] = [_Node(self.Z, 1)]
        self.table_min = 16
        self.codec = TupleCodec(G, classes, self.cyc[1:-1])

    def _tables(self, nid: int, level: int) -> _Node:
        node = self.nodes[nid]
        if node.label is None:
            members = self.G.classes[self.classes[self.cyc[level]]].members
            gens = small_gens(self.G, node.elems)
            node.label, node.to_min, node.mins = conj_orbits(self.G, members, gens)
        return node

    def _child(self, nid: int, m: int) -> int:
        node = self.nodes[nid]
        c = node.children.get(m)
        if c is None:
            c = len(self.nodes)
            self.nodes.append(_Node(stabilizer_in(self.G, node.elems, [m]), node.level + 1))
            node.children[m] = c
        return c

    @property
    def second_reps(self) -> np.ndarray:
        """Least elements of the ``C_G(x0)``-orbits on the class at ``p1``."""
        return self._tables(0, 1).mins

    def canon(self, T: np.ndarray, return_nodes: bool = False):
        G, t = self.G, self.G.table
        T = np.asarray(T, np.int64)
        out = np.empty_like(T)
        nodes_out = np.empty(T.shape[0], np.int64)
        depth = self.r - 1
        for s in range(0, T.shape[0], CHUNK):
            X = T[s:s + CHUNK]
            g = G.conj_to_rep[X[:, self.p0]]
            X = t.conj(X, g[:, None])
            nid = np.zeros(X.shape[0], np.int64)
            for level in range(1, depth + 1):
                p = self.cyc[level]
                order = np.argsort(nid, kind="stable")
                ids, starts = np.unique(nid[order], return_index=True)
                bounds = list(starts[1:]) + [order.size]
                for n, a, b in zip(ids, starts, bounds):
                    if self.nodes[n].elems.size <= self.table_min:
                        continue
                    rows = order[a:b]
                    node = self._tables(int(n), level)
                    loc = G.local_index[X[rows, p]]
                    c = node.to_min[loc]
                    move = c != 0
                    if move.any():
                        X[rows[move]] = t.conj(X[rows[move]], c[move, None])
                    mins = node.mins[node.label[loc]]
                    um, inv = np.unique(mins, return_inverse=True)
                    kids = np.array([self._child(int(n), int(m)) for m in um], np.int64)
                    nid[rows] = kids[inv]
            X = self._finish(X, nid)
            out[s:s + CHUNK] = X
            nodes_out[s:s + CHUNK] = nid
        if return_nodes:
            return out, nodes_out
        return out

    def _finish(self, X: np.ndarray, nid: np.ndarray) -> np.ndarray:
        """Lexicographic minimisation over each row's remaining (small) stabiliser.

        Rows leave the table stage at a node whose stabiliser has at most
        ``table_min`` elements; the positions still free are those after the
        node's level.
        """
        t = self.G.table
        sizes = np.array([n.elems.size for n in self.nodes], np.int64)
        levels = np.array([n.level for n in self.nodes], np.int64)
        live = np.flatnonzero(sizes[nid] > 1)
        if live.size == 0:
            return X
        X = X.copy()
        pad = self._padded(int(sizes[nid[live]].max()))
        for lev in np.unique(levels[nid[live]]):
            rows = live[levels[nid[live]] == lev]
            rest = np.asarray(self.cyc[lev:], np.int64)
            if rest.size == 0:
                continue
            X[rows] = t.canon_rows(X[rows], pad[nid[rows]], rest)
        return X

    def _padded(self, width: int) -> np.ndarray:
        have = getattr(self, "_pad", None)
        if have is not None and have.shape[0] == len(self.nodes) and have.shape[1] >= width:
            return have
        width = max(width, have.shape[1] if have is not None else 1)
        pad = np.zeros((len(self.nodes), width), np.int64)
        for i, n in enumerate(self.nodes):
            k = min(n.elems.size, width)
            pad[i, :k] = n.elems[:k]
        self._pad = pad
        return pad

    def encode(self, T: np.ndarray) -> np.ndarray:
        return self.codec.encode(T)

    def enumerate(self, work_cap: int | None = None) -> np.ndarray:
        """Canonical forms of all product-one tuples, sorted by key."""
        G = self.G
        r = self.r
        rot = [self.classes[p] for p in self.cyc]
        reps = self.second_reps
        start = np.stack([np.full(reps.size, self.x0), reps], axis=1)
        back = np.argsort(self.cyc)
        keys_all, rows_all = [], []
        count = 0
        for chunk in product_tuples(G, rot, 0, start=start):
            T = self.canon(chunk[:, back])
            k = self.encode(T)
            k, first = np.unique(k, return_index=True)
            keys_all.append(k)
            rows_all.append(T[first])
            count += k.size
            if work_cap is not None and count > 4 * work_cap:
                keys_all, rows_all = _merge(keys_all, rows_all)
                count = keys_all[0].size
                if count > work_cap:
                    raise WorkCapExceeded(f"more than {work_cap} canonical tuples")
        keys, rows = _merge(keys_all, rows_all)
        if work_cap is not None and keys[0].size > work_cap:
            raise WorkCapExceeded(f"more than {work_cap} canonical tuples")
        return rows[0].reshape(-1, r) if rows else np.empty((0, r), np.int64)

    def centralizer_orders(self, F: np.ndarray) -> np.ndarray:
        """|C_G(t)| for canonical rows ``F``."""
        t = self.G.table
        _, nid = self.canon(F, return_nodes=True)
        out = np.array([n.elems.size for n in self.nodes], np.int64)[nid]
        live = np.flatnonzero(out > 1)
        if live.size == 0:
            return out
        order = np.argsort(nid[live], kind="stable")
        live = live[order]
        ids, starts = np.unique(nid[live], return_index=True)
        bounds = list(starts[1:]) + [live.size]
        for n, a, b in zip(ids, starts, bounds):
            rows = live[a:b]
            el = self.nodes[n].elems
            rest = self.cyc[self.nodes[n].level:]
            fix = np.ones((rows.size, el.size), np.bool_)
            for p in rest:
                v = t.conj(F[rows, p][:, None], el[None, :])
                fix &= v == F[rows, p][:, None]
            out[rows] = fix.sum(axis=1)
        return out


class WorkCapExceeded(RuntimeError):
    pass


def _merge(keys_all, rows_all):
    if not keys_all:
        return [np.empty(0, np.int64)], []
    k = np.concatenate(keys_all)
    R = np.concatenate(rows_all)
    k, first = np.unique(k, return_index=True)
    return [k], [R[first]]


def small_gens(G: PermGroup, elements: np.ndarray) -> list[int]:
    """Cached greedy generating set for a subgroup given by its elements."""
    cache = G.__dict__.setdefault("_gens_cache", {})
    key = hash(np.asarray(elements, np.int64).tobytes())
    if key not in cache:
        from .group import small_generating_set
        cache[key] = small_generating_set(G.table, elements)
    return cache[key]
