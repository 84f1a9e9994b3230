"""Permutation groups given by generators.

A :class:`PermGroup` computes its order and membership from a deterministic
Schreier-Sims stabiliser chain.  Groups of order at most ``enum_cap`` can
also materialise an element table; elements are then addressed by integer
indices in lexicographic order of their image arrays, so index 0 is the
identity and the least index of a set is its lexicographically least member.
Everything that needs conjugacy classes, centralisers or double cosets works
on these indices.
"""
from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from types import ModuleType
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .perm import DegreeMismatch, Permutation, element_order

log = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 10 ** 7
TABLE_MAX = 2048        # groups up to this order get full product tables


class EnumerationCapExceeded(RuntimeError):
    """The group is too large to list its elements."""


class NotAffine(ValueError):
    pass


# ---------------------------------------------------------------------------
# Schreier-Sims on plain tuples
# ---------------------------------------------------------------------------

def _mul(a: tuple, b: tuple) -> tuple:
    return tuple(b[x] for x in a)


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


class StabChain:
    """Base and strong generating set from deterministic Schreier-Sims."""

    def __init__(self, gens: Sequence[tuple], n: int):
        self.n = n
        ident = tuple(range(n))
        self.identity = ident
        self.base: list[int] = []
        self.sgens: list[list[tuple]] = []
        self.trans: list[dict[int, tuple]] = []
        gens = [g for g in dict.fromkeys(gens) if g != ident]
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._new_level(next(i for i in range(n) if g[i] != i))
        for i in range(len(self.base)):
            self.sgens[i] = [g for g in gens if all(g[b] == b for b in self.base[:i])]
            self._orbit(i)
        self._complete()

    def _new_level(self, point: int) -> None:
        self.base.append(point)
        self.sgens.append([])
        self.trans.append({point: self.identity})

    def _orbit(self, i: int) -> None:
        b = self.base[i]
        tr = {b: self.identity}
        queue = [b]
        for x in queue:
            u = tr[x]
            for s in self.sgens[i]:
                y = s[x]
                if y not in tr:
                    tr[y] = _mul(u, s)
                    queue.append(y)
        self.trans[i] = tr

    def sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            u = self.trans[i].get(x)
            if u is None:
                return g, i
            g = _mul(g, _inv(u))
        return g, len(self.base)

    def _complete(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            restart = None
            tr = self.trans[i]
            for x in list(tr):
                ux = tr[x]
                for s in self.sgens[i]:
                    h = _mul(_mul(ux, s), _inv(tr[s[x]]))
                    if h == self.identity:
                        continue
                    h, j = self.sift(h, i + 1)
                    if h == self.identity:
                        continue
                    if j == len(self.base):
                        self._new_level(next(p for p in range(self.n) if h[p] != p))
                    for lev in range(i + 1, j + 1):
                        self.sgens[lev].append(h)
                        self._orbit(lev)
                    restart = j
                    break
                if restart is not None:
                    break
            i = restart if restart is not None else i - 1

    @property
    def order(self) -> int:
        return prod(len(t) for t in self.trans)

    def contains(self, g: tuple) -> bool:
        h, _ = self.sift(g)
        return h == self.identity

    def elements_array(self, dtype) -> np.ndarray:
        """All elements as rows, products ``u_{m-1} ... u_0`` of transversals."""
        cur = np.arange(self.n, dtype=dtype)[None, :]
        for tr in reversed(self.trans):
            U = np.array(list(tr.values()), dtype=dtype)
            # (c * u)(x) = u(c(x))
            cur = U[:, cur].reshape(-1, self.n)
        return cur


# ---------------------------------------------------------------------------
# element tables
# ---------------------------------------------------------------------------

def _pair(a, b):
    a = np.asarray(a, np.int64)
    b = np.asarray(b, np.int64)
    shape = np.broadcast_shapes(a.shape, b.shape)
    if a.shape != shape:
        a = np.broadcast_to(a, shape)
    if b.shape != shape:
        b = np.broadcast_to(b, shape)
    a = np.array(a.ravel(), copy=not (a.flags.c_contiguous and a.flags.writeable))
    b = np.array(b.ravel(), copy=not (b.flags.c_contiguous and b.flags.writeable))
    return a, b, shape


class ElementTable:
    """Lexicographically sorted list of all elements with fast lookup."""

    def __init__(self, chain: StabChain, kern: ModuleType):
        n = chain.n
        dtype = np.int16 if n < 2 ** 15 else np.int32
        E = chain.elements_array(dtype)
        E = E[np.lexsort(E.T[::-1])]
        self.E = np.ascontiguousarray(E)
        self.N, self.n = E.shape
        self.k = kern
        base = np.asarray(chain.base if chain.base else [0], np.int64)
        m = base.size
        if n ** m < 2 ** 63:
            w = np.array([n ** (m - 1 - j) for j in range(m)], np.uint64)
        else:
            rng = np.random.default_rng(0x5EED)
            w = rng.integers(1, 2 ** 63, size=m, dtype=np.uint64) | np.uint64(1)
        keys = (E[:, base].astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        if self.N > 1 and np.any(self.keys[1:] == self.keys[:-1]):
            raise RuntimeError("element key collision; base images do not separate elements")
        self.kidx = order.astype(np.int64)
        self.base = base
        self.w = w
        self.inv = np.empty(self.N, np.int64)
        inv_rows = np.empty_like(self.E)
        rows = np.arange(self.N)[:, None]
        inv_rows[rows, self.E] = np.arange(self.n, dtype=self.E.dtype)[None, :]
        self.inv = self.k.lookup(inv_rows, self.base, self.w, self.keys, self.kidx)
        self.mtab = self.ctab = None
        if self.N <= TABLE_MAX:
            self._build_tables()

    def _build_tables(self) -> None:
        """Full multiplication and conjugation tables for small groups."""
        N = self.N
        a = np.repeat(np.arange(N, dtype=np.int64), N)
        b = np.tile(np.arange(N, dtype=np.int64), N)
        dt = np.int16 if N < 2 ** 15 else np.int32
        self.mtab = self.k.mul(self.E, self.base, self.w, self.keys, self.kidx, a, b).astype(dt).reshape(N, N)
        # conj(a, g) = g^-1 a g
        left = self.mtab[self.inv][:, :]          # left[g, a] = g^-1 a
        ct = np.empty((N, N), dt)
        for g in range(N):
            ct[:, g] = self.mtab[left[g], g]
        self.ctab = ct

    # vectorised arithmetic on indices -----------------------------------
    def index(self, perms) -> np.ndarray:
        P = np.atleast_2d(np.asarray(perms, dtype=self.E.dtype))
        out = self.k.lookup(P, self.base, self.w, self.keys, self.kidx)
        return out

    def mul(self, a, b) -> np.ndarray:
        if self.mtab is not None:
            return self.mtab[a, b].astype(np.int64)
        a, b, shape = _pair(a, b)
        out = self.k.mul(self.E, self.base, self.w, self.keys, self.kidx, a, b)
        return out.reshape(shape)

    def conj(self, a, g) -> np.ndarray:
        """Index of ``g^-1 a g`` (broadcasting)."""
        if self.ctab is not None:
            return self.ctab[a, g].astype(np.int64)
        a, g, shape = _pair(a, g)
        out = self.k.conj(self.E, self.inv, self.base, self.w, self.keys, self.kidx, a, g)
        return out.reshape(shape)

    def canon_rows(self, T: np.ndarray, cand: np.ndarray, order) -> np.ndarray:
        """Least conjugate of each row over its candidate conjugators, positions compared in ``order``."""
        T = np.ascontiguousarray(T, np.int64)
        cand = np.ascontiguousarray(cand, np.int64)
        order = np.asarray(order, np.int64)
        if self.ctab is None:
            return self.k.canon_rows(T, cand, order, self.E, self.inv, self.base, self.w,
                                     self.keys, self.kidx)
        B, S = cand.shape
        if B == 0 or S == 1:
            return self.conj(T, cand[:, :1])
        alive = np.ones((B, S), np.bool_)
        big = np.int64(np.iinfo(np.int64).max)
        for p in order:
            vals = np.where(alive, self.ctab[T[:, p][:, None], cand].astype(np.int64), big)
            alive &= vals == vals.min(axis=1)[:, None]
        pick = cand[np.arange(B), np.argmax(alive, axis=1)]
        return self.conj(T, pick[:, None])

    def product(self, T: np.ndarray) -> np.ndarray:
        """Left-to-right product of each row of ``T``."""
        T = np.asarray(T, np.int64)
        acc = np.zeros(T.shape[0], np.int64)
        for j in range(T.shape[1]):
            acc = self.mul(acc, T[:, j])
        return acc

    def closure(self, gens: Iterable[int]) -> np.ndarray:
        """Sorted element indices of the subgroup generated by ``gens``."""
        gens = np.unique(np.asarray(list(gens), np.int64))
        gens = gens[gens != 0]
        mask = np.zeros(self.N, np.bool_)
        mask[0] = True
        frontier = np.zeros(1, np.int64)
        while frontier.size:
            new = []
            for g in gens:
                img = self.mul(frontier, g)
                img = np.unique(img[~mask[img]])
                mask[img] = True
                if img.size:
                    new.append(img)
            frontier = np.concatenate(new) if new else np.empty(0, np.int64)
        return np.flatnonzero(mask)


# ---------------------------------------------------------------------------
# classes and subgroups
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class ConjClass:
    group: "PermGroup" = field(repr=False)
    index: int
    label: str
    rep: int
    size: int
    order: int

    @property
    def rep_perm(self) -> Permutation:
        return self.group.perm(self.rep)

    @property
    def members(self) -> np.ndarray:
        return self.group._class_members[self.index]

    @property
    def inverse(self) -> "ConjClass":
        return self.group.classes[self.group._inv_class[self.index]]

    @property
    def centralizer_order(self) -> int:
        return self.group.order // self.size

    def __repr__(self) -> str:
        return f"ConjClass({self.label}, size={self.size})"


class Subgroup:
    """A subgroup of an enumerable :class:`PermGroup`, held as element indices."""

    def __init__(self, parent: "PermGroup", elements=None, gens=None):
        self.parent = parent
        if elements is None:
            elements = parent.table.closure(gens if gens is not None else [])
        self.elements = np.asarray(elements, np.int64)
        self._gens = None if gens is None else [int(g) for g in gens]

    @property
    def order(self) -> int:
        return int(self.elements.size)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, idx) -> bool:
        i = np.searchsorted(self.elements, idx)
        return bool(i < self.elements.size and self.elements[i] == idx)

    def contains_all(self, idx) -> np.ndarray:
        idx = np.asarray(idx, np.int64)
        pos = np.minimum(np.searchsorted(self.elements, idx), self.elements.size - 1)
        return self.elements[pos] == idx

    def position(self, idx) -> np.ndarray:
        """Position of each element in ``self.elements`` (must be members)."""
        return np.searchsorted(self.elements, np.asarray(idx, np.int64))

    @property
    def gens(self) -> list[int]:
        if self._gens is None:
            self._gens = small_generating_set(self.parent.table, self.elements)
        return self._gens

    def perms(self) -> list[Permutation]:
        return [self.parent.perm(i) for i in self.elements]

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order})"


def small_generating_set(table: ElementTable, elements: np.ndarray, seed: int = 1) -> list[int]:
    """Greedy generating set for the subgroup with the given element list."""
    elements = np.asarray(elements, np.int64)
    if elements.size <= 1:
        return []
    rng = np.random.default_rng(seed)
    order = rng.permutation(elements)
    gens: list[int] = []
    span = np.zeros(1, np.int64)
    for g in order:
        if span.size == elements.size:
            break
        pos = np.searchsorted(span, g)
        if pos < span.size and span[pos] == g:
            continue
        gens.append(int(g))
        span = table.closure(gens)
    return gens


# ---------------------------------------------------------------------------
# the group
# ---------------------------------------------------------------------------

def _letters(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = string.ascii_uppercase[r] + s
    return s


class PermGroup:
    def __init__(self, generators: Sequence[Permutation], name: str | None = None,
                 enum_cap: int = DEFAULT_ENUM_CAP, backend: str | None = None):
        generators = list(generators)
        if not generators:
            raise ValueError("at least one generator required")
        n = generators[0].degree
        for g in generators:
            if g.degree != n:
                raise DegreeMismatch("generators of different degrees")
        self.generators = generators
        self.degree = n
        self.name = name or f"Group(deg={n})"
        self.enum_cap = enum_cap
        self.kern = _kernels._impl if backend is None else _kernels.get_backend(backend)
        self._pinned: dict[str, Permutation] = {}

    def __repr__(self) -> str:
        return f"PermGroup({self.name!r}, degree={self.degree})"

    # stabiliser chain --------------------------------------------------
    @cached_property
    def chain(self) -> StabChain:
        return StabChain([g.images for g in self.generators], self.degree)

    @property
    def order(self) -> int:
        return self.chain.order

    def contains(self, a: Permutation) -> bool:
        if a.degree != self.degree:
            raise DegreeMismatch(f"degree {a.degree} vs {self.degree}")
        return self.chain.contains(a.images)

    def __contains__(self, a: Permutation) -> bool:
        return self.contains(a)

    def subgroup_order(self, perms: Sequence[Permutation]) -> int:
        gens = [p.images for p in perms]
        if not gens:
            return 1
        return StabChain(gens, self.degree).order

    def generates(self, perms) -> bool:
        """True iff the given elements (perms or indices) generate the group."""
        perms = [self.perm(p) if not isinstance(p, Permutation) else p for p in perms]
        return self.subgroup_order(perms) == self.order

    def is_transitive(self) -> bool:
        seen = {0}
        queue = [0]
        for x in queue:
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == self.degree

    # element table -----------------------------------------------------
    @cached_property
    def table(self) -> ElementTable:
        if self.order > self.enum_cap:
            raise EnumerationCapExceeded(
                f"{self.name}: order {self.order} exceeds enumeration cap {self.enum_cap}")
        log.debug("enumerating %d elements of %s", self.order, self.name)
        return ElementTable(self.chain, self.kern)

    def perm(self, idx) -> Permutation:
        return Permutation(self.table.E[int(idx)].tolist(), check=False)

    def index(self, a: Permutation) -> int:
        if a.degree != self.degree:
            raise DegreeMismatch(f"degree {a.degree} vs {self.degree}")
        i = int(self.table.index([a.images])[0])
        if i < 0:
            raise ValueError(f"{a} is not in {self.name}")
        return i

    def _as_index(self, x) -> int:
        return self.index(x) if isinstance(x, Permutation) else int(x)

    @cached_property
    def gen_indices(self) -> np.ndarray:
        return np.array([self.index(g) for g in self.generators], np.int64)

    # conjugacy classes -------------------------------------------------
    @cached_property
    def _class_data(self):
        t = self.table
        cls, conj_to, reps = self.kern.class_bfs(t.E, t.inv, t.base, t.w, t.keys, t.kidx,
                                                 self.gen_indices)
        return np.asarray(cls), np.asarray(conj_to), np.asarray(reps)

    @cached_property
    def classes(self) -> list[ConjClass]:
        """Conjugacy classes, sorted by (element order, size, representative).

        Letters are assigned within each element order; pinned labels (see
        :meth:`pin_labels`) take precedence.
        """
        cls, _, reps = self._class_data
        sizes = np.bincount(cls, minlength=reps.size)
        info = []
        for c, r in enumerate(reps):
            info.append((element_order(self.perm(r)), int(sizes[c]), int(r), c))
        info.sort()
        pinned = {}
        for lab, p in self._pinned.items():
            pinned[int(cls[self.index(p)])] = lab
        used = set(pinned.values())
        out: list[ConjClass | None] = [None] * reps.size
        counters: dict[int, int] = {}
        for o, s, r, c in info:
            if c in pinned:
                lab = pinned[c]
            else:
                while True:
                    i = counters.get(o, 0)
                    counters[o] = i + 1
                    lab = f"{o}{_letters(i)}"
                    if lab not in used:
                        break
            out[c] = ConjClass(self, c, lab, r, s, o)
        return out

    def pin_labels(self, pins: dict[str, Permutation]) -> None:
        """Fix class labels: label -> any member of the class."""
        self._pinned = dict(pins)
        self.__dict__.pop("classes", None)
        self.__dict__.pop("_label_map", None)
        seen = {}
        cls = self._class_data[0]
        for lab, p in pins.items():
            c = int(cls[self.index(p)])
            if c in seen:
                raise ValueError(f"labels {seen[c]} and {lab} pin the same class")
            seen[c] = lab

    @cached_property
    def _label_map(self) -> dict[str, ConjClass]:
        return {c.label: c for c in self.classes}

    def cls(self, label: str) -> ConjClass:
        try:
            return self._label_map[label]
        except KeyError:
            import difflib
            near = difflib.get_close_matches(label, list(self._label_map), n=5)
            raise KeyError(f"no class {label!r} in {self.name}; did you mean {near}?") from None

    @property
    def sorted_classes(self) -> list[ConjClass]:
        return sorted(self.classes, key=lambda c: (c.order, c.size, c.rep))

    def class_of(self, x) -> ConjClass:
        return self.classes[int(self._class_data[0][self._as_index(x)])]

    @property
    def class_ids(self) -> np.ndarray:
        return self._class_data[0]

    @property
    def conj_to_rep(self) -> np.ndarray:
        """``conj_to_rep[e] = h`` with ``e^h`` the class representative."""
        return self._class_data[1]

    @cached_property
    def _class_members(self) -> list[np.ndarray]:
        cls = self._class_data[0]
        order = np.argsort(cls, kind="stable")
        bounds = np.cumsum(np.bincount(cls, minlength=len(self._class_data[2])))
        return np.split(order.astype(np.int64), bounds[:-1])

    @cached_property
    def local_index(self) -> np.ndarray:
        """Position of each element inside its class member list."""
        loc = np.empty(self.table.N, np.int64)
        for m in self._class_members:
            loc[m] = np.arange(m.size)
        return loc

    @cached_property
    def _inv_class(self) -> list[int]:
        cls, _, reps = self._class_data
        return [int(cls[self.table.inv[r]]) for r in reps]

    @cached_property
    def identity_class(self) -> ConjClass:
        return self.classes[int(self._class_data[0][0])]

    # centralisers and conjugators ---------------------------------------
    def _rep_centralizer(self, c: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_cent_cache", {})
        if c not in cache:
            rep = int(self._class_data[2][c])
            cache[c] = np.flatnonzero(self.kern.centralizer_mask(self.table.E, rep)).astype(np.int64)
        return cache[c]

    def centralizer(self, x) -> Subgroup:
        x = self._as_index(x)
        c = int(self._class_data[0][x])
        base = self._rep_centralizer(c)
        h = int(self.table.inv[self.conj_to_rep[x]])  # rep^h = x
        if h == 0:
            return Subgroup(self, base)
        return Subgroup(self, np.sort(self.table.conj(base, h)))

    def find_conjugator(self, x, y):
        """Some ``g`` with ``x^g == y`` (as a Permutation), or ``None``."""
        g = self.find_conjugator_index(self._as_index(x), self._as_index(y))
        return None if g is None else self.perm(g)

    def find_conjugator_index(self, x: int, y: int):
        cls = self._class_data[0]
        if cls[x] != cls[y]:
            return None
        ct = self.conj_to_rep
        return int(self.table.mul(ct[x], self.table.inv[ct[y]]))

    @cached_property
    def center(self) -> Subgroup:
        mask = np.ones(self.table.N, np.bool_)
        for g in self.gen_indices:
            mask &= self.kern.centralizer_mask(self.table.E, int(g))
        return Subgroup(self, np.flatnonzero(mask))

    # class products ----------------------------------------------------
    @cached_property
    def class_mult(self) -> np.ndarray:
        """``M[K, i, j] = #{(x, y) in C_i x C_j : x y = rep(C_K)}``."""
        t = self.table
        cls, _, reps = self._class_data
        return np.asarray(self.kern.class_mult_counts(t.E, t.inv, t.base, t.w, t.keys, t.kidx,
                                                      cls, reps))

    def _as_class(self, c) -> ConjClass:
        if isinstance(c, ConjClass):
            return c
        if isinstance(c, str):
            return self.cls(c)
        return self.classes[int(c)]

    def product_counts(self, classes: Sequence) -> list[int]:
        """Vector ``f[K]`` = number of tuples in ``C_1 x ... x C_m`` multiplying to rep(K)."""
        classes = [self._as_class(c) for c in classes]
        nc = len(self.classes)
        M = self.class_mult
        f = [0] * nc
        f[classes[0].index] = 1
        for C in classes[1:]:
            j = C.index
            col = M[:, :, j]
            f = [sum(f[J] * int(col[K, J]) for J in range(nc) if f[J]) for K in range(nc)]
        return f

    def product_one_count(self, classes: Sequence) -> int:
        """Exact number of product-one tuples with entries in the given classes."""
        return self.product_counts(classes)[self.identity_class.index]

    # subgroups ---------------------------------------------------------
    def subgroup(self, gens) -> Subgroup:
        return Subgroup(self, gens=[self._as_index(g) for g in gens])

    def normal_closure(self, gens) -> Subgroup:
        t = self.table
        gens = [self._as_index(g) for g in gens]
        elems = t.closure(gens)
        while True:
            conjs = np.unique(t.conj(np.repeat(gens, len(self.gen_indices)),
                                     np.tile(self.gen_indices, len(gens))))
            pos = np.minimum(np.searchsorted(elems, conjs), elems.size - 1)
            missing = conjs[elems[pos] != conjs]
            if missing.size == 0:
                return Subgroup(self, elems, gens)
            gens = gens + [int(missing[0])]
            elems = t.closure(gens)

    @cached_property
    def derived_subgroup(self) -> Subgroup:
        t = self.table
        g = self.gen_indices
        comms = [int(t.mul(t.mul(t.inv[a], t.inv[b]), t.mul(a, b))) for a in g for b in g]
        return self.normal_closure([c for c in comms if c != 0] or [0])

    def second_derived_trivial(self) -> bool:
        """True iff G'' = 1."""
        D = self.derived_subgroup
        t = self.table
        g = D.gens
        comms = [int(t.mul(t.mul(t.inv[a], t.inv[b]), t.mul(a, b))) for a in g for b in g]
        return all(c == 0 for c in comms)

    def double_cosets(self, A: Subgroup, B: Subgroup, within: Subgroup):
        return double_cosets(A, B, within)

    def socle_regular_elementary(self, p: int, e: int) -> Subgroup:
        """The regular normal elementary abelian subgroup of order ``p**e``."""
        t = self.table
        target = p ** e
        if target != self.degree:
            raise NotAffine(f"degree {self.degree} is not {p}^{e}")
        for C in self.classes:
            if C.order != p:
                continue
            N = self.normal_closure([C.rep])
            if N.order != target:
                continue
            gens = N.gens
            if any(t.mul(a, b) != t.mul(b, a) for a in gens for b in gens):
                continue
            if not _regular(self, N):
                continue
            return N
        raise NotAffine(f"{self.name} has no regular normal subgroup of order {p}^{e}")


def _regular(G: PermGroup, N: Subgroup) -> bool:
    if N.order != G.degree:
        return False
    E = G.table.E
    return np.unique(E[N.elements, 0]).size == G.degree


def double_cosets(A: Subgroup, B: Subgroup, within: Subgroup):
    """Double cosets ``A \\ W / B`` of subgroups of ``W``.

    Returns ``(reps, table)``: the least element of each double coset in
    increasing order, and for each element of ``within.elements`` (same
    order) the id of its double coset.
    """
    t = within.parent.table
    W = within.elements
    K = W.size
    rows = []
    cols = []
    idx = np.arange(K)
    for a in A.gens:
        img = t.mul(a, W)
        rows.append(idx)
        cols.append(within.position(img))
    for b in B.gens:
        img = t.mul(W, b)
        rows.append(idx)
        cols.append(within.position(img))
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(r.size, np.int8), (r, c)), shape=(K, K))
        _, lab = connected_components(graph, directed=True, connection="weak")
    else:
        lab = idx.copy()
    # relabel by least member
    first = np.full(lab.max() + 1, K, np.int64)
    np.minimum.at(first, lab, idx)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(order.size)
    table = relabel[lab].astype(np.int64)
    reps = W[first[order]]
    return reps, table
