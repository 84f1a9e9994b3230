"""Vectorised numpy implementations of the element-table kernels.

Every function here has a twin with the same signature in ``_numba``.

Element tables: ``E`` is an ``(N, n)`` integer array, row ``i`` holding the
images of element ``i``.  Elements are looked up from the images of the base
points: ``key = sum(img[base[j]] * w[j])`` in wrapping uint64 arithmetic,
``keys`` is sorted and ``kidx[p]`` is the element whose key is ``keys[p]``.
"""
from __future__ import annotations

import numpy as np

_CHUNK = 1 << 18


def _find(k, keys, kidx):
    pos = np.searchsorted(keys, k)
    pos = np.minimum(pos, keys.shape[0] - 1)
    hit = keys[pos] == k
    return np.where(hit, kidx[pos], -1).astype(np.int64)


def _keys_of(img, w):
    return (img.astype(np.uint64) * w).sum(axis=-1, dtype=np.uint64)


def lookup(P, base, w, keys, kidx):
    P = np.asarray(P)
    return _find(_keys_of(P[:, base], w), keys, kidx)


def mul(E, base, w, keys, kidx, a, b):
    a = np.asarray(a, np.int64).ravel()
    b = np.asarray(b, np.int64).ravel()
    out = np.empty(a.shape[0], np.int64)
    for s in range(0, a.shape[0], _CHUNK):
        aa = a[s:s + _CHUNK]
        bb = b[s:s + _CHUNK]
        img = E[bb[:, None], E[aa][:, base]]
        out[s:s + _CHUNK] = _find(_keys_of(img, w), keys, kidx)
    return out


def conj(E, inv, base, w, keys, kidx, a, g):
    """Index of ``g^-1 a g`` for paired arrays ``a`` and ``g``."""
    a = np.asarray(a, np.int64).ravel()
    g = np.asarray(g, np.int64).ravel()
    out = np.empty(a.shape[0], np.int64)
    for s in range(0, a.shape[0], _CHUNK):
        aa = a[s:s + _CHUNK]
        gg = g[s:s + _CHUNK]
        pre = E[inv[gg]][:, base]
        mid = E[aa[:, None], pre]
        img = E[gg[:, None], mid]
        out[s:s + _CHUNK] = _find(_keys_of(img, w), keys, kidx)
    return out


def centralizer_mask(E, r):
    """Boolean mask of the elements commuting with element ``r``."""
    er = E[r]
    out = np.empty(E.shape[0], np.bool_)
    for s in range(0, E.shape[0], _CHUNK):
        blk = E[s:s + _CHUNK]
        # g(r(x)) == r(g(x)) for all x
        out[s:s + _CHUNK] = np.all(blk[:, er] == er[blk], axis=1)
    return out


def class_bfs(E, inv, base, w, keys, kidx, gens):
    """Conjugacy classes by breadth-first search of the conjugation action.

    Returns ``(cls, conj_to, reps)``: class id per element, an element
    ``h`` with ``e^h == reps[cls[e]]``, and the least element of each class.
    Element 0 must be the identity.
    """
    N = E.shape[0]
    cls = np.full(N, -1, np.int64)
    conj_to = np.full(N, -1, np.int64)
    gens = np.asarray(gens, np.int64)
    ginv = inv[gens]
    reps = []
    nxt = 0
    while True:
        free = np.flatnonzero(cls[nxt:] < 0)
        if free.size == 0:
            break
        start = nxt + int(free[0])
        nxt = start + 1
        c = len(reps)
        reps.append(start)
        cls[start] = c
        conj_to[start] = 0
        frontier = np.array([start], np.int64)
        while frontier.size:
            new_all = []
            for s, si in zip(gens, ginv):
                img = conj(E, inv, base, w, keys, kidx, frontier, np.full(frontier.size, s))
                fresh = cls[img] < 0
                if not fresh.any():
                    continue
                img = img[fresh]
                src = frontier[fresh]
                img, first = np.unique(img, return_index=True)
                src = src[first]
                cls[img] = c
                conj_to[img] = mul(E, base, w, keys, kidx, np.full(img.size, si), conj_to[src])
                new_all.append(img)
            frontier = np.concatenate(new_all) if new_all else np.empty(0, np.int64)
    return cls, conj_to, np.asarray(reps, np.int64)


def class_mult_counts(E, inv, base, w, keys, kidx, cls, reps):
    """``M[K, i, j] = #{(x, y) in C_i x C_j : x y = reps[K]}``."""
    nc = reps.shape[0]
    N = E.shape[0]
    M = np.zeros((nc, nc, nc), np.int64)
    xs = np.arange(N, dtype=np.int64)
    xinv = inv[xs]
    ci = cls[xs]
    for K in range(nc):
        y = mul(E, base, w, keys, kidx, xinv, np.full(N, reps[K]))
        M[K] = np.bincount(ci * nc + cls[y], minlength=nc * nc).reshape(nc, nc)
    return M


def canon_rows(T, cand, order, E, inv, base, w, keys, kidx):
    """Lexicographic minimisation of tuples over candidate conjugators.

    ``T`` is ``(B, r)``; ``cand`` is ``(B, S)``, row ``b`` listing elements
    allowed to conjugate ``T[b]`` (padding repeats a valid entry).  Positions
    are compared in the sequence ``order``.  Returns the minimal conjugates.
    """
    B, S = cand.shape
    r = T.shape[1]
    if B == 0:
        return T.copy()
    alive = np.ones((B, S), np.bool_)
    big = np.iinfo(np.int64).max
    for p in order:
        if S == 1:
            break
        vals = conj(E, inv, base, w, keys, kidx,
                    np.repeat(T[:, p], S), cand.ravel()).reshape(B, S)
        vals = np.where(alive, vals, big)
        m = vals.min(axis=1)
        alive &= vals == m[:, None]
        if (alive.sum(axis=1) == 1).all():
            break
    pick = cand[np.arange(B), np.argmax(alive, axis=1)]
    out = conj(E, inv, base, w, keys, kidx, T.ravel(), np.repeat(pick, r))
    return out.reshape(B, r)
