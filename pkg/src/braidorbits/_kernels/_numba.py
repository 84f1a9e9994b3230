"""numba-compiled twins of the kernels in ``_numpy``."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _find(k, keys, kidx):
    pos = np.searchsorted(keys, k)
    if pos < keys.shape[0] and keys[pos] == k:
        return kidx[pos]
    return -1


@njit(cache=True)
def lookup(P, base, w, keys, kidx):
    m = base.shape[0]
    out = np.empty(P.shape[0], np.int64)
    for t in range(P.shape[0]):
        k = np.uint64(0)
        for j in range(m):
            k += np.uint64(P[t, base[j]]) * w[j]
        out[t] = _find(k, keys, kidx)
    return out


@njit(cache=True)
def _mul1(E, base, w, keys, kidx, a, b):
    k = np.uint64(0)
    for j in range(base.shape[0]):
        k += np.uint64(E[b, E[a, base[j]]]) * w[j]
    return _find(k, keys, kidx)


@njit(cache=True)
def _conj1(E, inv, base, w, keys, kidx, a, g):
    gi = inv[g]
    k = np.uint64(0)
    for j in range(base.shape[0]):
        k += np.uint64(E[g, E[a, E[gi, base[j]]]]) * w[j]
    return _find(k, keys, kidx)


@njit(cache=True)
def mul(E, base, w, keys, kidx, a, b):
    out = np.empty(a.shape[0], np.int64)
    for t in range(a.shape[0]):
        out[t] = _mul1(E, base, w, keys, kidx, a[t], b[t])
    return out


@njit(cache=True)
def conj(E, inv, base, w, keys, kidx, a, g):
    out = np.empty(a.shape[0], np.int64)
    for t in range(a.shape[0]):
        out[t] = _conj1(E, inv, base, w, keys, kidx, a[t], g[t])
    return out


@njit(cache=True)
def centralizer_mask(E, r):
    N, n = E.shape
    out = np.empty(N, np.bool_)
    for g in range(N):
        ok = True
        for x in range(n):
            if E[g, E[r, x]] != E[r, E[g, x]]:
                ok = False
                break
        out[g] = ok
    return out


@njit(cache=True)
def class_bfs(E, inv, base, w, keys, kidx, gens):
    N = E.shape[0]
    cls = np.full(N, -1, np.int64)
    conj_to = np.full(N, -1, np.int64)
    reps = np.empty(N, np.int64)
    queue = np.empty(N, np.int64)
    nc = 0
    for start in range(N):
        if cls[start] >= 0:
            continue
        reps[nc] = start
        cls[start] = nc
        conj_to[start] = 0
        head = 0
        tail = 1
        queue[0] = start
        while head < tail:
            e = queue[head]
            head += 1
            for s in gens:
                f = _conj1(E, inv, base, w, keys, kidx, e, s)
                if cls[f] < 0:
                    cls[f] = nc
                    conj_to[f] = _mul1(E, base, w, keys, kidx, inv[s], conj_to[e])
                    queue[tail] = f
                    tail += 1
        nc += 1
    return cls, conj_to, reps[:nc].copy()


@njit(cache=True)
def class_mult_counts(E, inv, base, w, keys, kidx, cls, reps):
    nc = reps.shape[0]
    N = E.shape[0]
    M = np.zeros((nc, nc, nc), np.int64)
    for K in range(nc):
        z = reps[K]
        for x in range(N):
            y = _mul1(E, base, w, keys, kidx, inv[x], z)
            M[K, cls[x], cls[y]] += 1
    return M


@njit(cache=True)
def canon_rows(T, cand, order, E, inv, base, w, keys, kidx):
    B, S = cand.shape
    r = T.shape[1]
    out = np.empty_like(T)
    alive = np.empty(S, np.int64)
    for b in range(B):
        na = S
        for s in range(S):
            alive[s] = cand[b, s]
        for p in order:
            if na == 1:
                break
            best = np.iinfo(np.int64).max
            nb = 0
            for s in range(na):
                v = _conj1(E, inv, base, w, keys, kidx, T[b, p], alive[s])
                if v < best:
                    best = v
                    alive[0] = alive[s]
                    nb = 1
                elif v == best:
                    alive[nb] = alive[s]
                    nb += 1
            na = nb
        g = alive[0]
        for p in range(r):
            out[b, p] = _conj1(E, inv, base, w, keys, kidx, T[b, p], g)
    return out
