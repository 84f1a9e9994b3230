"""Affine groups ``V:H`` acting on ``V = F_p^e``.

Vectors are numbered by ``v = x_0 + x_1 p + ... + x_{e-1} p^{e-1}``.  A pair
``(A, b)`` acts as ``x -> A x + b``.  Used by the catalog builder and tests.
"""
from __future__ import annotations

from itertools import product
from typing import Sequence

import numpy as np

from .group import PermGroup
from .perm import Permutation


def _points(p: int, e: int) -> np.ndarray:
    """Rows are coordinate vectors of points 0..p^e-1."""
    return np.array(list(product(range(p), repeat=e)), dtype=np.int64)[:, ::-1]


def affine_perm(A, b, p: int) -> Permutation:
    A = np.asarray(A, np.int64) % p
    e = A.shape[0]
    b = np.zeros(e, np.int64) if b is None else np.asarray(b, np.int64) % p
    X = _points(p, e)
    Y = (X @ A.T + b) % p
    w = p ** np.arange(e)
    return Permutation((Y @ w).tolist())


def translation(p: int, e: int, i: int = 0) -> Permutation:
    b = np.zeros(e, np.int64)
    b[i] = 1
    return affine_perm(np.eye(e, dtype=np.int64), b, p)


def affine_group(p: int, e: int, matrices: Sequence, name: str | None = None, **kw) -> PermGroup:
    """The group generated by the translations and the given linear maps."""
    gens = [translation(p, e)] + [affine_perm(A, None, p) for A in matrices]
    return PermGroup(gens, name=name, **kw)


def gl_generators(p: int, e: int) -> list[np.ndarray]:
    """Two-plus generators of GL(e, p): a primitive scalar on e_1 and a cycle-transvection."""
    gens = []
    if p > 2:
        D = np.eye(e, dtype=np.int64)
        D[0, 0] = primitive_root(p)
        gens.append(D)
    gens += sl_generators(p, e)
    return gens


def sl_generators(p: int, e: int) -> list[np.ndarray]:
    if e == 1:
        return [np.eye(1, dtype=np.int64)]
    T = np.eye(e, dtype=np.int64)
    T[0, 1] = 1
    # signed cyclic shift of the basis, determinant 1
    C = np.zeros((e, e), np.int64)
    for i in range(e):
        C[(i + 1) % e, i] = 1
    if e % 2 == 0:
        C[0, e - 1] = p - 1
    return [T, C]


def primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            return g
    return 1


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return sorted(set(out))


# ---------------------------------------------------------------------------
# F_{p^e} as matrices over F_p, for semilinear groups

def _polymulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    e = len(mod) - 1
    for d in range(len(out) - 1, e - 1, -1):
        c = out[d]
        if c:
            for j in range(e + 1):
                out[d - e + j] = (out[d - e + j] - c * mod[j]) % p
    return (out + [0] * e)[:e]


def _is_primitive(mod, p: int) -> bool:
    e = len(mod) - 1
    q = p ** e
    x = [0, 1] + [0] * (e - 2) if e > 1 else [0]
    if e == 1:
        return False
    one = [1] + [0] * (e - 1)

    def power(k):
        r, b = one, x
        while k:
            if k & 1:
                r = _polymulmod(r, b, mod, p)
            b = _polymulmod(b, b, mod, p)
            k >>= 1
        return r

    if power(q - 1) != one:
        return False
    return all(power((q - 1) // r) != one for r in _prime_factors(q - 1))


def primitive_poly(p: int, e: int) -> list[int]:
    """Monic primitive polynomial of degree e over F_p, coefficients low to high."""
    for tail in product(range(p), repeat=e):
        mod = list(tail) + [1]
        if mod[0] and _is_primitive(mod, p):
            return mod
    raise ValueError("no primitive polynomial found")


def field_matrices(p: int, e: int) -> tuple[np.ndarray, np.ndarray]:
    """(multiplication by a primitive element, Frobenius) on F_{p^e} = F_p^e."""
    mod = primitive_poly(p, e)
    M = np.zeros((e, e), np.int64)
    F = np.zeros((e, e), np.int64)
    for i in range(e):
        basis = [0] * e
        basis[i] = 1
        img = _polymulmod(basis, [0, 1], mod, p)
        M[:, i] = img
        pw = basis
        for _ in range(p - 1):
            pw = _polymulmod(pw, basis, mod, p)
        F[:, i] = pw
    return M, F


# ---------------------------------------------------------------------------
# matrix groups over F_p, for the catalog builder

def _key(A, p: int) -> tuple:
    return tuple(int(x) % p for x in np.asarray(A).ravel())


def _mat(key: tuple, e: int) -> np.ndarray:
    return np.array(key, np.int64).reshape(e, e)


def matrix_closure(gens: Sequence, p: int, cap: int | None = None) -> set | None:
    """Elements of the matrix group generated by ``gens`` as flat tuples.

    Returns None once more than ``cap`` elements have been found.
    """
    gens = [np.asarray(g, np.int64) % p for g in gens]
    e = gens[0].shape[0]
    one = _key(np.eye(e, dtype=np.int64), p)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for k in frontier:
            A = _mat(k, e)
            for g in gens:
                c = _key(A @ g, p)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
                    if cap is not None and len(seen) > cap:
                        return None
        frontier = nxt
    return seen


def is_irreducible(gens: Sequence, p: int) -> bool:
    """True iff no proper nonzero subspace of F_p^e is invariant under ``gens``."""
    gens = [np.asarray(g, np.int64) % p for g in gens]
    e = gens[0].shape[0]
    X = _points(p, e)[1:]
    for v in X:
        basis = [v]
        # spin v up to its invariant span
        i = 0
        while i < len(basis) and len(basis) < e:
            for g in gens:
                w = (g @ basis[i]) % p
                if rank_mod_p(np.array(basis + [w]), p) > len(basis):
                    basis.append(w)
            i += 1
        if len(basis) < e:
            return False
    return True


def rank_mod_p(M, p: int) -> int:
    M = np.array(M, np.int64) % p
    r = 0
    rows, cols = M.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % p
        r += 1
        if r == rows:
            break
    return r


class MatrixGroup:
    """A finite matrix group over F_p with all elements enumerated.

    Elements are rows of ``E``; index 0 is the identity.  Used to search for
    subgroups of a given order up to conjugacy.
    """

    def __init__(self, p: int, gens: Sequence):
        gens = [np.asarray(g, np.int64) % p for g in gens]
        self.p = p
        self.e = e = gens[0].shape[0]
        self.w = p ** np.arange(e * e, dtype=np.int64)
        self.lookup = np.full(p ** (e * e), -1, np.int64)
        E = [np.eye(e, dtype=np.int64)[None]]
        self.lookup[self.codes(E[0])] = 0
        n = 1
        frontier = E[0]
        G = np.stack(gens)
        while len(frontier):
            prod = (frontier[:, None] @ G[None]).reshape(-1, e, e) % p
            c, first = np.unique(self.codes(prod), return_index=True)
            new = self.lookup[c] < 0
            frontier = prod[first[new]]
            self.lookup[c[new]] = np.arange(n, n + new.sum())
            n += int(new.sum())
            E.append(frontier)
        self.E = np.concatenate(E)
        self.gens = [int(self.lookup[self.codes(g[None])[0]]) for g in gens]
        self.inv = self._inverses()
        self.order = self._orders()

    def __len__(self) -> int:
        return len(self.E)

    def codes(self, M) -> np.ndarray:
        M = np.asarray(M)
        return (M.reshape(len(M), self.e * self.e) % self.p) @ self.w

    def idx(self, M) -> np.ndarray:
        return self.lookup[self.codes(M)]

    def mul(self, I, j) -> np.ndarray:
        return self.idx(self.E[I] @ self.E[j] % self.p)

    def _orders(self) -> np.ndarray:
        n = len(self.E)
        out = np.zeros(n, np.int64)
        P = self.E.copy()
        k = 1
        while (out == 0).any():
            hit = (self.codes(P) == self.codes(self.E[:1])[0]) & (out == 0)
            out[hit] = k
            P = P @ self.E % self.p
            k += 1
        return out

    def _inverses(self) -> np.ndarray:
        # x^-1 = x^(o-1), found by stepping powers once
        n = len(self.E)
        one = self.codes(self.E[:1])[0]
        out = np.full(n, -1, np.int64)
        prev = np.arange(n)
        P = self.E.copy()
        while (out < 0).any():
            nxt = P @ self.E % self.p
            hit = (self.codes(nxt) == one) & (out < 0)
            out[hit] = self.idx(P[hit])
            P = nxt
        return out

    def conj(self, I, g: int) -> np.ndarray:
        """``g^-1 x g`` for every index x in I."""
        return self.idx(self.E[self.inv[g]] @ self.E[I] @ self.E[g] % self.p)

    def closure(self, gens: Sequence[int], cap: int | None = None) -> np.ndarray | None:
        """Sorted indices of the subgroup generated by ``gens``, or None above ``cap``."""
        seen = np.zeros(len(self.E), bool)
        seen[0] = True
        frontier = np.array([0])
        total = 1
        G = self.E[list(gens)]
        while frontier.size:
            prod = (self.E[frontier][:, None] @ G[None]).reshape(-1, self.e, self.e) % self.p
            c = np.unique(self.idx(prod))
            c = c[~seen[c]]
            seen[c] = True
            total += c.size
            if cap is not None and total > cap:
                return None
            frontier = c
        return np.flatnonzero(seen)

    def class_labels(self) -> np.ndarray:
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components
        n = len(self.E)
        src = np.concatenate([np.arange(n)] * len(self.gens))
        dst = np.concatenate([self.conj(np.arange(n), g) for g in self.gens])
        _, lab = connected_components(coo_matrix((np.ones(src.size, np.int8), (src, dst)), shape=(n, n)),
                                      directed=False)
        return lab

    def subgroups_of_order(self, m: int, require: Sequence[int] = (), max_gens: int = 2) -> list[np.ndarray]:
        """Subgroups of order ``m`` with at most ``max_gens`` generators, up to conjugacy.

        ``require`` lists element orders that must occur; the first generator
        runs over class representatives of the largest required order (or of
        every order dividing ``m``), later ones over all elements.
        """
        lab = self.class_labels()
        _, reps = np.unique(lab, return_index=True)
        div = m % self.order == 0
        if require:
            a_set = [int(r) for r in reps if self.order[r] == max(require)]
        else:
            a_set = [int(r) for r in reps if div[r] and self.order[r] > 1]
        b_set = np.flatnonzero(div)
        found: dict[bytes, np.ndarray] = {}
        layer: dict[bytes, tuple] = {np.array([a]).tobytes(): (a,) for a in a_set}
        for _ in range(max_gens - 1):
            nxt: dict[bytes, tuple] = {}
            for key, gens in layer.items():
                inside = np.frombuffer(key, np.int64) if len(gens) > 1 else np.array(gens)
                for b in b_set:
                    if len(gens) > 1 and b in inside:
                        continue
                    S = self.closure(list(gens) + [int(b)], cap=m)
                    if S is None:
                        continue
                    k = S.tobytes()
                    if S.size == m:
                        if not require or set(require) <= set(self.order[S].tolist()):
                            found.setdefault(k, S)
                    elif k not in nxt:
                        nxt[k] = tuple(gens) + (int(b),)
            layer = nxt
        # one representative per conjugacy class
        out, done = [], set()
        for key, S in found.items():
            if key in done:
                continue
            out.append(S)
            orbit = [S]
            done.add(key)
            for T in orbit:
                for g in self.gens:
                    U = np.sort(self.conj(T, g))
                    k = U.tobytes()
                    if k not in done:
                        done.add(k)
                        orbit.append(U)
        return out

    def generators_of(self, S: np.ndarray) -> list[np.ndarray]:
        """A short generating set of the subgroup with indices S."""
        gens: list[int] = []
        cur = np.array([0])
        for x in sorted(S.tolist(), key=lambda i: -self.order[i]):
            if x not in set(cur.tolist()):
                gens.append(x)
                cur = self.closure(gens)
                if cur.size == S.size:
                    break
        return [self.E[g] for g in gens]
