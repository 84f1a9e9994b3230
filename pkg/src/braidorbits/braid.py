"""The braid action on tuples of group elements.

``Q_i`` (1-based) sends ``(.., g_i, g_{i+1}, ..)`` to
``(.., g_{i+1}, g_{i+1}^-1 g_i g_{i+1}, ..)``.  Braid words are applied left
to right.  Two representations of tuples are supported: :class:`GTuple` of
Permutations (reference implementation) and integer arrays of element
indices into a group's element table (the fast path used by the engines).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .perm import Permutation, compose, conjugate, inverse

POLICIES = ("parabolic", "pure", "auto")


# ---------------------------------------------------------------------------
# words

@dataclass(frozen=True)
class BraidWord:
    """A word in ``Q_i`` and ``Q_ij`` letters, 1-based.

    ``letters`` holds ``(gen, sign)`` pairs; ``gen`` is ``i`` for ``Q_i`` or
    ``(i, j)`` for ``Q_ij``.
    """

    letters: tuple

    @classmethod
    def Q(cls, i: int, sign: int = 1) -> "BraidWord":
        return cls(((i, sign),))

    @classmethod
    def Qij(cls, i: int, j: int, sign: int = 1) -> "BraidWord":
        return cls((((i, j), sign),))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((g, -s) for g, s in reversed(self.letters)))

    def elementary(self) -> list[tuple[int, int]]:
        """Expansion into ``(i, sign)`` steps, ``Q_ij`` via its defining word."""
        out: list[tuple[int, int]] = []
        for g, s in self.letters:
            if isinstance(g, tuple):
                steps = qij_steps(*g)
                if s < 0:
                    steps = [(i, -t) for i, t in reversed(steps)]
                out.extend(steps)
            else:
                out.append((g, s))
        return out

    def max_position(self) -> int:
        m = 0
        for g, _ in self.letters:
            m = max(m, g[1] if isinstance(g, tuple) else g + 1)
        return m

    def min_position(self) -> int:
        m = 10 ** 9
        for g, _ in self.letters:
            m = min(m, g[0] if isinstance(g, tuple) else g)
        return m

    def shifted(self, d: int) -> "BraidWord":
        out = []
        for g, s in self.letters:
            out.append(((g[0] + d, g[1] + d) if isinstance(g, tuple) else g + d, s))
        return BraidWord(tuple(out))

    def __str__(self) -> str:
        parts = []
        for g, s in self.letters:
            name = f"Q{g[0]}{g[1]}" if isinstance(g, tuple) and max(g) < 10 else (
                f"Q{g[0]},{g[1]}" if isinstance(g, tuple) else f"Q{g}")
            parts.append(name if s == 1 else f"{name}^{s}")
        return " ".join(parts) if parts else "1"

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        letters = []
        for tok in text.split():
            if tok == "1":
                continue
            m = re.fullmatch(r"Q(\d+)(?:,(\d+))?(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"bad braid letter {tok!r}")
            a, b, s = m.group(1), m.group(2), int(m.group(3) or 1)
            if b is not None:
                g = (int(a), int(b))
            elif len(a) == 2 and a[0] < a[1]:
                g = (int(a[0]), int(a[1]))
            else:
                g = int(a)
            letters.append((g, s))
        return cls(tuple(letters))


def qij_steps(i: int, j: int) -> list[tuple[int, int]]:
    """``Q_{j-1} ... Q_{i+1} Q_i^2 Q_{i+1}^-1 ... Q_{j-1}^-1`` as steps."""
    if not 1 <= i < j:
        raise ValueError(f"bad pure braid indices ({i}, {j})")
    down = [(m, 1) for m in range(j - 1, i, -1)]
    up = [(m, -1) for m in range(i + 1, j)]
    return down + [(i, 1), (i, 1)] + up


def qij_steps_alt(i: int, j: int) -> list[tuple[int, int]]:
    """The second expression ``Q_i^-1 ... Q_{j-2}^-1 Q_{j-1}^2 Q_{j-2} ... Q_i``."""
    if not 1 <= i < j:
        raise ValueError(f"bad pure braid indices ({i}, {j})")
    down = [(m, -1) for m in range(i, j - 1)]
    up = [(m, 1) for m in range(j - 2, i - 1, -1)]
    return down + [(j - 1, 1), (j - 1, 1)] + up


# ---------------------------------------------------------------------------
# ramification types

@dataclass(frozen=True)
class RamificationType:
    """Ordered class labels with equal labels in consecutive runs."""

    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        seen = set()
        for i, lab in enumerate(labels):
            if lab in seen and labels[i - 1] != lab:
                raise ValueError(f"class {lab} is split into several runs in {','.join(labels)}")
            seen.add(lab)

    @classmethod
    def parse(cls, text: str) -> "RamificationType":
        labs = [s.strip() for s in text.strip().strip("()").split(",") if s.strip()]
        if not labs:
            raise ValueError("empty ramification type")
        return cls(tuple(labs))

    @property
    def r(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return "(" + ",".join(self.labels) + ")"

    @cached_property
    def block_of(self) -> tuple[int, ...]:
        out, b = [], -1
        for i, lab in enumerate(self.labels):
            if i == 0 or lab != self.labels[i - 1]:
                b += 1
            out.append(b)
        return tuple(out)

    @property
    def blocks(self) -> list[tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for i, b in enumerate(self.block_of):
            out.setdefault(b, []).append(i + 1)
        return [tuple(v) for v in out.values()]

    def same_block(self, i: int, j: int) -> bool:
        """1-based positions."""
        return self.block_of[i - 1] == self.block_of[j - 1]


# ---------------------------------------------------------------------------
# generator sets

def parabolic_generators(rt: RamificationType, exact: bool = False) -> list[BraidWord]:
    """Generators of the block-preserving braid subgroup.

    By default every ``Q_ij`` is included; ``exact=True`` keeps only the
    cross-block ones.  ``Q_i`` is added whenever ``i`` and ``i+1`` share a block.
    """
    r = rt.r
    out = [BraidWord.Qij(i, j) for i in range(1, r) for j in range(i + 1, r + 1)
           if not exact or not rt.same_block(i, j)]
    out += [BraidWord.Q(i) for i in range(1, r) if rt.same_block(i, i + 1)]
    return out


def pure_generators(r: int) -> list[BraidWord]:
    return [BraidWord.Qij(i, j) for i in range(1, r) for j in range(i + 1, r + 1)]


def orbit_generators(rt: RamificationType, policy: str = "auto", exact: bool = False) -> list[BraidWord]:
    """Generators for the braid group whose orbits are reported.

    ``auto`` uses pure braids for triples (every triple then spans its own
    orbit, the convention of the triple tables) and the block-preserving
    group otherwise.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    if policy == "pure" or (policy == "auto" and rt.r == 3):
        return pure_generators(rt.r)
    return parabolic_generators(rt, exact=exact)


def default_k(r: int) -> int:
    return max(2, r // 2)


def split_generators(words: Sequence[BraidWord], r: int, k: int):
    """Partition ``words`` into (left, right, crossing) for the cut after position ``k``."""
    if not 1 < k < r:
        raise ValueError(f"split point k={k} must satisfy 1 < k < {r}")
    left, right, cross = [], [], []
    for w in words:
        if w.max_position() <= k:
            left.append(w)
        elif w.min_position() >= k + 1:
            right.append(w)
        else:
            cross.append(w)
    return left, right, cross


def split_type_generators(rt: RamificationType, k: int, policy: str = "auto", exact: bool = False):
    return split_generators(orbit_generators(rt, policy, exact), rt.r, k)


# ---------------------------------------------------------------------------
# tuples of Permutations

@dataclass(frozen=True)
class GTuple:
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def product(self) -> Permutation:
        acc = self.entries[0]
        for g in self.entries[1:]:
            acc = compose(acc, g)
        return acc

    def conjugate(self, g: Permutation) -> "GTuple":
        return GTuple(conjugate(x, g) for x in self.entries)

    def __str__(self) -> str:
        return "[" + ", ".join(x.cycle_string() for x in self.entries) + "]"


def _check_i(t, i: int) -> None:
    if not 1 <= i < len(t):
        raise IndexError(f"Q_{i} undefined on {len(t)}-tuples")


def apply_Qi(t: GTuple, i: int) -> GTuple:
    _check_i(t, i)
    e = list(t.entries)
    a, b = e[i - 1], e[i]
    e[i - 1], e[i] = b, conjugate(a, b)
    return GTuple(e)


def apply_Qi_inv(t: GTuple, i: int) -> GTuple:
    _check_i(t, i)
    e = list(t.entries)
    a, b = e[i - 1], e[i]
    e[i - 1], e[i] = conjugate(b, inverse(a)), a
    return GTuple(e)


def apply_steps(t: GTuple, steps: Iterable[tuple[int, int]]) -> GTuple:
    for i, s in steps:
        t = apply_Qi(t, i) if s > 0 else apply_Qi_inv(t, i)
    return t


def apply_Qij(t: GTuple, i: int, j: int) -> GTuple:
    if not 1 <= i < j <= len(t):
        raise IndexError(f"Q_{i}{j} undefined on {len(t)}-tuples")
    return apply_steps(t, qij_steps(i, j))


def apply_word(t: GTuple, word: BraidWord) -> GTuple:
    if word.letters and word.max_position() > len(t):
        raise IndexError(f"{word} does not act on {len(t)}-tuples")
    return apply_steps(t, word.elementary())


# ---------------------------------------------------------------------------
# tuples as arrays of element indices

def apply_steps_array(T: np.ndarray, steps, table, offset: int = 0) -> np.ndarray:
    """Apply elementary steps to every row of ``T``; positions shift by ``offset``."""
    T = np.array(T, dtype=np.int64, copy=True)
    for i, s in steps:
        p = i - 1 + offset
        a = T[:, p].copy()
        b = T[:, p + 1].copy()
        if s > 0:
            T[:, p] = b
            T[:, p + 1] = table.conj(a, b)
        else:
            T[:, p] = table.conj(b, table.inv[a])
            T[:, p + 1] = a
    return T


def apply_word_array(T: np.ndarray, word: BraidWord, table, offset: int = 0) -> np.ndarray:
    return apply_steps_array(T, word.elementary(), table, offset)
