"""Fixed-degree permutations.

Points are 0-based internally and 1-based in cycle notation.  Products are
read left to right: ``a * b`` applies ``a`` first, then ``b``, so
``(a * b)(i) == b(a(i))``.  This convention is used everywhere in the package.
"""
from __future__ import annotations

import re
from math import lcm
from typing import Iterable, Sequence

import numpy as np


class DegreeMismatch(ValueError):
    pass


class Permutation:
    """An immutable bijection on ``{0, ..., n-1}``."""

    __slots__ = ("_images", "_hash")

    def __init__(self, images: Iterable[int], check: bool = True):
        imgs = tuple(int(x) for x in images)
        if check and sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")
        if not imgs:
            raise ValueError("degree must be positive")
        self._images = imgs
        self._hash = hash(imgs)

    # construction -----------------------------------------------------
    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n), check=False)

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], n: int) -> "Permutation":
        """Build from 1-based cycles on ``n`` points."""
        img = list(range(n))
        seen = set()
        for cyc in cycles:
            pts = [int(c) - 1 for c in cyc]
            for p in pts:
                if not 0 <= p < n:
                    raise ValueError(f"point {p + 1} outside 1..{n}")
                if p in seen:
                    raise ValueError(f"point {p + 1} repeated in cycle notation")
                seen.add(p)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a] = b
        return cls(img, check=False)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        return parse_cycles(text, n)

    # basic protocol ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def images(self) -> tuple[int, ...]:
        return self._images

    def array(self, dtype=np.int16) -> np.ndarray:
        return np.asarray(self._images, dtype=dtype)

    def __call__(self, i: int) -> int:
        return self._images[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self._images == other._images

    def __lt__(self, other: "Permutation") -> bool:
        _check_degree(self, other)
        return self._images < other._images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, n={self.degree})"

    def __str__(self) -> str:
        return self.cycle_string()

    # group operations -------------------------------------------------
    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __invert__(self) -> "Permutation":
        return inverse(self)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return inverse(self) ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __xor__(self, g: "Permutation") -> "Permutation":
        """``a ^ g`` is the conjugate ``g^-1 a g``."""
        return conjugate(self, g)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._images))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles (0-based), each starting at its smallest point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self._images[start]
            while j != start:
                seen[j] = True
                cyc.append(j)
                j = self._images[j]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(p + 1) for p in c) + ")" for c in cyc)


def _check_degree(a: Permutation, b: Permutation) -> None:
    if a.degree != b.degree:
        raise DegreeMismatch(f"degree {a.degree} vs {b.degree}")


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Apply ``a`` first, then ``b``."""
    _check_degree(a, b)
    bi = b.images
    return Permutation((bi[x] for x in a.images), check=False)


def inverse(a: Permutation) -> Permutation:
    inv = [0] * a.degree
    for i, x in enumerate(a.images):
        inv[x] = i
    return Permutation(inv, check=False)


def conjugate(a: Permutation, g: Permutation) -> Permutation:
    """Return ``g^-1 a g``; maps ``g(i)`` to ``g(a(i))``."""
    _check_degree(a, g)
    img = [0] * a.degree
    gi = g.images
    ai = a.images
    for i in range(a.degree):
        img[gi[i]] = gi[ai[i]]
    return Permutation(img, check=False)


def cycle_type(a: Permutation) -> tuple[int, ...]:
    """Sorted (descending) cycle lengths, fixed points included."""
    return tuple(sorted((len(c) for c in a.cycles(include_fixed=True)), reverse=True))


def element_order(a: Permutation) -> int:
    return lcm(*cycle_type(a))


def fixed_points(a: Permutation) -> int:
    return sum(1 for i, x in enumerate(a.images) if i == x)


def perm_index(a: Permutation) -> int:
    """Degree minus the number of cycles (fixed points count as cycles).

    This is the minimal number of transpositions whose product is ``a``.
    """
    return a.degree - len(a.cycles(include_fixed=True))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse 1-based cycle notation such as ``"(1,2,3)(4,5)"``.

    ``n`` defaults to the largest point mentioned; ``"()"`` needs ``n``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty permutation text")
    pos = 0
    cycles: list[list[int]] = []
    for m in _CYCLE_RE.finditer(s):
        gap = s[pos:m.start()]
        if gap.strip() not in ("", "*"):
            raise ValueError(f"unexpected text {gap.strip()!r} at column {pos + 1} in {text!r}")
        body = m.group(1).strip()
        if body:
            try:
                cycles.append([int(tok) for tok in re.split(r"[,\s]+", body) if tok])
            except ValueError:
                raise ValueError(f"bad cycle {m.group(0)!r} at column {m.start() + 1}") from None
        pos = m.end()
    if s[pos:].strip():
        raise ValueError(f"unexpected text {s[pos:].strip()!r} at column {pos + 1} in {text!r}")
    top = max((max(c) for c in cycles if c), default=0)
    if n is None:
        if top == 0:
            raise ValueError("degree required for the identity")
        n = top
    if top > n:
        raise ValueError(f"point {top} exceeds degree {n}")
    return Permutation.from_cycles(cycles, n)
