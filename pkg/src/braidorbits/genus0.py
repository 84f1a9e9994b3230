"""Genus-zero systems of primitive affine groups.

Candidate ramification types come from the Riemann-Hurwitz condition on
permutation indices.  They are thinned by Scott's bound on fixed spaces
and by the structure constant, and the survivors are split into braid
orbits: triples directly, longer types by an orbit engine.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .braid import RamificationType
from .classic import DEFAULT_WORK_CAP, Orbit, OrbitReport, orbit_partition
from .group import NotAffine, PermGroup
from .perm import perm_index
from .tuples import WorkCapExceeded, conj_orbits, small_gens

log = logging.getLogger(__name__)


@dataclass
class GenusSystem:
    group: str
    rtype: RamificationType
    genus: int
    indices: tuple
    verdicts: dict = field(default_factory=dict)
    report: OrbitReport | None = None

    @property
    def num_orbits(self) -> int:
        return 0 if self.report is None else self.report.num_orbits

    @property
    def largest(self) -> int:
        return 0 if self.report is None else self.report.largest


@dataclass
class Classification:
    group: str
    degree: int
    order: int
    metabelian: bool               # G'' = 1
    systems: list                  # GenusSystem with at least one orbit
    counts: dict                   # candidates surviving each stage

    @property
    def components(self) -> int:
        return sum(s.num_orbits for s in self.systems)

    def by_length(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.systems:
            out[s.rtype.r] = out.get(s.rtype.r, 0) + s.num_orbits
        return out

    def rows(self) -> list[tuple[str, str, int, int]]:
        return [(self.group, str(s.rtype), s.num_orbits, s.largest) for s in self.systems]


# ---------------------------------------------------------------------------
# Riemann-Hurwitz

def class_indices_of(G: PermGroup) -> dict[int, int]:
    """Permutation index of every non-identity class."""
    return {C.index: perm_index(C.rep_perm) for C in G.classes if C.order > 1}


def _order_key(G: PermGroup):
    pos = {C.index: i for i, C in enumerate(G.sorted_classes)}
    return lambda c: pos[c]


def rh_candidate_types(G: PermGroup, g: int = 0, min_r: int = 3) -> list[RamificationType]:
    """All multisets of non-identity classes with index sum ``2(n + g - 1)``."""
    target = 2 * (G.degree + g - 1)
    ind = class_indices_of(G)
    cls = sorted(ind, key=_order_key(G))
    out: list[RamificationType] = []

    def rec(start: int, left: int, chosen: list[int]):
        if left == 0:
            if len(chosen) >= min_r:
                out.append(RamificationType(tuple(G.classes[c].label for c in chosen)))
            return
        for i in range(start, len(cls)):
            c = cls[i]
            if ind[c] <= left:
                chosen.append(c)
                rec(i, left - ind[c], chosen)
                chosen.pop()

    rec(0, target, [])
    return out


def rh_galois_check(orders: Sequence[int], group_order: int, g: int) -> bool:
    """``|G| sum(1 - 1/|t_i|) == 2(|G| + g - 1)`` in exact arithmetic."""
    lhs = group_order * sum((Fraction(1) - Fraction(1, int(o)) for o in orders), Fraction(0))
    return lhs == 2 * (group_order + g - 1)


# ---------------------------------------------------------------------------
# filters

def fixed_space_codims(G: PermGroup, p: int, e: int) -> dict[int, int]:
    """``v(x) = e - log_p(max fixed points over the coset xN)`` per class."""
    N = G.socle_regular_elementary(p, e)
    t = G.table
    out = {}
    for C in G.classes:
        coset = t.mul(C.rep, N.elements)
        fix = (t.E[coset] == np.arange(G.degree)).sum(axis=1).max()
        out[C.index] = e - round(math.log(int(fix), p))
    return out


def scott_filter(rt: RamificationType, G: PermGroup, p: int, e: int, codims: dict | None = None) -> bool:
    """Necessary condition for an irreducible product-one tuple: sum v >= 2e."""
    codims = fixed_space_codims(G, p, e) if codims is None else codims
    return sum(codims[G.cls(lab).index] for lab in rt.labels) >= 2 * e


def structure_constant_filter(G: PermGroup, rt: RamificationType) -> bool:
    return G.product_one_count([G.cls(lab).index for lab in rt.labels]) > 0


# ---------------------------------------------------------------------------
# triples

def enumerate_triples(G: PermGroup, rt: RamificationType) -> OrbitReport:
    """Generating triples up to conjugation; each is one orbit of length one."""
    if rt.r != 3:
        raise ValueError("enumerate_triples needs three classes")
    t = G.table
    c1, c2, c3 = (G.cls(lab).index for lab in rt.labels)
    a = G.classes[c1].rep
    B = G._class_members[c2]
    third = t.inv[t.mul(a, B)]
    B = B[G.class_ids[third] == c3]
    total = G.product_one_count([c1, c2, c3])
    if B.size == 0:
        return OrbitReport(rt, [], total, "triples")
    Z = G._rep_centralizer(c1)
    lab, _, mins = conj_orbits(G, B, small_gens(G, Z))
    sizes = np.bincount(lab)
    orbits = []
    for o, b in enumerate(mins):
        b = int(b)
        c = int(t.inv[t.mul(a, b)])
        rep = (int(a), b, c)
        gen = G.generates([a, b])
        # tuples in the G-class: |G| / |C_G(a, b)| = |class of a| * |C_G(a)-orbit of b|
        orbits.append(Orbit(1, rep, gen, int(G.classes[c1].size * sizes[o]), o))
    orbits.sort(key=lambda o: (not o.generating, o.rep))
    return OrbitReport(rt, orbits, total, "triples")


# ---------------------------------------------------------------------------
# driver

def orbits_for_type(G: PermGroup, rt: RamificationType, engine: str = "auto",
                    work_cap: int = DEFAULT_WORK_CAP, **params) -> OrbitReport:
    if rt.r == 3 and engine in ("auto", "triples"):
        return enumerate_triples(G, rt)
    if engine in ("auto", "classic"):
        try:
            return orbit_partition(G, rt, work_cap=work_cap)
        except WorkCapExceeded:
            if engine == "classic":
                raise
            log.info("%s: work cap exceeded, switching to the matching engine", rt)
    from .graph import sample_edges
    from .matching import MatchingIndex
    kw = {k: params[k] for k in ("k", "policy", "sides", "skip_type1") if k in params}
    idx = MatchingIndex(G, rt, **kw)
    gr = sample_edges(idx, **{k: params[k] for k in ("s", "t", "seed") if k in params})
    return gr.report()


def classify(G: PermGroup, p: int, e: int, engine: str = "auto", scott: bool = True,
             genus: int = 0, types: Sequence[RamificationType] | None = None,
             **params) -> Classification:
    """Genus-``genus`` systems of ``G`` with their braid orbits."""
    if G.degree != p ** e:
        raise NotAffine(f"{G.name} has degree {G.degree}, not {p}^{e}")
    cands = list(rh_candidate_types(G, genus)) if types is None else list(types)
    counts = {"riemann_hurwitz": len(cands)}
    if scott:
        codims = fixed_space_codims(G, p, e)
        cands = [rt for rt in cands if scott_filter(rt, G, p, e, codims)]
        counts["scott"] = len(cands)
    cands = [rt for rt in cands if structure_constant_filter(G, rt)]
    counts["structure_constant"] = len(cands)
    systems = []
    ind = class_indices_of(G)
    for rt in cands:
        idx = tuple(ind[G.cls(lab).index] for lab in rt.labels)
        if sum(idx) != 2 * (G.degree + genus - 1):
            raise RuntimeError(f"{rt} violates Riemann-Hurwitz")
        rep = orbits_for_type(G, rt, engine, **params)
        if rep.num_orbits:
            systems.append(GenusSystem(G.name, rt, genus, idx, {"scott": scott}, rep))
    counts["systems"] = len(systems)
    systems.sort(key=lambda s: (s.rtype.r, s.rtype.labels))
    return Classification(G.name, G.degree, G.order, G.second_derived_trivial(), systems, counts)
