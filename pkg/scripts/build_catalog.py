"""Build data/catalog.txt: construct each group, identify it against the
reference tables and pin its class labels.

Usage: python scripts/build_catalog.py [--degrees 8,9,25] [--out PATH]

Groups named by a subgroup order are found by a two-generator search in
GL(e, p); every irreducible candidate is classified and the first one whose
rows match the reference table (after relabelling) is kept.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from braidorbits.affine import (MatrixGroup, affine_group, field_matrices, gl_generators,
                                is_irreducible, sl_generators)
from braidorbits.braid import RamificationType
from braidorbits.catalog import (CatalogEntry, calibrate_labels, format_entry, load_tables,
                                 type_key)
from braidorbits.genus0 import classify, rh_candidate_types

log = logging.getLogger("build_catalog")

OUT = Path(__file__).resolve().parents[1] / "src" / "braidorbits" / "data" / "catalog.txt"


def mpow(A, k, p):
    return np.linalg.matrix_power(np.asarray(A, np.int64), k) % p


def _f(p, e):
    return field_matrices(p, e)


def monomial(p, diag_gens, perms, signs=None):
    """Monomial matrices: diagonal generators plus signed permutation matrices."""
    e = len(diag_gens[0])
    out = [np.diag(np.asarray(d, np.int64) % p) for d in diag_gens]
    for s, sign in zip(perms, signs or [1] * len(perms)):
        P = np.zeros((e, e), np.int64)
        for i, j in enumerate(s):
            P[j, i] = sign % p
        out.append(P)
    return out


def explicit(*gens):
    return lambda: [list(gens)]


def search(p, e, m, require=(), max_gens=2):
    def cands():
        amb = MatrixGroup(p, gl_generators(p, e))
        out = []
        for S in amb.subgroups_of_order(m, require, max_gens):
            gens = amb.generators_of(S)
            if is_irreducible(gens, p):
                out.append(gens)
        return out
    return cands


# name, degree, p, e, subgroup order, candidates, r values used for calibration
def specs():
    M8, F8 = _f(2, 3)
    M9, F9 = _f(3, 2)
    return [
        ("AGammaL(1,8)", 8, 2, 3, 21, explicit(M8, F8), None),
        ("ASL(3,2)", 8, 2, 3, 168, explicit(*gl_generators(2, 3)), None),
        ("3^2:4", 9, 3, 2, 4, explicit(mpow(M9, 2, 3)), None),
        ("3^2:D(2x4)", 9, 3, 2, 8, explicit(np.array([[1, 0], [0, 2]]), np.array([[0, 1], [1, 0]])), None),
        ("3^2:(2'A4)", 9, 3, 2, 24, explicit(*sl_generators(3, 2)), None),
        ("AGammaL(1,9)", 9, 3, 2, 16, explicit(M9, F9), None),
        ("AGL(2,3)", 9, 3, 2, 48, explicit(*gl_generators(3, 2)), None),
        ("5^2:3", 25, 5, 2, 3, search(5, 2, 3), None),
        ("5^2:6", 25, 5, 2, 6, search(5, 2, 6), None),
        ("5^2:S3", 25, 5, 2, 6, search(5, 2, 6), None),
        ("5^2:D(2*6)", 25, 5, 2, 12, search(5, 2, 12), None),
        ("5^2:D(2*4):2", 25, 5, 2, 16, search(5, 2, 16, max_gens=3), None),
        ("5^2:O+(2,5)", 25, 5, 2, 32, search(5, 2, 32), None),
        ("5^2:((Q8:3)'2)", 25, 5, 2, 48, search(5, 2, 48), None),
        ("5^2:((Q8:3)'4)", 25, 5, 2, 96, search(5, 2, 96), None),
        ("ASL(2,5):2", 25, 5, 2, 240, search(5, 2, 240), None),
        ("7^2:4", 49, 7, 2, 4, search(7, 2, 4), None),
        ("7^2:3:D(2*4)", 49, 7, 2, 24, search(7, 2, 24), None),
        ("11^2:3", 121, 11, 2, 3, search(11, 2, 3), None),
        ("11^2:4", 121, 11, 2, 4, search(11, 2, 4), None),
        ("11^2:6", 121, 11, 2, 6, search(11, 2, 6), None),
        ("11^2:(Q8:D6)", 121, 11, 2, 48, search(11, 2, 48), None),
        ("5^3:4^2:S3", 125, 5, 3, 96,
         explicit(*monomial(5, [(2, 3, 1), (1, 2, 3)], [(1, 2, 0), (1, 0, 2)], [1, -1])), None),
        ("3^3.A4", 27, 3, 3, 12, search(3, 3, 12), None),
        ("3^3(A4x2)", 27, 3, 3, 24, search(3, 3, 24), None),
        ("3^3.S4", 27, 3, 3, 24, search(3, 3, 24), None),
        ("3^3(S4x2)", 27, 3, 3, 48, search(3, 3, 48), None),
        ("ASL(3,3)", 27, 3, 3, 5616, explicit(*sl_generators(3, 3)), None),
        ("AGL(3,3)", 27, 3, 3, 11232, explicit(*gl_generators(3, 3)), None),
        ("2^4:D(2*5)", 16, 2, 4, 10, search(2, 4, 10), None),
        ("(A4xA4):2", 16, 2, 4, 18, search(2, 4, 18), None),
        ("(2^4:5).4", 16, 2, 4, 20, search(2, 4, 20), None),
        ("2^4:S3xS3", 16, 2, 4, 36, search(2, 4, 36), None),
        ("2^4.3^2:4", 16, 2, 4, 36, search(2, 4, 36), None),
        ("(S4xS4):2", 16, 2, 4, 72, search(2, 4, 72), None),
        ("2^4:A5", 16, 2, 4, 60, search(2, 4, 60, (5,)), None),
        ("2^4:S5", 16, 2, 4, 120, search(2, 4, 120, (5,)), None),
        ("ASL(2,4):2", 16, 2, 4, 120, search(2, 4, 120, (5,)), None),
        ("AGammaL(2,4)", 16, 2, 4, 360, search(2, 4, 360, (15,)), None),
        ("2^4.A6", 16, 2, 4, 360, search(2, 4, 360, (5,)), None),
        ("2^4.S6", 16, 2, 4, 720, search(2, 4, 720, (5,)), None),
        ("2^4.A7", 16, 2, 4, 2520, search(2, 4, 2520, (7,)), None),
        ("AGL(4,2)", 16, 2, 4, 20160, explicit(*gl_generators(2, 4)), (3, 4)),
    ]


# reference rows that no group of the stated order can have; see the notes
# in tests/test_acceptance.py
EXCLUDE = {("11^2:6", "(2A,3A,6A)"), ("5^2:6", "(2A,3A,6B)")}


# reference rows allowed to disagree with every relabelling (misprinted labels)
MAX_MISSES = 3


def reference(tables, name):
    return [(type_key(r.rtype), r.orbits, r.largest) for r in tables
            if r.group == name and (name, r.rtype) not in EXCLUDE]


def try_candidate(name, degree, p, e, gens, ref, rs):
    G = affine_group(p, e, gens, name=name)
    types = None
    if rs is not None:
        types = [rt for rt in rh_candidate_types(G) if rt.r in rs]
        ref = [row for row in ref if len(row[0]) in rs]
    t0 = time.time()
    c = classify(G, p, e, types=types)
    ours = [(s.rtype.labels, s.num_orbits, s.largest) for s in c.systems]
    extra = sum(1 for n, _ in EXCLUDE if n == name)
    phi = None
    for misses in range(MAX_MISSES + 1):
        phi = calibrate_labels(ref, ours, [C.label for C in G.classes], extra, misses)
        if phi is not None:
            break
    log.info("%s |G|=%d: %d systems in %.1fs, %s", name, G.order, len(ours), time.time() - t0,
             "match" if phi is not None else "no match")
    if phi is None:
        return None
    for row in phi.pop(None, []):
        log.warning("%s: reference row %s %d %d matches no computed row", name, *row)
    pins = {lab: G.cls(ours_lab).rep_perm.cycle_string() for lab, ours_lab in sorted(phi.items())}
    return CatalogEntry(name, degree, G.order, p, e, [g.cycle_string() for g in G.generators], pins)


def build(degrees=None, only=None):
    tables = load_tables()
    entries = []
    for name, degree, p, e, m, cands, rs in specs():
        if degrees and degree not in degrees:
            continue
        if only and name not in only:
            continue
        ref = reference(tables, name)
        entry = None
        for gens in cands():
            entry = try_candidate(name, degree, p, e, gens, ref, rs)
            if entry is not None:
                break
        if entry is None:
            log.error("%s: no candidate reproduces the reference rows", name)
            continue
        if entry.order != degree * m:
            log.error("%s: order %d, expected %d", name, entry.order, degree * m)
        entries.append(entry)
    return entries


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degrees", help="comma-separated degrees")
    ap.add_argument("--only", help="semicolon-separated group names")
    ap.add_argument("--out", default=str(OUT))
    a = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    degrees = {int(x) for x in a.degrees.split(",")} if a.degrees else None
    only = set(a.only.split(";")) if a.only else None
    entries = build(degrees, only)
    text = "# Generators act on points 1..p^e; pins fix class labels.\n\n"
    text += "\n".join(format_entry(e) for e in entries)
    Path(a.out).write_text(text)
    print(f"wrote {len(entries)} groups to {a.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
