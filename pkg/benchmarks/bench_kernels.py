"""Time the numba kernels against the numpy fallback on the same workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Each workload builds a fresh group per backend, so table construction,
class computation and orbit enumeration are all timed.  The first numba run
includes JIT compilation and is reported separately.
"""
from __future__ import annotations

import argparse
import time

from braidorbits.braid import RamificationType
from braidorbits.catalog import load_catalog
from braidorbits.classic import orbit_partition

WORKLOADS = [
    ("ASL(3,2)", "2B,2B,2B,2B,2B,2B,2B"),
    ("2^4.A7", "2B,2B,3B,4A"),
    ("AGL(2,3)", "2A,2A,2A,2A,3A"),
    ("5^2:((Q8:3)'2)", "2B,3B,12B"),
]


def run(entry, rtype, backend):
    t0 = time.perf_counter()
    G = entry.group(backend=backend)
    _ = G.classes
    t1 = time.perf_counter()
    rep = orbit_partition(G, RamificationType.parse(rtype))
    t2 = time.perf_counter()
    return t1 - t0, t2 - t1, rep.lengths


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    cat = load_catalog(validate=False)
    warm = {}
    for name, rtype in WORKLOADS:
        warm[name] = run(cat.entry(name), rtype, "numba")
    print(f"{'workload':40s} {'backend':8s} {'group s':>10s} {'orbits s':>10s}")
    for name, rtype in WORKLOADS:
        e = cat.entry(name)
        res = {}
        for backend in ("numpy", "numba"):
            best = None
            for _ in range(a.repeat):
                c, o, lengths = run(e, rtype, backend)
                best = (c, o) if best is None else (min(best[0], c), min(best[1], o))
            res[backend] = lengths
            print(f"{name + ' ' + rtype:40s} {backend:8s} {best[0]:10.3f} {best[1]:10.3f}")
        if res["numpy"] != res["numba"]:
            raise SystemExit(f"backends disagree on {name} {rtype}")
        c, o, _ = warm[name]
        print(f"{'':40s} {'numba*':8s} {c:10.3f} {o:10.3f}   (* first run, with compilation)")


if __name__ == "__main__":
    main()
