"""Command line interface.

Exit codes: 0 success, 1 computational failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .braid import RamificationType
from .catalog import (Cache, CatalogError, component_certificate, dumps, format_tsv, load_catalog,
                      load_tables, orbit_certificate, write_atomic)
from .classic import OrbitReport, orbit_partition
from .tuples import WorkCapExceeded

log = logging.getLogger("braidorbits")


class UsageError(Exception):
    pass


def _catalog(args):
    try:
        # entries are checked against their stated order when first used
        return load_catalog(args.catalog, validate=False)
    except (OSError, CatalogError) as exc:
        raise UsageError(str(exc)) from None


def _group(args, name):
    try:
        return _catalog(args).group(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _rtype(G, text):
    try:
        rt = RamificationType.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for lab in rt.labels:
        try:
            G.cls(lab)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    return rt


def _matching(G, rt, args, cache=None):
    from .graph import sample_edges
    from .matching import MatchingIndex
    idx = MatchingIndex(G, rt, k=args.k, policy=args.policy, skip_type1=not args.no_skip,
                        sides=args.sides, cache=cache)
    return sample_edges(idx, s=args.s, t=args.t, seed=args.seed)


def _run_orbits(G, rt, args, cache=None):
    """(report, extra certificate or None)."""
    if args.engine == "classic":
        return orbit_partition(G, rt, policy=args.policy), None
    if args.engine == "matching":
        g = _matching(G, rt, args, cache)
        return g.report(), component_certificate(g)
    from .genus0 import orbits_for_type
    params = {"k": args.k, "s": args.s, "t": args.t, "seed": args.seed, "policy": args.policy,
              "sides": args.sides, "skip_type1": not args.no_skip}
    return orbits_for_type(G, rt, "auto", **{k: v for k, v in params.items() if v is not None}), None


def _print_report(rep: OrbitReport, seed):
    print(f"seed: {seed}")
    print(f"{rep.rtype}: {rep.summary()}")
    if rep.engine == "matching":
        print(f"verdict: {rep.params['verdict']}")


def cmd_orbits(args):
    G = _group(args, args.group)
    rt = _rtype(G, args.type)
    cache = Cache(args.cache) if args.cache else None
    rep, comp = _run_orbits(G, rt, args, cache)
    cert = orbit_certificate(G, rep, args.seed)
    if comp is not None:
        cert["graph"] = comp
    if args.verify_cache:
        if cache is None:
            raise UsageError("--verify-cache needs --cache")
        fresh, fcomp = _run_orbits(G, rt, args, None)
        fcert = orbit_certificate(G, fresh, args.seed)
        if fcomp is not None:
            fcert["graph"] = fcomp
        if dumps(fcert) != dumps(cert):
            print("CACHE MISMATCH")
            return 1
        print("cache verified")
    _print_report(rep, args.seed)
    if args.cert:
        write_atomic(args.cert, dumps(cert))
    if args.json:
        sys.stdout.write(dumps(cert))
    return 0


def cmd_verify(args):
    G = _group(args, args.group)
    rt = _rtype(G, args.type)
    from .graph import check_witnesses, verify_components
    classic = orbit_partition(G, rt, policy=args.policy)
    g = _matching(G, rt, args)
    print(f"seed: {args.seed}")
    print(f"classic:  {classic.summary()}")
    print(f"matching: {g.report().summary()} ({g.verdict})")
    ok = verify_components(g, classic) and check_witnesses(g)
    print("ENGINES AGREE" if ok else "ENGINES DISAGREE")
    return 0 if ok else 1


def _classify_entry(e, args):
    from .genus0 import classify
    G = e.group()
    params = {"seed": args.seed}
    return classify(G, e.p, e.e, engine=args.engine, scott=not args.no_scott, **params)


def _entries(args):
    cat = _catalog(args)
    target = args.target
    if target.isdigit():
        es = cat.of_degree(int(target))
        if not es:
            raise UsageError(f"no catalog groups of degree {target}")
        return es
    try:
        return [cat.entry(target)]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_classify(args):
    total = groups = 0
    print(f"seed: {args.seed}")
    for e in _entries(args):
        c = _classify_entry(e, args)
        note = " (G''=1, not counted)" if c.metabelian else ""
        print(f"{c.group}: {len(c.systems)} types, {c.components} components{note}")
        for _, t, n, L in c.rows():
            print(f"  {t}\t{n}\t{L}")
        if not c.metabelian:
            total += c.components
            groups += 1
    print(f"{total} components across {groups} groups")
    return 0


def cmd_tables(args):
    args.target = args.degree
    if args.reference:
        rows = [(r.group, r.rtype, r.orbits, r.largest) for r in load_tables()
                if r.degree == int(args.degree)]
    else:
        rows = []
        for e in _entries(args):
            rows += _classify_entry(e, args).rows()
    sys.stdout.write(format_tsv(rows))
    return 0


def cmd_groups(args):
    cat = _catalog(args)
    for e in cat:
        if args.degree is None or e.degree == args.degree:
            print(f"{e.name}\tdegree {e.degree}\torder {e.order}")
    return 0


def cmd_cache(args):
    cache = Cache(args.dir)
    if args.action == "list":
        for k in cache.keys():
            print(f"{k}\t{cache.path(k).stat().st_size}")
        return 0
    if args.action == "clear":
        print(f"removed {cache.clear()} entries")
        return 0
    # verify: rebuild every shadow of a type and compare with the stored bytes
    if not (args.group and args.type):
        raise UsageError("cache verify needs --group and --type")
    from .catalog import pack
    from .matching import MatchingIndex
    G = _group(args, args.group)
    rt = _rtype(G, args.type)
    cached = MatchingIndex(G, rt, k=args.k, cache=cache)
    fresh = MatchingIndex(G, rt, k=args.k)
    bad = 0
    for c, td in cached.types.items():
        fd = fresh.types[c]
        for a, b in ((td.head, fd.head), (td.tail, fd.tail)):
            keys = ("tuples", "keys", "blabel", "orbit_of_b")
            if pack({k: getattr(a, k) for k in keys}) != pack({k: getattr(b, k) for k in keys}):
                bad += 1
    print("cache verified" if not bad else f"{bad} cached shadows differ")
    return 0 if not bad else 1


def _orbit_opts(p):
    p.add_argument("--k", type=int, default=None, help="split point (default max(2, r//2))")
    p.add_argument("--s", type=int, default=5, help="successes per node")
    p.add_argument("--t", type=int, default=50, help="tries without success per node")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", default="auto", choices=["auto", "pure", "parabolic"])
    p.add_argument("--sides", default="pure", choices=["pure", "full"])
    p.add_argument("--no-skip", action="store_true", help="keep identity-type pairs")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="braidorbits", description="Braid orbits on Nielsen classes.")
    ap.add_argument("--catalog", default=None, help="catalog file (default: built-in)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("orbits", help="braid orbits of one ramification type")
    p.add_argument("group")
    p.add_argument("type", help="e.g. 2B,3A,3A,3A")
    p.add_argument("--engine", default="auto", choices=["auto", "classic", "matching"])
    _orbit_opts(p)
    p.add_argument("--cert", help="write the JSON certificate here")
    p.add_argument("--json", action="store_true", help="print the certificate")
    p.add_argument("--cache", help="shadow cache directory")
    p.add_argument("--verify-cache", action="store_true")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("verify", help="run both engines and compare")
    p.add_argument("group")
    p.add_argument("type")
    _orbit_opts(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", help="genus-zero systems of a degree or group")
    p.add_argument("target", help="degree or group name")
    p.add_argument("--engine", default="auto", choices=["auto", "classic", "matching"])
    p.add_argument("--no-scott", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tables", help="reference-format rows for a degree")
    p.add_argument("degree")
    p.add_argument("--reference", action="store_true", help="print the stored reference rows")
    p.add_argument("--engine", default="auto", choices=["auto", "classic", "matching"])
    p.add_argument("--no-scott", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("groups", help="list catalog groups")
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("cache", help="inspect or verify the shadow cache")
    p.add_argument("action", choices=["list", "clear", "verify"])
    p.add_argument("--dir", required=True)
    p.add_argument("--group", help="group to rebuild for verify")
    p.add_argument("--type", help="ramification type to rebuild for verify")
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_cache)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WorkCapExceeded, RuntimeError, LookupError, MemoryError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
