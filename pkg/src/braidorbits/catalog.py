"""Group catalog, certificates, table output and the on-disk cache.

Catalog format, one block per group::

    [AGL(2,3)]
    alias: AGL2-3
    degree: 9
    order: 432
    affine: 3^2
    gen: (1,2,3)(4,5,6)(7,8,9)
    gen: (2,4)(3,7)(6,8)
    pin 2A: (1,2)(4,5)(7,8)

``#`` starts a comment.  ``pin`` lines fix class labels by naming any
member of the class.
"""
from __future__ import annotations

import difflib
import hashlib
import io
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import ENGINE_VERSION
from .group import PermGroup
from .perm import Permutation, parse_cycles


class CatalogError(ValueError):
    pass


@dataclass
class CatalogEntry:
    name: str
    degree: int
    order: int
    p: int
    e: int
    generators: list = field(default_factory=list)   # cycle strings
    pins: dict = field(default_factory=dict)         # label -> cycle string
    aliases: list = field(default_factory=list)
    line: int = field(default=0, compare=False)

    def group(self, validate: bool = True, **kw) -> PermGroup:
        gens = [parse_cycles(g, self.degree) for g in self.generators]
        G = PermGroup(gens, name=self.name, **kw)
        if validate and G.order != self.order:
            raise CatalogError(f"{self.name}: generators give order {G.order}, expected {self.order}")
        if self.pins:
            G.pin_labels({lab: parse_cycles(c, self.degree) for lab, c in self.pins.items()})
        return G


_KEY_RE = re.compile(r"^(pin\s+\S+|[a-z]+)\s*:\s*(.*)$")


def parse_catalog(text: str, source: str = "<catalog>") -> list[CatalogEntry]:
    entries: list[CatalogEntry] = []
    cur: dict | None = None

    def err(lineno: int, col: int, msg: str):
        raise CatalogError(f"{source}:{lineno}:{col}: {msg}")

    def finish():
        if cur is None:
            return
        for k in ("degree", "order", "affine"):
            if k not in cur and not (k == "affine" and "p" in cur):
                err(cur["line"], 1, f"entry {cur['name']!r} lacks '{k}'")
        if not cur["gens"]:
            err(cur["line"], 1, f"entry {cur['name']!r} has no generators")
        entries.append(CatalogEntry(cur["name"], cur["degree"], cur["order"], cur["p"], cur["e"],
                                    cur["gens"], cur["pins"], cur["aliases"], cur["line"]))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        s = line.strip()
        if s.startswith("["):
            if not s.endswith("]") or len(s) < 3:
                err(lineno, indent + 1, "malformed entry header")
            finish()
            cur = {"name": s[1:-1].strip(), "line": lineno, "gens": [], "pins": {}, "aliases": []}
            continue
        if cur is None:
            err(lineno, indent + 1, "field outside an entry")
        m = _KEY_RE.match(s)
        if not m:
            err(lineno, indent + 1, f"expected 'key: value', got {s!r}")
        key, val = m.group(1), m.group(2).strip()
        vcol = indent + s.index(val) + 1 if val else indent + len(s) + 1
        try:
            if key == "degree" or key == "order":
                cur[key] = int(val)
            elif key == "affine":
                p, e = val.split("^")
                cur["p"], cur["e"] = int(p), int(e)
            elif key == "gen":
                parse_cycles(val, cur.get("degree"))
                cur["gens"].append(val)
            elif key.startswith("pin"):
                parse_cycles(val, cur.get("degree"))
                cur["pins"][key.split()[1]] = val
            elif key == "alias":
                cur["aliases"].append(val)
            else:
                err(lineno, indent + 1, f"unknown field {key!r}")
        except CatalogError:
            raise
        except ValueError as exc:
            err(lineno, vcol, str(exc))
    finish()
    return entries


class Catalog:
    def __init__(self, entries: list[CatalogEntry]):
        self.entries = entries
        self._by_name: dict[str, CatalogEntry] = {}
        for e in entries:
            for n in [e.name] + e.aliases:
                key = _norm(n)
                if key in self._by_name:
                    raise CatalogError(f"duplicate group name {n!r}")
                self._by_name[key] = e
        self._groups: dict[str, PermGroup] = {}

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def entry(self, name: str) -> CatalogEntry:
        try:
            return self._by_name[_norm(name)]
        except KeyError:
            near = difflib.get_close_matches(name, self.names(), n=5, cutoff=0.4)
            raise KeyError(f"unknown group {name!r}; did you mean {near}?") from None

    def group(self, name: str) -> PermGroup:
        e = self.entry(name)
        if e.name not in self._groups:
            self._groups[e.name] = e.group()
        return self._groups[e.name]

    def of_degree(self, degree: int) -> list[CatalogEntry]:
        return [e for e in self.entries if e.degree == degree]


def _norm(name: str) -> str:
    return name.replace(" ", "").replace("Γ", "Gamma").lower()


def default_catalog_path() -> Path:
    return Path(str(resources.files("braidorbits") / "data" / "catalog.txt"))


def load_catalog(path: str | os.PathLike | None = None, validate: bool = True) -> Catalog:
    p = default_catalog_path() if path is None else Path(path)
    entries = parse_catalog(p.read_text(), str(p))
    if validate:
        for e in entries:
            G = e.group(validate=False)
            if G.degree != e.degree:
                raise CatalogError(f"{e.name}: degree {G.degree}, expected {e.degree}")
            if G.order != e.order:
                raise CatalogError(f"{e.name}: generators give order {G.order}, expected {e.order}")
    return Catalog(entries)


def parse_group(text: str, name: str | None = None) -> PermGroup:
    """A group from generators in cycle notation separated by ';' or newlines."""
    parts = [s.strip() for s in re.split(r"[;\n]", text) if s.strip()]
    n = None
    m = re.match(r"^degree\s*[:=]?\s*(\d+)$", parts[0]) if parts else None
    if m:
        n = int(m.group(1))
        parts = parts[1:]
    if not parts:
        raise ValueError("no generators")
    if n is None:
        n = max(int(x) for s in parts for x in re.findall(r"\d+", s) or [1])
    return PermGroup([parse_cycles(s, n) for s in parts], name=name)


def format_entry(e: CatalogEntry) -> str:
    out = [f"[{e.name}]"]
    out += [f"alias: {a}" for a in e.aliases]
    out += [f"degree: {e.degree}", f"order: {e.order}", f"affine: {e.p}^{e.e}"]
    out += [f"gen: {g}" for g in e.generators]
    out += [f"pin {lab}: {c}" for lab, c in e.pins.items()]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# reference tables

@dataclass(frozen=True)
class TableRow:
    degree: int
    group: str
    rtype: str
    orbits: int
    largest: int


def load_tables(path: str | os.PathLike | None = None) -> list[TableRow]:
    p = Path(str(resources.files("braidorbits") / "data" / "tables.txt")) if path is None else Path(path)
    rows = []
    for line in p.read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        d, g, t, n, L = line.split("\t")
        rows.append(TableRow(int(d), g, t, int(n), int(L)))
    return rows


def type_key(rtype: str) -> tuple:
    """Order-independent key of a ramification type string."""
    return tuple(sorted(s.strip() for s in rtype.strip("()").split(",")))


def format_tsv(rows) -> str:
    out = ["group\tramification type\t# of orbits\tlargest orbit"]
    out += [f"{g}\t{t}\t{n}\t{L}" for g, t, n, L in rows]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# certificates

def tuple_cycles(G: PermGroup, rep) -> list[str]:
    return [G.perm(int(i)).cycle_string() for i in rep]


def orbit_certificate(G: PermGroup, report, seed: int | None = None) -> dict:
    orbits = [{"length": o.length, "tuples": o.tuples, "rep": tuple_cycles(G, o.rep)}
              for o in report.generating]
    return {
        "kind": "orbits",
        "engine_version": ENGINE_VERSION,
        "group": G.name,
        "order": G.order,
        "type": str(report.rtype),
        "engine": report.engine,
        "params": dict(report.params),
        "seed": seed,
        "orbit_count": report.num_orbits,
        "lengths": report.lengths,
        "total_tuples": report.total_tuples,
        "orbits": orbits,
    }


def node_inventory(idx) -> dict:
    G = idx.G
    nodes = [{"id": n.id, "type": G.classes[n.cls].label, "head": n.head, "tail": n.tail,
              "dc_rep": G.perm(n.dc_rep).cycle_string(), "rep": tuple_cycles(G, n.rep),
              "shadow_length": n.shadow_length, "length": n.length, "identity_type": n.type1}
             for n in idx.nodes]
    return {"kind": "nodes", "engine_version": ENGINE_VERSION, "group": G.name,
            "type": str(idx.rt), "k": idx.k, "policy": idx.policy, "sides": idx.sides,
            "skip_type1": idx.skip_type1, "nodes": nodes}


def component_certificate(graph) -> dict:
    idx = graph.index
    G = idx.G
    comps = [{"nodes": c.nodes, "length": c.length, "tuples": c.tuples,
              "rep": tuple_cycles(G, c.rep)} for c in graph.components]
    edges = [{"nodes": [a, b], "tuple": tuple_cycles(G, tup), "word": w}
             for (a, b), (tup, w) in graph.edges.items()]
    return {
        "kind": "components",
        "engine_version": ENGINE_VERSION,
        "group": G.name,
        "type": str(idx.rt),
        "params": {"k": idx.k, "s": graph.s, "t": graph.t, "seed": graph.seed,
                   "policy": idx.policy, "sides": idx.sides, "skip_type1": idx.skip_type1},
        "verdict": graph.verdict,
        "node_count": len(idx.nodes),
        "components": comps,
        "tries": [int(x) for x in graph.tries],
        "successes": [int(x) for x in graph.successes],
        "edges": edges,
    }


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def write_atomic(path: str | os.PathLike, data: bytes | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    raw = data.encode() if isinstance(data, str) else data
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(raw)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# cache

def group_fingerprint(G: PermGroup) -> str:
    # generator order fixes the element numbering, so it is part of the key
    gens = [g.cycle_string() for g in G.generators]
    return f"{G.degree}|{G.order}|" + ";".join(gens)


class Cache:
    """Content-addressed store of numpy payloads, one file per key."""

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    @staticmethod
    def key(*parts) -> str:
        h = hashlib.sha256()
        for p in (ENGINE_VERSION,) + parts:
            h.update(str(p).encode())
            h.update(b"\0")
        return h.hexdigest()

    def path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.npz"

    def get(self, key: str) -> dict | None:
        p = self.path(key)
        if not p.exists():
            return None
        with np.load(p) as z:
            return {k: z[k] for k in z.files}

    def put(self, key: str, arrays: dict) -> None:
        write_atomic(self.path(key), pack(arrays))

    def keys(self) -> list[str]:
        if not self.root.exists():
            return []
        return sorted(p.stem for p in self.root.glob("*/*.npz"))

    def clear(self) -> int:
        ks = self.keys()
        for k in ks:
            self.path(k).unlink()
        return len(ks)


def pack(arrays: dict) -> bytes:
    """Deterministic serialisation of a dict of arrays."""
    buf = io.BytesIO()
    np.savez(buf, **{k: np.ascontiguousarray(arrays[k]) for k in sorted(arrays)})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# label calibration

def _label_order(lab: str) -> int:
    return int(re.match(r"\d+", lab).group())


def calibrate_labels(ref_rows, our_rows, our_labels, extra: int = 0,
                     misses: int = 0) -> dict[str, str] | None:
    """Injective map from reference labels to ours reproducing the reference rows.

    Rows are ``(labels, orbits, largest)``.  Labels map within one element
    order; same-named classes are tried first.  Returns None when no map sends
    the reference rows into ``our_rows`` as multisets, with exactly ``extra``
    of our rows left over.  Up to ``misses`` reference rows may stay
    unmatched; the unmatched rows are listed under the key ``None``.
    """
    from collections import Counter
    ref = [(tuple(r[0]), int(r[1]), int(r[2])) for r in ref_rows]
    target = Counter((tuple(sorted(t)), n, L) for t, n, L in our_rows)
    if len(ref) + extra != sum(target.values()):
        return None
    labels: list[str] = []
    for t, _, _ in ref:
        for lab in t:
            if lab not in labels:
                labels.append(lab)
    pos = {lab: i for i, lab in enumerate(labels)}
    closing: dict[int, list] = {}
    for row in ref:
        closing.setdefault(max(pos[l] for l in row[0]), []).append(row)
    left = Counter(target)
    phi: dict[str, str] = {}
    missed: list = []

    def rec(i: int) -> bool:
        if i == len(labels):
            return True
        lab = labels[i]
        cands = [c for c in our_labels if _label_order(c) == _label_order(lab) and c not in phi.values()]
        cands.sort(key=lambda c: c != lab)
        for c in cands:
            phi[lab] = c
            used, miss = [], []
            ok = True
            for row in closing.get(i, []):
                t, n, L = row
                key = (tuple(sorted(phi[x] for x in t)), n, L)
                if left[key] > 0:
                    left[key] -= 1
                    used.append(key)
                elif len(missed) + len(miss) < misses:
                    miss.append(row)
                else:
                    ok = False
                    break
            missed.extend(miss)
            if ok and rec(i + 1):
                return True
            del missed[len(missed) - len(miss):]
            for key in used:
                left[key] += 1
            del phi[lab]
        return False

    if not rec(0):
        return None
    out: dict = dict(phi)
    if missed:
        out[None] = list(missed)
    return out
