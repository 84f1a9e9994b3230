import numpy as np
import pytest

from braidorbits.braid import RamificationType
from braidorbits.catalog import (Cache, CatalogError, calibrate_labels, dumps, format_entry, format_tsv,
                                 group_fingerprint, load_catalog, load_tables, loads, orbit_certificate,
                                 parse_catalog, parse_group, type_key, write_atomic)
from braidorbits.classic import orbit_partition

GOOD = """# two groups
[S3 on 3]
alias: S3
degree: 3
order: 6
affine: 3^1
gen: (1,2,3)
gen: (1,2)
pin 2A: (1,2)
"""


def test_parse_good():
    (e,) = parse_catalog(GOOD)
    assert (e.name, e.degree, e.order, e.p, e.e) == ("S3 on 3", 3, 6, 3, 1)
    assert e.group().cls("2A").size == 3
    assert parse_catalog(format_entry(e))[0] == e


@pytest.mark.parametrize("text,where", [
    ("[X]\ndegree: x\n", ":2:"),
    ("degree: 3\n", ":1:"),
    ("[X]\ndegree: 3\norder: 6\ngen: (1,2)\n", "affine"),
    ("[X]\nbogus line\n", ":2:"),
])
def test_parse_errors_have_positions(text, where):
    with pytest.raises(CatalogError, match=where):
        parse_catalog(text, "cat.txt")


def test_bad_order_is_caught(tmp_path):
    p = tmp_path / "cat.txt"
    p.write_text(GOOD.replace("order: 6", "order: 12"))
    with pytest.raises(CatalogError, match="order 6"):
        load_catalog(p)
    assert load_catalog(p, validate=False).entry("S3").order == 12


def test_lookup_and_suggestions(catalog):
    assert len(catalog) == 43
    assert catalog.entry("agl(2, 3)").name == "AGL(2,3)"
    assert catalog.entry("AΓL(1,8)").name == "AGammaL(1,8)"
    with pytest.raises(KeyError, match="did you mean"):
        catalog.entry("AGL(2,4)")
    assert {e.degree for e in catalog} == {8, 9, 16, 25, 27, 49, 121, 125}


def test_entries_have_stated_orders(catalog):
    for e in catalog:
        if e.order <= 20000:
            assert e.group(validate=False).order == e.order, e.name


def test_parse_group():
    G = parse_group("(1,2,3); (1,2)")
    assert G.order == 6
    G = parse_group("degree 5\n(1,2,3)")
    assert G.degree == 5 and G.order == 3


def test_tables():
    rows = load_tables()
    assert len(rows) == 341
    assert type_key("(3A,2B,2B)") == ("2B", "2B", "3A")
    out = format_tsv([("G", "(2A,3A,7A)", 1, 1)])
    assert out.splitlines()[0].split("\t") == ["group", "ramification type", "# of orbits", "largest orbit"]


def test_certificate_roundtrip(group, tmp_path):
    G = group("AGL(2,3)")
    rep = orbit_partition(G, RamificationType.parse("2A,2A,2A,2A,3A"))
    cert = orbit_certificate(G, rep, seed=1)
    text = dumps(cert)
    assert loads(text)["orbit_count"] == 1
    assert dumps(loads(text)) == text
    write_atomic(tmp_path / "c.json", text)
    assert (tmp_path / "c.json").read_text() == text
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".tmp")]


def test_cache_roundtrip(tmp_path, group):
    c = Cache(tmp_path / "cache")
    k = c.key("shadow", group_fingerprint(group("AGL(2,3)")), 1)
    assert c.get(k) is None
    c.put(k, {"a": np.arange(5), "b": np.eye(2)})
    got = c.get(k)
    assert (got["a"] == np.arange(5)).all()
    assert c.keys() == [k]
    assert c.clear() == 1 and c.keys() == []
    assert Cache.key(1, 2) != Cache.key(2, 1)


def test_calibrate_labels():
    ours = [(("2A", "3B", "7A"), 1, 1), (("2A", "3B", "7B"), 2, 1)]
    ref = [(("2A", "3A", "7B"), 1, 1), (("2A", "3A", "7A"), 2, 1)]
    phi = calibrate_labels(ref, ours, ["2A", "3B", "7A", "7B"])
    assert phi["3A"] == "3B" and phi["7B"] == "7A" and phi["7A"] == "7B"
    assert calibrate_labels(ref[:1], ours, ["2A", "3B", "7A", "7B"]) is None
    assert calibrate_labels(ref[:1], ours, ["2A", "3B", "7A", "7B"], extra=1) is not None
    wrong = [(("2A", "3A", "7B"), 5, 1), (("2A", "3A", "7A"), 2, 1)]
    assert calibrate_labels(wrong, ours, ["2A", "3B", "7A", "7B"]) is None
    phi = calibrate_labels(wrong, ours, ["2A", "3B", "7A", "7B"], misses=1)
    assert phi[None] == [(("2A", "3A", "7B"), 5, 1)]
