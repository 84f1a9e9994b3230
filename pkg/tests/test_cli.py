import json

import pytest

from braidorbits.catalog import Cache, pack
from braidorbits.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_orbits_classic(capsys):
    code, out, _ = run(capsys, "orbits", "ASL(3,2)", "2B,3A,3A,3A", "--engine", "classic")
    assert code == 0
    assert "(2B,3A,3A,3A): 1 orbit, length 120" in out


def test_orbits_matching_certificate(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        code, out, _ = run(capsys, "orbits", "AGL(2,3)", "2A,2A,2A,2A,3A", "--engine", "matching",
                           "--seed", "42", "--cert", str(p))
        assert code == 0
        assert "verdict: DETERMINISTIC" in out
    assert a.read_bytes() == b.read_bytes()
    cert = json.loads(a.read_text())
    assert cert["orbit_count"] == 1 and cert["lengths"] == [216]


def test_verify_agree(capsys):
    code, out, _ = run(capsys, "verify", "AGL(2,3)", "2A,2A,2A,2A,3A")
    assert code == 0 and "ENGINES AGREE" in out


def test_usage_errors(capsys):
    assert run(capsys, "orbits", "AGL(2,4)", "2A,3A,6A")[0] == 2
    code, _, err = run(capsys, "orbits", "AGL(2,3)", "2A,3Z,6A")
    assert code == 2 and "did you mean" in err
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "classify", "10")[0] == 2


def test_groups_and_tables(capsys):
    code, out, _ = run(capsys, "groups", "--degree", "8")
    assert code == 0 and "ASL(3,2)\tdegree 8\torder 1344" in out
    code, out, _ = run(capsys, "tables", "49", "--reference")
    assert code == 0 and len(out.splitlines()) == 5


def test_classify_degree9(capsys):
    code, out, _ = run(capsys, "classify", "9")
    assert code == 0
    assert out.splitlines()[-1] == "26 components across 4 groups"


def test_cache_verify_and_tamper(capsys, tmp_path):
    d = str(tmp_path / "cache")
    rtype = "2A,2A,2A,2A,3A"
    args = ["orbits", "AGL(2,3)", rtype, "--engine", "matching", "--cache", d]
    assert run(capsys, *args)[0] == 0
    code, out, _ = run(capsys, *args, "--verify-cache")
    assert code == 0 and "cache verified" in out
    verify = ["cache", "verify", "--dir", d, "--group", "AGL(2,3)", "--type", rtype]
    assert run(capsys, *verify)[0] == 0
    # corrupt one stored shadow by permuting its orbit labels
    c = Cache(d)
    for k in c.keys():
        data = c.get(k)
        if len(set(data["orbit_of_b"].tolist())) > 1:
            data["orbit_of_b"] = data["orbit_of_b"][::-1].copy()
            c.path(k).write_bytes(pack(data))
            break
    else:
        pytest.skip("no shadow with two orbits")
    code, out, _ = run(capsys, *verify)
    assert code == 1 and "differ" in out
    code, out, _ = run(capsys, "cache", "list", "--dir", d)
    assert code == 0 and out
    assert run(capsys, "cache", "clear", "--dir", d)[0] == 0
