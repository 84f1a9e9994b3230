import functools

import pytest

from braidorbits.catalog import load_catalog
from braidorbits.group import PermGroup
from braidorbits.perm import parse_cycles


@functools.lru_cache(maxsize=None)
def _catalog():
    return load_catalog(validate=False)


@functools.lru_cache(maxsize=None)
def catalog_group(name):
    return _catalog().group(name)


@pytest.fixture(scope="session")
def catalog():
    return _catalog()


@pytest.fixture(scope="session")
def group():
    return catalog_group


@pytest.fixture(scope="session")
def s4():
    return PermGroup([parse_cycles("(1,2,3,4)", 4), parse_cycles("(1,2)", 4)], name="S4")


@pytest.fixture(scope="session")
def a5():
    return PermGroup([parse_cycles("(1,2,3,4,5)", 5), parse_cycles("(1,2,3)", 5)], name="A5")


ACCEPTANCE: dict = {}


def record(n: int, title: str, checks: list) -> None:
    """Store one criterion's sub-checks as (name, ok, detail) for the summary."""
    ACCEPTANCE[n] = (title, checks)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, checks = ACCEPTANCE[n]
        ok = all(c[1] for c in checks)
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
        for name, good, detail in checks:
            if not good:
                tr.write_line(f"    FAIL {name}: {detail}")
