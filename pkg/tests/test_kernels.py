import os
import subprocess
import sys

import numpy as np
import pytest

from braidorbits import _kernels
from braidorbits.braid import RamificationType
from braidorbits.classic import orbit_partition
from braidorbits.group import PermGroup

NB = _kernels.get_backend("numba")
NP = _kernels.get_backend("numpy")


@pytest.fixture(scope="module")
def tab(group):
    return group("AGL(2,3)").table


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.get_backend("cuda")


def test_mul_conj_lookup_agree(tab):
    rng = np.random.default_rng(0)
    a = rng.integers(tab.N, size=5000)
    b = rng.integers(tab.N, size=5000)
    args = (tab.E, tab.base, tab.w, tab.keys, tab.kidx)
    assert (NB.mul(*args, a, b) == NP.mul(*args, a, b)).all()
    cargs = (tab.E, tab.inv, tab.base, tab.w, tab.keys, tab.kidx)
    assert (NB.conj(*cargs, a, b) == NP.conj(*cargs, a, b)).all()
    P = tab.E[a]
    assert (NB.lookup(P, *args[1:]) == a).all()
    assert (NP.lookup(P, *args[1:]) == a).all()


def test_centralizer_mask_agree(tab):
    for r in (0, 5, 17):
        assert (NB.centralizer_mask(tab.E, r) == NP.centralizer_mask(tab.E, r)).all()


def test_group_level_agreement(group):
    G = group("ASL(3,2)")
    A = PermGroup(G.generators, backend="numba")
    B = PermGroup(G.generators, backend="numpy")
    assert (A.class_ids == B.class_ids).all()
    assert (A.class_mult == B.class_mult).all()
    for H in (A, B):
        H.pin_labels({c.label: c.rep_perm for c in G.classes})
    rt = RamificationType.parse("2B,2B,2B,4B,3A")
    assert orbit_partition(A, rt).lengths == orbit_partition(B, rt).lengths


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", "numba"), ("", "numba")])
def test_env_switch(flag, expected):
    env = dict(os.environ, BRAIDORBITS_NO_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", "from braidorbits import _kernels; print(_kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
