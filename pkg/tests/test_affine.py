import numpy as np

from braidorbits.affine import (MatrixGroup, affine_group, affine_perm, gl_generators, is_irreducible,
                                matrix_closure, rank_mod_p, sl_generators, translation)
from braidorbits.perm import fixed_points


def test_affine_groups_orders():
    assert affine_group(3, 2, gl_generators(3, 2)).order == 9 * 48
    assert affine_group(2, 3, sl_generators(2, 3)).order == 8 * 168
    assert affine_group(5, 1, gl_generators(5, 1)).order == 20


def test_affine_perm_and_translation():
    A = np.eye(2, dtype=np.int64)
    assert affine_perm(A, [0, 0], 3).is_identity()
    t = translation(3, 2)
    assert fixed_points(t) == 0
    assert t.images[0] != 0


def test_matrix_closure_and_rank():
    gens = gl_generators(2, 2)
    assert len(matrix_closure(gens, 2)) == 6
    assert matrix_closure(gens, 2, cap=3) is None
    assert rank_mod_p([[1, 2], [2, 4]], 5) == 1
    assert rank_mod_p([[1, 2], [3, 4]], 5) == 2


def test_irreducible():
    assert is_irreducible(gl_generators(3, 2), 3)
    # upper triangular matrices fix the first coordinate line
    assert not is_irreducible([np.array([[1, 1], [0, 1]]), np.array([[2, 0], [0, 1]])], 3)


def test_matrix_group_subgroups():
    M = MatrixGroup(3, gl_generators(3, 2))
    assert len(M) == 48
    assert M.idx(np.eye(2, dtype=np.int64)[None])[0] == 0
    subs = M.subgroups_of_order(8)
    # GL(2,3) has Q8, C8 and D8 as subgroups of order 8, each a single class
    assert len(subs) == 3
    for S in subs:
        assert len(S) == 8
        gens = M.idx(np.stack(M.generators_of(S)))
        assert np.array_equal(M.closure(gens), np.sort(S))
