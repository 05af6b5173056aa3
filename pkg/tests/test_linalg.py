from __future__ import annotations

import itertools

import numpy as np
import pytest

from msrdkit.errors import MixedTowers
from msrdkit.field import make_tower
from msrdkit.linalg import (
    SubspaceFq,
    batch_rank,
    expand_over_fq,
    fq_rank,
    intersection_dim,
    matmul,
    null_space,
    rank,
    rref,
    same_rowspace,
    subspace_sum,
    sum_intersects_trivially,
)

F4 = make_tower(2, 1, 2)
F8 = make_tower(2, 1, 3)
F16 = make_tower(2, 1, 4)


def _rank_by_columns(T, M) -> int:
    """Independent oracle: greedy column basis built by brute-force span membership."""
    M = np.asarray(M)
    basis: list[np.ndarray] = []
    span = {tuple([0] * M.shape[0])}
    for j in range(M.shape[1]):
        col = tuple(int(x) for x in M[:, j])
        if col in span:
            continue
        basis.append(M[:, j])
        span = {tuple(T.add(int(s), T.mul(c, int(v))) for s, v in zip(vec, col))
                for vec in span for c in T.elements()}
    return len(basis)


def test_expand_examples():
    assert expand_over_fq(F4, [0, 0]).tolist() == [[0, 0], [0, 0]]
    assert fq_rank(F4, [0, 0]) == 0
    assert expand_over_fq(F4, [2, 3]).tolist() == [[0, 1], [1, 1]]
    assert fq_rank(F4, [2, 3]) == 2
    assert expand_over_fq(F4, [1, 1]).tolist() == [[1, 1], [0, 0]]
    assert fq_rank(F4, [1, 1]) == 1


def test_expand_is_fq_linear():
    rng = np.random.default_rng(1)
    T = make_tower(3, 1, 2)
    u, v = rng.integers(0, 9, 5), rng.integers(0, 9, 5)
    for alpha in range(3):
        lhs = expand_over_fq(T, T.vadd(T.vmul(alpha, u), v))
        rhs = (alpha * expand_over_fq(T, u) + expand_over_fq(T, v)) % 3
        assert np.array_equal(lhs, rhs)


def test_rank_identity_and_empty():
    assert rank(F8, np.eye(4, dtype=np.int64)) == 4
    assert rank(F8, np.zeros((0, 3), dtype=np.int64)) == 0
    assert rank(F8, np.zeros((3, 0), dtype=np.int64)) == 0


def test_singular_two_by_two_from_hilbert_90():
    """(1, b; x, y b^{q^2}) with x b = y b^{q^2} is singular."""
    T = F8
    b = 2
    x = T.mul(3, 3)  # an arbitrary nonzero pair; solve the relation for y
    y = T.div(T.mul(x, b), T.frobenius(b, 2))
    M = [[1, b], [x, T.mul(y, T.frobenius(b, 2))]]
    assert rank(T, M) == 1


def test_rank_matches_column_oracle_and_transpose():
    rng = np.random.default_rng(2)
    for _ in range(40):
        M = rng.integers(0, 8, size=(3, 5))
        r = rank(F8, M)
        assert r == _rank_by_columns(F8, M)
        assert r == rank(F8, M.T)
        assert batch_rank(F8, M[None])[0] == r


def test_batch_rank_matches_rank():
    rng = np.random.default_rng(3)
    A = rng.integers(0, 4, size=(60, 3, 4))
    A[::7] = 0
    A[1::5, 1] = A[1::5, 0]
    expected = [rank(F4, a) for a in A]
    assert batch_rank(F4, A).tolist() == expected
    assert batch_rank(F4, A.transpose(0, 2, 1)).tolist() == expected


def test_rref_pivots():
    R, piv = rref(F4, [[0, 2, 3], [0, 1, 1]])
    assert piv == [1, 2]
    assert R[0, 1] == 1 and R[1, 2] == 1


def test_null_space_examples():
    N = null_space(make_tower(2, 1, 1), [[1, 1, 1]])
    assert N.shape == (2, 3)
    assert not matmul(make_tower(2, 1, 1), [[1, 1, 1]], N.T).any()
    assert null_space(F8, np.eye(3, dtype=np.int64)).shape == (0, 3)


def test_rank_nullity():
    rng = np.random.default_rng(4)
    for _ in range(100):
        T = F4 if rng.random() < 0.5 else F8
        rows, cols = rng.integers(1, 5, size=2)
        M = rng.integers(0, T.order, size=(rows, cols))
        N = null_space(T, M)
        assert rank(T, N) + rank(T, M) == cols
        if N.shape[0]:
            assert not matmul(T, M, N.T).any()


def test_same_rowspace():
    assert same_rowspace(F4, [[1, 2], [0, 1]], [[1, 0], [0, 1]])
    assert not same_rowspace(F4, [[1, 2]], [[1, 3]])


def test_sum_intersects_trivially_examples():
    one, z, z1 = (SubspaceFq.span(F4, [x]) for x in (1, 2, 3))
    assert sum_intersects_trivially(one, [z])
    assert not sum_intersects_trivially(one, [z, z1])
    assert sum_intersects_trivially(one, [])


def test_mixed_towers_rejected():
    with pytest.raises(MixedTowers):
        SubspaceFq.span(F4, [1]) + SubspaceFq.span(F8, [1])
    with pytest.raises(MixedTowers):
        sum_intersects_trivially(SubspaceFq.span(F4, [1]), [SubspaceFq.span(F8, [1])])


def test_dimension_formula_exhaustive_in_f16():
    spaces = {}
    for pair in itertools.combinations_with_replacement(range(16), 2):
        S = SubspaceFq.span(F16, pair)
        spaces[frozenset(S.elements())] = S
    spaces = list(spaces.values())
    assert len(spaces) == 1 + 15 + 35
    for U, V in itertools.product(spaces, repeat=2):
        meet = U.elements() & V.elements()
        inter = len(meet).bit_length() - 1
        assert intersection_dim(U, V) == inter
        assert inter + (U + V).dim == U.dim + V.dim
        assert subspace_sum(F16, [U, V]).dim == (U + V).dim


def test_subspace_membership():
    H = SubspaceFq.span(F16, [1, 2])
    assert H.dim == 2
    assert {x for x in range(16) if H.contains(x)} == H.elements() == {0, 1, 2, 3}
