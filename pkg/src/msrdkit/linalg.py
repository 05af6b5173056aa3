"""Linear algebra over F_q and F_{q^m}.

Matrices are 2-D numpy int64 arrays of encoded field elements; the tower is
passed alongside. Because F_q is embedded as the integers ``0..q-1`` and
shares the multiplication tables, the same elimination routines compute
ranks over F_q for matrices with F_q entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import MixedTowers
from .field import FieldTower


def as_matrix(M, cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-D int64 array; an empty input becomes ``0 x cols``."""
    A = np.asarray(M, dtype=np.int64)
    if A.size == 0:
        width = cols if cols is not None else (A.shape[1] if A.ndim == 2 else 0)
        return np.zeros((0, width), dtype=np.int64)
    if A.ndim == 1:
        return A[None, :]
    return A


def rref(tower: FieldTower, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (first nonzero pivot)."""
    R = as_matrix(M).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = tower.vmul(R[r], tower.inv(int(R[r, c])))
        factor = R[:, c].copy()
        factor[r] = 0
        R = tower.vsub(R, tower.vmul(factor[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(tower: FieldTower, M) -> int:
    A = as_matrix(M)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return len(rref(tower, A)[1])


def batch_rank(tower: FieldTower, A) -> np.ndarray:
    """Ranks of a stack of matrices, shape ``(B, R, C)`` -> ``(B,)``.

    Each pivot row is consumed by the elimination step (it reduces to zero),
    so the rank is the number of pivots found.
    """
    A = np.array(A, dtype=np.int64, copy=True)
    B, R, C = A.shape
    ranks = np.zeros(B, dtype=np.int64)
    if R == 0 or C == 0 or B == 0:
        return ranks
    if C > R:
        A = np.ascontiguousarray(A.transpose(0, 2, 1))
        R, C = C, R
    for c in range(C):
        nz = A[:, :, c] != 0
        has = nz.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = nz[idx].argmax(axis=1)
        prow = A[idx, piv]
        prow = tower.vmul(prow, tower.vpow(prow[:, c], -1)[:, None])
        sub = A[idx]
        factor = sub[:, :, c]
        A[idx] = tower.vsub(sub, tower.vmul(factor[:, :, None], prow[:, None, :]))
        ranks[idx] += 1
    return ranks


def null_space(tower: FieldTower, M, cols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : M x^T = 0}; shape ``(cols - rank, cols)``."""
    A = as_matrix(M, cols)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(tower, A)
    free = [c for c in range(n) if c not in set(pivots)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        out[k, f] = 1
        for i, pc in enumerate(pivots):
            out[k, pc] = tower.neg(int(R[i, f]))
    return out


def matmul(tower: FieldTower, A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for j in range(A.shape[1]):
        out = tower.vadd(out, tower.vmul(A[:, j : j + 1], B[j : j + 1, :]))
    return out


def rowspace_contains(tower: FieldTower, U, V) -> bool:
    """Whether every row of ``V`` lies in the row space of ``U``."""
    V = as_matrix(V)
    if V.shape[0] == 0:
        return True
    U = as_matrix(U, V.shape[1])
    return rank(tower, np.vstack([U, V])) == rank(tower, U)


def same_rowspace(tower: FieldTower, U, V) -> bool:
    U = as_matrix(U)
    V = as_matrix(V, U.shape[1])
    return rowspace_contains(tower, U, V) and rowspace_contains(tower, V, U)


def expand_over_fq(tower: FieldTower, v: Sequence[int]) -> np.ndarray:
    """``m x len(v)`` matrix over F_q whose column j holds the coordinates of v_j."""
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    return tower.vcoeffs(v).T.copy()


def fq_rank(tower: FieldTower, v: Sequence[int]) -> int:
    """dim_{F_q} of the span of the entries of ``v``."""
    return rank(tower, expand_over_fq(tower, v))


@dataclass(frozen=True)
class SubspaceFq:
    """An F_q-subspace of F_{q^m}, stored by an F_q-independent basis."""

    tower: FieldTower
    basis: tuple[int, ...]

    @classmethod
    def span(cls, tower: FieldTower, elements: Iterable[int]) -> "SubspaceFq":
        basis: list[int] = []
        for x in elements:
            if fq_rank(tower, basis + [int(x)]) > len(basis):
                basis.append(int(x))
        return cls(tower, tuple(basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: int) -> bool:
        return fq_rank(self.tower, list(self.basis) + [int(x)]) == self.dim

    def elements(self) -> set[int]:
        """All q^dim members (exhaustive; small fields only)."""
        T = self.tower
        members = {0}
        for b in self.basis:
            members = {T.add(x, T.mul(c, b)) for x in members for c in T.base_elements()}
        return members

    def __add__(self, other: "SubspaceFq") -> "SubspaceFq":
        _same_tower([self, other])
        return SubspaceFq.span(self.tower, self.basis + other.basis)


def _same_tower(spaces: Sequence[SubspaceFq]):
    towers = {s.tower for s in spaces}
    if len(towers) > 1:
        raise MixedTowers("subspaces live in different towers")


def subspace_sum(tower: FieldTower, spaces: Sequence[SubspaceFq]) -> SubspaceFq:
    _same_tower(list(spaces))
    return SubspaceFq.span(tower, [b for s in spaces for b in s.basis])


def intersection_dim(U: SubspaceFq, V: SubspaceFq) -> int:
    _same_tower([U, V])
    return U.dim + V.dim - fq_rank(U.tower, list(U.basis + V.basis))


def sum_intersects_trivially(target: SubspaceFq, others: Sequence[SubspaceFq]) -> bool:
    """Whether target ∩ (sum of others) = {0}, via dim T + dim S = dim(T + S)."""
    _same_tower([target, *others])
    T = target.tower
    other_basis = [b for s in others for b in s.basis]
    dim_sum = fq_rank(T, other_basis)
    return target.dim + dim_sum == fq_rank(T, list(target.basis) + other_basis)
