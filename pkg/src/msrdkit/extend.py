"""Multiply extended codes for an arbitrary weight satisfying the Singleton bound.

Given independent rows g_1..g_k and t <= k, the extended generator appends
the unit vector e_i to g_i for i <= t and zeros to the remaining rows. The
sub-codes C_I = <g_i : i in I> + <g_{t+1}, ..., g_k>, I ⊆ [t], form a
lattice whose minimum distances d_I determine the extended distance:
d_e = min(d_I + |I|) when the tail is measured in the Hamming metric.

Convention: when k = t the member C_∅ is the zero code and d_∅ is taken to
be n + 1, so the formula simply never selects the empty subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Optional

import numpy as np

from .codes import DEFAULT_CAP, LinearCode, dual, min_distance
from .errors import BadT, DependentRows, LatticePropertyViolated, LengthMismatch, ParameterError
from .field import FieldTower
from .linalg import as_matrix, rank, rowspace_contains
from .metrics import WeightFunction, extended_metric

Subset = tuple[int, ...]


def subsets(t: int) -> Iterator[Subset]:
    """All subsets of range(t): by increasing size, then lexicographic."""
    for size in range(t + 1):
        yield from combinations(range(t), size)


@dataclass(frozen=True, eq=False)
class ExtensionSpec:
    tower: FieldTower
    base_rows: np.ndarray
    t: int
    base_weight: WeightFunction
    tail: str = "hamming"

    def __post_init__(self):
        G = as_matrix(self.base_rows).copy()
        if G.shape[1] != self.base_weight.length:
            raise LengthMismatch("base rows do not match the base weight length")
        if not 1 <= self.t <= G.shape[0]:
            raise BadT(f"t must lie in [1, k], got t={self.t}, k={G.shape[0]}")
        if rank(self.tower, G) != G.shape[0]:
            raise DependentRows("base rows are linearly dependent")
        if self.tail not in ("hamming", "rank"):
            raise ParameterError("tail must be 'hamming' or 'rank'")
        G.flags.writeable = False
        object.__setattr__(self, "base_rows", G)

    @property
    def k(self) -> int:
        return self.base_rows.shape[0]

    @property
    def n(self) -> int:
        return self.base_rows.shape[1]

    def member_rows(self, I: Subset) -> np.ndarray:
        idx = list(I) + list(range(self.t, self.k))
        return self.base_rows[idx] if idx else np.zeros((0, self.n), dtype=np.int64)


@dataclass
class LatticeMember:
    code: LinearCode
    d: Optional[int]


@dataclass
class ExtensionLattice:
    """Members indexed by subsets of range(t)."""

    t: int
    n: int
    k: int
    members: dict[Subset, LatticeMember] = field(default_factory=dict)

    def complement(self, I: Subset) -> Subset:
        return tuple(i for i in range(self.t) if i not in I)


def multiply_extend(spec: ExtensionSpec) -> LinearCode:
    tail = np.zeros((spec.k, spec.t), dtype=np.int64)
    tail[np.arange(spec.t), np.arange(spec.t)] = 1
    G = np.hstack([spec.base_rows, tail])
    return LinearCode(spec.tower, G, extended_metric(spec.base_weight, spec.tail, spec.t))


def build_lattice(spec: ExtensionSpec, cap: int = DEFAULT_CAP, jobs: int = 1) -> ExtensionLattice:
    lat = ExtensionLattice(t=spec.t, n=spec.n, k=spec.k)
    for I in subsets(spec.t):
        code = LinearCode(spec.tower, spec.member_rows(I), spec.base_weight)
        d = spec.n + 1 if code.k == 0 else min_distance(code, cap, jobs)
        lat.members[I] = LatticeMember(code, d)
    return lat


def extended_distance_formula(lat: ExtensionLattice, tail: str = "hamming") -> int:
    """min over I of d_I + |I|.

    Only meaningful for a Hamming tail: with a rank tail and t >= 2 the tail
    weight of a codeword can be smaller than |I|.
    """
    if tail != "hamming" and lat.t > 1:
        raise ParameterError("the lattice formula needs a Hamming tail (or t = 1)")
    return min(m.d + len(I) for I, m in lat.members.items())


@dataclass(frozen=True)
class LatticeVerdict:
    extended_attains: bool
    witnesses: tuple[Subset, ...]


def singleton_lattice_verdict(lat: ExtensionLattice) -> LatticeVerdict:
    """C_e attains Singleton iff every C_I has d_I = (n + t) - k - |I| + 1."""
    failing = tuple(
        I for I, m in lat.members.items() if m.d != (lat.n + lat.t) - lat.k - len(I) + 1
    )
    return LatticeVerdict(extended_attains=not failing, witnesses=failing)


def check_lattice(tower: FieldTower, members: dict[Subset, LinearCode], t: int):
    """Verify C_I + C_J = C_{I∪J} and C_I ∩ C_J = C_{I∩J} by rank checks."""
    for I in members:
        for J in members:
            U, V = members[I].generator, members[J].generator
            union = tuple(sorted(set(I) | set(J)))
            inter = tuple(sorted(set(I) & set(J)))
            S = members[union].generator
            M = members[inter].generator
            n = members[I].length
            stacked = np.vstack([as_matrix(U, n), as_matrix(V, n)])
            dim_sum = rank(tower, stacked)
            if dim_sum != rank(tower, S) or not rowspace_contains(tower, S, stacked):
                raise LatticePropertyViolated(f"sum of members {I}, {J} is not member {union}")
            dim_inter = U.shape[0] + V.shape[0] - dim_sum
            inside = rowspace_contains(tower, U, M) and rowspace_contains(tower, V, M)
            if M.shape[0] != dim_inter or not inside:
                raise LatticePropertyViolated(
                    f"intersection of members {I}, {J} is not member {inter}"
                )


def dual_lattice(lat: ExtensionLattice, tower: FieldTower, with_distances: bool = False,
                 cap: int = DEFAULT_CAP) -> ExtensionLattice:
    """D_I = (C_{I^c})^⊥, verified to be a lattice again."""
    out = ExtensionLattice(t=lat.t, n=lat.n, k=lat.k)
    for I in lat.members:
        D = dual(lat.members[lat.complement(I)].code)
        d = None
        if with_distances:
            d = lat.n + 1 if D.k == 0 else min_distance(D, cap)
        out.members[I] = LatticeMember(D, d)
    check_lattice(tower, {I: m.code for I, m in out.members.items()}, lat.t)
    return out


def lattice_to_json(lat: ExtensionLattice) -> list[dict]:
    """Members as (subset bitmask, code, d_I) records."""
    return [
        {"subset": sum(1 << i for i in I), "code": m.code.to_json(), "d": m.d}
        for I, m in lat.members.items()
    ]
