"""Weight functions: Hamming, rank, sum-rank and sums of those.

Every weight here is invariant under multiplication by a nonzero scalar of
F_{q^m} (multiplying by λ is an F_q-linear bijection of F_{q^m}), which the
projective enumeration in :mod:`msrdkit.codes` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import LengthMismatch, ParameterError
from .field import FieldTower
from .linalg import batch_rank


@dataclass(frozen=True)
class Hamming:
    length: int

    def batch(self, tower: FieldTower, C: np.ndarray) -> np.ndarray:
        return np.count_nonzero(C, axis=1).astype(np.int64)

    def to_json(self) -> dict:
        return {"kind": "hamming", "len": self.length}


@dataclass(frozen=True)
class SumRank:
    """Sum of F_q-ranks over ``g`` consecutive blocks of length ``r``."""

    g: int
    r: int

    def __post_init__(self):
        if self.g < 1 or self.r < 1:
            raise ParameterError("length partition needs g >= 1 and r >= 1")

    @property
    def length(self) -> int:
        return self.g * self.r

    def batch(self, tower: FieldTower, C: np.ndarray) -> np.ndarray:
        B = C.shape[0]
        if self.r == 1:
            return np.count_nonzero(C, axis=1).astype(np.int64)
        if tower.m == 1:
            # blocks of F_q elements: rank is 1 unless the block is zero
            return np.count_nonzero(C.reshape(B, self.g, self.r).any(axis=2), axis=1)
        blocks = tower.vcoeffs(C.reshape(B * self.g, self.r))
        return batch_rank(tower, blocks).reshape(B, self.g).sum(axis=1)

    def to_json(self) -> dict:
        return {"kind": "sumrank", "g": self.g, "r": self.r}


@dataclass(frozen=True)
class Rank:
    length: int

    def batch(self, tower: FieldTower, C: np.ndarray) -> np.ndarray:
        return SumRank(1, self.length).batch(tower, C)

    def to_json(self) -> dict:
        return {"kind": "rank", "len": self.length}


@dataclass(frozen=True)
class Composite:
    """wt(c) = sum of part weights on consecutive segments."""

    parts: tuple

    @classmethod
    def of(cls, parts: Sequence["WeightFunction"]) -> "Composite":
        flat: list = []
        for p in parts:
            if isinstance(p, Composite):
                flat.extend(p.parts)
            else:
                flat.append(p)
        return cls(tuple(flat))

    @property
    def length(self) -> int:
        return sum(p.length for p in self.parts)

    def batch(self, tower: FieldTower, C: np.ndarray) -> np.ndarray:
        total = np.zeros(C.shape[0], dtype=np.int64)
        start = 0
        for p in self.parts:
            total += p.batch(tower, C[:, start : start + p.length])
            start += p.length
        return total

    def to_json(self) -> dict:
        return {"kind": "composite", "parts": [p.to_json() for p in self.parts]}


WeightFunction = Union[Hamming, Rank, SumRank, Composite]


def weight(w: WeightFunction, c: Sequence[int], tower: FieldTower) -> int:
    """Weight of a single vector."""
    c = np.asarray(c, dtype=np.int64).reshape(1, -1)
    if c.shape[1] != w.length:
        raise LengthMismatch(f"vector has length {c.shape[1]}, weight expects {w.length}")
    return int(w.batch(tower, c)[0])


def batch_weight(w: WeightFunction, C, tower: FieldTower) -> np.ndarray:
    """Weights of the rows of ``C`` (shape ``(B, length)``)."""
    C = np.asarray(C, dtype=np.int64)
    if C.ndim != 2 or C.shape[1] != w.length:
        raise LengthMismatch(f"expected rows of length {w.length}")
    return w.batch(tower, C)


def extended_metric(base: WeightFunction, tail: str, t: int) -> Composite:
    """``base`` on the first coordinates plus a Hamming or rank block of length ``t``."""
    if t < 1:
        raise ParameterError("tail length must be >= 1")
    if tail == "hamming":
        part = Hamming(t)
    elif tail == "rank":
        part = Rank(t)
    else:
        raise ParameterError(f"tail must be 'hamming' or 'rank', not {tail!r}")
    return Composite.of([base, part])


def min_distance_bound(w: WeightFunction, n: int, k: int) -> int:
    """Singleton bound n - k + 1, valid for any weight dominated by Hamming."""
    if not 1 <= k <= n:
        raise ParameterError("need 1 <= k <= n")
    return n - k + 1


def weight_from_json(data: dict) -> WeightFunction:
    kind = data.get("kind")
    if kind == "hamming":
        return Hamming(int(data["len"]))
    if kind == "rank":
        return Rank(int(data["len"]))
    if kind == "sumrank":
        return SumRank(int(data["g"]), int(data["r"]))
    if kind == "composite":
        return Composite.of([weight_from_json(p) for p in data["parts"]])
    raise ParameterError(f"unknown weight kind {kind!r}")
