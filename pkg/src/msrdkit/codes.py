"""Linear codes over F_{q^m} with an attached weight, and exhaustive analysis.

Minimum distances are exact: codewords are enumerated one per projective
point (messages whose highest-index nonzero coordinate is 1), which is valid
because every supported weight is invariant under nonzero scaling. Work is
split into index ranges; results are a pure min / histogram merge, so they
do not depend on the number of worker processes.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DependentRows, EnumerationCapExceeded, LengthMismatch, ParameterError
from .field import FieldTower
from .linalg import as_matrix, null_space, rank
from .metrics import WeightFunction, weight_from_json

DEFAULT_CAP = 1 << 22
CHUNK = 1 << 13


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``generator`` (k x N, full rank) measured with ``weight``.

    ``k = 0`` (an empty generator) is allowed so that zero codes can appear
    in lattices and as duals of the full space.
    """

    tower: FieldTower
    generator: np.ndarray
    weight: WeightFunction

    def __post_init__(self):
        G = as_matrix(self.generator, self.weight.length).copy()
        if G.shape[1] != self.weight.length:
            raise LengthMismatch(
                f"generator has {G.shape[1]} columns, weight expects {self.weight.length}"
            )
        if G.size and (G.min() < 0 or G.max() >= self.tower.order):
            raise ParameterError("generator entries outside the field")
        if rank(self.tower, G) != G.shape[0]:
            raise DependentRows("generator rows are linearly dependent")
        G.flags.writeable = False
        object.__setattr__(self, "generator", G)

    @property
    def k(self) -> int:
        return self.generator.shape[0]

    @property
    def length(self) -> int:
        return self.generator.shape[1]

    def encode(self, messages) -> np.ndarray:
        """Codewords for a batch of messages (shape ``(B, k)``)."""
        U = np.asarray(messages, dtype=np.int64).reshape(-1, self.k)
        T = self.tower
        out = np.zeros((U.shape[0], self.length), dtype=np.int64)
        for i in range(self.k):
            out = T.vadd(out, T.vmul(U[:, i : i + 1], self.generator[i][None, :]))
        return out

    def to_json(self) -> dict:
        T = self.tower
        return {
            "field": T.to_json(),
            "n": self.length,
            "k": self.k,
            "weight": self.weight.to_json(),
            "generator": [[T.element_to_json(int(x)) for x in row] for row in self.generator],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearCode":
        T = FieldTower.from_json(data["field"])
        w = weight_from_json(data["weight"])
        rows = [[T.element_from_json(x) for x in row] for row in data["generator"]]
        G = np.array(rows, dtype=np.int64).reshape(len(rows), w.length)
        code = cls(T, G, w)
        if "n" in data and int(data["n"]) != code.length:
            raise LengthMismatch("declared n does not match the generator")
        if "k" in data and int(data["k"]) != code.k:
            raise ParameterError("declared k does not match the generator")
        return code


@dataclass
class WeightDistribution:
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def nonzero_weights(self) -> list[int]:
        return sorted(w for w in self.counts if w != 0)

    @property
    def min_nonzero(self) -> Optional[int]:
        ws = self.nonzero_weights
        return ws[0] if ws else None

    @property
    def is_one_weight(self) -> bool:
        return len(self.nonzero_weights) == 1

    def to_json(self) -> dict:
        return {str(w): c for w, c in sorted(self.counts.items())}


@dataclass(frozen=True)
class Verdict:
    attains: bool
    defect: Optional[int]
    distance: Optional[int]
    note: str = ""


# ---------------------------------------------------------------------------
# enumeration machinery
# ---------------------------------------------------------------------------


def projective_count(Q: int, k: int) -> int:
    return (Q**k - 1) // (Q - 1)


def _message_ints(Q: int, k: int, lo: int, hi: int, projective: bool) -> np.ndarray:
    """Integer-encoded messages number ``lo .. hi-1`` of the enumeration."""
    if not projective:
        return np.arange(lo, hi, dtype=np.int64)
    parts = []
    start = 0
    for j in range(k):
        size = Q**j
        a, b = max(lo, start), min(hi, start + size)
        if a < b:
            parts.append(np.arange(a - start, b - start, dtype=np.int64) + size)
        start += size
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _messages(Q: int, k: int, ints: np.ndarray) -> np.ndarray:
    w = Q ** np.arange(k, dtype=np.int64)
    return (ints[:, None] // w[None, :]) % Q


def _scan(code: LinearCode, lo: int, hi: int, projective: bool, mode: str, stop_at=None):
    Q = code.tower.order
    best = None
    best_word = None
    hist: Counter = Counter()
    for a in range(lo, hi, CHUNK):
        b = min(hi, a + CHUNK)
        ints = _message_ints(Q, code.k, a, b, projective)
        words = code.encode(_messages(Q, code.k, ints))
        wts = code.weight.batch(code.tower, words)
        if mode == "hist":
            vals, cnts = np.unique(wts, return_counts=True)
            hist.update(dict(zip(vals.tolist(), cnts.tolist())))
            continue
        if mode == "min":
            i = int(np.argmin(wts))
            if best is None or wts[i] < best:
                best, best_word = int(wts[i]), words[i]
            if stop_at is not None and best <= stop_at:
                break
        else:
            i = int(np.argmax(wts))
            if best is None or wts[i] > best:
                best, best_word = int(wts[i]), words[i]
    if mode == "hist":
        return hist
    return best, (None if best_word is None else best_word.tolist())


def _scan_job(args):
    return _scan(*args)


def _run(code: LinearCode, total: int, projective: bool, mode: str, jobs: int, stop_at=None):
    if jobs <= 1 or total < 2 * CHUNK:
        return [_scan(code, 0, total, projective, mode, stop_at)]
    step = -(-total // jobs)
    ranges = [(code, a, min(total, a + step), projective, mode, stop_at) for a in range(0, total, step)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_scan_job, ranges))


def _check_cap(required: int, cap: int):
    if required > cap:
        raise EnumerationCapExceeded(required, cap)


def _require_nonzero(code: LinearCode):
    if code.k == 0:
        raise ParameterError("the zero code has no nonzero codewords")


def _pick(results, better):
    best = None
    for value, word in results:
        if value is None:
            continue
        if best is None or better(value, best[0]):
            best = (value, word)
    return best


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def min_distance(code: LinearCode, cap: int = DEFAULT_CAP, jobs: int = 1,
                 stop_at: Optional[int] = None) -> int:
    """Exact minimum nonzero weight.

    ``stop_at`` enables decision mode: the scan may stop as soon as a
    codeword of weight <= ``stop_at`` is seen (the returned value is then an
    upper bound that is <= ``stop_at``).
    """
    return min_weight_codeword(code, cap, jobs, stop_at)[0]


def min_weight_codeword(code: LinearCode, cap: int = DEFAULT_CAP, jobs: int = 1,
                        stop_at: Optional[int] = None) -> tuple[int, list[int]]:
    _require_nonzero(code)
    total = projective_count(code.tower.order, code.k)
    _check_cap(total, cap)
    return _pick(_run(code, total, True, "min", jobs, stop_at), lambda a, b: a < b)


def max_weight_codeword(code: LinearCode, cap: int = DEFAULT_CAP, jobs: int = 1) -> tuple[int, list[int]]:
    _require_nonzero(code)
    total = projective_count(code.tower.order, code.k)
    _check_cap(total, cap)
    return _pick(_run(code, total, True, "max", jobs), lambda a, b: a > b)


def min_distance_full(code: LinearCode, cap: int = DEFAULT_CAP) -> int:
    """Minimum distance over every nonzero codeword (no projective reduction)."""
    _require_nonzero(code)
    total = code.tower.order**code.k
    _check_cap(total, cap)
    return _scan(code, 1, total, False, "min")[0]


def weight_distribution(code: LinearCode, cap: int = DEFAULT_CAP, jobs: int = 1,
                        full: bool = False) -> WeightDistribution:
    """Exact counts of codewords per weight.

    By default one codeword per scaling class is weighed and counted
    ``q^m - 1`` times; ``full=True`` weighs every codeword instead.
    """
    Q = code.tower.order
    _check_cap(Q**code.k, cap)
    if code.k == 0:
        return WeightDistribution({0: 1})
    counts: Counter = Counter()
    if full:
        for h in _run(code, Q**code.k, False, "hist", jobs):
            counts.update(h)
        return WeightDistribution(dict(sorted(counts.items())))
    counts[0] = 1
    for h in _run(code, projective_count(Q, code.k), True, "hist", jobs):
        for w, c in h.items():
            counts[w] += c * (Q - 1)
    return WeightDistribution(dict(sorted(counts.items())))


def attains_singleton(code: LinearCode, cap: int = DEFAULT_CAP, jobs: int = 1) -> Verdict:
    d = min_distance(code, cap, jobs)
    defect = (code.length - code.k + 1) - d
    return Verdict(attains=defect == 0, defect=defect, distance=d)


def dual(code: LinearCode) -> LinearCode:
    """C^⊥ under the standard bilinear form, with the same weight attached."""
    H = null_space(code.tower, code.generator, code.length)
    return LinearCode(code.tower, H, code.weight)
