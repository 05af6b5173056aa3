"""Extended Moore matrices and the doubly / triply extended MSRD codes built on them.

Layout of an extended Moore matrix M_k(a, β) with ℓ = len(a) and η = len(β):
column ``b * η + j`` of row ``i`` holds β_j^(q^i) · a_b^((q^i - 1)/(q - 1)).
Rows are produced by the ladder x ↦ x^q · a_b, so no large exponent is ever
formed. The ℓη columns are measured in the sum-rank metric for the length
partition (ℓμ, r), where η = μr and the β-vector splits into μ chunks of r
spanning the F_q-subspaces H_1, ..., H_μ.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Optional, Sequence

import numpy as np

from .codes import DEFAULT_CAP, LinearCode, Verdict, WeightDistribution, attains_singleton
from .codes import max_weight_codeword, weight_distribution
from .errors import (
    BadDimensions,
    BadK,
    BadTail,
    DependentAlphas,
    LengthMismatch,
    NormCollision,
    NotSubfieldDegree,
    ParameterError,
    ProjectiveCollision,
    SizeCapExceeded,
    TooManyBlocks,
)
from .extend import ExtensionSpec, multiply_extend
from .field import FieldTower, _pmul
from .linalg import SubspaceFq, fq_rank, rank, sum_intersects_trivially
from .metrics import Composite, Hamming, Rank, SumRank

EXHAUSTIVE_CAP = 1 << 16


@dataclass(frozen=True, eq=False)
class MooreSpec:
    tower: FieldTower
    a: tuple[int, ...]
    beta: tuple[int, ...]
    mu: int
    r: int
    k: int

    def __post_init__(self):
        T = self.tower
        object.__setattr__(self, "a", tuple(T.check(x) for x in self.a))
        object.__setattr__(self, "beta", tuple(T.check(x) for x in self.beta))
        if not self.a or any(x == 0 for x in self.a):
            raise ParameterError("a must be a nonempty vector of nonzero elements")
        norms = [T.norm(x) for x in self.a]
        if len(set(norms)) != len(norms):
            raise NormCollision(f"norms of a are not pairwise distinct: {norms}")
        if self.mu < 1 or self.r < 1 or len(self.beta) != self.mu * self.r:
            raise BadDimensions(f"beta must have mu*r = {self.mu * self.r} entries")
        if self.k < 1:
            raise BadDimensions("k must be >= 1")

    @property
    def ell(self) -> int:
        return len(self.a)

    @property
    def eta(self) -> int:
        return self.mu * self.r

    @property
    def g(self) -> int:
        return self.ell * self.mu

    @property
    def n(self) -> int:
        return self.g * self.r

    @property
    def weight(self) -> SumRank:
        return SumRank(self.g, self.r)

    def with_k(self, k: int) -> "MooreSpec":
        return MooreSpec(self.tower, self.a, self.beta, self.mu, self.r, k)

    def subspaces(self) -> list[SubspaceFq]:
        r = self.r
        return [SubspaceFq.span(self.tower, self.beta[i * r : (i + 1) * r]) for i in range(self.mu)]

    def column_scalars(self) -> np.ndarray:
        """a_b repeated over the η columns of block b."""
        return np.repeat(np.array(self.a, dtype=np.int64), self.eta)

    def to_json(self) -> dict:
        T = self.tower
        return {
            "field": T.to_json(),
            "ell": self.ell,
            "mu": self.mu,
            "r": self.r,
            "k": self.k,
            "a": [T.element_to_json(x) for x in self.a],
            "beta": [T.element_to_json(x) for x in self.beta],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MooreSpec":
        T = FieldTower.from_json(data["field"])
        a = [T.element_from_json(x) for x in data["a"]] if "a" in data else None
        beta = [T.element_from_json(x) for x in data["beta"]] if "beta" in data else None
        return make_spec(T, int(data["mu"]), int(data["r"]), int(data["k"]),
                         ell=data.get("ell"), a=a, beta=beta)


# ---------------------------------------------------------------------------
# default parameters
# ---------------------------------------------------------------------------


def default_a_vector(tower: FieldTower, ell: int) -> tuple[int, ...]:
    """(1, γ, ..., γ^(ℓ-1)) for the canonical primitive element γ."""
    if ell < 1:
        raise ParameterError("ell must be >= 1")
    if ell > tower.q - 1:
        raise TooManyBlocks(f"at most q - 1 = {tower.q - 1} distinct nonzero norms exist")
    gamma = tower.primitive_element()
    a = tuple(tower.pow(gamma, i) for i in range(ell))
    if len({tower.norm(x) for x in a}) != ell:
        raise NormCollision("powers of the primitive element collided in norm")
    return a


def subfield_elements(tower: FieldTower, r: int) -> list[int]:
    """Elements of F_{q^r} inside F_{q^m} (requires r | m), canonical order."""
    if r < 1 or tower.m % r:
        raise NotSubfieldDegree(f"r = {r} does not divide m = {tower.m}")
    return [x for x in tower.elements() if tower.frobenius(x, r) == x]


@dataclass(frozen=True, eq=False)
class FieldReductionSpec:
    tower: FieldTower
    r: int
    alphas: tuple[int, ...]
    gammas: tuple[int, ...]

    def __post_init__(self):
        T = self.tower
        sub = set(subfield_elements(T, self.r))
        if len(self.alphas) != self.r or any(x not in sub for x in self.alphas):
            raise DependentAlphas("alphas must be r elements of F_{q^r}")
        if fq_rank(T, list(self.alphas)) != self.r:
            raise DependentAlphas("alphas are F_q-linearly dependent")
        if not self.gammas or any(x == 0 for x in self.gammas):
            raise ProjectiveCollision("gammas must be nonzero")
        for i, j in combinations(range(len(self.gammas)), 2):
            if T.div(self.gammas[i], self.gammas[j]) in sub:
                raise ProjectiveCollision(f"gamma_{i + 1} and gamma_{j + 1} span the same F_q^r-line")

    @property
    def mu(self) -> int:
        return len(self.gammas)


def default_field_reduction(tower: FieldTower, r: int, mu: int) -> FieldReductionSpec:
    """Canonical alphas (greedy basis of F_{q^r}) and the first μ projective points."""
    sub = subfield_elements(tower, r)
    alphas: list[int] = []
    for x in sub:
        if len(alphas) == r:
            break
        if fq_rank(tower, alphas + [x]) > len(alphas):
            alphas.append(x)
    subset = set(sub)
    gammas: list[int] = []
    for x in tower.nonzero():
        if len(gammas) == mu:
            break
        if all(tower.div(x, y) not in subset for y in gammas):
            gammas.append(x)
    if len(gammas) < mu:
        limit = (tower.order - 1) // (tower.q**r - 1)
        raise ParameterError(f"only {limit} projective points over F_q^{r} exist, mu = {mu}")
    return FieldReductionSpec(tower, r, tuple(alphas), tuple(gammas))


def union_covers(tower: FieldTower, H: Sequence[SubspaceFq]) -> bool:
    """Exhaustively test whether the subspaces cover all of F_{q^m}."""
    if tower.order > EXHAUSTIVE_CAP:
        raise SizeCapExceeded(f"exhaustive cover test limited to {EXHAUSTIVE_CAP} elements")
    covered: set[int] = set()
    for h in H:
        covered |= h.elements()
    return len(covered) == tower.order


def field_reduction_beta(spec: FieldReductionSpec) -> tuple[tuple[int, ...], list[SubspaceFq]]:
    """β laid out as γ_j·(α_1, ..., α_r) block by block, with the spans H_j."""
    T = spec.tower
    beta = tuple(T.mul(g, a) for g in spec.gammas for a in spec.alphas)
    H = [SubspaceFq.span(T, beta[j * spec.r : (j + 1) * spec.r]) for j in range(spec.mu)]
    if T.order <= EXHAUSTIVE_CAP:
        full = spec.mu == (T.order - 1) // (T.q**spec.r - 1)
        if union_covers(T, H) != full:
            raise AssertionError("cover test disagrees with the projective-point count")
    return beta, H


def make_spec(tower: FieldTower, mu: int, r: int, k: int, ell: Optional[int] = None,
              a: Optional[Sequence[int]] = None, beta: Optional[Sequence[int]] = None) -> MooreSpec:
    """MooreSpec with defaults: ℓ = q - 1, a from the primitive element, β by field reduction."""
    if a is None:
        a = default_a_vector(tower, tower.q - 1 if ell is None else int(ell))
    elif ell is not None and int(ell) != len(a):
        raise BadDimensions("ell does not match the length of a")
    if beta is None:
        beta, _ = field_reduction_beta(default_field_reduction(tower, r, mu))
    return MooreSpec(tower, tuple(a), tuple(beta), mu, r, k)


# ---------------------------------------------------------------------------
# matrices and codes
# ---------------------------------------------------------------------------


def moore_rows(spec: MooreSpec, stop: int) -> np.ndarray:
    """Rows 0 .. stop-1 of the (unbounded) extended Moore ladder."""
    T = spec.tower
    scal = spec.column_scalars()
    row = np.tile(np.array(spec.beta, dtype=np.int64), spec.ell)
    out = np.zeros((stop, spec.n), dtype=np.int64)
    for i in range(stop):
        out[i] = row
        row = T.vmul(T.vfrobenius(row), scal)
    return out


def _require_k_le_n(spec: MooreSpec):
    if spec.k > spec.n:
        raise BadDimensions(f"k = {spec.k} exceeds the length n = {spec.n}")


def moore_matrix(spec: MooreSpec) -> np.ndarray:
    """M_k(a, β); requires k <= n."""
    _require_k_le_n(spec)
    return moore_rows(spec, spec.k)


def shifted_moore_matrix(spec: MooreSpec) -> np.ndarray:
    """M'_k(a, β): exponents q^1 .. q^k; checked against M_k^q · diag(a)."""
    T = spec.tower
    shifted = moore_rows(spec, spec.k + 1)[1:]
    M = moore_matrix(spec)
    if not np.array_equal(shifted, T.vmul(T.vfrobenius(M), spec.column_scalars()[None, :])):
        raise AssertionError("M'_k != M_k^q diag(a)")
    return shifted


def semilinear_map(c: Sequence[int], spec: MooreSpec) -> np.ndarray:
    """φ(c): every entry of block b raised to the q-th power and scaled by a_b."""
    c = np.asarray(c, dtype=np.int64)
    if c.shape[-1] != spec.n:
        raise LengthMismatch(f"expected vectors of length {spec.n}")
    T = spec.tower
    return T.vmul(T.vfrobenius(c), spec.column_scalars())


def moore_code(spec: MooreSpec) -> LinearCode:
    """C_k(a, β); raises DependentRows if M_k is rank deficient."""
    return LinearCode(spec.tower, moore_matrix(spec), spec.weight)


def shifted_code(spec: MooreSpec) -> LinearCode:
    """D_k(a, β)."""
    return LinearCode(spec.tower, shifted_moore_matrix(spec), spec.weight)


def moore_verdict(spec: MooreSpec, shifted: bool = False, cap: int = DEFAULT_CAP,
                  jobs: int = 1) -> Verdict:
    """Singleton verdict for C_k (or D_k), counting a rank-deficient M_k as a failure.

    A generator of rank < k spans a code of dimension < k, so there is no
    k-dimensional code to attain the bound.
    """
    M = shifted_moore_matrix(spec) if shifted else moore_matrix(spec)
    rk = rank(spec.tower, M)
    if rk < spec.k:
        return Verdict(False, None, None, note=f"generator has rank {rk} < k = {spec.k}")
    return attains_singleton(LinearCode(spec.tower, M, spec.weight), cap, jobs)


@dataclass(frozen=True)
class ConditionReport:
    ok: bool
    failing: Optional[str] = None
    condition: Optional[int] = None
    index: Optional[int] = None
    gamma: tuple[int, ...] = ()


def check_msrd_conditions(spec: MooreSpec) -> ConditionReport:
    """Condition 1: dim H_i = r.  Condition 2: H_i ∩ Σ_{j∈Γ} H_j = 0 for |Γ| <= min(k, μ) - 1.

    Only sets Γ of the maximal size are checked: a trivial intersection with
    a sum implies one with every partial sum.
    """
    H = spec.subspaces()
    for i, h in enumerate(H):
        if h.dim != spec.r:
            return ConditionReport(False, f"dim H_{i + 1} = {h.dim} < r = {spec.r}", 1, i)
    size = min(spec.k, spec.mu) - 1
    if size < 1:
        return ConditionReport(True)
    for i, h in enumerate(H):
        others = [j for j in range(spec.mu) if j != i]
        for gamma in combinations(others, size):
            if not sum_intersects_trivially(h, [H[j] for j in gamma]):
                names = ", ".join(str(j + 1) for j in gamma)
                return ConditionReport(
                    False, f"H_{i + 1} meets the sum of H_j for j in {{{names}}}", 2, i, gamma
                )
    return ConditionReport(True)


def _reordered_spec(spec: MooreSpec, rows: np.ndarray, tail_rows: Sequence[int]) -> ExtensionSpec:
    order = list(tail_rows) + [i for i in range(rows.shape[0]) if i not in tail_rows]
    return ExtensionSpec(spec.tower, rows[order], len(tail_rows), spec.weight, "hamming")


def doubly_tail_rows(k: int) -> list[int]:
    return [0, k - 1]


def doubly_extension_spec(spec: MooreSpec) -> ExtensionSpec:
    """Rows 1 and k moved to the front so the generic framework sees t = 2."""
    if spec.k < 2:
        raise BadK("doubly extended codes need k >= 2")
    return _reordered_spec(spec, moore_matrix(spec), doubly_tail_rows(spec.k))


def doubly_extend(spec: MooreSpec) -> LinearCode:
    """C^e_k(a, β): M_k with tail (1, 0) on row 1 and (0, 1) on row k."""
    ext = multiply_extend(doubly_extension_spec(spec))
    k = spec.k
    back = [0] + list(range(2, k)) + [1]
    return LinearCode(spec.tower, ext.generator[back], ext.weight)


def _check_triple(spec: MooreSpec):
    if spec.k != 3:
        raise BadK("triply extended codes are 3-dimensional")
    if spec.ell != spec.tower.q - 1:
        raise TooManyBlocks(f"triple extension uses ell = q - 1 = {spec.tower.q - 1} blocks")


def triply_extension_spec(spec: MooreSpec) -> ExtensionSpec:
    _check_triple(spec)
    return ExtensionSpec(spec.tower, moore_matrix(spec), 3, spec.weight, "hamming")


def triply_extend(spec: MooreSpec) -> LinearCode:
    """Rows β, a_b β^q, a_b^(q+1) β^(q^2) with the 3 x 3 identity as tail.

    Built directly rather than through the lattice framework so that n < 3
    is allowed: the identity tail keeps the generator full rank.
    """
    _check_triple(spec)
    G = np.hstack([moore_rows(spec, 3), np.eye(3, dtype=np.int64)])
    return LinearCode(spec.tower, G, Composite.of([spec.weight, Hamming(3)]))


def triple_extension_predicted(q: int, m: int) -> bool:
    """Full-length triple extension is MSRD exactly when q is even and m is odd."""
    return q % 2 == 0 and m % 2 == 1


def contains_subfield(tower: FieldTower, h: SubspaceFq, degree: int) -> bool:
    if tower.m % degree:
        return False
    sub = subfield_elements(tower, degree)
    return all(h.contains(x) for x in sub)


def triple_extension_prediction(spec: MooreSpec) -> Optional[bool]:
    """Predicted MSRD verdict for ``triply_extend(spec)``; None if no result applies.

    True for q even, m odd (given Conditions 1-2). False when Conditions
    1-2 fail, when m is even and some H_i contains F_{q^2}, or when q and m
    are odd and the H_i cover F_{q^m}.
    """
    T = spec.tower
    if not check_msrd_conditions(spec).ok:
        return False
    if triple_extension_predicted(T.q, T.m):
        return True
    H = spec.subspaces()
    if T.m % 2 == 0 and any(contains_subfield(T, h, 2) for h in H):
        return False
    if T.q % 2 == 1 and T.m % 2 == 1 and T.order <= EXHAUSTIVE_CAP and union_covers(T, H):
        return False
    return None


# ---------------------------------------------------------------------------
# rank-metric tail
# ---------------------------------------------------------------------------


def _check_tail(spec: MooreSpec, a: int, b: int, c: int, d: int):
    if spec.k != 2:
        raise BadK("the rank-tail construction is 2-dimensional")
    if spec.ell != spec.tower.q - 1:
        raise TooManyBlocks("the rank-tail construction uses ell = q - 1")
    if (0, 0) in {(a, c), (b, d), (a, b), (c, d)}:
        raise BadTail("(0, 0) must not be one of (a,c), (b,d), (a,b), (c,d)")


def rank_tail_code(spec: MooreSpec, a: int, b: int, c: int, d: int) -> LinearCode:
    """Rows of M_2 with tails (a, c) and (b, d), rank metric on the tail."""
    _check_tail(spec, a, b, c, d)
    G = np.hstack([moore_matrix(spec), np.array([[a, c], [b, d]], dtype=np.int64)])
    return LinearCode(spec.tower, G, Composite.of([spec.weight, Rank(2)]))


def forbidden_set(spec: MooreSpec) -> set[int]:
    """{a_i β^(q-1) : β ∈ ∪H_j, β ≠ 0}."""
    T = spec.tower
    support: set[int] = set()
    for h in spec.subspaces():
        support |= h.elements()
    support.discard(0)
    return {T.mul(ai, T.pow(x, T.q - 1)) for ai in spec.a for x in support}


@dataclass(frozen=True)
class RankTailResult:
    msrd: bool
    witness_tau: Optional[int] = None
    reason: str = ""


def rank_tail_criterion(spec: MooreSpec, a: int, b: int, c: int, d: int) -> RankTailResult:
    """MSRD test for the rank-tail double extension by scanning τ ∈ F_{q^m}^*.

    A τ is bad when (a + τb, c + τd) is F_q-dependent and -1/τ lies in the
    forbidden set. A τ that kills the tail completely, a + τb = c + τd = 0,
    is always bad: the codeword row_1 + τ·row_2 then has weight at most n.
    """
    _check_tail(spec, a, b, c, d)
    T = spec.tower
    if T.order > EXHAUSTIVE_CAP:
        raise SizeCapExceeded("criterion scan limited to small fields")
    bad = forbidden_set(spec)
    for tau in T.nonzero():
        u = T.add(a, T.mul(tau, b))
        v = T.add(c, T.mul(tau, d))
        if fq_rank(T, [u, v]) > 1:
            continue
        if u == 0 and v == 0:
            return RankTailResult(False, tau, "tail vanishes")
        if T.neg(T.inv(tau)) in bad:
            return RankTailResult(False, tau, "-1/tau in forbidden set")
    return RankTailResult(True)


# ---------------------------------------------------------------------------
# one-weight criteria
# ---------------------------------------------------------------------------


def _check_one_weight(spec: MooreSpec):
    if spec.k != 2:
        raise BadK("the one-weight criterion concerns 2-dimensional codes")
    if spec.ell != spec.tower.q - 1:
        raise TooManyBlocks("the one-weight criterion uses ell = q - 1")
    _require_k_le_n(spec)


@dataclass(frozen=True)
class OneWeightResult:
    one_weight: bool
    distribution: Optional[WeightDistribution] = None


def one_weight_verdict(spec: MooreSpec) -> OneWeightResult:
    """The doubly extended 2-dimensional code is one-weight iff ∪H_i = F_{q^m}."""
    _check_one_weight(spec)
    return OneWeightResult(union_covers(spec.tower, spec.subspaces()))


def one_weight_by_enumeration(spec: MooreSpec, cap: int = DEFAULT_CAP) -> OneWeightResult:
    _check_one_weight(spec)
    dist = weight_distribution(doubly_extend(spec), cap)
    return OneWeightResult(dist.is_one_weight, dist)


@dataclass(frozen=True)
class TripleOneWeightResult:
    one_weight: bool
    distribution: WeightDistribution
    min_weight: int
    heavy_weight: int
    heavy_codeword: list[int]
    heavy_pair: Optional[tuple[int, int]]


def rootless_pairs(spec: MooreSpec) -> Iterator[tuple[int, int]]:
    """(λ, ν) ∈ (F^*)^2 such that β^3 + νβ + λ has no root β ∈ ∪H_i, β ≠ 0."""
    T = spec.tower
    support: set[int] = set()
    for h in spec.subspaces():
        support |= h.elements()
    support.discard(0)
    roots = np.array(sorted(support), dtype=np.int64)
    cubes = T.vmul(T.vmul(roots, roots), roots)
    for nu in T.nonzero():
        # β^3 + νβ + λ = 0  ⇔  λ = -(β^3 + νβ)
        hit = set(T.vneg(T.vadd(cubes, T.vmul(nu, roots))).tolist())
        for lam in T.nonzero():
            if lam not in hit:
                yield lam, nu


def triple_one_weight_check(spec: MooreSpec, cap: int = DEFAULT_CAP) -> TripleOneWeightResult:
    """Weight distribution of the triply extended code for q = 2, plus witnesses."""
    T = spec.tower
    if T.q != 2:
        raise ParameterError("this check is for q = 2")
    code = triply_extend(spec)
    dist = weight_distribution(code, cap)
    heavy_w, heavy = max_weight_codeword(code, cap)
    pair = next(rootless_pairs(spec), None)
    return TripleOneWeightResult(
        one_weight=dist.is_one_weight,
        distribution=dist,
        min_weight=dist.min_nonzero,
        heavy_weight=heavy_w,
        heavy_codeword=heavy,
        heavy_pair=pair,
    )


def pair_codeword(spec: MooreSpec, lam: int, nu: int) -> np.ndarray:
    """c_{λ,ν} = λ·row_1 + ν·row_2 + row_3 of the triply extended generator."""
    return triply_extend(spec).encode([[lam, nu, 1]])[0]


@dataclass(frozen=True)
class CubicWitness:
    f: tuple[int, int, int, int]
    lam: int
    nu: int
    shifted: tuple[int, ...]


def depressed_cubic_witness(tower: FieldTower) -> CubicWitness:
    """First irreducible f = x^3 + a x^2 + b x + c with b ≠ a^2, b ≠ 1, and f(x + a).

    In characteristic 2, f(x + a) = x^3 + (a^2 + b) x + f(a), so ν = a^2 + b
    and λ = f(a) are both nonzero and x^3 + νx + λ has no root in the field.
    The shift is computed by explicit polynomial substitution.
    """
    if tower.p != 2:
        raise ParameterError("the depressed-cubic argument is for characteristic 2")
    T = tower
    for c in T.nonzero():
        for b in T.elements():
            for a in T.elements():
                if b == T.mul(a, a) or b == 1:
                    continue
                f = (c, b, a, 1)
                if any(_eval(T, f, x) == 0 for x in T.elements()):
                    continue
                shifted = _taylor_shift(T, f, a)
                if shifted[2] != 0:
                    raise AssertionError("shift by a must kill the x^2 term in characteristic 2")
                return CubicWitness(f, lam=shifted[0], nu=shifted[1], shifted=tuple(shifted))
    raise AssertionError("an irreducible cubic with b != a^2, b != 1 must exist")


def _eval(T: FieldTower, poly: Sequence[int], x: int) -> int:
    acc = 0
    for coef in reversed(poly):
        acc = T.add(T.mul(acc, x), coef)
    return acc


def _taylor_shift(T: FieldTower, poly: Sequence[int], s: int) -> list[int]:
    """Coefficients of poly(x + s)."""
    out: list[int] = []
    power = [1]
    lin = [s, 1]
    for coef in poly:
        term = [T.mul(coef, p) for p in power]
        out = [T.add(out[i] if i < len(out) else 0, term[i] if i < len(term) else 0)
               for i in range(max(len(out), len(term)))]
        power = _pmul(T, power, lin)
    out += [0] * (len(poly) - len(out))
    return out
