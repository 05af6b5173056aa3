"""End-to-end acceptance checks, all by exact enumeration."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from msrdkit.codes import attains_singleton, min_distance, weight_distribution
from msrdkit.errors import BadTail, DependentRows
from msrdkit.extend import (
    ExtensionSpec,
    build_lattice,
    dual_lattice,
    extended_distance_formula,
    multiply_extend,
    singleton_lattice_verdict,
)
from msrdkit.field import make_tower
from msrdkit.linalg import rank, rowspace_contains
from msrdkit.metrics import Hamming, SumRank
from msrdkit.moore import (
    MooreSpec,
    check_msrd_conditions,
    default_field_reduction,
    depressed_cubic_witness,
    doubly_extend,
    field_reduction_beta,
    make_spec,
    moore_verdict,
    pair_codeword,
    rank_tail_code,
    rank_tail_criterion,
    triple_extension_predicted,
    triple_one_weight_check,
    triply_extend,
    union_covers,
)


# ---------------------------------------------------------------------------
# shared random population for criteria 2-4
# ---------------------------------------------------------------------------


def _random_population(count: int = 100, seed: int = 20261014) -> list[ExtensionSpec]:
    rng = np.random.default_rng(seed)
    towers = [make_tower(2, 1, 2), make_tower(2, 1, 3)]
    specs = []
    while len(specs) < count:
        T = towers[len(specs) % 2]
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, min(n, 4) + 1))
        t = int(rng.integers(1, min(k, 2) + 1))
        if rng.random() < 0.5:
            w = Hamming(n)
        else:
            r = int(rng.choice([d for d in range(1, n + 1) if n % d == 0]))
            w = SumRank(n // r, r)
        G = rng.integers(0, T.order, size=(k, n))
        if rank(T, G) < k:
            continue
        specs.append(ExtensionSpec(T, G, t, w, "hamming"))
    return specs


@pytest.fixture(scope="module")
def population():
    specs = _random_population()
    return [(s, build_lattice(s)) for s in specs]


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def test_criterion_01_doubly_extended_reed_solomon_is_mds():
    T = make_tower(2, 3, 1)
    for k in range(2, 7):
        code = doubly_extend(make_spec(T, 1, 1, k))
        assert code.length == 9
        # MDS: d = (n + 2) - k + 1
        assert min_distance(code) == 10 - k


def test_criterion_02_lattice_formula_equals_brute_force(population):
    assert len(population) == 100
    for spec, lat in population:
        assert extended_distance_formula(lat) == min_distance(multiply_extend(spec))


def test_criterion_03_singleton_lattice_equivalence(population):
    attaining = 0
    for spec, lat in population:
        ext = attains_singleton(multiply_extend(spec)).attains
        attaining += ext
        assert ext == singleton_lattice_verdict(lat).extended_attains
    # both directions are exercised
    assert 0 < attaining < len(population)


def test_criterion_04_dual_family_is_a_lattice(population):
    checked = 0
    for spec, lat in population:
        if spec.t != 2:
            continue
        dl = dual_lattice(lat, spec.tower)
        members = {I: m.code.generator for I, m in dl.members.items()}
        for I, J in itertools.product(members, repeat=2):
            union = tuple(sorted(set(I) | set(J)))
            inter = tuple(sorted(set(I) & set(J)))
            n = spec.n
            stacked = np.vstack([members[I].reshape(-1, n), members[J].reshape(-1, n)])
            assert rank(spec.tower, stacked) == members[union].shape[0]
            assert rowspace_contains(spec.tower, members[union], stacked)
            inter_rows = members[inter]
            assert inter_rows.shape[0] == members[I].shape[0] + members[J].shape[0] - rank(spec.tower, stacked)
            assert rowspace_contains(spec.tower, members[I], inter_rows)
            assert rowspace_contains(spec.tower, members[J], inter_rows)
        checked += 1
    assert checked > 0


def test_criterion_05_moore_conditions_both_directions():
    T = make_tower(2, 1, 3)
    for k in (1, 2, 3):
        spec = make_spec(T, 1, 3, k)
        assert check_msrd_conditions(spec).ok
        plain = moore_verdict(spec)
        assert plain.attains
        assert moore_verdict(spec, shifted=True).attains == plain.attains

    T = make_tower(2, 1, 2)
    bad = MooreSpec(T, (1,), (1, 1), mu=2, r=1, k=2)
    report = check_msrd_conditions(bad)
    assert not report.ok and report.condition == 2
    plain = moore_verdict(bad)
    assert not plain.attains
    assert moore_verdict(bad, shifted=True).attains == plain.attains


def test_criterion_06_doubly_extended_moore_codes():
    code = doubly_extend(make_spec(make_tower(2, 1, 3), 1, 3, 2))
    assert code.length == 5
    assert min_distance(code) == 4 == code.length - code.k + 1

    code = doubly_extend(make_spec(make_tower(3, 1, 2), 1, 2, 2))
    assert code.length == 6
    assert min_distance(code) == 5 == code.length - code.k + 1


@pytest.mark.parametrize("p,m,expected", [(2, 3, True), (3, 3, False), (2, 2, False)])
def test_criterion_07_triple_extension_verdicts(p, m, expected):
    spec = make_spec(make_tower(p, 1, m), 1, m, 3)
    code = triply_extend(spec)
    verdict = attains_singleton(code)
    assert verdict.attains == expected
    assert triple_extension_predicted(p, m) == expected
    if expected:
        assert verdict.distance == 4


def test_criterion_08_rank_tail_criterion_matches_brute_force():
    T = make_tower(2, 1, 2)
    spec = make_spec(T, 1, 2, 2)
    single_d = spec.n + 1
    assert not rank_tail_criterion(spec, 1, 0, 0, 1).msrd
    assert min_distance(rank_tail_code(spec, 1, 0, 0, 1)) < single_d

    tails = 0
    for a, b, c, d in itertools.product(range(T.order), repeat=4):
        try:
            code = rank_tail_code(spec, a, b, c, d)
        except (BadTail, DependentRows):
            continue
        tails += 1
        brute = min_distance(code) == single_d
        assert rank_tail_criterion(spec, a, b, c, d).msrd == brute
    assert 0 < tails <= 256


def test_criterion_09_field_reduction_cover():
    T = make_tower(2, 1, 4)
    for mu in range(1, 6):
        _, H = field_reduction_beta(default_field_reduction(T, 2, mu))
        assert union_covers(T, H) == (mu == 5)


def test_criterion_10_one_weight_codes():
    T = make_tower(2, 1, 2)
    dist = weight_distribution(doubly_extend(make_spec(T, 3, 1, 2)))
    assert dist.counts == {0: 1, 4: 15}
    dist = weight_distribution(doubly_extend(make_spec(T, 2, 1, 2)))
    assert len(dist.nonzero_weights) >= 2

    T = make_tower(2, 1, 3)
    spec = make_spec(T, 1, 3, 3)
    assert attains_singleton(triply_extend(spec)).attains
    res = triple_one_weight_check(spec)
    assert res.min_weight == spec.n + 1 == 4
    assert res.heavy_weight == spec.n + 3 == 6
    assert not res.one_weight
    w = depressed_cubic_witness(T)
    c = pair_codeword(spec, w.lam, w.nu)
    assert list(c[-3:]) == [w.lam, w.nu, 1]
    assert triply_extend(spec).weight.batch(T, c[None, :])[0] == 6


def _small_towers(limit: int = 64):
    out = []
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61):
        for e in range(1, 7):
            for m in range(1, 7):
                if p ** (e * m) <= limit:
                    out.append(make_tower(p, e, m))
    return out


def test_criterion_11_exhaustive_property_suites():
    from property_checks import (
        check_field_axioms,
        check_frobenius,
        check_hilbert_90,
        check_norm_surjective,
        check_semilinear_isometry,
        check_weight_axioms,
    )

    towers = _small_towers()
    assert len(towers) > 20
    for T in towers:
        check_field_axioms(T)
        check_frobenius(T)
        check_hilbert_90(T)
        check_norm_surjective(T)
        check_weight_axioms(T)
        check_semilinear_isometry(T)
