from __future__ import annotations

import itertools

import numpy as np
import pytest

from msrdkit.codes import LinearCode, attains_singleton, dual, min_distance
from msrdkit.errors import BadT, DependentRows, LatticePropertyViolated, ParameterError
from msrdkit.extend import (
    ExtensionLattice,
    ExtensionSpec,
    LatticeMember,
    build_lattice,
    check_lattice,
    dual_lattice,
    extended_distance_formula,
    lattice_to_json,
    multiply_extend,
    singleton_lattice_verdict,
    subsets,
)
from msrdkit.field import make_tower
from msrdkit.linalg import rank, same_rowspace
from msrdkit.metrics import Hamming, SumRank
from msrdkit.moore import MooreSpec, doubly_extension_spec, make_spec

F2 = make_tower(2, 1, 1)
F4 = make_tower(2, 1, 2)
F8 = make_tower(2, 1, 3)


def _random_spec(rng, T, tail="hamming") -> ExtensionSpec:
    while True:
        n = int(rng.integers(1, 6))
        k = int(rng.integers(1, min(n, 3) + 1))
        t = int(rng.integers(1, min(k, 2) + 1))
        G = rng.integers(0, T.order, size=(k, n))
        if rank(T, G) == k:
            w = SumRank(1, n) if rng.random() < 0.5 else Hamming(n)
            return ExtensionSpec(T, G, t, w, tail)


def test_subset_order():
    assert list(subsets(2)) == [(), (0,), (1,), (0, 1)]


def test_repetition_extension():
    spec = ExtensionSpec(F2, [[1, 1]], 1, Hamming(2))
    code = multiply_extend(spec)
    assert code.generator.tolist() == [[1, 1, 1]]
    assert min_distance(code) == 3


def test_spec_validation():
    with pytest.raises(BadT):
        ExtensionSpec(F4, [[1, 2]], 2, Hamming(2))
    with pytest.raises(BadT):
        ExtensionSpec(F4, [[1, 2]], 0, Hamming(2))
    with pytest.raises(DependentRows):
        ExtensionSpec(F4, [[1, 2], [2, 3]], 1, Hamming(2))
    with pytest.raises(ParameterError):
        ExtensionSpec(F4, [[1, 2]], 1, Hamming(2), tail="sumrank")


def test_lattice_members():
    spec = ExtensionSpec(F8, [[1, 1, 1], [1, 2, 4], [1, 4, 6]], 2, Hamming(3))
    lat = build_lattice(spec)
    assert same_rowspace(F8, lat.members[()].code.generator, spec.base_rows[2:])
    assert same_rowspace(F8, lat.members[(0, 1)].code.generator, spec.base_rows)
    full = ExtensionSpec(F8, spec.base_rows[:2], 2, Hamming(3))
    lat = build_lattice(full)
    assert lat.members[()].code.k == 0
    assert lat.members[()].d == 4


def test_formula_arithmetic():
    lat = ExtensionLattice(t=1, n=6, k=2, members={(): LatticeMember(None, 5), (0,): LatticeMember(None, 3)})
    assert extended_distance_formula(lat) == 4


def test_formula_on_doubly_extended_lrs():
    spec = doubly_extension_spec(make_spec(F8, 1, 3, 2))
    lat = build_lattice(spec)
    assert extended_distance_formula(lat) == 4 == spec.n - spec.k + 3


def test_formula_equals_brute_force_random():
    rng = np.random.default_rng(10)
    for _ in range(60):
        spec = _random_spec(rng, F4)
        lat = build_lattice(spec)
        assert extended_distance_formula(lat) == min_distance(multiply_extend(spec))


def test_rank_tail_t1_is_covered_and_t2_is_refused():
    rng = np.random.default_rng(11)
    for _ in range(20):
        spec = _random_spec(rng, F4, tail="rank")
        lat = build_lattice(spec)
        if spec.t == 1:
            assert extended_distance_formula(lat, "rank") == min_distance(multiply_extend(spec))
        else:
            with pytest.raises(ParameterError):
                extended_distance_formula(lat, "rank")


def test_rank_tail_t2_breaks_the_formula():
    """Tail (u, u) with u in F_q has rank weight 1, not 2."""
    spec = ExtensionSpec(F4, [[1, 0], [0, 1]], 2, Hamming(2), "rank")
    lat = build_lattice(spec)
    hamming_formula = min(m.d + len(I) for I, m in lat.members.items())
    assert hamming_formula == 2
    # (1, 1) * G = (1, 1 | 1, 1): base weight 2, tail weight 1
    assert min_distance(multiply_extend(spec)) == 2
    spec = ExtensionSpec(F4, [[1, 1], [1, 2]], 2, Hamming(2), "rank")
    lat = build_lattice(spec)
    assert min(m.d + len(I) for I, m in lat.members.items()) == 3
    assert min_distance(multiply_extend(spec)) == 2


def test_singleton_lattice_verdict_both_directions():
    rng = np.random.default_rng(12)
    seen = set()
    for _ in range(60):
        spec = _random_spec(rng, F8)
        lat = build_lattice(spec)
        ext = attains_singleton(multiply_extend(spec)).attains
        assert singleton_lattice_verdict(lat).extended_attains == ext
        seen.add(ext)
    assert seen == {True, False}


def _all_square_minors_invertible(T, G) -> bool:
    k, n = G.shape
    for s in range(1, k + 1):
        for rows in itertools.combinations(range(k), s):
            for cols in itertools.combinations(range(n), s):
                if rank(T, G[np.ix_(rows, cols)]) < s:
                    return False
    return True


def test_t_equals_k_hamming_matches_square_submatrix_test():
    rng = np.random.default_rng(13)
    seen = set()
    for _ in range(80):
        k = int(rng.integers(1, 3))
        n = int(rng.integers(k, 5))
        G = rng.integers(0, 4, size=(k, n))
        if rank(F4, G) < k:
            continue
        spec = ExtensionSpec(F4, G, k, Hamming(n))
        verdict = singleton_lattice_verdict(build_lattice(spec)).extended_attains
        assert verdict == _all_square_minors_invertible(F4, G)
        seen.add(verdict)
    assert seen == {True, False}


def test_moore_spec_violating_condition_2_gives_witness():
    spec = MooreSpec(F8, (1,), (1, 2, 2), mu=3, r=1, k=2)
    verdict = singleton_lattice_verdict(build_lattice(doubly_extension_spec(spec)))
    assert not verdict.extended_attains
    assert verdict.witnesses


def test_dual_lattice_t1_and_dimensions():
    rng = np.random.default_rng(14)
    for _ in range(20):
        spec = _random_spec(rng, F4)
        lat = build_lattice(spec)
        dl = dual_lattice(lat, F4, with_distances=True)
        for I, m in dl.members.items():
            comp = lat.complement(I)
            assert m.code.k == spec.n - spec.k - len(comp) + spec.t
            expected = dual(lat.members[comp].code)
            assert same_rowspace(F4, m.code.generator, expected.generator) or m.code.k == 0
        if spec.t == 1:
            assert same_rowspace(F4, dl.members[()].code.generator, dual(lat.members[(0,)].code).generator) \
                or dl.members[()].code.k == 0


def test_check_lattice_rejects_non_lattice():
    a = LinearCode(F4, [[1, 0]], Hamming(2))
    b = LinearCode(F4, [[0, 1]], Hamming(2))
    zero = LinearCode(F4, np.zeros((0, 2), dtype=np.int64), Hamming(2))
    good = {(): zero, (0,): a, (1,): b, (0, 1): LinearCode(F4, np.eye(2, dtype=np.int64), Hamming(2))}
    check_lattice(F4, good, 2)
    bad = dict(good)
    bad[(0, 1)] = a
    with pytest.raises(LatticePropertyViolated):
        check_lattice(F4, bad, 2)


def test_lattice_json():
    lat = build_lattice(ExtensionSpec(F4, [[1, 2], [1, 3]], 2, Hamming(2)))
    recs = lattice_to_json(lat)
    assert [r["subset"] for r in recs] == [0, 1, 2, 3]
    assert recs[0]["d"] == 3
