import math

import numpy as np
import pytest

from qmargulis.errors import ExhaustionError, LiftError, ValidationError
from qmargulis.generators import (
    CoprimePair,
    GeneratorSpec,
    IntegerLift,
    build_generating_sets,
    enumerate_coprime_pairs,
    integer_generator,
    lift_pair,
    make_generator,
)
from qmargulis.sl2 import inverse


def brute_pairs(eta):
    h = eta // 2
    return [(m, q) for m in range(h + 1) for q in range(h + 1) if math.gcd(m, q) == 1]


def brute_lifts(m, q, eta):
    rng = [x for x in range(-eta, eta + 1) if 2 * abs(x) < eta]
    return [(a, b) for a in rng for b in rng if m * b - q * a == 1]


@pytest.mark.parametrize("eta", range(2, 16))
def test_coprime_pairs_match_exhaustive(eta):
    got = [(x.m, x.q) for x in enumerate_coprime_pairs(eta)]
    assert got == brute_pairs(eta)
    assert all(math.gcd(m, q) == 1 for m, q in got)


def test_coprime_pair_examples():
    as_tuples = lambda e: [(x.m, x.q) for x in enumerate_coprime_pairs(e)]
    assert as_tuples(5) == [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]
    assert as_tuples(2) == [(0, 1), (1, 0), (1, 1)]


def test_coprime_pair_validation():
    with pytest.raises(ValidationError):
        CoprimePair(2, 4)
    with pytest.raises(ValidationError):
        enumerate_coprime_pairs(1)


def test_lift_examples():
    assert lift_pair(CoprimePair(1, 0), 5).matrix == ((1, 0), (0, 1))
    assert lift_pair(CoprimePair(2, 1), 5).matrix == ((2, 1), (1, 1))
    assert lift_pair(CoprimePair(0, 1), 5).matrix == ((0, -1), (1, 0))


@pytest.mark.parametrize("eta", [3, 5, 6, 8, 11, 14])
def test_lift_agrees_with_exhaustive_search(eta):
    for pair in enumerate_coprime_pairs(eta):
        options = brute_lifts(pair.m, pair.q, eta)
        if not options:
            with pytest.raises(LiftError):
                lift_pair(pair, eta)
            continue
        lift = lift_pair(pair, eta)
        assert (lift.a, lift.b) in options
        assert abs(lift.a) == min(abs(a) for a, _ in options)


def test_lift_error_when_no_small_solution():
    with pytest.raises(LiftError):
        lift_pair(CoprimePair(0, 1), 2)


def test_generator_examples():
    g = make_generator(IntegerLift(1, 0, 0, 1, 5), 7)
    assert g.rows() == [[1, 5], [0, 1]]
    lift = IntegerLift(2, 1, 1, 1, 5)
    C = np.array([[2, 1], [1, 1]])
    oracle = C @ np.array([[1, 5], [0, 1]]) @ np.round(np.linalg.inv(C)).astype(int)
    assert tuple(oracle.ravel()) == integer_generator(lift)
    g = make_generator(lift, 7)
    a, b, c, d = g.entries
    assert (a * d - b * c) % 7 == 1
    assert g.entries == tuple(int(x) % 7 for x in oracle.ravel())


@pytest.mark.parametrize("eta", [5, 6, 9, 12])
def test_generators_congruent_to_identity_mod_eta(eta):
    for pair in enumerate_coprime_pairs(eta):
        try:
            lift = lift_pair(pair, eta)
        except LiftError:
            continue
        a, b, c, d = integer_generator(lift)
        assert (a - 1) % eta == b % eta == c % eta == (d - 1) % eta == 0
        assert a * d - b * c == 1


def test_build_sets_p7_auto():
    spec = build_generating_sets(7, 2, 3)
    gens = spec.set_a + spec.set_b
    assert len(spec.set_a) == 2 and len(spec.set_b) == 3
    assert len(set(gens)) == 5
    assert not any(g.is_identity() for g in gens)
    assert len(enumerate_coprime_pairs(spec.eta)) >= 6
    for e in range(2, spec.eta):
        if len(enumerate_coprime_pairs(e)) >= 6:
            with pytest.raises(ExhaustionError):
                build_generating_sets(7, 2, 3, eta=e)


def test_screen_soundness_across_seeds():
    for seed in range(30):
        for p in (5, 7, 11):
            try:
                spec = build_generating_sets(p, 2, 3, eta=6 + seed % 7, seed=seed)
            except ExhaustionError:
                continue
            gens = spec.set_a + spec.set_b
            pool = list(gens) + [inverse(g) for g in gens]
            assert not any(g.is_identity() for g in pool)
            assert len(set(gens)) == 5
            assert not set(gens) & {inverse(g) for g in gens}
            for g in gens:
                a, b, c, d = g.entries
                assert (a * d - b * c) % p == 1


def test_determinism():
    a = build_generating_sets(7, 3, 3, eta=9, seed=4)
    b = build_generating_sets(7, 3, 3, eta=9, seed=4)
    assert a == b


def test_duplicate_explicit_pairs_rejected():
    with pytest.raises(ValidationError):
        build_generating_sets(7, 2, 2, eta=6, pairs=[(1, 1), (1, 2), (1, 1), (2, 1)])


def test_explicit_pairs_too_few_valid():
    with pytest.raises(ExhaustionError):
        build_generating_sets(7, 2, 2, eta=6, pairs=[(1, 1), (1, 2), (2, 1)])


def test_eta_multiple_of_p_exhausts():
    with pytest.raises(ExhaustionError):
        build_generating_sets(5, 2, 3, eta=10)


def test_degree_matches_table():
    spec = build_generating_sets(5, 2, 3)
    assert spec.r == 5


def test_json_round_trip():
    spec = build_generating_sets(11, 2, 3, eta=8, seed=1)
    assert GeneratorSpec.from_json(spec.to_json()) == spec
