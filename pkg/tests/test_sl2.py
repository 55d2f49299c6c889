import itertools
import random

import pytest

from qmargulis.errors import ConstructionError, ResourceError, ValidationError
from qmargulis.sl2 import GroupElement, enumerate_group, group_order, inverse, mul


def E(rows, p):
    return GroupElement.from_rows(rows, p)


def random_element(index, r):
    return index[r.randrange(len(index))]


def test_identity_is_neutral():
    idx = enumerate_group(5)
    ident = GroupElement.identity(5)
    for g in idx.elements[:30]:
        assert mul(ident, g) == g
        assert mul(g, ident) == g


def test_mul_example():
    assert mul(E([[1, 1], [0, 1]], 5), E([[1, 0], [1, 1]], 5)) == E([[2, 1], [1, 1]], 5)


def test_inverse_examples():
    assert inverse(GroupElement.identity(7)) == GroupElement.identity(7)
    assert inverse(E([[1, 1], [0, 1]], 5)) == E([[1, 4], [0, 1]], 5)


def test_inverse_and_involution():
    idx = enumerate_group(7)
    r = random.Random(3)
    for _ in range(100):
        g = random_element(idx, r)
        assert mul(g, inverse(g)).is_identity()
        assert inverse(inverse(g)) == g


def test_modulus_mismatch():
    with pytest.raises(ConstructionError):
        mul(GroupElement.identity(5), GroupElement.identity(7))


def test_rejects_bad_determinant():
    with pytest.raises(ValidationError):
        GroupElement((1, 1, 1, 1), 5)


def test_p2_matches_brute_force():
    brute = [m for m in itertools.product(range(2), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % 2 == 1]
    idx = enumerate_group(2)
    assert len(brute) == 6
    assert [g.entries for g in idx.elements] == sorted(brute)


@pytest.mark.parametrize("p,size", [(2, 6), (3, 24), (5, 120), (7, 336), (11, 1320)])
def test_group_order(p, size):
    idx = enumerate_group(p)
    assert len(idx) == size == group_order(p)


def test_ordering_is_lexicographic():
    idx = enumerate_group(5)
    entries = [g.entries for g in idx.elements]
    assert entries == sorted(entries)


def test_position_map_round_trip():
    idx = enumerate_group(7)
    assert all(idx.index(idx[i]) == i for i in range(len(idx)))


def test_closure_and_associativity():
    idx = enumerate_group(11)
    r = random.Random(0)
    for _ in range(1000):
        x, y = random_element(idx, r), random_element(idx, r)
        a, b, c, d = mul(x, y).entries
        assert (a * d - b * c) % 11 == 1
    for _ in range(100):
        x, y, z = (random_element(idx, r) for _ in range(3))
        assert mul(mul(x, y), z) == mul(x, mul(y, z))


def test_enumerate_validation():
    with pytest.raises(ValidationError):
        enumerate_group(4)
    with pytest.raises(ValidationError):
        enumerate_group(1)
    with pytest.raises(ResourceError):
        enumerate_group(29)
    with pytest.raises(ResourceError):
        enumerate_group(7, max_prime=5)
