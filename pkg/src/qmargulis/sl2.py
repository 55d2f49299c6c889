"""Exact arithmetic in SL(2, p)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ConstructionError, ResourceError, ValidationError

#: Largest prime accepted by :func:`enumerate_group` unless overridden.
DEFAULT_MAX_PRIME = 23


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, order=True)
class GroupElement:
    """A 2x2 matrix ``[[a, b], [c, d]]`` over Z_p with determinant 1.

    Entries are stored as canonical residues in ``[0, p)``.
    """

    entries: tuple[int, int, int, int]
    p: int

    def __post_init__(self) -> None:
        if len(self.entries) != 4:
            raise ValidationError("a group element needs exactly four entries")
        canon = tuple(int(x) % self.p for x in self.entries)
        object.__setattr__(self, "entries", canon)
        a, b, c, d = canon
        if (a * d - b * c) % self.p != 1 % self.p:
            raise ValidationError(f"determinant of {canon} is not 1 mod {self.p}")

    @classmethod
    def from_rows(cls, rows, p: int) -> GroupElement:
        (a, b), (c, d) = rows
        return cls((a, b, c, d), p)

    @classmethod
    def identity(cls, p: int) -> GroupElement:
        return cls((1, 0, 0, 1), p)

    def rows(self) -> list[list[int]]:
        a, b, c, d = self.entries
        return [[a, b], [c, d]]

    def is_identity(self) -> bool:
        return self.entries == (1, 0, 0, 1 % self.p)

    def __mul__(self, other: GroupElement) -> GroupElement:
        return mul(self, other)

    def __repr__(self) -> str:
        return f"GroupElement({self.rows()}, p={self.p})"


def mul(x: GroupElement, y: GroupElement) -> GroupElement:
    if x.p != y.p:
        raise ConstructionError(f"modulus mismatch: {x.p} != {y.p}")
    p = x.p
    a, b, c, d = x.entries
    e, f, g, h = y.entries
    return GroupElement(
        ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p), p
    )


def inverse(x: GroupElement) -> GroupElement:
    a, b, c, d = x.entries
    return GroupElement((d, -b, -c, a), x.p)


@dataclass(frozen=True)
class GroupIndex:
    """All elements of SL(2, p) in lexicographic order, with a reverse lookup."""

    p: int
    elements: tuple[GroupElement, ...]
    position: dict[GroupElement, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> GroupElement:
        return self.elements[i]

    def index(self, g: GroupElement) -> int:
        return self.position[g]

    def left_action(self, s: GroupElement) -> list[int]:
        """Permutation ``i -> index(s * g_i)``."""
        return [self.position[mul(s, g)] for g in self.elements]

    def right_action(self, s: GroupElement) -> list[int]:
        """Permutation ``i -> index(g_i * s)``."""
        return [self.position[mul(g, s)] for g in self.elements]


def group_order(p: int) -> int:
    return (p * p - 1) * p


def enumerate_group(p: int, max_prime: int = DEFAULT_MAX_PRIME) -> GroupIndex:
    """Enumerate SL(2, p).

    Raises :class:`ValidationError` for non-prime ``p`` and
    :class:`ResourceError` when ``p`` exceeds ``max_prime``.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise ValidationError(f"p={p!r} is not prime")
    if p > max_prime:
        raise ResourceError(
            f"p={p} gives |G|={group_order(p)}, above the cap p <= {max_prime}"
        )
    elems = []
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1 % p:
            elems.append(GroupElement((a, b, c, d), p))
    assert len(elems) == group_order(p)
    position = {g: i for i, g in enumerate(elems)}
    return GroupIndex(p=p, elements=tuple(elems), position=position)
