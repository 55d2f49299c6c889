"""Margulis-style generator sets for SL(2, p).

Each generator is the conjugate ``C @ [[1, eta], [0, 1]] @ C^-1`` of an
elementary matrix by an integer lift ``C = [[m, a], [q, b]]`` of a coprime
pair ``(m, q)``.  Before reduction every generator is congruent to the
identity mod ``eta``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConsistencyError, ExhaustionError, LiftError, ValidationError
from .sl2 import GroupElement, inverse, is_prime

#: Largest eta tried by the automatic policy before giving up.
AUTO_ETA_LIMIT = 256


@dataclass(frozen=True, order=True)
class CoprimePair:
    m: int
    q: int

    def __post_init__(self) -> None:
        if self.m < 0 or self.q < 0:
            raise ValidationError(f"pair ({self.m}, {self.q}) has a negative entry")
        if math.gcd(self.m, self.q) != 1:
            raise ValidationError(f"pair ({self.m}, {self.q}) is not coprime")

    def as_list(self) -> list[int]:
        return [self.m, self.q]


@dataclass(frozen=True)
class IntegerLift:
    """Integer matrix ``[[m, a], [q, b]]`` with determinant 1."""

    m: int
    a: int
    q: int
    b: int
    eta: int

    def __post_init__(self) -> None:
        if self.m * self.b - self.a * self.q != 1:
            raise ValidationError(f"lift {self.matrix} does not have determinant 1")
        if 2 * abs(self.a) >= self.eta or 2 * abs(self.b) >= self.eta:
            raise ValidationError(f"lift {self.matrix} exceeds |a|, |b| < {self.eta}/2")

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.m, self.a), (self.q, self.b))

    def as_list(self) -> list[int]:
        return [self.m, self.a, self.q, self.b]


def enumerate_coprime_pairs(eta: int) -> list[CoprimePair]:
    """All coprime ``(m, q)`` with ``0 <= m, q <= eta // 2``, lexicographic."""
    if eta < 2:
        raise ValidationError(f"eta must be at least 2, got {eta}")
    h = eta // 2
    return [
        CoprimePair(m, q)
        for m in range(h + 1)
        for q in range(h + 1)
        if math.gcd(m, q) == 1
    ]


def _small_ints(eta: int):
    """Integers with ``|x| < eta/2`` in order 0, 1, -1, 2, -2, ..."""
    yield 0
    x = 1
    while 2 * x < eta:
        yield x
        yield -x
        x += 1


def lift_pair(pair: CoprimePair, eta: int) -> IntegerLift:
    """Complete ``(m, q)`` to an integer matrix of determinant 1 with small entries.

    Among admissible ``(a, b)`` the smallest ``|a|`` wins, non-negative ``a``
    before negative, and likewise for ``b``.
    """
    m, q = pair.m, pair.q
    for a in _small_ints(eta):
        if m == 0:
            if -q * a != 1:
                continue
            for b in _small_ints(eta):
                return IntegerLift(m, a, q, b, eta)
            continue
        num = 1 + q * a
        if num % m:
            continue
        b = num // m
        if 2 * abs(b) < eta:
            return IntegerLift(m, a, q, b, eta)
    raise LiftError(f"no lift of ({m}, {q}) with |a|, |b| < {eta}/2")


def integer_generator(lift: IntegerLift) -> tuple[int, int, int, int]:
    """``C @ [[1, eta], [0, 1]] @ C^-1`` over the integers, row-major."""
    m, a, q, b, eta = lift.m, lift.a, lift.q, lift.b, lift.eta
    # C @ U with U = [[1, eta], [0, 1]]
    cu = (m, m * eta + a, q, q * eta + b)
    # C^-1 is the adjugate since det C = 1
    ci = (b, -a, -q, m)
    g = (
        cu[0] * ci[0] + cu[1] * ci[2],
        cu[0] * ci[1] + cu[1] * ci[3],
        cu[2] * ci[0] + cu[3] * ci[2],
        cu[2] * ci[1] + cu[3] * ci[3],
    )
    ident = (1, 0, 0, 1)
    if any((x - y) % eta for x, y in zip(g, ident)):
        raise ConsistencyError(f"generator {g} is not congruent to I mod {eta}")
    return g


def make_generator(lift: IntegerLift, p: int) -> GroupElement:
    """Reduce the integer generator of ``lift`` mod ``p``.

    The result may be the identity (when ``p`` divides ``eta``); callers
    screen for that.
    """
    return GroupElement(integer_generator(lift), p)


@dataclass(frozen=True)
class GeneratorSpec:
    p: int
    eta: int
    pairs_a: tuple[CoprimePair, ...]
    pairs_b: tuple[CoprimePair, ...]
    lifts_a: tuple[IntegerLift, ...]
    lifts_b: tuple[IntegerLift, ...]
    set_a: tuple[GroupElement, ...]
    set_b: tuple[GroupElement, ...]
    inverse_collisions: tuple[tuple[int, int], ...] = ()
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def r(self) -> int:
        return len(self.set_a) + len(self.set_b)

    @property
    def pairs(self) -> tuple[CoprimePair, ...]:
        return self.pairs_a + self.pairs_b

    @property
    def lifts(self) -> tuple[IntegerLift, ...]:
        return self.lifts_a + self.lifts_b

    @property
    def eta_bound(self) -> float:
        """The heuristic ``sqrt(7 r)`` bound on eta, kept for diagnostics."""
        return math.sqrt(7 * self.r)

    def to_json(self) -> dict:
        """Pairs and lifts are listed A first, then B."""
        return {
            "p": self.p,
            "eta": self.eta,
            "pairs": [x.as_list() for x in self.pairs],
            "lifts": [x.as_list() for x in self.lifts],
            "A": [list(g.entries) for g in self.set_a],
            "B": [list(g.entries) for g in self.set_b],
            "inverse_collisions": [list(c) for c in self.inverse_collisions],
        }

    @classmethod
    def from_json(cls, doc: dict) -> GeneratorSpec:
        p, eta = int(doc["p"]), int(doc["eta"])
        size_a = len(doc["A"])
        pairs = [CoprimePair(*x) for x in doc["pairs"]]
        lifts = [IntegerLift(m, a, q, b, eta) for m, a, q, b in doc["lifts"]]
        if len(pairs) != size_a + len(doc["B"]) or len(lifts) != len(pairs):
            raise ValidationError("pair, lift and generator counts disagree")
        for pair, lift in zip(pairs, lifts):
            if (pair.m, pair.q) != (lift.m, lift.q):
                raise ValidationError(f"lift {lift.as_list()} does not extend {pair.as_list()}")
        return cls(
            p=p,
            eta=eta,
            pairs_a=tuple(pairs[:size_a]),
            pairs_b=tuple(pairs[size_a:]),
            lifts_a=tuple(lifts[:size_a]),
            lifts_b=tuple(lifts[size_a:]),
            set_a=tuple(GroupElement(tuple(g), p) for g in doc["A"]),
            set_b=tuple(GroupElement(tuple(g), p) for g in doc["B"]),
            inverse_collisions=tuple(tuple(c) for c in doc.get("inverse_collisions", [])),
        )


def check_spec(spec: GeneratorSpec, allow_inverse_collisions: bool = False) -> None:
    """Validity screen: distinct, non-identity, and (by default) inverse-free."""
    gens = spec.set_a + spec.set_b
    for lift, g in zip(spec.lifts, gens):
        if make_generator(lift, spec.p) != g:
            raise ValidationError(f"generator {g} does not match its lift {lift.matrix}")
    if any(g.is_identity() for g in gens):
        raise ValidationError("a generator reduces to the identity mod p")
    if len(set(gens)) != len(gens):
        raise ValidationError("generators are not pairwise distinct mod p")
    if not allow_inverse_collisions:
        gen_set = set(gens)
        for g in gens:
            if inverse(g) in gen_set:
                raise ValidationError(f"{g} collides with the inverse of another generator")


def _screen(
    p: int,
    eta: int,
    pairs: Sequence[CoprimePair],
    r: int,
    allow_inverse_collisions: bool,
):
    """Greedily accept pairs in order until ``r`` valid generators are found."""
    chosen: list[tuple[CoprimePair, IntegerLift, GroupElement]] = []
    collisions: list[tuple[int, int]] = []
    rejected: list[str] = []
    seen: dict[GroupElement, int] = {}
    for pair in pairs:
        try:
            lift = lift_pair(pair, eta)
        except LiftError:
            rejected.append(f"{pair.as_list()}: no lift")
            continue
        g = make_generator(lift, p)
        if g.is_identity():
            rejected.append(f"{pair.as_list()}: identity mod {p}")
            continue
        if g in seen:
            rejected.append(f"{pair.as_list()}: duplicates generator {seen[g]}")
            continue
        ginv = inverse(g)
        if ginv in seen or ginv == g:
            if not allow_inverse_collisions:
                rejected.append(f"{pair.as_list()}: inverse of generator {seen.get(ginv)}")
                continue
            collisions.append((seen.get(ginv, len(chosen)), len(chosen)))
        seen[g] = len(chosen)
        chosen.append((pair, lift, g))
        if len(chosen) == r:
            break
    return chosen, collisions, rejected


def build_generating_sets(
    p: int,
    size_a: int,
    size_b: int,
    eta: int | str = "auto",
    seed: int | None = None,
    pairs: Sequence[CoprimePair | Sequence[int]] | None = None,
    allow_inverse_collisions: bool = False,
) -> GeneratorSpec:
    """Build left set A and right set B of Margulis generators mod ``p``.

    Pairs are taken in lexicographic order, shuffled when ``seed`` is given,
    or exactly as supplied through ``pairs``.  The first ``size_a`` screened
    generators go to A and the next ``size_b`` to B.  With ``eta="auto"`` the
    smallest eta with at least ``size_a + size_b + 1`` coprime pairs whose
    screen succeeds is used.
    """
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime")
    if size_a < 1 or size_b < 1:
        raise ValidationError("both generator sets need at least one element")
    r = size_a + size_b
    explicit = None
    if pairs is not None:
        explicit = [x if isinstance(x, CoprimePair) else CoprimePair(*x) for x in pairs]
        if len(set(explicit)) != len(explicit):
            raise ValidationError("explicit pair list contains duplicates")

    if eta == "auto":
        last_error = None
        for e in range(2, AUTO_ETA_LIMIT + 1):
            if explicit is None and len(enumerate_coprime_pairs(e)) < r + 1:
                continue
            try:
                spec = build_generating_sets(
                    p, size_a, size_b, e, seed, explicit, allow_inverse_collisions
                )
            except (ExhaustionError, ValidationError) as exc:
                last_error = exc
                continue
            spec.notes["eta_policy"] = "auto"
            return spec
        raise ExhaustionError(f"no eta <= {AUTO_ETA_LIMIT} yields a valid set: {last_error}")

    eta = int(eta)
    if eta < 2:
        raise ValidationError(f"eta must be at least 2, got {eta}")
    if explicit is not None:
        for pair in explicit:
            if 2 * max(pair.m, pair.q) > eta:
                raise ValidationError(f"pair {pair.as_list()} exceeds eta/2 for eta={eta}")
        order = explicit
    else:
        order = enumerate_coprime_pairs(eta)
        if seed is not None:
            random.Random(seed).shuffle(order)

    chosen, collisions, rejected = _screen(p, eta, order, r, allow_inverse_collisions)
    if len(chosen) < r:
        raise ExhaustionError(
            f"only {len(chosen)} of {r} valid generators for p={p}, eta={eta}; "
            f"rejected: {'; '.join(rejected) or 'none'}"
        )
    a, b = chosen[:size_a], chosen[size_a:]
    spec = GeneratorSpec(
        p=p,
        eta=eta,
        pairs_a=tuple(c[0] for c in a),
        pairs_b=tuple(c[0] for c in b),
        lifts_a=tuple(c[1] for c in a),
        lifts_b=tuple(c[1] for c in b),
        set_a=tuple(c[2] for c in a),
        set_b=tuple(c[2] for c in b),
        inverse_collisions=tuple(collisions),
        notes={"rejected": rejected, "eta_bound": math.sqrt(7 * r)},
    )
    check_spec(spec, allow_inverse_collisions)
    return spec
