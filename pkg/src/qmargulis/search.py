"""Search over eta, pair subsets and A/B splits for high-girth codes."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

from .code import CssCode, assemble_code
from .errors import ExhaustionError, ValidationError
from .generators import build_generating_sets, enumerate_coprime_pairs
from .sl2 import enumerate_group

log = logging.getLogger(__name__)

#: Number of consecutive eta values cycled through by the random candidates.
DEFAULT_ETA_SPAN = 12


@dataclass
class Candidate:
    index: int
    eta: int | None
    seed: int | None
    status: str
    pairs_a: list = field(default_factory=list)
    pairs_b: list = field(default_factory=list)
    girth_x: float | None = None
    girth_z: float | None = None
    k: int | None = None

    def to_json(self) -> dict:
        doc = asdict(self)
        for key in ("girth_x", "girth_z"):
            if doc[key] is not None and math.isinf(doc[key]):
                doc[key] = None
        return doc


@dataclass
class SearchResult:
    code: CssCode | None
    log: list[Candidate]
    target_girth: int
    target_reached: bool
    target_k: int | None = None

    @property
    def k_matched(self) -> bool | None:
        if self.target_k is None or self.code is None:
            return None
        return self.code.k == self.target_k

    @property
    def examined(self) -> int:
        return len(self.log)


def _rank_key(code: CssCode, index: int, target_k: int | None):
    # larger girth, then larger k, then earlier candidate
    return (code.girth, target_k is None or code.k == target_k, code.k, -index)


def candidate_stream(p: int, size_a: int, size_b: int, seed: int, eta_span: int):
    """Yield ``(index, eta, candidate_seed)``; index 0 is the unshuffled auto-eta set."""
    r = size_a + size_b
    eta_lo = 2
    while len(enumerate_coprime_pairs(eta_lo)) < r + 1:
        eta_lo += 1
    yield 0, "auto", None
    i = 1
    while True:
        eta = eta_lo + (i - 1) % eta_span
        yield i, eta, (seed << 32) | i
        i += 1


def search_code(
    p: int,
    size_a: int,
    size_b: int,
    target_girth: int,
    budget: int,
    seed: int = 0,
    eta_span: int = DEFAULT_ETA_SPAN,
    stop_at_target: bool = True,
    target_k: int | None = None,
) -> SearchResult:
    """Examine up to ``budget`` candidates and keep the best (girth, then k).

    With ``stop_at_target`` the search returns as soon as a candidate's
    girth (minimum over hx and hz) reaches ``target_girth`` and, when
    ``target_k`` is given, its dimension equals ``target_k``.  Candidates
    matching ``target_k`` rank above others of the same girth.
    """
    if budget < 1:
        raise ValidationError(f"budget must be at least 1, got {budget}")
    index = enumerate_group(p)
    best: tuple | None = None
    best_code: CssCode | None = None
    seen: set = set()
    entries: list[Candidate] = []
    stream = candidate_stream(p, size_a, size_b, seed, eta_span)
    for _ in range(budget):
        i, eta, cseed = next(stream)
        try:
            spec = build_generating_sets(p, size_a, size_b, eta, seed=cseed)
        except (ExhaustionError, ValidationError) as exc:
            entries.append(Candidate(i, eta if eta != "auto" else None, cseed, f"invalid: {exc}"))
            continue
        entry = Candidate(
            i, spec.eta, cseed, "ok",
            [x.as_list() for x in spec.pairs_a],
            [x.as_list() for x in spec.pairs_b],
        )
        entries.append(entry)
        key = (frozenset(spec.set_a), frozenset(spec.set_b))
        if key in seen:
            entry.status = "duplicate"
            continue
        seen.add(key)
        code = assemble_code(index, spec)
        entry.girth_x, entry.girth_z, entry.k = code.girth_x, code.girth_z, code.k
        rk = _rank_key(code, i, target_k)
        if best is None or rk > best:
            best, best_code = rk, code
            log.debug("candidate %d: girth %s, k %d", i, code.girth, code.k)
        hit_k = target_k is None or code.k == target_k
        if stop_at_target and code.girth >= target_girth and hit_k:
            break
    reached = best_code is not None and best_code.girth >= target_girth
    return SearchResult(best_code, entries, target_girth, reached, target_k)
