"""Tanner-graph metrics: girth, degree profiles, and girth growth reports."""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ValidationError


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite graph with variable nodes ``0..n-1`` and check nodes ``0..m-1``."""

    n_vars: int
    n_checks: int
    var_checks: tuple[tuple[int, ...], ...]
    check_vars: tuple[tuple[int, ...], ...]

    @classmethod
    def from_matrix(cls, H) -> TannerGraph:
        dense = _dense(H)
        m, n = dense.shape
        return cls(
            n_vars=n,
            n_checks=m,
            var_checks=tuple(tuple(np.flatnonzero(dense[:, j]).tolist()) for j in range(n)),
            check_vars=tuple(tuple(np.flatnonzero(dense[i]).tolist()) for i in range(m)),
        )

    def edges(self) -> list[tuple[int, int]]:
        return [(c, v) for c, vs in enumerate(self.check_vars) for v in vs]


def _dense(H) -> np.ndarray:
    if hasattr(H, "to_dense"):
        return H.to_dense()
    dense = np.asarray(H, dtype=np.uint8)
    if dense.ndim != 2:
        raise ValidationError("expected a 2D matrix")
    return dense


def _csr(dense: np.ndarray):
    """Adjacency of the Tanner graph; nodes ``0..n-1`` are variables, ``n..n+m-1`` checks."""
    m, n = dense.shape
    rows, cols = np.nonzero(dense)
    src = np.concatenate([cols, rows + n])
    dst = np.concatenate([rows + n, cols])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    ptr = np.zeros(n + m + 1, dtype=np.int64)
    np.add.at(ptr, src + 1, 1)
    return np.cumsum(ptr), dst.astype(np.int64)


@njit(cache=True, nogil=True)
def _girth_bfs(ptr, adj, n_sources, n_nodes, limit):
    best = limit
    dist = np.full(n_nodes, -1, dtype=np.int64)
    parent = np.full(n_nodes, -1, dtype=np.int64)
    queue = np.empty(n_nodes, dtype=np.int64)
    for s in range(n_sources):
        head = 0
        tail = 1
        queue[0] = s
        dist[s] = 0
        parent[s] = -1
        while head < tail:
            u = queue[head]
            head += 1
            if 2 * dist[u] >= best:
                break
            for e in range(ptr[u], ptr[u + 1]):
                w = adj[e]
                if w == parent[u]:
                    continue
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue[tail] = w
                    tail += 1
                else:
                    c = dist[u] + dist[w] + 1
                    if c < best:
                        best = c
        for i in range(tail):
            dist[queue[i]] = -1
            parent[queue[i]] = -1
    return best


def girth(H) -> float:
    """Length of the shortest cycle of the Tanner graph of ``H``; ``inf`` if acyclic."""
    dense = _dense(H)
    m, n = dense.shape
    if m == 0 or n == 0:
        return math.inf
    ptr, adj = _csr(dense)
    limit = 2 * (n + m) + 2
    g = _girth_bfs(ptr, adj, n, n + m, limit)
    return math.inf if g >= limit else int(g)


def degree_profile(H) -> tuple[dict[int, int], dict[int, int]]:
    """Histograms ``{weight: count}`` of row weights and column weights."""
    dense = _dense(H)
    rows = Counter(dense.sum(axis=1).astype(int).tolist())
    cols = Counter(dense.sum(axis=0).astype(int).tolist())
    return dict(sorted(rows.items())), dict(sorted(cols.items()))


@dataclass(frozen=True)
class GirthRow:
    label: str
    n: int
    d_c: int
    girth_x: float
    girth_z: float
    growth: float

    def cells(self) -> list[str]:
        def fmt(g):
            return "inf" if math.isinf(g) else str(int(g))

        return [self.label, str(self.n), str(self.d_c), fmt(self.girth_x),
                fmt(self.girth_z), f"{self.growth:.4f}"]


GIRTH_HEADER = ["code", "n", "d_c", "girth_x", "girth_z", "log_n_over_log_2dc"]


def girth_scaling_report(codes) -> list[GirthRow]:
    """Observed girths next to ``log n / log(2 d_c)`` for each code."""
    codes = list(codes)
    if len(codes) < 2:
        raise ValidationError("a scaling report needs at least two codes")
    out = []
    for code in codes:
        d_c = int(code.hx.row_weights().max())
        out.append(
            GirthRow(
                label=code.label,
                n=code.n,
                d_c=d_c,
                girth_x=code.girth_x,
                girth_z=code.girth_z,
                growth=math.log(code.n) / math.log(2 * d_c),
            )
        )
    return out


def format_report(rows: list[GirthRow], fmt: str = "text") -> str:
    table = [GIRTH_HEADER] + [r.cells() for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(table)
        return buf.getvalue()
    widths = [max(len(row[i]) for row in table) for i in range(len(GIRTH_HEADER))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table
    ) + "\n"
