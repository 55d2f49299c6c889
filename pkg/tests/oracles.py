"""Brute-force reference implementations shared by the tests."""

import math

import numpy as np


def row_int(row):
    return int("".join(str(int(b)) for b in row[::-1]) or "0", 2)


def span_oracle(dense):
    """Every GF(2) combination of the rows, as a set of ints."""
    span = {0}
    for row in dense:
        v = row_int(row)
        span |= {s ^ v for s in span}
    return span


def brute_girth(dense, cap=None):
    """Shortest cycle by bounded DFS over simple paths.

    For each candidate length L (even, ascending) look for a simple cycle of
    exactly L nodes whose smallest node is the DFS start.
    """
    m, n = dense.shape
    adj = {("v", j): [("c", i) for i in np.flatnonzero(dense[:, j])] for j in range(n)}
    adj.update({("c", i): [("v", j) for j in np.flatnonzero(dense[i])] for i in range(m)})
    order = {node: k for k, node in enumerate(sorted(adj))}
    cap = cap or 2 * min(m, n)

    def has_cycle(start, length):
        def dfs(node, depth, seen):
            for nxt in adj[node]:
                if nxt == start and depth == length:
                    return True
                if nxt in seen or order[nxt] < order[start] or depth >= length:
                    continue
                seen.add(nxt)
                if dfs(nxt, depth + 1, seen):
                    return True
                seen.discard(nxt)
            return False

        return dfs(start, 1, {start})

    for length in range(4, cap + 1, 2):
        if any(has_cycle(s, length) for s in adj):
            return length
    return math.inf
