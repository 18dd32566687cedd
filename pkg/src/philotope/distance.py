"""Exact bottleneck distance between persistence diagrams.

The exact value is found by binary search over the finite set of
candidate thresholds (all pairwise L-inf distances plus every point's
distance to the diagonal), testing feasibility at each threshold with
maximum bipartite matching.  A branch-and-bound brute force over all
bijections serves as the independent oracle for small inputs.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .tda import PersistenceDiagram

__all__ = ["BottleneckError", "bottleneck", "bottleneck_bruteforce",
           "hopcroft_karp"]

_INF = float("inf")


class BottleneckError(Exception):
    pass


def _split(dgm: PersistenceDiagram) -> tuple[list[tuple[float, float]], int]:
    finite = [(b, d) for b, d in dgm.points if not math.isinf(d)]
    return finite, len(dgm.points) - len(finite)


def _prepare(A: PersistenceDiagram, B: PersistenceDiagram):
    """Strip essential points (matched to each other at cost 0)."""
    if A.dim != B.dim:
        raise BottleneckError(
            f"dimension mismatch: {A.dim} vs {B.dim}")
    fa, ess_a = _split(A)
    fb, ess_b = _split(B)
    if ess_a != ess_b:
        raise BottleneckError(
            f"essential point counts differ ({ess_a} vs {ess_b}); "
            "no finite-cost matching exists")
    return fa, fb


def hopcroft_karp(adj: list[list[int]], n_right: int) -> int:
    """Maximum matching size; ``adj[i]`` lists right neighbours of left i."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = -1
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == -1:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = -1
        return False

    matching = 0
    while bfs():
        for u in range(n_left):
            if match_l[u] == -1 and dfs(u):
                matching += 1
    return matching


def _saturable(rows: np.ndarray) -> bool:
    """Can every row index be matched to a distinct column of this
    boolean adjacency matrix?"""
    if rows.shape[0] == 0:
        return True
    if rows.shape[0] > rows.shape[1]:
        return False
    adj = [list(np.nonzero(r)[0]) for r in rows]
    return hopcroft_karp(adj, rows.shape[1]) == rows.shape[0]


def bottleneck(A: PersistenceDiagram, B: PersistenceDiagram) -> float:
    """Exact bottleneck distance.

    Feasibility at a threshold requires every point whose diagonal
    distance exceeds the threshold to be matched off-diagonally; by the
    Mendelsohn-Dulmage theorem the two sides can be checked with two
    independent matchings.
    """
    fa, fb = _prepare(A, B)
    if not fa and not fb:
        return 0.0
    pa = np.array(fa, dtype=float).reshape(-1, 2)
    pb = np.array(fb, dtype=float).reshape(-1, 2)
    diag_a = (pa[:, 1] - pa[:, 0]) / 2.0 if len(pa) else np.empty(0)
    diag_b = (pb[:, 1] - pb[:, 0]) / 2.0 if len(pb) else np.empty(0)
    if len(pa) and len(pb):
        cost = np.maximum(
            np.abs(pa[:, 0, None] - pb[None, :, 0]),
            np.abs(pa[:, 1, None] - pb[None, :, 1]))
        candidates = np.concatenate(
            [[0.0], diag_a, diag_b, cost.ravel()])
    else:
        cost = np.zeros((len(pa), len(pb)))
        candidates = np.concatenate([[0.0], diag_a, diag_b])
    candidates = np.unique(candidates)

    def feasible(eps: float) -> bool:
        within = cost <= eps
        need_a = diag_a > eps
        need_b = diag_b > eps
        return (_saturable(within[need_a, :])
                and _saturable(within.T[need_b, :]))

    lo, hi = 0, len(candidates) - 1
    if feasible(candidates[lo]):
        return float(candidates[lo])
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid
    return float(candidates[hi])


def bottleneck_bruteforce(A: PersistenceDiagram,
                          B: PersistenceDiagram) -> float:
    """Direct minimization over all bijections of the diagonally padded
    diagrams (diagonal-to-diagonal pairs cost 0).  Oracle for small inputs."""
    fa, fb = _prepare(A, B)
    if len(fa) + len(fb) > 12:
        raise BottleneckError(
            f"brute force limited to 12 points, got {len(fa) + len(fb)}")
    diag_a = [(d - b) / 2.0 for b, d in fa]
    diag_b = [(d - b) / 2.0 for b, d in fb]
    cost = [[max(abs(ba - bb), abs(da - db)) for bb, db in fb]
            for ba, da in fa]
    n_a, n_b = len(fa), len(fb)
    best = _INF

    # max over B diagonal costs among still-unmatched B points, given a
    # used-set bitmask; cheap enough to recompute at the leaves
    def unmatched_b_cost(used: int) -> float:
        worst = 0.0
        for j in range(n_b):
            if not used & (1 << j) and diag_b[j] > worst:
                worst = diag_b[j]
        return worst

    def rec(i: int, used: int, cur: float) -> None:
        nonlocal best
        if cur >= best:
            return
        if i == n_a:
            total = max(cur, unmatched_b_cost(used))
            if total < best:
                best = total
            return
        rec(i + 1, used, max(cur, diag_a[i]))       # a_i -> diagonal
        for j in range(n_b):
            if not used & (1 << j):
                rec(i + 1, used | (1 << j), max(cur, cost[i][j]))

    rec(0, 0, 0.0)
    return best
