"""Exact and approximate minimum sum vertex cover solvers.

The exact solver is a subset dynamic program over bitmasks: with
W(S, S) the weight inside S and f(0) = 0,

    f(S) = W(S^c, S^c) + min_{v in S} f(S minus v)

gives the cover-time sum of steps 1..|S| for the best schedule whose first
|S| picks are exactly S; the optimum is f(V) plus the step-0 term W(V, V).
A brute-force enumeration over all n! orderings serves as an independent
oracle for n <= 8.

Approximate solvers: greedy by uncovered incident weight, a two-phase
schedule built around an exact or local-search Max-k-VC subset at
k = floor(n/2), and a seeded random ordering baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

import numpy as np

from .graph import Ordering, WeightedGraph, inside_weight_table, svc_value

DP_MAX_VERTICES = 24
BRUTE_MAX_VERTICES = 8
KVC_BUDGET = 10**7


@dataclass(frozen=True)
class SolveResult:
    """An ordering, its svc value, and the method that produced it."""

    value: float
    ordering: Ordering
    method: str

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError("svc value must be non-negative")


def _popcounts(n):
    masks = np.arange(1 << n, dtype=np.int64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(masks).astype(np.int8)
    pop = np.zeros(1 << n, dtype=np.int8)
    for b in range(n):
        pop += ((masks >> b) & 1).astype(np.int8)
    return pop


def msvc_exact_dp(graph):
    """Exact MSVC over all 2^n subsets; n <= 24."""
    n = graph.n
    if n > DP_MAX_VERTICES:
        raise ValueError(f"exact DP limited to n <= {DP_MAX_VERTICES}, got {n}")
    if n == 0:
        return SolveResult(0.0, Ordering(()), "exact-dp")

    size = 1 << n
    full = size - 1
    table = inside_weight_table(graph)
    comp = table[np.arange(size) ^ full]

    f = np.full(size, np.inf)
    f[0] = 0.0
    parent = np.zeros(size, dtype=np.int8)

    pop = _popcounts(n)
    order = np.argsort(pop, kind="stable")
    counts = np.bincount(pop, minlength=n + 1)
    offsets = np.concatenate(([0], np.cumsum(counts)))

    for k in range(1, n + 1):
        masks = order[offsets[k]:offsets[k + 1]]
        best = np.full(masks.size, np.inf)
        best_v = np.zeros(masks.size, dtype=np.int8)
        for v in range(n):
            bit = 1 << v
            has = (masks & bit) != 0
            cand = f[masks[has] ^ bit]
            slot = np.nonzero(has)[0]
            better = cand < best[slot]
            if better.any():
                upd = slot[better]
                best[upd] = cand[better]
                best_v[upd] = v
        f[masks] = comp[masks] + best
        parent[masks] = best_v

    value = float(f[full] + table[full])
    perm = [0] * n
    mask = full
    for pos in range(n - 1, -1, -1):
        v = int(parent[mask])
        perm[pos] = v
        mask ^= 1 << v
    return SolveResult(value, Ordering(tuple(perm)), "exact-dp")


def msvc_bruteforce(graph):
    """Exhaustive minimum over all n! orderings; n <= 8."""
    n = graph.n
    if n > BRUTE_MAX_VERTICES:
        raise ValueError(f"brute force limited to n <= {BRUTE_MAX_VERTICES}, got {n}")
    if n == 0:
        return SolveResult(0.0, Ordering(()), "brute")

    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    pos = np.argsort(perms, axis=1)
    u, v, w = graph.edge_arrays()
    if graph.m == 0:
        return SolveResult(0.0, Ordering(tuple(range(n))), "brute")
    times = np.minimum(pos[:, u], pos[:, v]) + 1
    values = times @ w
    i = int(np.argmin(values))
    return SolveResult(float(values[i]), Ordering(tuple(int(x) for x in perms[i])), "brute")


def msvc_greedy(graph):
    """Greedy by uncovered incident weight, ties to lowest id."""
    perm = _phased_greedy_order(graph, np.ones(graph.n, dtype=bool))
    ordering = Ordering(tuple(perm))
    return SolveResult(svc_value(graph, ordering), ordering, "greedy")


def msvc_random(graph, seed):
    """Seeded uniformly random ordering baseline."""
    rng = np.random.default_rng(seed)
    ordering = Ordering(tuple(int(x) for x in rng.permutation(graph.n)))
    return SolveResult(svc_value(graph, ordering), ordering, f"random({seed})")


def covered_weight(graph, subset):
    """Total weight of edges with at least one endpoint in subset."""
    u, v, w = graph.edge_arrays()
    mark = np.zeros(graph.n, dtype=bool)
    mark[list(subset)] = True
    return float(w[mark[u] | mark[v]].sum())


def max_kvc(graph, k, mode="exact", restarts=10, seed=0):
    """A k-subset maximizing covered edge weight.

    mode="exact" enumerates subsets (budget C(n,k) <= 10^7 enforced) and
    returns a true maximizer; mode="local-search" runs steepest-swap hill
    climbing from seeded random starts.  Returns a sorted vertex tuple.
    """
    n = graph.n
    if not 0 <= k <= n:
        raise ValueError("k out of range")
    if k == 0:
        return ()
    if k == n:
        return tuple(range(n))

    if mode == "exact":
        if math.comb(n, k) > KVC_BUDGET:
            raise ValueError(f"C({n},{k}) exceeds the exact budget {KVC_BUDGET}")
        total = graph.total_weight()
        if n <= DP_MAX_VERTICES:
            table = inside_weight_table(graph)
            pop = _popcounts(n)
            masks = np.nonzero(pop == k)[0]
            # covered(S) = total - W(S^c, S^c)
            vals = table[masks ^ ((1 << n) - 1)]
            i = int(np.argmin(vals))
            best = int(masks[i])
            return tuple(b for b in range(n) if best >> b & 1)
        a = graph.weight_matrix()
        row = a.sum(axis=1)
        best_val, best_set = -1.0, None
        for comb in combinations(range(n), k):
            idx = np.asarray(comb)
            cov = float(row[idx].sum()) - float(a[np.ix_(idx, idx)].sum()) / 2.0
            if cov > best_val + 1e-15:
                best_val, best_set = cov, comb
        return tuple(best_set)

    if mode == "local-search":
        rng = np.random.default_rng(seed)
        a = graph.weight_matrix()
        row = a.sum(axis=1)

        def cov_of(mask_arr):
            idx = np.nonzero(mask_arr)[0]
            return float(row[idx].sum()) - float(a[np.ix_(idx, idx)].sum()) / 2.0

        best_val, best_set = -1.0, None
        for _ in range(max(1, restarts)):
            inside = np.zeros(n, dtype=bool)
            inside[rng.choice(n, size=k, replace=False)] = True
            val = cov_of(inside)
            improved = True
            while improved:
                improved = False
                ins = np.nonzero(inside)[0]
                outs = np.nonzero(~inside)[0]
                step_best, step_pair = val + 1e-12, None
                for x in ins:
                    for y in outs:
                        inside[x] = False
                        inside[y] = True
                        cand = cov_of(inside)
                        inside[x] = True
                        inside[y] = False
                        if cand > step_best:
                            step_best, step_pair = cand, (x, y)
                if step_pair is not None:
                    x, y = step_pair
                    inside[x] = False
                    inside[y] = True
                    val = step_best
                    improved = True
            if val > best_val:
                best_val = val
                best_set = tuple(int(i) for i in np.nonzero(inside)[0])
        return best_set

    raise ValueError(f"unknown mode {mode!r}")


def msvc_two_phase(graph, kvc_mode="exact", restarts=10, seed=0):
    """Visit a max-coverage half greedily, then the rest greedily.

    Phase 1 picks the vertices of a Max-k-VC subset at k = floor(n/2)
    (greedy internal order); phase 2 visits the complement the same way.
    Returns the better of this schedule and plain greedy.
    """
    n = graph.n
    k = n // 2
    subset = max_kvc(graph, k, mode=kvc_mode, restarts=restarts, seed=seed)
    inside = np.zeros(n, dtype=bool)
    inside[list(subset)] = True
    perm = _phased_greedy_order(graph, inside)
    ordering = Ordering(tuple(perm))
    value = svc_value(graph, ordering)
    fallback = msvc_greedy(graph)
    if fallback.value < value:
        return SolveResult(fallback.value, fallback.ordering, "two-phase")
    return SolveResult(value, ordering, "two-phase")


def _phased_greedy_order(graph, inside):
    n = graph.n
    u, v, w = graph.edge_arrays()
    covered = np.zeros(graph.m, dtype=bool)
    picked = np.zeros(n, dtype=bool)
    out = []
    for phase_mask in (inside, ~inside):
        for _ in range(int(phase_mask.sum())):
            gain = np.zeros(n)
            live = ~covered
            np.add.at(gain, u[live], w[live])
            np.add.at(gain, v[live], w[live])
            gain[picked | ~phase_mask] = -1.0
            pick = int(np.argmax(gain))
            out.append(pick)
            picked[pick] = True
            covered |= (u == pick) | (v == pick)
    return out
