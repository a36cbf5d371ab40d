"""Weighted multigraphs and sum-vertex-cover evaluation.

A graph is undirected, has vertices 0..n-1, strictly positive edge weights,
no self-loops, and may contain parallel edges (kept distinct, never merged
implicitly).

An ordering sigma visits one vertex per step, steps numbered from 1.  An edge
is covered the first time one of its endpoints is visited, and its cover time
is that step number.  The sum-vertex-cover value of an ordering is

    svc(sigma) = sum_e w_e * cover_time(sigma, e)

which equals the sum over t = 0..n-1 of the total weight still uncovered
after the first t visits.  Both computations are implemented; tests hold
them against each other.

Text format (LF line endings, 0-based vertex ids)::

    msvc-graph 1
    <n> <m>
    <u> <v> <w>     (m lines)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

GRAPH_MAGIC = "msvc-graph 1"

# Exhaustive subset enumeration refuses above this many subsets.
SUBSET_BUDGET = 10**7

# Bitmask tables are only built while 2^n stays modest.
_TABLE_MAX_BITS = 24

# Above this, min_subset_density prefers plain subset enumeration to a
# full 2^n table.
_DENSITY_BITMASK_BITS = 22


class GraphFormatError(ValueError):
    """A graph/instance file does not match its documented text format."""


class WeightedGraph:
    """Undirected weighted multigraph without self-loops."""

    __slots__ = ("n", "_u", "_v", "_w")

    def __init__(self, n, edges):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = int(n)
        u = np.asarray([e[0] for e in edges], dtype=np.int64)
        v = np.asarray([e[1] for e in edges], dtype=np.int64)
        w = np.asarray([e[2] for e in edges], dtype=np.float64)
        if u.size:
            if u.min(initial=0) < 0 or v.min(initial=0) < 0:
                raise ValueError("negative vertex id")
            if u.max(initial=-1) >= self.n or v.max(initial=-1) >= self.n:
                raise ValueError("vertex id out of range")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
            if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
                raise ValueError("edge weights must be positive and finite")
        self._u, self._v, self._w = u, v, w

    @classmethod
    def from_arrays(cls, n, u, v, w):
        g = cls.__new__(cls)
        g.n = int(n)
        g._u = np.asarray(u, dtype=np.int64)
        g._v = np.asarray(v, dtype=np.int64)
        g._w = np.asarray(w, dtype=np.float64)
        if g._u.size:
            if g._u.min() < 0 or g._v.min() < 0 or max(g._u.max(), g._v.max()) >= g.n:
                raise ValueError("vertex id out of range")
            if np.any(g._u == g._v):
                raise ValueError("self-loops are not allowed")
            if not np.all(np.isfinite(g._w)) or np.any(g._w <= 0.0):
                raise ValueError("edge weights must be positive and finite")
        return g

    @property
    def m(self):
        return int(self._u.size)

    @property
    def edges(self):
        return [
            (int(a), int(b), float(c))
            for a, b, c in zip(self._u, self._v, self._w)
        ]

    def edge_arrays(self):
        """Return (u, v, w) as read-only views of the internal arrays."""
        return self._u, self._v, self._w

    def total_weight(self):
        return float(self._w.sum())

    def is_unit_weighted(self):
        return bool(np.all(self._w == 1.0))

    def weight_matrix(self):
        """Symmetric n x n matrix of aggregated pair weights."""
        a = np.zeros((self.n, self.n))
        np.add.at(a, (self._u, self._v), self._w)
        np.add.at(a, (self._v, self._u), self._w)
        return a

    def weighted_degrees(self):
        d = np.zeros(self.n)
        np.add.at(d, self._u, self._w)
        np.add.at(d, self._v, self._w)
        return d

    def degrees(self):
        d = np.zeros(self.n, dtype=np.int64)
        np.add.at(d, self._u, 1)
        np.add.at(d, self._v, 1)
        return d

    def aggregate_parallel(self):
        """Merge parallel edges, summing weights. Explicit, never implicit."""
        lo = np.minimum(self._u, self._v)
        hi = np.maximum(self._u, self._v)
        key = lo * self.n + hi
        order = np.argsort(key, kind="stable")
        key_s = key[order]
        uniq, start = np.unique(key_s, return_index=True)
        sums = np.add.reduceat(self._w[order], start) if key_s.size else np.array([])
        return WeightedGraph.from_arrays(self.n, uniq // self.n, uniq % self.n, sums)

    def relabel(self, perm):
        """New graph with vertex i renamed to perm[i]."""
        p = np.asarray(perm, dtype=np.int64)
        if sorted(p.tolist()) != list(range(self.n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        return WeightedGraph.from_arrays(self.n, p[self._u], p[self._v], self._w.copy())

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self._u, other._u)
            and np.array_equal(self._v, other._v)
            and np.array_equal(self._w, other._w)
        )

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


class Ordering:
    """A permutation of 0..n-1; position 0 is visited first (step 1)."""

    __slots__ = ("perm", "_pos")

    def __init__(self, perm):
        p = tuple(int(x) for x in perm)
        if sorted(p) != list(range(len(p))):
            raise ValueError("not a permutation of 0..n-1")
        self.perm = p
        self._pos = None

    def __len__(self):
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def positions(self):
        """positions()[v] = 0-based step at which v is visited."""
        if self._pos is None:
            pos = np.empty(len(self.perm), dtype=np.int64)
            pos[np.asarray(self.perm, dtype=np.int64)] = np.arange(len(self.perm))
            self._pos = pos
        return self._pos

    def __repr__(self):
        return f"Ordering({list(self.perm)})"


def cover_times(graph, ordering):
    """1-indexed cover time per edge, aligned with graph.edges order."""
    if len(ordering) != graph.n:
        raise ValueError("ordering length does not match vertex count")
    pos = ordering.positions()
    u, v, _ = graph.edge_arrays()
    return np.minimum(pos[u], pos[v]) + 1


def svc_value(graph, ordering):
    """Sum over edges of weight times cover time."""
    _, _, w = graph.edge_arrays()
    return float(np.dot(w, cover_times(graph, ordering)))


def svc_value_suffix(graph, ordering):
    """Same value accumulated as uncovered weight after each prefix.

    Kept as an independent code path; tests compare it with svc_value.
    """
    if len(ordering) != graph.n:
        raise ValueError("ordering length does not match vertex count")
    u, v, w = graph.edge_arrays()
    visited = np.zeros(graph.n, dtype=bool)
    total = 0.0
    for t, vertex in enumerate(ordering):
        uncovered = ~(visited[u] | visited[v])
        total += float(w[uncovered].sum())
        visited[vertex] = True
    return total


def inside_weight_table(graph):
    """table[mask] = total weight of edges with both endpoints in mask.

    Size 2^n; refuses for n above the bitmask limit.
    """
    n = graph.n
    if n > _TABLE_MAX_BITS:
        raise ValueError(f"bitmask table limited to n <= {_TABLE_MAX_BITS}")
    a = graph.weight_matrix()
    table = np.zeros(1 << n)
    for v in range(n - 1, -1, -1):
        rest = np.arange(0, 1 << (n - v - 1), dtype=np.int64) << (v + 1)
        cross = np.zeros(rest.size)
        for u in range(v + 1, n):
            if a[v, u] != 0.0:
                cross += a[v, u] * ((rest >> u) & 1)
        table[rest | (1 << v)] = table[rest] + cross
    return table


@dataclass
class SubsetDensityReport:
    k: int
    r: float
    min_density: float
    witness: tuple
    mode: str
    exact: bool


def min_subset_density(graph, k, mode="exhaustive", trials=10000, seed=0):
    """Minimum over k-subsets S of w(S,S) / w(V,V).

    mode="exhaustive" enumerates every subset (budget-guarded); the reported
    minimum is exact.  mode="sampled" draws seeded random subsets and reports
    an upper estimate of the true minimum, marked exact=False.
    """
    n = graph.n
    if not 0 <= k <= n:
        raise ValueError("k out of range")
    total = graph.total_weight()
    if total <= 0.0:
        raise ValueError("graph has no edges")
    if k == 0:
        return SubsetDensityReport(0, 0.0, 0.0, (), "exhaustive", True)

    if mode == "exhaustive":
        if math.comb(n, k) > SUBSET_BUDGET:
            raise ValueError(
                f"C({n},{k}) exceeds the exhaustive budget {SUBSET_BUDGET}; "
                "use mode='sampled'"
            )
        if n <= _DENSITY_BITMASK_BITS:
            table = inside_weight_table(graph)
            masks = np.arange(1 << n, dtype=np.int64)
            pop = np.zeros(1 << n, dtype=np.int8)
            for b in range(n):
                pop += ((masks >> b) & 1).astype(np.int8)
            sel = masks[pop == k]
            vals = table[sel]
            i = int(np.argmin(vals))
            best_mask = int(sel[i])
            witness = tuple(b for b in range(n) if best_mask >> b & 1)
            best = float(vals[i])
        else:
            a = graph.weight_matrix()
            best = math.inf
            witness = None
            for comb in combinations(range(n), k):
                idx = np.asarray(comb)
                val = float(a[np.ix_(idx, idx)].sum()) / 2.0
                if val < best:
                    best, witness = val, comb
        return SubsetDensityReport(k, k / n, best / total, tuple(witness), "exhaustive", True)

    if mode == "sampled":
        rng = np.random.default_rng(seed)
        a = graph.weight_matrix()
        best = math.inf
        witness = None
        for _ in range(trials):
            idx = rng.permutation(n)[:k]
            val = float(a[np.ix_(idx, idx)].sum()) / 2.0
            if val < best:
                best, witness = val, tuple(sorted(int(x) for x in idx))
        return SubsetDensityReport(k, k / n, best / total, witness, "sampled", False)

    raise ValueError(f"unknown mode {mode!r}")


def _format_weight(w):
    if w == int(w) and abs(w) < 1e15:
        return str(int(w))
    return repr(w)


def write_graph(graph):
    """Serialize to the documented text format."""
    lines = [GRAPH_MAGIC, f"{graph.n} {graph.m}"]
    for u, v, w in graph.edges:
        lines.append(f"{u} {v} {_format_weight(w)}")
    return "\n".join(lines) + "\n"


def read_graph(text):
    """Parse the documented text format; errors carry 1-based line numbers."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != GRAPH_MAGIC:
        raise GraphFormatError(f"line 1: expected header {GRAPH_MAGIC!r}")
    if len(lines) < 2:
        raise GraphFormatError("line 2: missing 'n m' line")
    parts = lines[1].split()
    if len(parts) != 2:
        raise GraphFormatError("line 2: expected 'n m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError("line 2: n and m must be integers") from None
    if n < 0 or m < 0:
        raise GraphFormatError("line 2: n and m must be nonnegative")
    body = [ln for ln in lines[2:] if ln.strip() != ""]
    if len(body) != m:
        raise GraphFormatError(
            f"line {len(lines)}: expected {m} edge lines, found {len(body)}"
        )
    edges = []
    for i, ln in enumerate(body, start=3):
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError(f"line {i}: expected 'u v w'")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise GraphFormatError(f"line {i}: malformed edge line") from None
        if not 0 <= u < n or not 0 <= v < n:
            raise GraphFormatError(f"line {i}: vertex id out of range")
        if u == v:
            raise GraphFormatError(f"line {i}: self-loop")
        if not math.isfinite(w) or w <= 0.0:
            raise GraphFormatError(f"line {i}: weight must be positive and finite")
        edges.append((u, v, w))
    return WeightedGraph(n, edges)


def load_graph(path):
    with open(path, "r", encoding="ascii") as fh:
        return read_graph(fh.read())


def save_graph(graph, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_graph(graph))


# ---------------------------------------------------------------------------
# small graph factories, used by tests and the counterexample construction


def complete_graph(n, weight=1.0):
    return WeightedGraph(n, [(i, j, weight) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves, weight=1.0):
    return WeightedGraph(leaves + 1, [(0, i, weight) for i in range(1, leaves + 1)])


def path_graph(n, weight=1.0):
    return WeightedGraph(n, [(i, i + 1, weight) for i in range(n - 1)])


def cycle_graph(n, weight=1.0):
    return WeightedGraph(n, [(i, (i + 1) % n, weight) for i in range(n)])


def complete_bipartite(a, b, weight=1.0):
    return WeightedGraph(a + b, [(i, a + j, weight) for i in range(a) for j in range(b)])


def disjoint_union(graphs):
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset, w) for u, v, w in g.edges)
        offset += g.n
    return WeightedGraph(offset, edges)


def random_weighted_graph(n, p, seed, unit_weights=False):
    """G(n, p) with unit or Uniform(0.1, 2) weights, at least one edge."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = 1.0 if unit_weights else float(rng.uniform(0.1, 2.0))
                edges.append((i, j, w))
    if not edges:
        i, j = sorted(rng.choice(n, size=2, replace=False).tolist())
        edges.append((int(i), int(j), 1.0))
    return WeightedGraph(n, edges)


def random_regular_graph(n, d, seed, max_tries=1000):
    """Simple d-regular graph by the pairing model with rejection."""
    if n * d % 2 != 0:
        raise ValueError("n*d must be even")
    if d >= n:
        raise ValueError("need d < n")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        perm = rng.permutation(stubs)
        pairs = perm.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        key = lo * n + hi
        if np.unique(key).size != key.size:
            continue
        return WeightedGraph(n, [(int(a), int(b), 1.0) for a, b in zip(lo, hi)])
    raise RuntimeError("pairing model failed to produce a simple graph")
