"""Affine unique-games instances and the long-code graph construction.

An affine instance over Z_L has bipartite sides U and V and constraints
z(u) - z(v) = c_e (mod L) on its edges.  The output graph's vertices are
pairs (v, x) with v a V-side vertex and x a length-L bit string, packed as

    vertex id = v * 2^L + int(x)    (bit i of the integer is coordinate i).

For every U-side vertex u and every ordered pair (e1, e2) of edges incident
to u, each code pair (x, y) contributes an edge between (v1, x) and (v2, y)
weighted by the product distribution of correlated bit pairs: with d the
Hamming distance between the two cyclically shifted codes (shift by c_e
aligns a label's coordinate across an edge), the weight is

    ((1 + rho) / 4)^(L - d) * ((1 - rho) / 4)^d.

Each (u, e1, e2) block sums to exactly 1.  Pairs that would form self-loops
(same v, same code) are dropped; their mass is recomputed analytically by
the verifier, which checks per-vertex incident weight against the uniform
target D_v * D_u * 2^(1-L) and the total against the block count.

The nested completeness ordering visits, for a labeling z, the cube slices
in which coordinates z(v)+1, ..., z(v)+L-1, z(v) (all mod L) switch from 0
to 1 in that significance order, vertices ascending within a slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Ordering, WeightedGraph

UG_MAGIC = "msvc-ug 1"
LABELS_MAGIC = "msvc-labels 1"

LONG_CODE_MAX_ALPHABET = 14


class UGFormatError(ValueError):
    """A unique-games or labels file does not match its documented format."""


@dataclass(frozen=True)
class AffineUGInstance:
    """Bipartite affine constraint system z(u) - z(v) = c_e over Z_L.

    Biregularity (all U-side degrees equal, all V-side degrees equal) is
    required; parallel edges are allowed.
    """

    alphabet: int
    u_count: int
    v_count: int
    edges: tuple

    def __post_init__(self):
        L = self.alphabet
        if L < 1:
            raise ValueError("alphabet size must be at least 1")
        if self.u_count < 1 or self.v_count < 1:
            raise ValueError("both sides must be non-empty")
        edges = tuple((int(u), int(v), int(c)) for u, v, c in self.edges)
        du = [0] * self.u_count
        dv = [0] * self.v_count
        for u, v, c in edges:
            if not 0 <= u < self.u_count:
                raise ValueError(f"u id {u} out of range")
            if not 0 <= v < self.v_count:
                raise ValueError(f"v id {v} out of range")
            if not 0 <= c < L:
                raise ValueError(f"shift {c} outside Z_{L}")
            du[u] += 1
            dv[v] += 1
        if len(set(du)) > 1 or len(set(dv)) > 1:
            raise ValueError("instance is not biregular")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self):
        return len(self.edges)

    @property
    def u_degree(self):
        return self.m // self.u_count if self.m else 0

    @property
    def v_degree(self):
        return self.m // self.v_count if self.m else 0


@dataclass(frozen=True)
class UGLabeling:
    """One label in Z_L per vertex on each side."""

    alphabet: int
    u_labels: tuple
    v_labels: tuple

    def __post_init__(self):
        u = tuple(int(x) for x in self.u_labels)
        v = tuple(int(x) for x in self.v_labels)
        L = self.alphabet
        if any(not 0 <= x < L for x in u + v):
            raise ValueError(f"labels must lie in Z_{L}")
        object.__setattr__(self, "u_labels", u)
        object.__setattr__(self, "v_labels", v)

    def shifted(self, a):
        """The labeling z + a (mod L) on both sides."""
        L = self.alphabet
        return UGLabeling(
            L,
            tuple((x + a) % L for x in self.u_labels),
            tuple((x + a) % L for x in self.v_labels),
        )


def ug_value(instance, labeling):
    """Fraction of constraints satisfied by the labeling."""
    if labeling.alphabet != instance.alphabet:
        raise ValueError("alphabet mismatch")
    if len(labeling.u_labels) != instance.u_count or len(labeling.v_labels) != instance.v_count:
        raise ValueError("labeling does not cover the instance")
    if instance.m == 0:
        return 1.0
    L = instance.alphabet
    zu, zv = labeling.u_labels, labeling.v_labels
    hit = sum(1 for u, v, c in instance.edges if (zu[u] - zv[v]) % L == c)
    return hit / instance.m


def _pair_weights(rho, L):
    """Edge weight by Hamming distance d of the aligned code pair."""
    same = (1.0 + rho) / 4.0
    diff = (1.0 - rho) / 4.0
    return np.array([same ** (L - d) * diff ** d for d in range(L + 1)])


def _popcount_table(L):
    codes = np.arange(1 << L, dtype=np.int64)
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(codes).astype(np.int64)
    pop = np.zeros(1 << L, dtype=np.int64)
    for b in range(L):
        pop += (codes >> b) & 1
    return pop


def _rotate(codes, shift, L):
    """Cyclic shift moving bit i to position i + shift (mod L)."""
    shift %= L
    if shift == 0:
        return codes
    mask = (1 << L) - 1
    return ((codes << shift) | (codes >> (L - shift))) & mask


def _edges_by_u(instance):
    out = [[] for _ in range(instance.u_count)]
    for u, v, c in instance.edges:
        out[u].append((v, c))
    return out


def build_long_code_graph(instance, rho):
    """The weighted reduction graph on v_count * 2^L vertices."""
    L = instance.alphabet
    if L > LONG_CODE_MAX_ALPHABET:
        raise ValueError(f"alphabet limited to {LONG_CODE_MAX_ALPHABET}, got {L}")
    if not -1.0 < rho < 0.0:
        raise ValueError(f"rho must lie in (-1, 0), got {rho}")
    size = 1 << L
    n = instance.v_count * size
    pw = _pair_weights(rho, L)
    pop = _popcount_table(L)
    codes = np.arange(size, dtype=np.int64)

    us, vs, ws = [], [], []
    for pairs in _edges_by_u(instance):
        for v1, c1 in pairs:
            rx = _rotate(codes, c1, L)
            base1 = v1 * size + codes
            for v2, c2 in pairs:
                ry = _rotate(codes, c2, L)
                weight = pw[pop[rx[:, None] ^ ry[None, :]]]
                ids1 = np.broadcast_to(base1[:, None], (size, size))
                ids2 = np.broadcast_to((v2 * size + codes)[None, :], (size, size))
                keep = (ids1 != ids2).ravel()
                us.append(ids1.ravel()[keep])
                vs.append(ids2.ravel()[keep])
                ws.append(weight.ravel()[keep])

    if not us:
        return WeightedGraph.from_arrays(n, np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0))
    return WeightedGraph.from_arrays(
        n, np.concatenate(us), np.concatenate(vs), np.concatenate(ws)
    )


def _loop_mass(instance, rho):
    """Per-vertex mass of the dropped self-loop pairs, indexed by vertex id."""
    L = instance.alphabet
    size = 1 << L
    pw = _pair_weights(rho, L)
    pop = _popcount_table(L)
    codes = np.arange(size, dtype=np.int64)
    out = np.zeros(instance.v_count * size)
    for pairs in _edges_by_u(instance):
        for v1, c1 in pairs:
            for v2, c2 in pairs:
                if v1 != v2:
                    continue
                mass = pw[pop[_rotate(codes, c1, L) ^ _rotate(codes, c2, L)]]
                np.add.at(out, v1 * size + codes, mass)
    return out


def completeness_ordering(instance, labeling):
    """The nested cube ordering induced by a labeling.

    Sort key per vertex (v, x): coordinates z(v)+1, ..., z(v)+L-1 of x
    (most significant first), then coordinate z(v), then v.  Vertices whose
    labeled slice bits are all zero come first; the final coordinate splits
    the innermost block into its two passes over V.
    """
    if len(labeling.v_labels) != instance.v_count or labeling.alphabet != instance.alphabet:
        raise ValueError("labeling does not cover the instance")
    L = instance.alphabet
    size = 1 << L
    ids = np.arange(instance.v_count * size, dtype=np.int64)
    v = ids >> L
    code = ids & (size - 1)
    z = np.asarray(labeling.v_labels, dtype=np.int64)[v]

    key = np.zeros_like(ids)
    for i in list(range(1, L)) + [0]:
        bit = (code >> ((z + i) % L)) & 1
        key = (key << 1) | bit
    order = np.argsort(key * instance.v_count + v, kind="stable")
    return Ordering(tuple(int(x) for x in order))


@dataclass(frozen=True)
class ReductionReport:
    """Structural checks of a constructed reduction graph."""

    per_vertex_target: float
    max_incident_deviation: float
    total_weight: float
    expected_total: float
    total_deviation: float
    ordered_pair_total: float
    unordered_pair_total: float
    block_sum_deviation: float
    loop_mass_total: float
    weight_values_ok: bool
    passed: bool


def verify_reduction(graph, instance, rho):
    """Check regularity, totals, block normalization, and weight values.

    Incident weights have the dropped self-loop mass added back (it counts
    twice, once per endpoint) before comparison with the uniform target.
    """
    L = instance.alphabet
    size = 1 << L
    du, dv = instance.u_degree, instance.v_degree
    target = dv * du * 2.0 ** (1 - L)

    u, v, w = graph.edge_arrays()
    incident = np.zeros(graph.n)
    np.add.at(incident, u, w)
    np.add.at(incident, v, w)
    loops = _loop_mass(instance, rho)
    loop_total = float(loops.sum())

    if target > 0.0:
        max_dev = float(np.max(np.abs(incident + 2.0 * loops - target))) / target
    else:
        max_dev = float(np.max(np.abs(incident))) if graph.n else 0.0

    ordered_total = float(instance.u_count * du * du)
    expected = ordered_total - loop_total
    total = graph.total_weight()
    total_dev = abs(total - expected) / expected if expected > 0.0 else abs(total)
    unordered_total = (ordered_total + instance.m) / 2.0

    # every block's mass is rotation-invariant: 2^L * sum_d C(L,d) pw[d]
    pw = _pair_weights(rho, L)
    block = float(size * sum(math.comb(L, d) * pw[d] for d in range(L + 1)))
    block_dev = abs(block - 1.0) if instance.m else 0.0

    if graph.m:
        vals = np.unique(w)
        ok = bool(np.all(np.min(np.abs(vals[:, None] - pw[None, :]), axis=1) <= 1e-12 * np.max(pw)))
    else:
        ok = True

    passed = max_dev <= 1e-9 and total_dev <= 1e-9 and block_dev <= 1e-12 and ok
    return ReductionReport(
        per_vertex_target=target,
        max_incident_deviation=max_dev,
        total_weight=total,
        expected_total=expected,
        total_deviation=total_dev,
        ordered_pair_total=ordered_total,
        unordered_pair_total=unordered_total,
        block_sum_deviation=block_dev,
        loop_mass_total=loop_total,
        weight_values_ok=ok,
        passed=passed,
    )


def random_affine_instance(alphabet, size, degree, seed, satisfiable=True):
    """A biregular instance built from `degree` random perfect matchings.

    Both sides have `size` vertices.  satisfiable=True plants a labeling
    (returned alongside) whose constraints it satisfies exactly; otherwise
    shifts are uniform random and the returned labeling is just a sample.
    """
    rng = np.random.default_rng(seed)
    zu = tuple(int(x) for x in rng.integers(0, alphabet, size=size))
    zv = tuple(int(x) for x in rng.integers(0, alphabet, size=size))
    edges = []
    for _ in range(degree):
        perm = rng.permutation(size)
        for u in range(size):
            v = int(perm[u])
            if satisfiable:
                c = (zu[u] - zv[v]) % alphabet
            else:
                c = int(rng.integers(0, alphabet))
            edges.append((u, v, c))
    instance = AffineUGInstance(alphabet, size, size, tuple(edges))
    return instance, UGLabeling(alphabet, zu, zv)


def parse_ug(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != UG_MAGIC:
        raise UGFormatError(f"line 1: expected header {UG_MAGIC!r}")
    if len(lines) < 2:
        raise UGFormatError("line 2: missing 'L |U| |V| m'")
    parts = lines[1].split()
    if len(parts) != 4:
        raise UGFormatError("line 2: expected 'L |U| |V| m'")
    try:
        L, uc, vc, m = (int(p) for p in parts)
    except ValueError:
        raise UGFormatError("line 2: malformed integer") from None
    edges = []
    for i in range(m):
        ln = 3 + i
        if 2 + i >= len(lines):
            raise UGFormatError(f"line {ln}: missing edge {i + 1} of {m}")
        ep = lines[2 + i].split()
        if len(ep) != 3:
            raise UGFormatError(f"line {ln}: expected 'u v c'")
        try:
            edges.append((int(ep[0]), int(ep[1]), int(ep[2])))
        except ValueError:
            raise UGFormatError(f"line {ln}: malformed integer") from None
    try:
        return AffineUGInstance(L, uc, vc, tuple(edges))
    except ValueError as exc:
        raise UGFormatError(str(exc)) from None


def format_ug(instance):
    lines = [UG_MAGIC, f"{instance.alphabet} {instance.u_count} {instance.v_count} {instance.m}"]
    lines += [f"{u} {v} {c}" for u, v, c in instance.edges]
    return "\n".join(lines) + "\n"


def load_ug(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_ug(fh.read())


def save_ug(instance, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_ug(instance))


def parse_labels(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != LABELS_MAGIC:
        raise UGFormatError(f"line 1: expected header {LABELS_MAGIC!r}")
    if len(lines) < 4:
        raise UGFormatError("labels file needs 4 lines: header, 'L |U| |V|', u labels, v labels")
    parts = lines[1].split()
    if len(parts) != 3:
        raise UGFormatError("line 2: expected 'L |U| |V|'")
    try:
        L, uc, vc = (int(p) for p in parts)
        u_labels = tuple(int(x) for x in lines[2].split())
        v_labels = tuple(int(x) for x in lines[3].split())
    except ValueError:
        raise UGFormatError("malformed integer in labels file") from None
    if len(u_labels) != uc:
        raise UGFormatError(f"line 3: expected {uc} labels, got {len(u_labels)}")
    if len(v_labels) != vc:
        raise UGFormatError(f"line 4: expected {vc} labels, got {len(v_labels)}")
    try:
        return UGLabeling(L, u_labels, v_labels)
    except ValueError as exc:
        raise UGFormatError(str(exc)) from None


def format_labels(labeling, u_count=None, v_count=None):
    u_count = len(labeling.u_labels) if u_count is None else u_count
    v_count = len(labeling.v_labels) if v_count is None else v_count
    return "\n".join([
        LABELS_MAGIC,
        f"{labeling.alphabet} {u_count} {v_count}",
        " ".join(str(x) for x in labeling.u_labels),
        " ".join(str(x) for x in labeling.v_labels),
    ]) + "\n"


def load_labels(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_labels(fh.read())


def save_labels(labeling, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_labels(labeling))
