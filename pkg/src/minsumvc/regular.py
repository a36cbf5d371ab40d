"""Approximation-ratio analysis on regular graphs and its tightness limits.

The two-phase algorithm first buys an optimal half cover sized by a
Max-k-VC subroutine with guarantee alpha, then finishes greedily.  Its
worst-case ratio on regular graphs is the larger of two branches in a
threshold eps: a pure-greedy bound 4 / (3 + 12 eps) and, for the regime
where the optimum covers a (1/4 + delta) fraction by time n/2,

    (8 - 5 alpha + 5 alpha sqrt(delta)) / (3 + 12 delta),  delta in (0, eps].

The disjoint union of K_{2,2} and K_3 blocks shows the half-time coverage
factor 1 - sqrt(delta) behind that second branch cannot be improved to
1 - delta; the construction and its exhaustive verification live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Ordering, WeightedGraph, inside_weight_table, svc_value
from .solvers import covered_weight, max_kvc, msvc_exact_dp

# best published guarantee for Max-2-Sat subject to a bisection constraint
ALPHA_MAX2SAT_BISECTION = 0.9401
# limit no algorithm of that family can exceed
ALPHA_BISECTION_LIMIT = 0.9431

RATIO_GRID_STEP = 1e-5
EXACT_MAX_VERTICES = 24


def _second_branch(delta, alpha):
    return (8.0 - 5.0 * alpha + 5.0 * alpha * np.sqrt(delta)) / (3.0 + 12.0 * delta)


def _interior_critical_delta(alpha):
    """The stationary point of the second branch in u = sqrt(delta), if any."""
    a = 60.0 * alpha
    b = 192.0 - 120.0 * alpha
    c = -15.0 * alpha
    disc = b * b - 4.0 * a * c
    u = (-b + math.sqrt(disc)) / (2.0 * a)
    return u * u if u > 0.0 else None


def two_phase_ratio(eps, alpha=ALPHA_MAX2SAT_BISECTION):
    """Worst-case ratio of the two-phase algorithm at threshold eps."""
    if not 0.0 < eps < 0.25:
        raise ValueError(f"eps must lie in (0, 1/4), got {eps}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    greedy_branch = 4.0 / (3.0 + 12.0 * eps)
    grid = np.linspace(eps * 1e-5, eps, 100_000)
    sup = float(np.max(_second_branch(grid, alpha)))
    crit = _interior_critical_delta(alpha)
    if crit is not None and crit <= eps:
        sup = max(sup, float(_second_branch(np.array(crit), alpha)))
    return max(greedy_branch, sup)


@dataclass(frozen=True)
class RatioAnalysis:
    """Optimized threshold for a given Max-k-VC guarantee."""

    alpha: float
    optimal_eps: float
    optimal_ratio: float
    branch_gap: float
    grid_step: float

    def ratio(self, eps):
        return two_phase_ratio(eps, self.alpha)


def optimize_two_phase(alpha=ALPHA_MAX2SAT_BISECTION, step=RATIO_GRID_STEP):
    """Minimize the ratio over eps; the two branches meet at the optimum.

    The greedy branch falls in eps while the sup branch rises, so the
    minimax sits where they cross; both are swept on a shared grid with a
    running maximum so the whole sweep is one vectorized pass.
    """
    if not 0.8 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0.8, 1], got {alpha}")
    eps_grid = np.arange(step, 0.25, step)
    sup = np.maximum.accumulate(_second_branch(eps_grid, alpha))
    crit = _interior_critical_delta(alpha)
    if crit is not None and crit < 0.25:
        peak = float(_second_branch(np.array(crit), alpha))
        sup = np.where(eps_grid >= crit, np.maximum(sup, peak), sup)
    greedy = 4.0 / (3.0 + 12.0 * eps_grid)
    ratios = np.maximum(greedy, sup)
    i = int(np.argmin(ratios))
    gap = abs(float(greedy[i]) - float(sup[i]))
    if gap > 1e-3:
        raise AssertionError(f"branches fail to cross at the optimum (gap {gap})")
    return RatioAnalysis(
        alpha=alpha,
        optimal_eps=float(eps_grid[i]),
        optimal_ratio=float(ratios[i]),
        branch_gap=gap,
        grid_step=step,
    )


@dataclass(frozen=True)
class CounterexampleParams:
    """Block counts for the K_{2,2} / K_3 union with delta = (p/q)^2."""

    p: int
    q: int
    n: int
    t: int
    s: int

    def __post_init__(self):
        if self.p < 1 or self.q <= 6 * self.p:
            raise ValueError("need 0 < p and q > 6p so both block counts are positive")
        if self.t <= 0 or self.t % 2 or self.s <= 0:
            raise ValueError(f"t must be a positive even integer and s positive, got t={self.t} s={self.s}")
        if self.n != 2 * self.t + 3 * self.s:
            raise ValueError("n must equal 2t + 3s")
        if self.t * self.q != self.n * (self.q - 6 * self.p) // 2 or self.s * self.q != 2 * self.p * self.n:
            raise ValueError("t and s do not match (1/2 - 3 p/q) n and 2 (p/q) n")

    @property
    def delta(self):
        return (self.p / self.q) ** 2

    @classmethod
    def from_fraction(cls, p, q, scale=1):
        """Smallest feasible size for sqrt(delta) = p/q, scaled up by `scale`."""
        if scale < 1:
            raise ValueError(f"scale must be at least 1, got {scale}")
        if p < 1 or q <= 6 * p:
            raise ValueError("need 0 < p and q > 6p so both block counts are positive")
        for n0 in range(1, 4 * q + 1):
            tq2 = n0 * (q - 6 * p)
            sq = 2 * p * n0
            if tq2 % (2 * q) or sq % q:
                continue
            t = tq2 // (2 * q)
            if t % 2 or t == 0:
                continue
            n = n0 * scale
            return cls(p, q, n, t * scale, (sq // q) * scale)
        raise ValueError(f"no feasible size below 4q = {4 * q}")


def counterexample_graph(params):
    """t/2 disjoint K_{2,2} blocks then s disjoint K_3 blocks, unit weights.

    K_{2,2} block j occupies ids 4j..4j+3 with left side {4j, 4j+1}; K_3
    block j occupies 2t + 3j .. 2t + 3j + 2.  The graph is 2-regular with
    m = n edges.
    """
    t, s = params.t, params.s
    edges = []
    for j in range(t // 2):
        b = 4 * j
        edges += [(b, b + 2, 1.0), (b, b + 3, 1.0), (b + 1, b + 2, 1.0), (b + 1, b + 3, 1.0)]
    for j in range(s):
        b = 2 * t + 3 * j
        edges += [(b, b + 1, 1.0), (b, b + 2, 1.0), (b + 1, b + 2, 1.0)]
    return WeightedGraph(params.n, edges)


def staged_ordering(params):
    """One vertex per K_3, then the K_{2,2} left sides, then the K_3 seconds.

    Remaining vertices follow in ascending id order; they cover nothing new.
    """
    t, s = params.t, params.s
    stage1 = [2 * t + 3 * j for j in range(s)]
    stage2 = [x for j in range(t // 2) for x in (4 * j, 4 * j + 1)]
    stage3 = [2 * t + 3 * j + 1 for j in range(s)]
    head = stage1 + stage2 + stage3
    rest = sorted(set(range(params.n)) - set(head))
    return Ordering(head + rest)


def staged_value_formula(params):
    """Closed form t^2 + 3st + 5s^2/2 + t + 3s/2 for the staged ordering."""
    t, s = params.t, params.s
    return t * t + 3 * s * t + 5 * s * s / 2 + t + 3 * s / 2


def _vertex_cover_number(graph):
    table = inside_weight_table(graph)
    covering = np.nonzero(table == 0.0)[0]
    if hasattr(np, "bitwise_count"):
        sizes = np.bitwise_count(covering.astype(np.int64))
    else:
        sizes = np.zeros(covering.size, dtype=np.int64)
        for b in range(graph.n):
            sizes += (covering >> b) & 1
    return int(graph.n - sizes.max())


@dataclass(frozen=True)
class CounterexampleReport:
    params: CounterexampleParams
    n: int
    m: int
    staged_value: float
    formula_value: float
    exact_value: float
    exact_mode: bool
    value_over_n2: float
    value_over_nm: float
    normalized_target: float
    normalized_gap: float
    best_half_coverage: float
    coverage_cap: float
    coverage_margin: float
    uncovered_after_half: float
    vertex_cover_number: int


def verify_counterexample(params):
    """Build the graph and check the staged, exact, and coverage claims.

    The exact branch (dynamic program plus exhaustive half-cover search)
    runs when n <= 24; beyond that the staged simulation and the closed
    forms are reported with exact_mode False.
    """
    graph = counterexample_graph(params)
    n, m = graph.n, graph.m
    order = staged_ordering(params)
    staged = svc_value(graph, order)
    formula = staged_value_formula(params)
    if abs(staged - formula) > 1e-9:
        raise AssertionError(f"staged simulation {staged} disagrees with formula {formula}")

    exact_mode = n <= EXACT_MAX_VERTICES
    if exact_mode:
        exact = msvc_exact_dp(graph).value
        if staged < exact - 1e-9:
            raise AssertionError("staged ordering beats the exact optimum")
        subset = max_kvc(graph, n // 2, mode="exact")
        coverage = covered_weight(graph, subset)
        vc = _vertex_cover_number(graph)
    else:
        exact = staged
        coverage = float("nan")
        vc = params.t + 2 * params.s

    cap = (1.0 - params.p / params.q) * m
    value = exact
    return CounterexampleReport(
        params=params,
        n=n,
        m=m,
        staged_value=staged,
        formula_value=formula,
        exact_value=exact,
        exact_mode=exact_mode,
        value_over_n2=value / (n * n),
        value_over_nm=value / (n * m),
        normalized_target=0.25 + params.delta,
        normalized_gap=value / (n * n) - (0.25 + params.delta),
        best_half_coverage=coverage,
        coverage_cap=cap,
        coverage_margin=coverage - cap if exact_mode else float("nan"),
        uncovered_after_half=m - coverage if exact_mode else float("nan"),
        vertex_cover_number=vc,
    )


@dataclass(frozen=True)
class CoverageBoundReport:
    applicable: bool
    reason: str
    delta: float
    fitted_delta: float
    msvc_value: float
    value_over_nw: float
    value_over_n2: float
    best_half_coverage: float
    coverage_target: float
    coverage_margin: float
    holds: bool


def coverage_bound_check(graph, delta, msvc_value=None):
    """Check that an optimal half prefix covers a 1 - sqrt(delta) fraction.

    Applies when the graph is weighted-regular with even order and its
    exact normalized value sits at 1/4 + delta (within 1/n) for a delta in
    (0, 1/16); outside that regime the report carries the coverage numbers
    anyway with applicable=False and the failed condition named.
    """
    n = graph.n
    u, v, w = graph.edge_arrays()
    incident = np.zeros(n)
    np.add.at(incident, u, w)
    np.add.at(incident, v, w)
    top = float(incident.max())
    if top <= 0.0 or (top - float(incident.min())) > 1e-9 * top:
        raise ValueError("graph is not weighted-regular")
    if n % 2:
        raise ValueError("graph order must be even")
    if msvc_value is None:
        if n > EXACT_MAX_VERTICES:
            raise ValueError(f"exact solve needs n <= {EXACT_MAX_VERTICES}; supply msvc_value")
        msvc_value = msvc_exact_dp(graph).value

    total = graph.total_weight()
    norm = msvc_value / (n * total)
    fitted = norm - 0.25
    reason = ""
    if not 0.0 < delta < 1.0 / 16.0:
        reason = f"delta {delta} outside (0, 1/16)"
    elif abs(norm - (0.25 + delta)) > 1.0 / n:
        reason = (
            f"normalized value {norm:.6f} is not 1/4 + delta = {0.25 + delta:.6f} "
            f"within 1/n"
        )
    elif not 0.0 < fitted < 1.0 / 16.0:
        reason = f"fitted delta {fitted:.6f} outside (0, 1/16)"

    subset = max_kvc(graph, n // 2, mode="exact")
    coverage = covered_weight(graph, subset)
    target = (1.0 - math.sqrt(delta)) * total
    return CoverageBoundReport(
        applicable=not reason,
        reason=reason,
        delta=delta,
        fitted_delta=fitted,
        msvc_value=msvc_value,
        value_over_nw=norm,
        value_over_n2=msvc_value / (n * n),
        best_half_coverage=coverage,
        coverage_target=target,
        coverage_margin=coverage - target,
        holds=coverage >= target - 1e-9,
    )
