"""Inapproximability-ratio machinery: cover profiles, the completeness
recurrence, greedy scheduling across graph families, and config optimization.

A single hardness instance at correlation rho yields the ratio

    single_ratio(rho) = (3 - rho) * integral over r of C_rho(r, r) dr,

the soundness integral divided by the completeness limit 1/(3 - rho).

Composite instances take k weighted sub-instances (alpha_i, rho_i).  The
completeness and soundness sides are each represented by a coverage profile
(fraction of edge weight covered as a function of fractional time) and a
greedy scheduler distributes discrete time steps across the k sub-instances,
always advancing the one with the largest weighted marginal coverage gain.
The reported value per side is the area above the aggregate coverage curve,
i.e. the average cover time; the ratio is soundness over completeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .gaussian import copula_diag_grid, copula_diag_integral

CONFIG_MAGIC = "msvc-hardness 1"

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class ConfigFormatError(ValueError):
    """A hardness config file does not match its documented text format."""


@dataclass(eq=False)
class CoverProfile:
    """Piecewise-linear coverage bound on 2^g + 1 uniform nodes over [0, 1]."""

    grid: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in ("completeness-c", "soundness-s"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        grid = np.asarray(self.grid, dtype=np.float64)
        size = grid.size
        if size < 3 or (size - 1) & (size - 2):
            raise ValueError("profile needs 2^g + 1 nodes")
        if np.any(grid < -1e-12) or np.any(grid > 1.0 + 1e-12):
            raise ValueError("profile values must lie in [0, 1]")
        if np.any(np.diff(grid) < -1e-12):
            raise ValueError("profile must be nondecreasing")
        grid = np.clip(grid, 0.0, 1.0)
        grid.flags.writeable = False
        object.__setattr__(self, "grid", grid)

    @property
    def times(self):
        return np.linspace(0.0, 1.0, self.grid.size)

    def evaluate(self, t):
        return np.interp(t, self.times, self.grid)

    __call__ = evaluate

    def uncovered_area(self):
        """integral of (1 - profile) over [0, 1], trapezoid rule."""
        return float(_trapezoid(1.0 - self.grid, dx=1.0 / (self.grid.size - 1)))


def _check_rho(rho):
    if not -1.0 < rho <= 0.0:
        raise ValueError(f"rho must lie in (-1, 0], got {rho}")


def completeness_limit(rho, gamma=0.0):
    """Fixed point of t <- 1/4 + ((1+rho)/4) t + ((1-rho)/4) gamma.

    Iterated from the seed (3+rho)/8 until the change drops below 1e-12;
    at gamma = 0 this is 1/(3-rho), the limiting average cover time of the
    nested completeness ordering.
    """
    _check_rho(rho)
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    x = (3.0 + rho) / 8.0
    for _ in range(10000):
        nxt = 0.25 + (1.0 + rho) / 4.0 * x + (1.0 - rho) / 4.0 * gamma
        if abs(nxt - x) < 1e-12:
            return nxt
        x = nxt
    return x


def single_ratio(rho):
    """Soundness integral over completeness limit for one instance.

    Defined on [-1, 0]; the boundary rho = -1 is the continuity limit 1.
    """
    if not -1.0 <= rho <= 0.0:
        raise ValueError(f"rho must lie in [-1, 0], got {rho}")
    return (3.0 - rho) * copula_diag_integral(rho)


def completeness_profile(rho, gamma=0.0, depth=60, g=12):
    """Iterate the halving recurrence for the completeness coverage bound.

    With nu the ((1+rho)/4, (1-rho)/4, ...) correlated-bit distribution:

        c'(t) = nu00 * c(2t) + (nu01 + nu10) * 2t - 2*gamma       t <= 1/2
        c'(t) = (nu00 + nu01 + nu10) + nu11 * c(2t - 1) - 2*gamma  t > 1/2

    starting from the zero profile, clamped to [0, 1] each round, stopping
    at depth rounds or sup-norm change below 1e-9.  The dyadic grid maps
    2t and 2t - 1 of grid nodes onto grid nodes exactly.
    """
    _check_rho(rho)
    if gamma < 0.0:
        raise ValueError("gamma must be non-negative")
    if g < 10:
        raise ValueError("grid exponent g must be at least 10")
    if depth < 1:
        raise ValueError("depth must be at least 1")
    size = (1 << g) + 1
    half = 1 << (g - 1)
    nu00 = (1.0 + rho) / 4.0
    nu11 = nu00
    nu_mix = (1.0 - rho) / 2.0

    t_low = np.linspace(0.0, 0.5, half + 1)
    c = np.zeros(size)
    for _ in range(depth):
        new = np.empty(size)
        new[:half + 1] = nu00 * c[0::2] + nu_mix * 2.0 * t_low - 2.0 * gamma
        new[half + 1:] = (nu00 + nu_mix) + nu11 * c[2::2] - 2.0 * gamma
        np.clip(new, 0.0, 1.0, out=new)
        np.maximum.accumulate(new, out=new)
        delta = float(np.max(np.abs(new - c)))
        c = new
        if delta < 1e-9:
            break
    return CoverProfile(c, "completeness-c")


def soundness_profile(rho, eps=0.0, g=12):
    """Sample the soundness coverage cap s(t) = 1 - C_rho(1-t, 1-t) + eps."""
    _check_rho(rho)
    if eps < 0.0:
        raise ValueError("eps must be non-negative")
    t = np.linspace(0.0, 1.0, (1 << g) + 1)
    s = 1.0 - copula_diag_grid(rho, 1.0 - t) + eps
    return CoverProfile(np.clip(s, 0.0, 1.0), "soundness-s")


@dataclass(frozen=True)
class HardnessConfig:
    """Weighted correlation pairs (alpha_i, rho_i) for a composite instance."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((float(a), float(r)) for a, r in self.pairs)
        if not pairs:
            raise ValueError("config needs at least one (alpha, rho) pair")
        for a, r in pairs:
            if not (a > 0.0 and np.isfinite(a)):
                raise ValueError(f"alpha must be positive and finite, got {a}")
            _check_rho(r)
        object.__setattr__(self, "pairs", pairs)

    @property
    def k(self):
        return len(self.pairs)

    @property
    def alphas(self):
        return np.array([a for a, _ in self.pairs])

    @property
    def rhos(self):
        return np.array([r for _, r in self.pairs])


def parse_hardness_config(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != CONFIG_MAGIC:
        raise ConfigFormatError(f"line 1: expected header {CONFIG_MAGIC!r}")
    if len(lines) < 2:
        raise ConfigFormatError("line 2: missing pair count")
    try:
        k = int(lines[1])
    except ValueError:
        raise ConfigFormatError(f"line 2: malformed pair count {lines[1]!r}") from None
    pairs = []
    for i in range(k):
        ln = 3 + i
        if 2 + i >= len(lines):
            raise ConfigFormatError(f"line {ln}: missing pair {i + 1} of {k}")
        parts = lines[2 + i].split()
        if len(parts) != 2:
            raise ConfigFormatError(f"line {ln}: expected 'alpha rho'")
        try:
            pairs.append((float(parts[0]), float(parts[1])))
        except ValueError:
            raise ConfigFormatError(f"line {ln}: malformed number") from None
    try:
        return HardnessConfig(tuple(pairs))
    except ValueError as exc:
        raise ConfigFormatError(str(exc)) from None


def format_hardness_config(cfg):
    lines = [CONFIG_MAGIC, str(cfg.k)]
    lines += [f"{a:.10g} {r:.10g}" for a, r in cfg.pairs]
    return "\n".join(lines) + "\n"


def load_hardness_config(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_hardness_config(fh.read())


def save_hardness_config(cfg, path):
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_hardness_config(cfg))


def figure1_config():
    """The bundled 60-pair composite config reproducing the 1.0748 ratio."""
    text = resources.files("minsumvc").joinpath("data/figure1.cfg").read_text("ascii")
    return parse_hardness_config(text)


@dataclass(eq=False)
class RatioReport:
    completeness_value: float
    soundness_value: float
    ratio: float
    completeness_schedule: np.ndarray
    soundness_schedule: np.ndarray
    steps_per_graph: int

    @property
    def steps(self):
        return self.completeness_schedule.size


def _greedy_schedule(alphas, profiles, per_graph):
    """Greedy step assignment over k sub-instances.

    profiles[i] maps the i-th instance's internal fractional time to covered
    fraction; each instance owns per_graph internal steps.  Returns the
    average cover time (area above the aggregate weighted coverage curve)
    and the per-step trace of chosen instance indices.
    """
    k = len(profiles)
    total_steps = k * per_graph
    node_times = np.arange(per_graph + 1) / per_graph
    fv = np.stack([p.evaluate(node_times) for p in profiles])
    gains = alphas[:, None] * np.diff(fv, axis=1)

    nxt = np.zeros(k, dtype=np.int64)
    cur = gains[:, 0].copy()
    trace = np.empty(total_steps, dtype=np.int32)
    coverage = np.empty(total_steps + 1)
    covered = float(alphas @ fv[:, 0])
    coverage[0] = covered
    for step in range(total_steps):
        i = int(np.argmax(cur))
        trace[step] = i
        covered += cur[i]
        j = int(nxt[i]) + 1
        nxt[i] = j
        cur[i] = gains[i, j] if j < per_graph else -np.inf
        coverage[step + 1] = covered

    total_alpha = float(alphas.sum())
    value = float(_trapezoid(1.0 - coverage / total_alpha, dx=1.0 / total_steps))
    return value, trace


def composite_ratio(cfg, steps, gamma=0.0, eps=0.0, g=12):
    """Greedy-scheduled soundness/completeness ratio of a composite config."""
    if steps < 1000:
        raise ValueError("steps must be at least 1000")
    k = cfg.k
    per_graph = max(1, round(steps / k))
    alphas = cfg.alphas

    c_cache, s_cache = {}, {}
    c_profiles, s_profiles = [], []
    for _, rho in cfg.pairs:
        if rho not in c_cache:
            c_cache[rho] = completeness_profile(rho, gamma, g=g)
            s_cache[rho] = soundness_profile(rho, eps, g=g)
        c_profiles.append(c_cache[rho])
        s_profiles.append(s_cache[rho])

    c_value, c_trace = _greedy_schedule(alphas, c_profiles, per_graph)
    s_value, s_trace = _greedy_schedule(alphas, s_profiles, per_graph)
    return RatioReport(
        completeness_value=c_value,
        soundness_value=s_value,
        ratio=s_value / c_value,
        completeness_schedule=c_trace,
        soundness_schedule=s_trace,
        steps_per_graph=per_graph,
    )


RHO_MIN, RHO_MAX = -0.999, 0.0


@dataclass(frozen=True)
class OptimizeResult:
    """An improved config, its ratio, and the evaluations spent finding it."""

    config: HardnessConfig
    ratio: float
    evaluations: int


def optimize_config(seed_cfg, budget, steps=20000, g=12):
    """Coordinate grid refinement then finite-difference ascent on the ratio.

    budget caps composite_ratio evaluations; only improving moves are
    accepted, so the result never scores below seed_cfg.  Deterministic.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    state = {"evals": 0}

    def evaluate(pairs):
        if state["evals"] >= budget:
            return None
        state["evals"] += 1
        return composite_ratio(HardnessConfig(tuple(pairs)), steps, g=g).ratio

    def result(pairs, best):
        cfg = HardnessConfig(tuple(tuple(p) for p in pairs))
        return OptimizeResult(cfg, best, state["evals"])

    pairs = [list(p) for p in seed_cfg.pairs]
    best = evaluate(pairs)
    k = len(pairs)

    # coordinate refinement, shrinking step sizes
    for delta in (0.08, 0.04, 0.02, 0.01, 0.005):
        for i in range(k):
            for sign in (+1, -1):
                cand = [p[:] for p in pairs]
                cand[i][1] = min(RHO_MAX, max(RHO_MIN, cand[i][1] + sign * delta))
                val = evaluate(cand)
                if val is None:
                    return result(pairs, best)
                if val > best + 1e-12:
                    pairs, best = cand, val
            if k > 1:
                for factor in (1.0 + 2.0 * delta, 1.0 / (1.0 + 2.0 * delta)):
                    cand = [p[:] for p in pairs]
                    cand[i][0] *= factor
                    val = evaluate(cand)
                    if val is None:
                        return result(pairs, best)
                    if val > best + 1e-12:
                        pairs, best = cand, val

    # finite-difference gradient ascent on (log alpha_i, rho_i)
    h = 1e-3
    while True:
        grad = np.zeros(2 * k)
        stop = False
        for i in range(k):
            for d, slot in ((0, 2 * i), (1, 2 * i + 1)):
                hi = [p[:] for p in pairs]
                lo = [p[:] for p in pairs]
                if d == 0:
                    hi[i][0] *= np.exp(h)
                    lo[i][0] *= np.exp(-h)
                else:
                    hi[i][1] = min(RHO_MAX, hi[i][1] + h)
                    lo[i][1] = max(RHO_MIN, lo[i][1] - h)
                vh, vl = evaluate(hi), evaluate(lo)
                if vh is None or vl is None:
                    stop = True
                    break
                grad[slot] = (vh - vl) / (2 * h)
            if stop:
                break
        if stop:
            break
        norm = float(np.linalg.norm(grad))
        if norm < 1e-12:
            break
        direction = grad / norm
        moved = False
        for step_size in (0.1, 0.03, 0.01, 0.003, 0.001):
            cand = [p[:] for p in pairs]
            for i in range(k):
                cand[i][0] *= float(np.exp(step_size * direction[2 * i]))
                cand[i][1] = min(RHO_MAX, max(RHO_MIN, cand[i][1] + step_size * direction[2 * i + 1]))
            val = evaluate(cand)
            if val is None:
                stop = True
                break
            if val > best + 1e-12:
                pairs, best = cand, val
                moved = True
                break
        if stop or not moved:
            break

    return result(pairs, best)
