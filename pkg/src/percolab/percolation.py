"""Bernoulli bond percolation with pinned per-edge randomness.

The uniform for edge e in trial t of a run seeded with s is
``u01(stream_u64(derive_key(s, t), e))``; an edge is open iff its uniform
is strictly below p.  Consequences: identical (graph, seed, trial) give
identical configurations, and for a fixed trial the open sets are nested
along p (exact monotone coupling), which turns threshold scans into
per-trial monotone curves.

Component structure is computed by union-find.  The regular-tree survival
oracle gives exact finite-depth survival probabilities for comparing
against Monte Carlo runs on explicitly materialized tree balls.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .graphs import Graph, ball_vertices
from .rng import derive_key, trial_keys, uniforms, uniforms_block

Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class PercConfig:
    """One percolation experiment: open probability, seed, trial budget."""

    p: float
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValidationError("p must lie in [0, 1]")
        if self.trials < 1:
            raise ValidationError("trials must be positive")


@dataclass(frozen=True)
class PercolationSample:
    """One edge configuration with its component statistics."""

    open_edges: int                 # bitmask, bit e = edge e of g.edges open
    num_edges: int
    largest_component: int
    component_histogram: dict       # component size -> count

    def open_edges_hex(self) -> str:
        nbytes = max(1, (self.num_edges + 7) // 8)
        return self.open_edges.to_bytes(nbytes, "little").hex()


@dataclass(frozen=True)
class Estimate:
    """Binomial point estimate with a 95% normal-approximation half-width."""

    value: float
    half_width: float
    trials: int
    successes: int

    @property
    def ci_low(self) -> float:
        return max(0.0, self.value - self.half_width)

    @property
    def ci_high(self) -> float:
        return min(1.0, self.value + self.half_width)


@dataclass(frozen=True)
class SurvivalEstimate:
    """Probability that the root reaches the radius-R sphere of its ball."""

    radius: int
    p: float
    point_estimate: float
    trials: int
    half_width: float

    @property
    def ci_low(self) -> float:
        return max(0.0, self.point_estimate - self.half_width)

    @property
    def ci_high(self) -> float:
        return min(1.0, self.point_estimate + self.half_width)

    def to_json_dict(self) -> dict:
        return {
            "radius": self.radius,
            "p": self.p,
            "point_estimate": self.point_estimate,
            "trials": self.trials,
            "half_width": self.half_width,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }


@dataclass(frozen=True)
class ReachSetDistribution:
    """Empirical law of |B'_p(o, R)|, the open reach set within R hops."""

    radius: int
    p: float
    trials: int
    size_counts: dict               # size -> count
    prob_geq_radius: float          # P(|B'| >= R)
    half_width: float

    def to_json_dict(self) -> dict:
        return {
            "radius": self.radius,
            "p": self.p,
            "trials": self.trials,
            "size_counts": {str(k): v for k, v in sorted(self.size_counts.items())},
            "prob_geq_radius": self.prob_geq_radius,
            "half_width": self.half_width,
        }


def binomial_half_width(successes: int, trials: int) -> float:
    phat = successes / trials
    return Z95 * math.sqrt(phat * (1.0 - phat) / trials)


def _union_find_sizes(n: int, eu, ev, open_idx) -> list:
    parent = list(range(n))
    size = [1] * n
    for e in open_idx:
        ru = eu[e]
        while parent[ru] != ru:
            parent[ru] = parent[parent[ru]]
            ru = parent[ru]
        rv = ev[e]
        while parent[rv] != rv:
            parent[rv] = parent[parent[rv]]
            rv = parent[rv]
        if ru != rv:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
    roots = []
    for v in range(n):
        r = v
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        roots.append(r)
    return [size[r] for r in set(roots)], roots


def _largest_component(n: int, eu, ev, open_idx) -> int:
    parent = list(range(n))
    size = [1] * n
    best = 1 if n else 0
    for e in open_idx:
        ru = eu[e]
        while parent[ru] != ru:
            parent[ru] = parent[parent[ru]]
            ru = parent[ru]
        rv = ev[e]
        while parent[rv] != rv:
            parent[rv] = parent[parent[rv]]
            rv = parent[rv]
        if ru != rv:
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            s = size[ru] + size[rv]
            size[ru] = s
            if s > best:
                best = s
    return best


def open_edge_mask(g: Graph, cfg: PercConfig, trial_index: int) -> np.ndarray:
    """Boolean open-edge array for one trial (the pinned coupling stream)."""
    if trial_index < 0 or trial_index >= cfg.trials:
        raise ValidationError("trial_index must be in [0, trials)")
    key = derive_key(cfg.seed, trial_index)
    return uniforms(key, g.num_edges) < cfg.p


def percolate(g: Graph, cfg: PercConfig, trial_index: int) -> PercolationSample:
    """Sample one configuration and its component structure."""
    open_arr = open_edge_mask(g, cfg, trial_index)
    edges = g.edges
    eu = [e[0] for e in edges]
    ev = [e[1] for e in edges]
    sizes, _ = _union_find_sizes(g.n, eu, ev, np.flatnonzero(open_arr).tolist())
    hist = Counter(sizes)
    mask_bytes = np.packbits(open_arr, bitorder="little").tobytes()
    return PercolationSample(
        open_edges=int.from_bytes(mask_bytes, "little"),
        num_edges=g.num_edges,
        largest_component=max(sizes) if sizes else 0,
        component_histogram=dict(hist),
    )


def _giant_threshold(alpha: float, n: int) -> int:
    return max(1, math.ceil(alpha * n - 1e-9))


def giant_probability(g: Graph, cfg: PercConfig, alpha: float) -> Estimate:
    """Fraction of trials whose largest open component has >= alpha*n vertices."""
    if not 0.0 < alpha <= 1.0:
        raise ValidationError("alpha must lie in (0, 1]")
    thr = _giant_threshold(alpha, g.n)
    edges = g.edges
    eu = [e[0] for e in edges]
    ev = [e[1] for e in edges]
    keys = trial_keys(cfg.seed, 0, cfg.trials)
    successes = 0
    for t in range(cfg.trials):
        open_arr = uniforms(int(keys[t]), g.num_edges) < cfg.p
        if _largest_component(g.n, eu, ev, np.flatnonzero(open_arr).tolist()) >= thr:
            successes += 1
    return Estimate(value=successes / cfg.trials,
                    half_width=binomial_half_width(successes, cfg.trials),
                    trials=cfg.trials, successes=successes)


@dataclass(frozen=True)
class ScanRow:
    p: float
    alpha: float
    prob: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int


@dataclass(frozen=True)
class ScanTable:
    rows: tuple

    CSV_HEADER = "p,alpha,prob,ci_low,ci_high,trials,seed"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(f"{r.p:.6f},{r.alpha:.6f},{r.prob:.6f},"
                         f"{r.ci_low:.6f},{r.ci_high:.6f},{r.trials},{r.seed}")
        return "\n".join(lines) + "\n"


def threshold_scan(g: Graph, p_grid: Sequence[float], alpha: float,
                   seed: int, trials: int) -> ScanTable:
    """Giant-probability row per grid point, monotone-coupled across p.

    Trial t draws one uniform per edge; every p thresholds the same draws,
    so each trial's open sets are nested along the grid.
    """
    grid = list(p_grid)
    if not grid:
        raise ValidationError("empty p grid")
    if any(not 0.0 <= p <= 1.0 for p in grid):
        raise ValidationError("grid values must lie in [0, 1]")
    if sorted(grid) != grid:
        raise ValidationError("p grid must be sorted ascending")
    if not 0.0 < alpha <= 1.0:
        raise ValidationError("alpha must lie in (0, 1]")
    if trials < 1:
        raise ValidationError("trials must be positive")
    thr = _giant_threshold(alpha, g.n)
    edges = g.edges
    eu = [e[0] for e in edges]
    ev = [e[1] for e in edges]
    keys = trial_keys(seed, 0, trials)
    successes = [0] * len(grid)
    for t in range(trials):
        u = uniforms(int(keys[t]), g.num_edges)
        order = np.argsort(u, kind="stable")
        sorted_u = u[order]
        order_list = order.tolist()
        for i, p in enumerate(grid):
            k = int(np.searchsorted(sorted_u, p, side="left"))
            if _largest_component(g.n, eu, ev, order_list[:k]) >= thr:
                successes[i] += 1
    rows = []
    for i, p in enumerate(grid):
        s = successes[i]
        prob = s / trials
        hw = binomial_half_width(s, trials)
        rows.append(ScanRow(p=p, alpha=alpha, prob=prob,
                            ci_low=max(0.0, prob - hw), ci_high=min(1.0, prob + hw),
                            trials=trials, seed=seed))
    return ScanTable(rows=tuple(rows))


# --- ball-restricted experiments --------------------------------------------


class _BallScaffold:
    """Ball subgraph with its own canonical edge list and adjacency."""

    def __init__(self, g: Graph, o: int, radius: int):
        verts, dist = ball_vertices(g, o, radius)
        index = {v: i for i, v in enumerate(verts)}
        self.k = len(verts)
        self.root = index[o]
        self.dist = [dist[v] for v in verts]
        self.edges = []
        for v in verts:
            iv = index[v]
            for w in g.adjacency[v]:
                iw = index.get(w)
                if iw is not None and iv < iw:
                    self.edges.append((iv, iw))
        self.edges.sort()
        self.adj: list = [[] for _ in range(self.k)]
        for e, (a, b) in enumerate(self.edges):
            self.adj[a].append((b, e))
            self.adj[b].append((a, e))


def ball_survival(g: Graph, o: int, radius: int, cfg: PercConfig) -> SurvivalEstimate:
    """Monte Carlo P(root reaches a distance-``radius`` vertex inside its ball).

    Percolation is restricted to the ball's edges; the target sphere is the
    set of ball vertices at distance exactly ``radius``.  An eccentricity
    smaller than the radius makes the event impossible (estimate 0).
    """
    if radius < 1:
        raise ValidationError("radius must be at least 1")
    ball = _BallScaffold(g, o, radius)
    on_sphere = [d == radius for d in ball.dist]
    if not any(on_sphere):
        return SurvivalEstimate(radius=radius, p=cfg.p, point_estimate=0.0,
                                trials=cfg.trials, half_width=0.0)
    successes = 0
    m = len(ball.edges)
    adj = ball.adj
    root = ball.root
    chunk = 4096
    for start in range(0, cfg.trials, chunk):
        count = min(chunk, cfg.trials - start)
        keys = trial_keys(cfg.seed, start, count)
        block = uniforms_block(keys, m) < cfg.p
        for row in range(count):
            open_row = block[row]
            seen = bytearray(ball.k)
            seen[root] = 1
            stack = [root]
            hit = False
            while stack and not hit:
                x = stack.pop()
                for y, e in adj[x]:
                    if not seen[y] and open_row[e]:
                        if on_sphere[y]:
                            hit = True
                            break
                        seen[y] = 1
                        stack.append(y)
            if hit:
                successes += 1
    return SurvivalEstimate(radius=radius, p=cfg.p,
                            point_estimate=successes / cfg.trials,
                            trials=cfg.trials,
                            half_width=binomial_half_width(successes, cfg.trials))


def reach_set_size(g: Graph, o: int, radius: int, cfg: PercConfig) -> ReachSetDistribution:
    """Empirical law of the number of vertices within ``radius`` open hops.

    Open paths of length <= radius cannot leave the ball, so percolation is
    again restricted to the ball's edge list.  Reports P(|B'| >= radius) as
    the headline number.
    """
    if radius < 1:
        raise ValidationError("radius must be at least 1")
    ball = _BallScaffold(g, o, radius)
    m = len(ball.edges)
    adj = ball.adj
    root = ball.root
    counts: Counter = Counter()
    geq = 0
    chunk = 4096
    for start in range(0, cfg.trials, chunk):
        count = min(chunk, cfg.trials - start)
        keys = trial_keys(cfg.seed, start, count)
        block = uniforms_block(keys, m) < cfg.p
        for row in range(count):
            open_row = block[row]
            seen = bytearray(ball.k)
            seen[root] = 1
            frontier = deque([(root, 0)])
            reached = 1
            while frontier:
                x, d = frontier.popleft()
                if d == radius:
                    continue
                for y, e in adj[x]:
                    if not seen[y] and open_row[e]:
                        seen[y] = 1
                        reached += 1
                        frontier.append((y, d + 1))
            counts[reached] += 1
            if reached >= radius:
                geq += 1
    return ReachSetDistribution(radius=radius, p=cfg.p, trials=cfg.trials,
                                size_counts=dict(counts),
                                prob_geq_radius=geq / cfg.trials,
                                half_width=binomial_half_width(geq, cfg.trials))


# --- regular-tree oracle and sprinkling algebra ------------------------------


def tree_survival_oracle(d: int, p: float, radius: int) -> float:
    """Exact P(root of the d-regular tree reaches depth ``radius``).

    With u_0 = 1 and u_k = 1 - (1 - p*u_{k-1})^(d-1), the root survives to
    depth R with probability 1 - (1 - p*u_{R-1})^d.  Criticality sits at
    p = 1/(d-1), the fixed-point threshold of the branching recursion.
    """
    if d < 2:
        raise ValidationError("tree degree must be at least 2")
    if not 0.0 <= p <= 1.0:
        raise ValidationError("p must lie in [0, 1]")
    if radius < 0:
        raise ValidationError("radius must be nonnegative")
    if radius == 0:
        return 1.0
    u = 1.0
    for _ in range(radius - 1):
        u = 1.0 - (1.0 - p * u) ** (d - 1)
    return 1.0 - (1.0 - p * u) ** d


def tree_critical_probability(d: int) -> Fraction:
    """p_c of the d-regular tree: 1/(d-1)."""
    if d < 2:
        raise ValidationError("tree degree must be at least 2")
    return Fraction(1, d - 1)


def sprinkle_combine(p1: float, eps: float) -> float:
    """p with 1-p = (1-p1)(1-eps)."""
    if not 0.0 <= p1 <= 1.0 or not 0.0 <= eps <= 1.0:
        raise ValidationError("p1 and eps must lie in [0, 1]")
    return 1.0 - (1.0 - p1) * (1.0 - eps)


def sprinkle_epsilon(p: float, p1: float) -> float:
    """eps completing 1-p = (1-p1)(1-eps); needs p1 <= p < 1 or p == p1."""
    if not 0.0 <= p1 <= p <= 1.0:
        raise ValidationError("need 0 <= p1 <= p <= 1")
    if p1 == 1.0:
        return 0.0
    return 1.0 - (1.0 - p) / (1.0 - p1)


def sprinkle_p1(p: float, eps: float) -> float:
    """p1 completing 1-p = (1-p1)(1-eps); needs eps <= p."""
    if not 0.0 <= eps <= p <= 1.0:
        raise ValidationError("need 0 <= eps <= p <= 1")
    if eps == 1.0:
        return 0.0
    return 1.0 - (1.0 - p) / (1.0 - eps)
