"""Cheeger constants, edge boundaries, and edge-disjoint path counts.

The exact Cheeger constant enumerates all 2^n cuts (vectorized, capped at
n = 24); the spectral route sandwiches h(G) between lambda2/2 and
sqrt(2*Delta*lambda2) via the combinatorial Laplacian.  Edge-disjoint path
counts use shortest-augmenting-path unit-capacity max flow, whose value
equals the minimum separating edge cut (Menger); the recovered path
decomposition is extracted shortest-first so length statistics are
reproducible.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import CapExceeded, ValidationError
from .graphs import Graph, connected_components, is_connected

CHEEGER_EXACT_CAP = 24

Rational = Union[int, Fraction, str, float]


def as_fraction(x: Rational) -> Fraction:
    """Exact rational from int/Fraction/decimal-string; floats via repr.

    Floats go through their shortest decimal representation, so a literal
    like 0.1 means exactly 1/10 here.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class ExpansionReport:
    """Bounds on the Cheeger constant, with an optional witness cut."""

    method: str  # exact | spectral | cut_witness
    lower: Union[Fraction, float]
    upper: Union[Fraction, float]
    witness_cut: Optional[tuple] = None

    def to_json_dict(self) -> dict:
        out = {
            "method": self.method,
            "lower": float(self.lower),
            "upper": float(self.upper),
            "witness": sorted(self.witness_cut) if self.witness_cut is not None else None,
        }
        if isinstance(self.lower, Fraction):
            out["lower_exact"] = str(self.lower)
        if isinstance(self.upper, Fraction):
            out["upper_exact"] = str(self.upper)
        return out


@dataclass(frozen=True)
class FlowResult:
    """Maximum edge-disjoint path count with its certifying cut.

    ``paths`` is the shortest-first decomposition of one maximum flow; each
    entry is a vertex sequence from the source side to the sink side.
    """

    value: int
    min_cut: tuple
    paths: tuple

    def path_lengths(self) -> list:
        return [len(p) - 1 for p in self.paths]

    def to_json_dict(self) -> dict:
        return {
            "value": self.value,
            "min_cut": [list(e) for e in self.min_cut],
            "path_lengths": self.path_lengths(),
        }


def edge_boundary(g: Graph, a: Sequence[int]) -> tuple:
    """Edges with exactly one endpoint in ``a``."""
    aset = set(a)
    for v in aset:
        if not 0 <= v < g.n:
            raise ValidationError(f"vertex {v} out of range")
    return tuple((u, v) for u, v in g.edges if (u in aset) != (v in aset))


def cheeger_upper_from_cut(g: Graph, a: Sequence[int]) -> ExpansionReport:
    """Upper bound |E(A, A^c)| / |A| certified by an explicit cut."""
    aset = sorted(set(a))
    if not 0 < len(aset) <= g.n // 2:
        raise ValidationError("cut must satisfy 0 < |A| <= n/2")
    ratio = Fraction(len(edge_boundary(g, aset)), len(aset))
    return ExpansionReport(method="cut_witness", lower=Fraction(0), upper=ratio,
                           witness_cut=tuple(aset))


_POPCOUNT16 = None
_BITREV8 = None


def _popcount16():
    global _POPCOUNT16
    if _POPCOUNT16 is None:
        _POPCOUNT16 = np.array([bin(i).count("1") for i in range(1 << 16)],
                               dtype=np.uint8)
    return _POPCOUNT16


def _bitrev32(masks):
    """Reverse the 32-bit patterns; the lexicographically smallest vertex
    set among equal-ratio cuts is exactly the one maximizing this value."""
    global _BITREV8
    if _BITREV8 is None:
        _BITREV8 = np.array([int(f"{i:08b}"[::-1], 2) for i in range(256)],
                            dtype=np.uint32)
    t = _BITREV8
    return ((t[masks & np.uint32(0xFF)] << np.uint32(24))
            | (t[(masks >> np.uint32(8)) & np.uint32(0xFF)] << np.uint32(16))
            | (t[(masks >> np.uint32(16)) & np.uint32(0xFF)] << np.uint32(8))
            | t[masks >> np.uint32(24)])


def cheeger_exact(g: Graph) -> ExpansionReport:
    """Exact h(G) by enumerating every cut with 0 < |A| <= n/2.

    Ties break toward the lexicographically smallest witness set.
    Disconnected graphs report h = 0 with a component (or union) witness.
    """
    n = g.n
    if n < 2:
        raise ValidationError("Cheeger constant needs at least 2 vertices")
    if n > CHEEGER_EXACT_CAP:
        raise CapExceeded(f"exact Cheeger enumeration capped at n={CHEEGER_EXACT_CAP}")
    if not is_connected(g):
        comps = connected_components(g)
        witness = None
        for comp in comps:
            if len(comp) <= n // 2:
                witness = comp
                break
        if witness is None:
            # Only the huge first component exceeds n/2; its complement
            # splits into the remaining components, each small enough.
            witness = comps[1]
        z = Fraction(0)
        return ExpansionReport(method="exact", lower=z, upper=z,
                               witness_cut=tuple(witness))

    edges = g.edges
    lut = _popcount16()
    half = n // 2
    best_ratio = None
    best_rev = None
    best_mask = None
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        stop = min(start + chunk, 1 << n)
        masks = np.arange(start, stop, dtype=np.uint32)
        pc = (lut[masks & np.uint32(0xFFFF)].astype(np.uint16)
              + lut[masks >> np.uint32(16)].astype(np.uint16))
        valid = (pc > 0) & (pc <= half)
        boundary = np.zeros(stop - start, dtype=np.uint16)
        for u, v in edges:
            boundary += (((masks >> np.uint32(u)) ^ (masks >> np.uint32(v)))
                         & np.uint32(1)).astype(np.uint16)
        ratio = np.where(valid, boundary / np.maximum(pc, 1), np.inf)
        m = float(ratio.min())
        if best_ratio is not None and m > best_ratio:
            continue
        cand = masks[ratio == m]
        rev = _bitrev32(cand)
        top = int(rev.argmax())
        if best_ratio is None or m < best_ratio or int(rev[top]) > best_rev:
            best_ratio = m
            best_rev = int(rev[top])
            best_mask = int(cand[top])

    witness = tuple(v for v in range(n) if (best_mask >> v) & 1)
    h = Fraction(len(edge_boundary(g, witness)), len(witness))
    return ExpansionReport(method="exact", lower=h, upper=h, witness_cut=witness)


def _lambda2(g: Graph):
    """(lambda2, residual) of the combinatorial Laplacian."""
    n = g.n
    if n <= 2000:
        lap = np.zeros((n, n))
        for u, v in g.edges:
            lap[u, u] += 1
            lap[v, v] += 1
            lap[u, v] -= 1
            lap[v, u] -= 1
        vals = np.linalg.eigvalsh(lap)
        lam2 = float(vals[1])
        res = 64 * np.finfo(float).eps * n * max(1.0, 2.0 * g.max_degree())
        return lam2, res
    from scipy.sparse import csr_matrix
    from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

    rows, cols, vals = [], [], []
    for u, v in g.edges:
        rows += [u, v, u, v]
        cols += [v, u, u, v]
        vals += [-1.0, -1.0, 1.0, 1.0]
    lap = csr_matrix((vals, (rows, cols)), shape=(n, n))
    shift = 2.0 * g.max_degree() + 1.0

    def mv(x):
        return lap @ x + shift * x.mean()

    op = LinearOperator((n, n), matvec=mv, dtype=float)
    try:
        w, vecs = eigsh(op, k=1, which="SA", tol=1e-8, maxiter=50 * n)
    except ArpackNoConvergence as e:
        raise CapExceeded(f"lambda2 iteration did not converge: {e}") from None
    v = vecs[:, 0]
    v = v - v.mean()
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise CapExceeded("lambda2 iteration collapsed onto the constant vector")
    v /= norm
    lam2 = float(v @ (lap @ v))
    res = float(np.linalg.norm(lap @ v - lam2 * v))
    return lam2, res


def cheeger_spectral_bounds(g: Graph) -> ExpansionReport:
    """lambda2/2 <= h(G) <= sqrt(2*Delta*lambda2), residual-widened."""
    if g.n < 2:
        raise ValidationError("Cheeger bounds need at least 2 vertices")
    if not is_connected(g):
        return ExpansionReport(method="spectral", lower=0.0, upper=0.0)
    lam2, res = _lambda2(g)
    lo = max(0.0, (lam2 - res) / 2.0)
    hi = math.sqrt(2.0 * g.max_degree() * max(0.0, lam2 + res))
    return ExpansionReport(method="spectral", lower=lo, upper=hi)


# --- unit-capacity max flow (Menger counts) ---------------------------------


class _FlowNet:
    """Residual network: one arc pair per undirected edge plus super arcs."""

    def __init__(self, g: Graph, a1, a2):
        n = g.n
        self.n = n
        self.s = n
        self.t = n + 1
        self.head: list = []
        self.cap: list = []
        self.out: list = [[] for _ in range(n + 2)]
        for u, v in g.edges:
            self._arc(u, v, 1, 1)
        big = g.num_edges + 1
        for v in sorted(a1):
            self._arc(self.s, v, big, 0)
        for v in sorted(a2):
            self._arc(v, self.t, big, 0)

    def _arc(self, u, v, cap_fwd, cap_bwd):
        self.out[u].append(len(self.head))
        self.head.append(v)
        self.cap.append(cap_fwd)
        self.out[v].append(len(self.head))
        self.head.append(u)
        self.cap.append(cap_bwd)

    def bfs_augment(self) -> bool:
        prev_arc = [-1] * (self.n + 2)
        prev_arc[self.s] = -2
        q = deque([self.s])
        while q:
            u = q.popleft()
            if u == self.t:
                break
            for a in self.out[u]:
                if self.cap[a] > 0 and prev_arc[self.head[a]] == -1:
                    prev_arc[self.head[a]] = a
                    q.append(self.head[a])
        if prev_arc[self.t] == -1:
            return False
        v = self.t
        while v != self.s:
            a = prev_arc[v]
            self.cap[a] -= 1
            self.cap[a ^ 1] += 1
            v = self.head[a ^ 1]
        return True

    def reachable_from_source(self) -> set:
        seen = {self.s}
        q = deque([self.s])
        while q:
            u = q.popleft()
            for a in self.out[u]:
                v = self.head[a]
                if self.cap[a] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return seen


def edge_disjoint_paths(g: Graph, a1: Sequence[int], a2: Sequence[int]) -> FlowResult:
    """Maximum edge-disjoint path count between two disjoint vertex sets.

    The value equals the minimum A1-A2 separating edge cut; the cut is read
    off the final residual reachability, and a shortest-first decomposition
    of the flow gives the witness paths.
    """
    s1, s2 = set(a1), set(a2)
    if not s1 or not s2:
        raise ValidationError("terminal sets must be nonempty")
    if s1 & s2:
        raise ValidationError("terminal sets must be disjoint")
    for v in s1 | s2:
        if not 0 <= v < g.n:
            raise ValidationError(f"vertex {v} out of range")
    net = _FlowNet(g, s1, s2)
    value = 0
    while net.bfs_augment():
        value += 1
    side = net.reachable_from_source()
    cut = tuple((u, v) for u, v in g.edges if (u in side) != (v in side))

    # Flow-carrying directed adjacency (original edges only, states
    # (0,2)/(2,0) mark the used direction), plus used super arcs.
    flow_out: list = [[] for _ in range(g.n + 2)]
    for e, (u, v) in enumerate(g.edges):
        a = 2 * e
        if net.cap[a] == 0 and net.cap[a ^ 1] == 2:
            flow_out[u].append(v)
        elif net.cap[a] == 2 and net.cap[a ^ 1] == 0:
            flow_out[v].append(u)
    base = 2 * g.num_edges
    big = g.num_edges + 1
    k = base
    for v in sorted(s1):
        used = big - net.cap[k]
        for _ in range(used):
            flow_out[net.s].append(v)
        k += 2
    for v in sorted(s2):
        used = big - net.cap[k]
        for _ in range(used):
            flow_out[v].append(net.t)
        k += 2

    paths = []
    for _ in range(value):
        prev = {net.s: None}
        q = deque([net.s])
        while q:
            u = q.popleft()
            if u == net.t:
                break
            for v in flow_out[u]:
                if v not in prev:
                    prev[v] = u
                    q.append(v)
        node = net.t
        walk = []
        while node is not None:
            walk.append(node)
            node = prev[node]
        walk.reverse()
        for x, y in zip(walk, walk[1:]):
            flow_out[x].remove(y)
        paths.append(tuple(walk[1:-1]))
    return FlowResult(value=value, min_cut=cut, paths=tuple(paths))


def constant_K(delta: int, c: Rational, p0: Rational) -> Fraction:
    """Short-path length budget 4*Delta/(c*p0)."""
    c = as_fraction(c)
    p0 = as_fraction(p0)
    if delta <= 0:
        raise ValidationError("delta must be positive")
    if c <= 0:
        raise ValidationError("c must be positive")
    if not 0 < p0 <= 1:
        raise ValidationError("p0 must be in (0, 1]")
    return Fraction(4 * delta) / (c * p0)


@dataclass(frozen=True)
class MengerReport:
    """Expander-style path accounting between two vertex classes."""

    flow_value: int
    flow_bound: Fraction            # c * min(|a1|, |a2|)
    flow_ok: bool
    k_budget: Fraction
    short_path_count: int
    short_threshold: Fraction       # flow_value - Delta*n/(2K)
    short_ok: bool
    ratio_min_side: Fraction        # L / min(|a1|, |a2|)
    ratio_p0: Optional[Fraction]    # L / (n*p0/4) when p0 given
    c_certified: Optional[bool]     # exact h >= c when checkable, else None

    def to_json_dict(self) -> dict:
        return {
            "flow_value": self.flow_value,
            "flow_bound": float(self.flow_bound),
            "flow_ok": self.flow_ok,
            "k_budget": float(self.k_budget),
            "short_path_count": self.short_path_count,
            "short_threshold": float(self.short_threshold),
            "short_ok": self.short_ok,
            "ratio_min_side": float(self.ratio_min_side),
            "ratio_p0": None if self.ratio_p0 is None else float(self.ratio_p0),
            "c_certified": self.c_certified,
        }


def menger_expander_bound(g: Graph, a1: Sequence[int], a2: Sequence[int],
                          c: Rational, K: Optional[Rational] = None,
                          p0: Optional[Rational] = None,
                          min_size: int = 1) -> MengerReport:
    """Check L >= c*min(|a1|,|a2|) and count decomposition paths of length <= K.

    Paths longer than K cannot number more than (Delta*n/2)/K, so the short
    count is compared against L - Delta*n/(2K).  When the graph is small
    enough for exact enumeration, the claimed Cheeger lower bound c is
    verified and flagged (not silently trusted) if it fails.
    """
    c = as_fraction(c)
    if len(set(a1)) < min_size or len(set(a2)) < min_size:
        raise ValidationError(f"terminal sets must have at least {min_size} vertices")
    if K is None:
        if p0 is None:
            raise ValidationError("supply K directly or p0 to derive it")
        K = constant_K(g.delta_bound, c, p0)
    else:
        K = as_fraction(K)
        if K <= 0:
            raise ValidationError("K must be positive")
    p0f = as_fraction(p0) if p0 is not None else None

    flow = edge_disjoint_paths(g, a1, a2)
    m = min(len(set(a1)), len(set(a2)))
    bound = c * m
    short = sum(1 for length in flow.path_lengths() if length <= K)
    long_cap = Fraction(g.delta_bound * g.n, 2) / K
    threshold = flow.value - long_cap

    c_certified = None
    if g.n <= CHEEGER_EXACT_CAP and is_connected(g):
        c_certified = bool(cheeger_exact(g).lower >= c)

    return MengerReport(
        flow_value=flow.value,
        flow_bound=bound,
        flow_ok=flow.value >= bound,
        k_budget=K,
        short_path_count=short,
        short_threshold=threshold,
        short_ok=short >= threshold,
        ratio_min_side=Fraction(flow.value, m),
        ratio_p0=(Fraction(4 * flow.value) / (g.n * p0f) if p0f else None),
        c_certified=c_certified,
    )
