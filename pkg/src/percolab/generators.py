"""Seedable construction of the graph families used by the experiments.

Every family is a pure function of its spec (family, n, d, seed): identical
seeds give identical adjacency lists, because all randomness flows through
the pinned splitmix64 stream.  ``bridged_pair`` is the deliberate
non-expander control: two structurally different halves joined by a single
edge, so the Cheeger constant decays like 2/n while both halves keep their
own local limits.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Optional, Union

from .errors import CapExceeded, ValidationError
from .graphs import Graph
from .rng import SplitMix64, derive_key

FAMILIES = ("cycle", "complete", "torus2d", "random_regular", "bridged_pair")

REGULAR_RETRY_CAP = 1000


@dataclass(frozen=True)
class GenSpec:
    """Parameters for one generated graph."""

    family: str
    n: int
    d: Optional[int] = None
    seed: int = 0

    def to_kv(self) -> str:
        lines = [f"family={self.family}", f"n={self.n}"]
        if self.d is not None:
            lines.append(f"d={self.d}")
        lines.append(f"seed={self.seed}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_kv(text: str) -> "GenSpec":
        fields = parse_kv(text)
        unknown = set(fields) - {"family", "n", "d", "seed"}
        if unknown:
            raise ValidationError(f"unknown GenSpec keys: {sorted(unknown)}")
        if "family" not in fields or "n" not in fields:
            raise ValidationError("GenSpec needs at least family and n")
        try:
            return GenSpec(family=fields["family"],
                           n=int(fields["n"]),
                           d=int(fields["d"]) if "d" in fields else None,
                           seed=int(fields.get("seed", "0")))
        except ValueError as e:
            raise ValidationError(f"bad GenSpec value: {e}") from None


def parse_kv(text: str) -> dict:
    """Flat key=value block: one pair per line, '#' comments, blanks ignored."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    return fields


def generate(spec: GenSpec) -> Graph:
    """Build the graph described by ``spec`` (deterministic)."""
    if spec.family == "cycle":
        return cycle(spec.n)
    if spec.family == "complete":
        return complete(spec.n)
    if spec.family == "torus2d":
        return torus2d(spec.n)
    if spec.family == "random_regular":
        if spec.d is None:
            raise ValidationError("random_regular requires d")
        return random_regular(spec.n, spec.d, spec.seed)
    if spec.family == "bridged_pair":
        return bridged_pair(spec.n, spec.seed)
    raise ValidationError(f"unknown family {spec.family!r} (choose from {FAMILIES})")


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValidationError("cycle needs n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return Graph.from_edges(n, edges, delta_bound=2)


def complete(n: int) -> Graph:
    if n < 2:
        raise ValidationError("complete needs n >= 2")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph.from_edges(n, edges, delta_bound=n - 1)


def torus2d(n: int) -> Graph:
    k = math.isqrt(n)
    if k * k != n:
        raise ValidationError("torus2d needs a perfect-square n")
    if k < 3:
        raise ValidationError("torus2d needs side length >= 3")
    edges = []
    for r in range(k):
        for c in range(k):
            v = r * k + c
            edges.append((v, r * k + (c + 1) % k))
            edges.append((v, ((r + 1) % k) * k + c))
    return Graph.from_edges(n, edges, delta_bound=4)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Uniform simple d-regular graph via the rejection configuration model.

    A perfect matching of the n*d half-edge stubs is drawn; samples with a
    self-loop or multi-edge are discarded, which leaves the uniform
    distribution over simple d-regular graphs.  Acceptance probability is
    roughly exp(-(d*d-1)/4), independent of n.
    """
    if d < 3:
        raise ValidationError("random_regular requires d >= 3")
    if n <= d:
        raise ValidationError("random_regular requires n > d")
    if (n * d) % 2 != 0:
        raise ValidationError("random_regular requires n*d even")
    rng = SplitMix64(seed)
    for _ in range(REGULAR_RETRY_CAP):
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            if u > v:
                u, v = v, u
            if (u, v) in edges:
                ok = False
                break
            edges.add((u, v))
        if ok:
            return Graph.from_edges(n, sorted(edges), delta_bound=d)
    raise CapExceeded(
        f"random_regular rejection cap {REGULAR_RETRY_CAP} exceeded for n={n}, d={d}")


def bridged_pair(n: int, seed: int) -> Graph:
    """Random 4-regular half plus a cycle half, joined by one bridge edge.

    Vertices 0..n/2-1 carry the 4-regular graph, n/2..n-1 the cycle, and the
    single edge (0, n/2) is the only connection; its cut certifies
    h(G) <= 1/(n/2).
    """
    if n % 2 != 0:
        raise ValidationError("bridged_pair needs even n")
    half = n // 2
    if half < 5:
        raise ValidationError("bridged_pair needs n >= 10")
    reg = random_regular(half, 4, derive_key(seed, 0))
    edges = list(reg.edges)
    edges += [(half + i, half + (i + 1) % half) for i in range(half)]
    edges.append((0, half))
    return Graph.from_edges(n, edges, delta_bound=5)


def regular_tree_ball(d: int, radius: int) -> Graph:
    """Radius-``radius`` ball of the infinite d-regular tree, rooted at 0.

    Vertex 0 has d children; every other internal vertex has d-1.  This is
    how infinite-tree limits enter finite experiments.
    """
    if d < 2:
        raise ValidationError("regular tree needs d >= 2")
    if radius < 0:
        raise ValidationError("radius must be nonnegative")
    edges = []
    frontier = [0]
    next_id = 1
    for depth in range(radius):
        new_frontier = []
        for v in frontier:
            kids = d if depth == 0 else d - 1
            for _ in range(kids):
                edges.append((v, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return Graph.from_edges(next_id, edges, delta_bound=d)


# --- edge-list text format --------------------------------------------------


def load_edge_list(stream: Union[str, bytes, io.IOBase]) -> Graph:
    """Parse the shared edge-list format into a Graph.

    One "u v" pair per line; '#' lines are comments; an optional header
    "n <count>" pins the vertex count (otherwise n = max id + 1).
    delta_bound is the observed maximum degree.
    """
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        text = stream.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    n_declared = None
    pairs = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or n_declared is not None:
                raise ValidationError(f"line {lineno}: bad header {line!r}")
            try:
                n_declared = int(parts[1])
            except ValueError:
                raise ValidationError(f"line {lineno}: bad vertex count") from None
            if n_declared < 0:
                raise ValidationError(f"line {lineno}: negative vertex count")
            continue
        if len(parts) != 2:
            raise ValidationError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"line {lineno}: non-integer vertex id") from None
        if u < 0 or v < 0:
            raise ValidationError(f"line {lineno}: negative vertex id")
        if u == v:
            raise ValidationError(f"line {lineno}: self-loop at {u}")
        max_id = max(max_id, u, v)
        pairs.append((lineno, u, v))
    n = n_declared if n_declared is not None else max_id + 1
    if max_id >= n:
        raise ValidationError(f"vertex id {max_id} exceeds declared count {n}")
    seen = set()
    edges = []
    for lineno, u, v in pairs:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValidationError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)


def dump_edge_list(g: Graph) -> str:
    """Serialize in the shared format, header included."""
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
