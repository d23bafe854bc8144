"""Finite simple graphs, rooted balls, and the agreement-radius metric.

A rooted ball carries an exact canonical certificate (see ``canon``), so
rooted-isomorphism tests and ball-class bookkeeping reduce to byte-string
comparison.  The distance between two rooted graphs is 1/(1+t) where t is
the largest radius at which their balls around the roots are isomorphic;
on isomorphism classes this is an ultrametric.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ValidationError
from . import canon


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    ``adjacency`` is a tuple of sorted neighbor tuples; ``delta_bound`` is
    the declared maximum degree (every actual degree must stay at or below
    it, it need not be tight).
    """

    __slots__ = ("n", "adjacency", "delta_bound", "_edges")

    def __init__(self, n: int, adjacency: Sequence[Sequence[int]], delta_bound: int,
                 _validate: bool = True):
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        if delta_bound < 1:
            raise ValidationError("delta_bound must be a positive integer")
        if len(adjacency) != n:
            raise ValidationError("adjacency must list every vertex")
        adj = tuple(tuple(nbrs) for nbrs in adjacency)
        if _validate:
            self._check_simple_symmetric(n, adj, delta_bound)
        self.n = n
        self.adjacency = adj
        self.delta_bound = delta_bound
        self._edges: Optional[tuple] = None

    @staticmethod
    def _check_simple_symmetric(n, adj, delta_bound):
        neighbor_sets = []
        for u, nbrs in enumerate(adj):
            if len(nbrs) > delta_bound:
                raise ValidationError(f"vertex {u} exceeds degree bound {delta_bound}")
            prev = -1
            for v in nbrs:
                if not 0 <= v < n:
                    raise ValidationError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise ValidationError(f"self-loop at vertex {u}")
                if v <= prev:
                    raise ValidationError(f"adjacency of {u} not strictly sorted")
                prev = v
            neighbor_sets.append(set(nbrs))
        for u, nbrs in enumerate(adj):
            for v in nbrs:
                if u not in neighbor_sets[v]:
                    raise ValidationError(f"edge {u}-{v} not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], delta_bound: Optional[int] = None) -> "Graph":
        """Build a graph from (u, v) pairs; rejects self-loops and duplicates."""
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise ValidationError(f"duplicate edge ({u},{v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        maxdeg = max((len(s) for s in nbrs), default=0)
        if delta_bound is None:
            delta_bound = max(1, maxdeg)
        return cls(n, [sorted(s) for s in nbrs], delta_bound, _validate=False)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @property
    def edges(self) -> tuple:
        """Canonical edge list: (u, v) with u < v, lexicographically sorted.

        Edge indices into this tuple are the pinned addressing used by the
        percolation random streams.
        """
        if self._edges is None:
            self._edges = tuple((u, v) for u in range(self.n)
                                for v in self.adjacency[u] if u < v)
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and self.adjacency == other.adjacency)

    def __hash__(self):
        return hash((self.n, self.adjacency))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.num_edges}, delta_bound={self.delta_bound})"


@dataclass(frozen=True)
class RootedBall:
    """Induced subgraph on vertices within ``radius`` of a root vertex.

    Vertices are relabeled 0..k-1 in ascending order of their original ids;
    ``original_vertices[i]`` maps back and ``distances[i]`` is the BFS
    distance from the root inside the ball.
    """

    graph: Graph
    root: int
    radius: int
    certificate: bytes
    original_vertices: tuple = ()
    distances: tuple = ()

    def sphere(self) -> tuple:
        """Local indices at distance exactly ``radius`` from the root."""
        return tuple(i for i, d in enumerate(self.distances) if d == self.radius)


@dataclass(frozen=True)
class RootedDistance:
    """Agreement radius t and metric value d = 1/(1+t).

    ``t is None`` encodes agreement at every radius (fully isomorphic rooted
    graphs), with d = 0.  ``truncated`` marks the case where agreement held
    up to the search cap without a full-isomorphism certificate, so the
    reported t is only a lower bound (and d an upper bound).
    """

    t: Optional[int]
    d: Fraction
    truncated: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.t is None

    @staticmethod
    def from_t(t: Optional[int], truncated: bool = False) -> "RootedDistance":
        if t is None:
            return RootedDistance(None, Fraction(0), truncated)
        return RootedDistance(t, Fraction(1, 1 + t), truncated)


def bfs_distances(g: Graph, source: int, limit: Optional[int] = None) -> dict:
    """Distances from ``source`` to vertices within ``limit`` hops (dict)."""
    dist = {source: 0}
    frontier = deque([source])
    while frontier:
        u = frontier.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for v in g.adjacency[u]:
            if v not in dist:
                dist[v] = du + 1
                frontier.append(v)
    return dist


def connected_components(g: Graph) -> list:
    """Components as sorted vertex lists, ordered by smallest member."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return len(bfs_distances(g, 0)) == g.n


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    """Induced subgraph with vertices relabeled by position in ``vertices``."""
    index = {v: i for i, v in enumerate(vertices)}
    adj = []
    for v in vertices:
        adj.append(sorted(index[w] for w in g.adjacency[v] if w in index))
    return Graph(len(vertices), adj, max(1, g.delta_bound), _validate=False)


def ball_vertices(g: Graph, o: int, r: int) -> tuple:
    """(sorted vertex list, distance dict) for the closed ball B(o, r)."""
    if not 0 <= o < g.n:
        raise ValidationError(f"root {o} out of range for n={g.n}")
    if r < 0:
        raise ValidationError("radius must be nonnegative")
    dist = bfs_distances(g, o, limit=r)
    return sorted(dist), dist


def extract_ball(g: Graph, o: int, r: int) -> RootedBall:
    """Closed ball of radius ``r`` around ``o`` as a rooted induced subgraph."""
    verts, dist = ball_vertices(g, o, r)
    sub = induced_subgraph(g, verts)
    root_local = verts.index(o)
    cert = canon.certificate(sub.adjacency, root_local)
    return RootedBall(graph=sub, root=root_local, radius=r, certificate=cert,
                      original_vertices=tuple(verts),
                      distances=tuple(dist[v] for v in verts))


def canonical_certificate(ball: RootedBall) -> bytes:
    """Canonical byte string of a rooted ball (root-preserving-iso invariant)."""
    return canon.certificate(ball.graph.adjacency, ball.root)


def rooted_isomorphic(b1: RootedBall, b2: RootedBall) -> bool:
    """Exact rooted-isomorphism test for balls of equal radius."""
    if b1.radius != b2.radius:
        raise ValidationError("rooted_isomorphic requires equal radii")
    return b1.certificate == b2.certificate


def ball_class_member(g: Graph, o: int, target: RootedBall) -> bool:
    """Does the ball of ``target.radius`` around ``o`` fall in target's class?"""
    return extract_ball(g, o, target.radius).certificate == target.certificate


def _component_certificate(g: Graph, o: int) -> bytes:
    verts, _ = ball_vertices(g, o, g.n)
    sub = induced_subgraph(g, verts)
    return canon.certificate(sub.adjacency, verts.index(o))


def distinguishing_radius(g1: Graph, o1: int, g2: Graph, o2: int, s_max: int) -> RootedDistance:
    """Largest radius t <= s_max at which the rooted balls agree.

    Radius-0 balls agree by convention, so t >= 0 always.  If the two root
    components are fully isomorphic as rooted graphs the result is the
    infinite agreement t = None (d = 0).  If agreement persists to ``s_max``
    while at least one ball is still growing, t = s_max is returned with
    ``truncated=True``: a lower bound, not a certified value.
    """
    if s_max < 1:
        raise ValidationError("s_max must be at least 1")
    if not 0 <= o1 < g1.n:
        raise ValidationError(f"root {o1} out of range")
    if not 0 <= o2 < g2.n:
        raise ValidationError(f"root {o2} out of range")
    prev_sizes = (1, 1)
    for s in range(1, s_max + 1):
        b1 = extract_ball(g1, o1, s)
        b2 = extract_ball(g2, o2, s)
        if b1.certificate != b2.certificate:
            return RootedDistance.from_t(s - 1)
        sizes = (b1.graph.n, b2.graph.n)
        if sizes == prev_sizes:
            # Both balls stopped growing: they are the full root components
            # and they agree, so the rooted graphs are isomorphic outright.
            return RootedDistance.from_t(None)
        prev_sizes = sizes
    b1 = extract_ball(g1, o1, s_max)
    b2 = extract_ball(g2, o2, s_max)
    if (len(bfs_distances(g1, o1)) == b1.graph.n
            and len(bfs_distances(g2, o2)) == b2.graph.n
            and b1.certificate == b2.certificate):
        return RootedDistance.from_t(None)
    return RootedDistance.from_t(s_max, truncated=True)


def metric_d(g1: Graph, o1: int, g2: Graph, o2: int, s_max: int) -> RootedDistance:
    """Rooted-graph distance d = 1/(1+t); thin wrapper over the radius search."""
    return distinguishing_radius(g1, o1, g2, o2, s_max)
