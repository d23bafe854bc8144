"""Empirical local-weak-convergence machinery.

The law of the radius-R ball around a uniform random root is represented by
its certificate histogram (a ``BallDistribution``); a reference limit enters
only through the same finite-radius fingerprint, never as a measure object.
Total variation between two such histograms is half the L1 distance used in
the coupling step of the locality argument.

``disjoint_class_flow`` packages the constancy proof's quantitative chain as
one diagnostic: count two ball classes, route edge-disjoint paths between
them, and check whether some path shorter than the 4*Delta/(c*p0) budget
exhibits one class's ball inside the other's enlarged ball.  On expanders
with two genuinely persistent classes this must succeed; on bridge-limited
graphs it visibly fails at the path-count step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional, Sequence

from . import canon
from .errors import ValidationError
from .expansion import Rational, as_fraction, constant_K, edge_disjoint_paths
from .graphs import Graph, RootedBall, ball_vertices, bfs_distances, induced_subgraph
from .rng import SplitMix64


@dataclass(frozen=True)
class BallDistribution:
    """Certificate histogram of radius-R balls (exhaustive or sampled roots)."""

    radius: int
    counts: dict                    # certificate bytes -> occurrence count
    total: int
    exhaustive: bool = True

    def mass(self, certificate: bytes) -> Fraction:
        return Fraction(self.counts.get(certificate, 0), self.total)

    def top_classes(self, k: int = 1) -> list:
        """[(certificate, mass)] for the k most frequent classes."""
        ranked = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [(cert, Fraction(cnt, self.total)) for cert, cnt in ranked[:k]]

    def to_json(self) -> str:
        entries = [{"cert_hex": cert.hex(), "count": cnt}
                   for cert, cnt in sorted(self.counts.items())]
        return json.dumps({"radius": self.radius, "total": self.total,
                           "exhaustive": self.exhaustive, "entries": entries},
                          indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "BallDistribution":
        try:
            data = json.loads(text)
            counts = {bytes.fromhex(e["cert_hex"]): int(e["count"])
                      for e in data["entries"]}
            return BallDistribution(radius=int(data["radius"]), counts=counts,
                                    total=int(data["total"]),
                                    exhaustive=bool(data.get("exhaustive", True)))
        except (KeyError, TypeError, ValueError) as e:
            raise ValidationError(f"bad BallDistribution JSON: {e}") from None

    @staticmethod
    def point_mass(ball: RootedBall) -> "BallDistribution":
        """Reference distribution concentrated on one ball class."""
        return BallDistribution(radius=ball.radius,
                                counts={ball.certificate: 1}, total=1)


def _ball_certificate(g: Graph, v: int, radius: int) -> bytes:
    verts, _ = ball_vertices(g, v, radius)
    sub = induced_subgraph(g, verts)
    return canon.certificate(sub.adjacency, verts.index(v))


def ball_distribution(g: Graph, radius: int, mode: str = "exhaustive",
                      k: Optional[int] = None, seed: int = 0) -> BallDistribution:
    """Histogram of ball certificates over all vertices or k sampled roots."""
    if radius < 0:
        raise ValidationError("radius must be nonnegative")
    if g.n == 0:
        raise ValidationError("empty graph has no root distribution")
    counts: dict = {}
    if mode == "exhaustive":
        roots = range(g.n)
        total = g.n
        exhaustive = True
    elif mode == "sampled":
        if k is None or k < 1:
            raise ValidationError("sampled mode needs k >= 1")
        rng = SplitMix64(seed)
        roots = [rng.randrange(g.n) for _ in range(k)]
        total = k
        exhaustive = False
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    for v in roots:
        cert = _ball_certificate(g, v, radius)
        counts[cert] = counts.get(cert, 0) + 1
    return BallDistribution(radius=radius, counts=counts, total=total,
                            exhaustive=exhaustive)


def tv_distance(d1: BallDistribution, d2: BallDistribution) -> Fraction:
    """Half the L1 distance between two ball-class histograms (exact)."""
    if d1.radius != d2.radius:
        raise ValidationError("total variation needs equal radii")
    certs = set(d1.counts) | set(d2.counts)
    acc = Fraction(0)
    for c in certs:
        acc += abs(Fraction(d1.counts.get(c, 0), d1.total)
                   - Fraction(d2.counts.get(c, 0), d2.total))
    return acc / 2


@dataclass(frozen=True)
class ConvergenceReport:
    """TV distance to a fixed reference, per graph."""

    radius: int
    rows: tuple                     # ((n, tv as Fraction), ...)

    def to_json_dict(self) -> dict:
        return {"radius": self.radius,
                "rows": [{"n": n, "tv": float(tv)} for n, tv in self.rows]}


def convergence_report(graphs: Sequence[Graph], radius: int,
                       reference: BallDistribution) -> ConvergenceReport:
    if reference.radius != radius:
        raise ValidationError("reference radius mismatch")
    rows = []
    for g in graphs:
        dist = ball_distribution(g, radius)
        rows.append((g.n, tv_distance(dist, reference)))
    return ConvergenceReport(radius=radius, rows=tuple(rows))


def class_count(g: Graph, target: RootedBall) -> int:
    """Number of vertices whose radius-``target.radius`` ball matches target."""
    return sum(1 for v in range(g.n)
               if _ball_certificate(g, v, target.radius) == target.certificate)


@dataclass(frozen=True)
class DisjointClassFlowReport:
    """Outcome of the two-class short-path diagnostic."""

    status: str                     # ok | no_short_path | same_class | hypothesis_failure
    radius: int
    class_sizes: tuple              # (|A1|, |A2|)
    required_class_size: Fraction   # p0 * n / 4
    hypothesis_ok: bool
    flow_value: Optional[int]
    k_budget: Optional[Fraction]
    short_path_count: Optional[int]
    short_threshold: Optional[Fraction]
    witness_pair: Optional[tuple]   # (v1, v2, distance)
    embedding_verified: Optional[bool]

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "radius": self.radius,
            "class_sizes": list(self.class_sizes),
            "required_class_size": float(self.required_class_size),
            "hypothesis_ok": self.hypothesis_ok,
            "flow_value": self.flow_value,
            "k_budget": None if self.k_budget is None else float(self.k_budget),
            "short_path_count": self.short_path_count,
            "short_threshold": (None if self.short_threshold is None
                                else float(self.short_threshold)),
            "witness_pair": None if self.witness_pair is None else list(self.witness_pair),
            "embedding_verified": self.embedding_verified,
        }


def disjoint_class_flow(g: Graph, t1: RootedBall, t2: RootedBall,
                        c: Rational, p0: Rational) -> DisjointClassFlowReport:
    """Route edge-disjoint paths between two ball classes and hunt a short one.

    With K = 4*Delta/(c*p0), a decomposition path of length <= K between
    class vertices v1, v2 places the radius-R ball of v2 inside the radius
    R+K ball of v1: the nearby-isomorphic-ball pair at the heart of the
    constancy argument.  Failure modes are reported, not raised: identical
    classes, undersized classes, or (on non-expanders) no short path.
    """
    if t1.radius != t2.radius:
        raise ValidationError("class balls must share a radius")
    radius = t1.radius
    cf = as_fraction(c)
    p0f = as_fraction(p0)
    required = p0f * g.n / 4

    if t1.certificate == t2.certificate:
        return DisjointClassFlowReport(
            status="same_class", radius=radius, class_sizes=(0, 0),
            required_class_size=required, hypothesis_ok=False,
            flow_value=None, k_budget=None, short_path_count=None,
            short_threshold=None, witness_pair=None, embedding_verified=None)

    a1, a2 = [], []
    for v in range(g.n):
        cert = _ball_certificate(g, v, radius)
        if cert == t1.certificate:
            a1.append(v)
        elif cert == t2.certificate:
            a2.append(v)
    sizes = (len(a1), len(a2))
    hypothesis_ok = min(sizes) >= required
    if min(sizes) == 0:
        return DisjointClassFlowReport(
            status="hypothesis_failure", radius=radius, class_sizes=sizes,
            required_class_size=required, hypothesis_ok=False,
            flow_value=None, k_budget=None, short_path_count=None,
            short_threshold=None, witness_pair=None, embedding_verified=None)

    k_budget = constant_K(g.delta_bound, cf, p0f)
    flow = edge_disjoint_paths(g, a1, a2)
    short_paths = [p for p in flow.paths if len(p) - 1 <= k_budget]
    long_cap = Fraction(g.delta_bound * g.n, 2) / k_budget
    threshold = flow.value - long_cap

    witness = None
    embedding = None
    status = "no_short_path"
    if short_paths:
        path = min(short_paths, key=len)
        v1, v2 = path[0], path[-1]
        dist = bfs_distances(g, v1).get(v2)
        b_small, _ = ball_vertices(g, v2, radius)
        b_big, _ = ball_vertices(g, v1, radius + floor(k_budget))
        embedding = set(b_small) <= set(b_big)
        witness = (v1, v2, dist)
        status = "ok"
    if not hypothesis_ok:
        status = "hypothesis_failure"

    return DisjointClassFlowReport(
        status=status, radius=radius, class_sizes=sizes,
        required_class_size=required, hypothesis_ok=hypothesis_ok,
        flow_value=flow.value, k_budget=k_budget,
        short_path_count=len(short_paths), short_threshold=threshold,
        witness_pair=witness, embedding_verified=embedding)
