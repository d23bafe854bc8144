"""Independent oracles for the test suite.

Everything here deliberately avoids the library's own algorithms: rooted
isomorphism is a plain backtracking search, percolation events are summed
over all 2^E configurations, and path packings are exhausted directly.
These are the reference answers the fast implementations must reproduce.
"""

from __future__ import annotations

import itertools
from collections import Counter

from percolab.graphs import Graph
from percolab.rng import SplitMix64


# --- brute-force rooted isomorphism ------------------------------------------


def brute_rooted_isomorphic(adj1, r1, adj2, r2) -> bool:
    """Root-fixing isomorphism search by degree-pruned backtracking."""
    n = len(adj1)
    if n != len(adj2):
        return False
    deg1 = [len(a) for a in adj1]
    deg2 = [len(a) for a in adj2]
    if sorted(deg1) != sorted(deg2) or deg1[r1] != deg2[r2]:
        return False
    sets1 = [set(a) for a in adj1]
    sets2 = [set(a) for a in adj2]
    # assignment order: BFS from the root keeps candidates constrained
    order = []
    seen = {r1}
    queue = [r1]
    while queue:
        u = queue.pop(0)
        order.append(u)
        for w in adj1[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    order += [v for v in range(n) if v not in seen]
    img = [-1] * n
    used = [False] * n

    def rec(i):
        if i == n:
            return True
        v = order[i]
        candidates = [r2] if i == 0 else range(n)
        for w in candidates:
            if used[w] or deg2[w] != deg1[v]:
                continue
            ok = True
            for j in range(i):
                u = order[j]
                if (u in sets1[v]) != (img[u] in sets2[w]):
                    ok = False
                    break
            if not ok:
                continue
            img[v] = w
            used[w] = True
            if rec(i + 1):
                return True
            img[v] = -1
            used[w] = False
        return False

    return rec(0)


def brute_graph_isomorphic(adj1, adj2) -> bool:
    """Unrooted isomorphism by anchoring vertex 0 of the first graph."""
    if len(adj1) != len(adj2):
        return False
    if len(adj1) == 0:
        return True
    return any(brute_rooted_isomorphic(adj1, 0, adj2, r)
               for r in range(len(adj2)))


# --- 1-WL color signatures (iso-invariant by theorem; used for bucketing) ----


def wl_signature(adj, root=None):
    """Stable refinement colors; equal for isomorphic (rooted) graphs."""
    n = len(adj)
    colors = [0] * n
    if root is not None:
        colors[root] = 1
    for _ in range(n):
        keys = [(colors[v], tuple(sorted(colors[u] for u in adj[v])))
                for v in range(n)]
        palette = {k: i for i, k in enumerate(sorted(set(keys)))}
        new = [palette[k] for k in keys]
        if new == colors:
            break
        colors = new
    root_color = None if root is None else colors[root]
    return (root_color, tuple(sorted(colors)))


# --- exhaustive percolation enumeration --------------------------------------


def _component_sizes(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    sizes = Counter(find(v) for v in range(n))
    return sizes


def enumerate_configurations(g: Graph):
    """Yield (open_edge_index_tuple, open_edges) over all 2^E configurations."""
    edges = g.edges
    m = len(edges)
    for bits in range(1 << m):
        idx = tuple(e for e in range(m) if bits >> e & 1)
        yield idx, [edges[e] for e in idx]


def exact_largest_component_law(g: Graph, p: float) -> dict:
    """Exact law of the largest open component size."""
    law: Counter = Counter()
    m = g.num_edges
    for idx, open_edges in enumerate_configurations(g):
        k = len(idx)
        weight = p ** k * (1 - p) ** (m - k)
        sizes = _component_sizes(g.n, open_edges)
        law[max(sizes.values())] += weight
    return dict(law)


def exact_prob_largest_geq(g: Graph, p: float, k: int) -> float:
    law = exact_largest_component_law(g, p)
    return sum(w for size, w in law.items() if size >= k)


def exact_ball_survival(g: Graph, o: int, radius: int, p: float) -> float:
    """Exact P(o reaches a distance-``radius`` vertex inside its ball)."""
    from percolab.graphs import ball_vertices, induced_subgraph

    verts, dist = ball_vertices(g, o, radius)
    sub = induced_subgraph(g, verts)
    root = verts.index(o)
    sphere = {i for i, v in enumerate(verts) if dist[v] == radius}
    if not sphere:
        return 0.0
    total = 0.0
    m = sub.num_edges
    for idx, open_edges in enumerate_configurations(sub):
        k = len(idx)
        reach = {root}
        srch = [root]
        adj = {}
        for u, v in open_edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        while srch:
            x = srch.pop()
            for y in adj.get(x, ()):
                if y not in reach:
                    reach.add(y)
                    srch.append(y)
        if reach & sphere:
            total += p ** k * (1 - p) ** (m - k)
    return total


def exact_reach_size_law(g: Graph, o: int, radius: int, p: float) -> dict:
    """Exact law of |B'_p(o, radius)| (open reach within ``radius`` hops)."""
    from percolab.graphs import ball_vertices, induced_subgraph

    verts, _ = ball_vertices(g, o, radius)
    sub = induced_subgraph(g, verts)
    root = verts.index(o)
    law: Counter = Counter()
    m = sub.num_edges
    for idx, open_edges in enumerate_configurations(sub):
        k = len(idx)
        adj = {}
        for u, v in open_edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        seen = {root}
        frontier = [root]
        for _ in range(radius):
            nxt = []
            for x in frontier:
                for y in adj.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        law[len(seen)] += p ** k * (1 - p) ** (m - k)
    return dict(law)


# --- exhaustive edge-disjoint path packing ------------------------------------


def max_edge_disjoint_packing(g: Graph, a1, a2) -> int:
    """Optimum edge-disjoint path packing by explicit search (small graphs).

    Paths are trimmed (first vertex in a1, last in a2, interior outside
    both), which loses no generality for the packing size.
    """
    s1, s2 = set(a1), set(a2)
    edges = g.edges
    edge_index = {}
    for i, (u, v) in enumerate(edges):
        edge_index[(u, v)] = i
        edge_index[(v, u)] = i
    paths = []

    def extend(v, visited, used_edges):
        for w in g.adjacency[v]:
            e = edge_index[(v, w)]
            if e in used_edges or w in visited:
                continue
            if w in s2:
                paths.append(frozenset(used_edges | {e}))
                continue
            if w in s1:
                continue
            extend(w, visited | {w}, used_edges | {e})

    for start in s1:
        extend(start, {start}, frozenset())
    paths = sorted(set(paths), key=len)

    from functools import lru_cache

    @lru_cache(maxsize=None)
    def best(used_mask):
        out = 0
        for pset in paths:
            pmask = 0
            for e in pset:
                pmask |= 1 << e
            if pmask & used_mask:
                continue
            out = max(out, 1 + best(used_mask | pmask))
        return out

    return best(0)


# --- seeded random test graphs ------------------------------------------------


def random_connected_graph(rng: SplitMix64, n: int, extra_edges: int) -> Graph:
    """Random tree plus extra random edges; always connected."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 20 * (extra_edges + 1):
        attempts += 1
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def random_graph(rng: SplitMix64, n: int, m: int) -> Graph:
    """Random simple graph with up to m edges (possibly disconnected)."""
    edges = set()
    for _ in range(3 * m):
        if len(edges) >= m:
            break
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        if u > v:
            u, v = v, u
        edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def enumerate_labeled_connected_graphs(n: int, max_degree: int):
    """All labeled connected graphs on n vertices with the degree cap."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        adj = [[] for _ in range(n)]
        ok = True
        for i, (u, v) in enumerate(pairs):
            if bits >> i & 1:
                adj[u].append(v)
                adj[v].append(u)
                if len(adj[u]) > max_degree or len(adj[v]) > max_degree:
                    ok = False
                    break
        if not ok:
            continue
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == n:
            yield [sorted(a) for a in adj]
